"""Command-line client of the episense service.

By default commands talk to an in-process instance of the FastAPI app, so no
server is needed; `--server URL` (or EPISENSE_SERVER) points them at a running
deployment instead.  All commands accept `--seed` (default 1729) and write a
run manifest next to their CSV outputs; flag values override scenario-file
values, which override defaults.

Exit codes: 0 success, 2 usage error, 3 missing file or preset,
4 invalid scenario/parameters, 5 service or transport failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .seeds import DEFAULT_SEED

EXIT_MISSING = 3
EXIT_INVALID = 4
EXIT_SERVICE = 5


def _fail(code: int, msg: str):
    click.echo(f'error code={code} msg="{msg}"', err=True)
    sys.exit(code)


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from starlette.testclient import TestClient

    from .service.app import app

    return TestClient(app, base_url="http://episense")


def _post(ctx, path: str, payload: dict) -> dict:
    try:
        resp = ctx.obj["client"].post(path, json=payload)
    except httpx.HTTPError as exc:
        _fail(EXIT_SERVICE, f"transport failure: {exc}")
    if resp.status_code == 404:
        _fail(EXIT_MISSING, _detail(resp))
    if resp.status_code in (400, 422):
        _fail(EXIT_INVALID, _detail(resp))
    if resp.status_code != 200:
        _fail(EXIT_SERVICE, f"HTTP {resp.status_code}: {_detail(resp)}")
    return resp.json()


def _detail(resp) -> str:
    try:
        detail = resp.json().get("detail", resp.text)
    except Exception:
        detail = resp.text
    return json.dumps(detail) if isinstance(detail, (list, dict)) else str(detail)


def _load_scenario_file(path: str | None, seed: int | None) -> dict:
    """Scenario JSON with flag-level overrides applied client-side."""
    if path is None:
        data = {"name": "inline", "sweep": [{"param": "beta", "values": [0.2]}]}
    else:
        p = Path(path)
        if not p.exists():
            _fail(EXIT_MISSING, f"scenario file not found: {path}")
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            _fail(EXIT_INVALID, f"scenario file is not valid JSON: {exc}")
    if seed is not None:
        data["seed"] = seed
    return data


def _write_outputs(out_dir: str, name: str, files: dict[str, str], manifest: dict) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, text in sorted(files.items()):
        target = out / fname
        target.write_text(text, encoding="utf-8")
        written.append(str(target))
    mpath = out / f"{name}_manifest.json"
    mpath.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    written.append(str(mpath))
    for path in written:
        click.echo(f"wrote {path}")
    return written


@click.group()
@click.option("--server", envvar="EPISENSE_SERVER", default=None, metavar="URL",
              help="Service URL; default runs the service in-process.")
@click.option("--out", "out_dir", envvar="EPISENSE_OUT", default=".", metavar="DIR",
              show_default=True, help="Output directory (env EPISENSE_OUT).")
@click.pass_context
def main(ctx, server, out_dir):
    """Coupled awareness-epidemic simulations on two-layer networks."""
    ctx.ensure_object(dict)
    ctx.obj["client"] = _client(server)
    ctx.obj["out"] = out_dir


@main.command()
@click.option("--kind", type=click.Choice(["synthetic", "edge_list"]), default="synthetic",
              show_default=True, help="Network family.")
@click.option("--n", default=1000, show_default=True, help="Node count (synthetic).")
@click.option("--k1", default=10.0, show_default=True, help="Target mean cyber degree.")
@click.option("--k2", default=2.0, show_default=True, help="Target mean 2-simplex membership.")
@click.option("--ws-k", default=4, show_default=True, help="Ring neighbours (physical layer).")
@click.option("--ws-p", default=0.5, show_default=True, help="Rewiring probability (physical layer).")
@click.option("--path", default=None, help="Edge-list file (edge_list kind).")
@click.option("--cyber", type=click.Choice(["mirror", "er"]), default="mirror",
              show_default=True, help="Cyber construction for edge_list networks.")
@click.option("--seed", default=DEFAULT_SEED, show_default=True, help="Master seed.")
@click.option("--prefix", default="network", show_default=True, help="Output file prefix.")
@click.pass_context
def generate(ctx, kind, n, k1, k2, ws_k, ws_p, path, cyber, seed, prefix):
    """Generate a two-layer network and write edge-list + simplex files."""
    spec = {"kind": kind, "n": n, "k1": k1, "k2": k2, "ws_k": ws_k, "ws_p": ws_p,
            "path": path, "cyber": cyber}
    data = _post(ctx, "/network/generate", {"network": spec, "seed": seed})
    out = Path(ctx.obj["out"])
    out.mkdir(parents=True, exist_ok=True)
    files = {
        f"{prefix}_physical.edges": data["physical_edge_list"],
        f"{prefix}_cyber.edges": data["cyber_edge_list"],
        f"{prefix}_simplices.txt": data["simplex_list"],
    }
    for fname, text in files.items():
        (out / fname).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out / fname}")
    manifest = {"network": spec, "seed": seed, "outputs": sorted(files)}
    (out / f"{prefix}_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    click.echo(f"wrote {out / f'{prefix}_manifest.json'}")
    click.echo(
        f"nodes={data['nodes']} physical_edges={data['physical_edges']} "
        f"cyber_edges={data['cyber_edges']} simplices={data['simplices']} "
        f"mean_degree_cyber={data['mean_degree_cyber']:.3f}"
    )


def _scenario_options(fn):
    fn = click.option("--scenario", "scenario_path", default=None, metavar="FILE",
                      help="Scenario JSON; defaults are used when omitted.")(fn)
    fn = click.option("--beta", default=None, type=float,
                      help="Override the infection rate (single point).")(fn)
    fn = click.option("--seed", default=None, type=int,
                      help=f"Override the master seed (default {DEFAULT_SEED}).")(fn)
    return fn


@main.command()
@_scenario_options
@click.pass_context
def mmca(ctx, scenario_path, beta, seed):
    """Fixed point of the probability system at one beta."""
    scn = _load_scenario_file(scenario_path, seed)
    data = _post(ctx, "/solve/mmca", {"scenario": scn, "beta": beta})
    click.echo(
        f"rho_a={data['rho_a']:.6g} rho_i={data['rho_i']:.6g} "
        f"iterations={data['iterations']} converged={data['converged']}"
    )


@main.command()
@_scenario_options
@click.option("--runs", default=None, type=int, help="Override the ensemble size.")
@click.pass_context
def mc(ctx, scenario_path, beta, seed, runs):
    """Monte Carlo ensemble at one beta."""
    scn = _load_scenario_file(scenario_path, seed)
    if runs is not None:
        scn.setdefault("run", {})["n_runs"] = runs
    data = _post(ctx, "/solve/mc", {"scenario": scn, "beta": beta})
    click.echo(
        f"rho_a={data['rho_a_mean']:.6g}+-{data['rho_a_sd']:.3g} "
        f"rho_i={data['rho_i_mean']:.6g}+-{data['rho_i_sd']:.3g} "
        f"runs={data['runs_used']} mean_steps={data['mean_steps']:.0f}"
    )


@main.command()
@_scenario_options
@click.pass_context
def threshold(ctx, scenario_path, beta, seed):
    """Outbreak threshold beta_c for the scenario's network and parameters."""
    scn = _load_scenario_file(scenario_path, seed)
    data = _post(ctx, "/solve/threshold", {"scenario": scn, "beta": beta})
    beta_c = data["beta_c"]
    click.echo(
        f"beta_c={'inf' if beta_c is None else f'{beta_c:.6g}'} "
        f"lambda_max={data['lambda_max']:.6g} converged={data['converged']}"
        + (f" note={data['note']!r}" if data.get("note") else "")
    )


def _run_sweep(ctx, scenario_path, seed, jobs, expected_kind=None):
    scn = _load_scenario_file(scenario_path, seed)
    if expected_kind and scn.get("kind", "sweep") != expected_kind:
        _fail(EXIT_INVALID, f"scenario kind {scn.get('kind', 'sweep')!r}, expected {expected_kind!r}")
    data = _post(ctx, "/sweep", {"scenario": scn, "jobs": jobs})
    name = scn.get("name", "sweep")
    _write_outputs(ctx.obj["out"], name, data["files"], data["manifest"])


@main.command()
@click.option("--scenario", "scenario_path", required=True, metavar="FILE")
@click.option("--seed", default=None, type=int, help="Override the master seed.")
@click.option("--jobs", default=None, type=int, help="Worker processes (default: all cores).")
@click.pass_context
def sweep(ctx, scenario_path, seed, jobs):
    """Density curves over the scenario's beta grid; writes CSV + manifest."""
    _run_sweep(ctx, scenario_path, seed, jobs)


@main.command()
@click.option("--scenario", "scenario_path", required=True, metavar="FILE")
@click.option("--seed", default=None, type=int, help="Override the master seed.")
@click.option("--jobs", default=None, type=int, help="Worker processes (default: all cores).")
@click.pass_context
def heatmap(ctx, scenario_path, seed, jobs):
    """Two-axis density grid; writes CSV + manifest."""
    _run_sweep(ctx, scenario_path, seed, jobs, expected_kind="heatmap")


@main.command()
@click.option("--scenario", "scenario_path", required=True, metavar="FILE")
@click.option("--seed", default=None, type=int, help="Override the master seed.")
@click.option("--jobs", default=None, type=int, help="Worker processes (default: all cores).")
@click.pass_context
def ablation(ctx, scenario_path, seed, jobs):
    """Five channel configurations over the beta grid; one CSV per channel."""
    _run_sweep(ctx, scenario_path, seed, jobs, expected_kind="ablation")


@main.command()
@click.argument("preset")
@click.option("--seed", default=None, type=int, help="Override the preset seed.")
@click.option("--runs", default=None, type=int, help="Override the ensemble size.")
@click.option("--grid", default=None, type=int, help="Override linspace axis resolution.")
@click.option("--jobs", default=None, type=int, help="Worker processes (default: all cores).")
@click.pass_context
def reproduce(ctx, preset, seed, runs, grid, jobs):
    """Run a bundled figure preset (fig4 ... fig9); writes CSV + manifest."""
    data = _post(ctx, "/reproduce", {
        "preset": preset, "seed": seed, "n_runs": runs, "grid_num": grid, "jobs": jobs,
    })
    _write_outputs(ctx.obj["out"], preset, data["files"], data["manifest"])


@main.command()
@click.option("--csv", "csv_path", required=True, metavar="FILE",
              help="Sweep CSV containing both solver curves.")
@click.option("--onset-eps", default=0.005, show_default=True,
              help="Density level defining the empirical onset.")
@click.option("--beta-c", default=None, type=float, help="Theory threshold to report alongside.")
@click.pass_context
def compare(ctx, csv_path, onset_eps, beta_c):
    """MMCA-vs-MC deviation statistics for a sweep CSV."""
    p = Path(csv_path)
    if not p.exists():
        _fail(EXIT_MISSING, f"CSV not found: {csv_path}")
    data = _post(ctx, "/compare", {
        "csv": p.read_text(encoding="utf-8"), "onset_eps": onset_eps, "beta_c_theory": beta_c,
    })
    onset = data["beta_onset_mc"]
    theory = data["beta_c_theory"]
    click.echo(
        f"mad_rho_i={data['mad_rho_i']:.6g} mad_rho_a={data['mad_rho_a']:.6g} "
        f"beta_onset_mc={'none' if onset is None else f'{onset:.6g}'} "
        f"beta_c_theory={'none' if theory is None else f'{theory:.6g}'}"
    )


@main.command()
@click.pass_context
def presets(ctx):
    """List the bundled scenario presets."""
    try:
        resp = ctx.obj["client"].get("/presets")
    except httpx.HTTPError as exc:
        _fail(EXIT_SERVICE, f"transport failure: {exc}")
    for item in resp.json()["presets"]:
        click.echo(f"{item['name']:10s} {item['kind']:8s} {item['notes']}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service with uvicorn."""
    import uvicorn

    uvicorn.run("episense.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
