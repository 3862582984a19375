"""Desk-scale acceptance criteria.

Each test prints one PASS/FAIL line (run with `pytest -s` to see them all).
Session fixtures share the expensive sweeps between criteria; everything is
seeded through the presets, so reruns are bit-identical.  The full module
takes roughly half an hour on two cores.
"""

import dataclasses
import json
import math
import os

import numpy as np
import pytest

from episense import mc, mmca, network
from episense.experiments import (
    beta_sweep,
    channel_ablation,
    compare_solvers,
    heatmap_sweep,
    load_preset,
    onset_beta,
    powergrid_case,
)
from episense.kernels import ModelParams
from episense.scenario import Scenario, override_scenario
from episense.threshold import epidemic_threshold

from conftest import acceptance_line

pytestmark = pytest.mark.acceptance

JOBS = os.cpu_count() or 1


def crossing_beta(betas, rho, level):
    """First crossing of a density level, linearly interpolated sub-grid."""
    above = np.nonzero(rho > level)[0]
    if above.size == 0:
        return None
    i = int(above[0])
    if i == 0:
        return float(betas[0])
    b0, b1 = betas[i - 1], betas[i]
    r0, r1 = rho[i - 1], rho[i]
    return float(b0 + (level - r0) * (b1 - b0) / (r1 - r0))


@pytest.fixture(scope="session")
def fig4_sweep():
    return beta_sweep(load_preset("fig4"), jobs=JOBS)


@pytest.fixture(scope="session")
def fig5_sweeps():
    return {tag: beta_sweep(load_preset(tag), jobs=JOBS) for tag in ("fig5a", "fig5b", "fig5c")}


@pytest.fixture(scope="session")
def fig6_sweep():
    return beta_sweep(load_preset("fig6"), jobs=JOBS)


@pytest.fixture(scope="session")
def fig7_panels():
    panels = {}
    for tag in ("fig7ab", "fig7cd", "fig7ef"):
        scn = override_scenario(load_preset(tag), n_runs=20, grid_num=20)
        panels[tag] = heatmap_sweep(scn, jobs=JOBS)
    return panels


@pytest.fixture(scope="session")
def fig8_ablation():
    return channel_ablation(load_preset("fig8"), jobs=JOBS)


@pytest.fixture(scope="session")
def fig9_ablation():
    # reduced ensemble: at N=4941 the per-run densities are ~5x less noisy
    # than at the desk N=1000, so 8 runs resolve the qualitative orderings
    scn = load_preset("fig9")
    doc = json.loads(scn.model_dump_json(by_alias=True))
    doc["run"]["max_steps"] = 1200
    scn = override_scenario(Scenario.model_validate(doc), n_runs=8)
    return scn, powergrid_case(scn, jobs=JOBS)


class TestMmcaMcAgreement:
    def test_fig4_mean_absolute_deviation(self, fig4_sweep):
        stats = compare_solvers(fig4_sweep)
        ok = stats.mad_rho_i <= 0.05 and stats.mad_rho_a <= 0.05
        acceptance_line(
            "MMCA-vs-MC agreement (fig4)", ok,
            f"MAD rho_i={stats.mad_rho_i:.4f} rho_a={stats.mad_rho_a:.4f} (<= 0.05)",
        )
        assert stats.mad_rho_i <= 0.05
        assert stats.mad_rho_a <= 0.05


class TestThresholdConsistency:
    def test_fig4_theory_vs_onset(self, fig4_sweep):
        beta_c = fig4_sweep.beta_c_theory
        onset = onset_beta(fig4_sweep.betas, fig4_sweep.rho_i_mc)
        ok = beta_c <= onset <= beta_c + 0.06
        acceptance_line(
            "threshold consistency (fig4)", ok,
            f"beta_c={beta_c:.4f} <= onset={onset:.2f} <= beta_c+0.06",
        )
        assert ok

    def test_ring_identity(self):
        phys = network.watts_strogatz(1000, 4, 0.0, seed=0)
        cyber = network.CyberLayer(n=1000, adj=phys.adj.copy(), simplices=np.zeros((0, 3), np.int64))
        net = network.MultiplexNetwork(cyber=cyber, physical=phys)
        params = ModelParams(lam=0.0, lam_star=0.0, mu=0.4, enable_sensing=False)
        res = epidemic_threshold(net, params)
        ok = abs(res.beta_c - 0.1) <= 1e-6
        acceptance_line(
            "threshold identity on the ring", ok, f"beta_c={res.beta_c:.8f} (mu/k = 0.1)",
        )
        assert ok

    def test_fig7_pairwise_setup_threshold(self):
        # pairwise-only configuration at the heatmap's information-rate
        # midpoint; the published panel onset is about 0.2
        from episense.experiments import build_network

        scn = load_preset("fig7ab")
        net = build_network(scn.network, scn.seed)
        params = dataclasses.replace(scn.params.to_model(), lam=0.5)
        res = epidemic_threshold(net, params)
        ok = abs(res.beta_c - 0.2) <= 0.08
        acceptance_line(
            "threshold of the pairwise heatmap setup", ok,
            f"beta_c={res.beta_c:.4f} (target ~0.2)",
        )
        assert ok


class TestSimplexDensityEffects:
    def test_threshold_rises_with_simplex_density(self, fig5_sweeps):
        bc = {tag: s.beta_c_theory for tag, s in fig5_sweeps.items()}
        onsets = {tag: onset_beta(s.betas, s.rho_i_mc) for tag, s in fig5_sweeps.items()}
        # the two sparse-simplex variants share one physical layer and collapse
        # to the same critical matrix; compare at the eigensolver tolerance
        tol = 1e-8
        ordered = bc["fig5a"] <= bc["fig5b"] + tol and bc["fig5b"] <= bc["fig5c"] + tol
        onset_ordered = onsets["fig5a"] <= onsets["fig5b"] <= onsets["fig5c"]
        raised = bc["fig5c"] - bc["fig5a"] >= 0.05
        ok = ordered and onset_ordered and raised
        acceptance_line(
            "simplex density raises the threshold", ok,
            f"theory beta_c={bc['fig5a']:.4f}/{bc['fig5b']:.4f}/{bc['fig5c']:.4f} "
            f"onsets={onsets['fig5a']}/{onsets['fig5b']}/{onsets['fig5c']}",
        )
        assert ordered and onset_ordered
        assert raised

    def test_supercritical_infection_drop(self, fig5_sweeps):
        low = fig5_sweeps["fig5a"]
        high = fig5_sweeps["fig5c"]
        sup = low.betas >= onset_beta(low.betas, low.rho_i_mc)
        drop = low.rho_i_mc[sup].mean() - high.rho_i_mc[sup].mean()
        ok = drop >= 0.06
        acceptance_line(
            "simplex density lowers supercritical infection", ok,
            f"mean drop={drop:.4f} (>= 0.06 absolute)",
        )
        assert ok


class TestBiphasicAwareness:
    def test_fig5c_two_plateaus_below_onset(self, fig5_sweeps):
        sweep = fig5_sweeps["fig5c"]
        onset = onset_beta(sweep.betas, sweep.rho_i_mc)
        below = sweep.betas < onset
        rho_a = sweep.rho_a_mc[below]
        has_zero = bool((rho_a < 0.02).any())
        has_half = bool(((rho_a >= 0.35) & (rho_a <= 0.65)).any())
        ok = has_zero and has_half
        acceptance_line(
            "biphasic subcritical awareness (fig5c)", ok,
            f"zero plateau={has_zero}, mid plateau={has_half} "
            f"(max subcritical rho_a={rho_a.max():.3f})",
        )
        assert ok


class TestVigilanceDirection:
    def test_fig6_threshold_and_density_ordering(self, fig6_sweep):
        thetas = (0.3, 0.5, 0.7)
        curves = {}
        for th in thetas:
            m = np.isclose(fig6_sweep.coords[:, 1], th)
            curves[th] = (fig6_sweep.coords[m, 0], fig6_sweep.rho_i_mc[m])
        # grid onsets must not invert; the interpolated 5% crossing resolves
        # the strict ordering below the grid resolution
        grid_onsets = [onset_beta(*curves[th]) for th in thetas]
        cross = [crossing_beta(*curves[th], level=0.05) for th in thetas]
        onset_strict = cross[0] > cross[1] > cross[2]
        onset_grid_ok = grid_onsets[0] >= grid_onsets[1] >= grid_onsets[2]
        top = max(grid_onsets)
        sup_means = [curves[th][1][curves[th][0] >= top].mean() for th in thetas]
        density_reversed = sup_means[0] < sup_means[1] < sup_means[2]
        ok = onset_strict and onset_grid_ok and density_reversed
        acceptance_line(
            "vigilance threshold direction (fig6)", ok,
            f"5% crossings={cross[0]:.3f}>{cross[1]:.3f}>{cross[2]:.3f}; "
            f"supercritical rho_i={sup_means[0]:.3f}<{sup_means[1]:.3f}<{sup_means[2]:.3f}",
        )
        assert onset_strict and onset_grid_ok
        assert density_reversed


class TestChannelOrdering:
    def test_fig8_chain_with_tolerance(self, fig8_ablation):
        curves = fig8_ablation.curves
        betas = curves["none"].betas
        sup = betas >= onset_beta(betas, curves["none"].rho_i_mc)
        chain = ["integrated", "pwi", "phy", "simplex", "none"]
        violations = 0
        for i in np.nonzero(sup)[0]:
            vals = [curves[c].rho_i_mc[i] for c in chain]
            if any(vals[j] > vals[j + 1] + 1e-12 for j in range(len(vals) - 1)):
                violations += 1
        ok = violations <= 3
        acceptance_line(
            "channel ordering (fig8)", ok,
            f"{violations} violations over {int(sup.sum())} supercritical points (<= 3)",
        )
        assert ok


class TestHeatmapStatistics:
    TARGETS = {
        "fig7ab": (0.678, 0.329),
        "fig7cd": (0.584, 0.437),
        "fig7ef": (0.573, 0.391),
    }

    def test_panel_means(self, fig7_panels):
        all_ok = True
        details = []
        for tag, (target_a, target_i) in self.TARGETS.items():
            sweep = fig7_panels[tag]
            mean_a = float(sweep.rho_a_mc.mean())
            mean_i = float(sweep.rho_i_mc.mean())
            ok = abs(mean_a - target_a) <= 0.08 and abs(mean_i - target_i) <= 0.08
            all_ok &= ok
            details.append(f"{tag}: a={mean_a:.3f}/{target_a} i={mean_i:.3f}/{target_i}")
        acceptance_line("heatmap panel means (fig7, 20x20)", all_ok, "; ".join(details))
        for tag, (target_a, target_i) in self.TARGETS.items():
            assert abs(fig7_panels[tag].rho_a_mc.mean() - target_a) <= 0.08
            assert abs(fig7_panels[tag].rho_i_mc.mean() - target_i) <= 0.08


class TestPowerGridCase:
    def test_fig9_onsets_and_pwi(self, fig9_ablation):
        scn, result = fig9_ablation
        curves = result.curves
        betas = curves["none"].betas
        eps = scn.onset_eps
        onsets = {c: onset_beta(betas, curves[c].rho_i_mc, eps) for c in curves}
        informed = ("integrated", "pwi", "simplex", "phy")
        onset_ok = all(
            onsets[c] is not None and onsets[c] > onsets["none"] for c in informed
        )
        sup = betas >= onsets["none"]
        means = {c: float(curves[c].rho_i_mc[sup].mean()) for c in curves}
        pwi_ok = means["pwi"] <= min(means["simplex"], means["phy"]) + 1e-9
        ok = onset_ok and pwi_ok
        acceptance_line(
            "power grid case (fig9)", ok,
            f"onsets={ {c: onsets[c] for c in ('none',) + informed} }; "
            f"supercritical means pwi={means['pwi']:.3f} simplex={means['simplex']:.3f} "
            f"phy={means['phy']:.3f}",
        )
        assert onset_ok
        assert pwi_ok


class TestOracleSuites:
    def test_single_step_equivalence(self):
        from test_mmca import TestSingleStepOracle

        TestSingleStepOracle().test_matches_exact_fractions()
        acceptance_line("oracle: symbolic single-step (1e-12)", True)

    def test_mc_transition_frequencies(self):
        from test_mc import TestSingleStepFrequencies

        TestSingleStepFrequencies().test_frequencies_match_tree_products()
        acceptance_line("oracle: MC transition frequencies (1e6 draws, 4 sigma)", True)

    def test_sis_reduction(self):
        from test_mc import TestSisReduction

        TestSisReduction().test_matches_standalone_sis()
        acceptance_line("oracle: SIS reduction vs standalone reference", True)

    def test_probability_conservation(self):
        net = network.MultiplexNetwork(
            cyber=network.simplicial_er(150, 8.0, 1.5, seed=2),
            physical=network.watts_strogatz(150, 4, 0.4, seed=3),
        )
        rng = np.random.default_rng(0)
        raw = rng.random((3, 150))
        raw /= raw.sum(axis=0)
        state = mmca.MmcaState(p_us=raw[0], p_as=raw[1], p_ai=raw[2])
        params = ModelParams(lam=0.4, lam_star=0.5, delta=0.3, beta_u=0.6,
                             gamma=0.3, mu=0.2, alpha=6.0, theta=0.4)
        worst = 0.0
        for _ in range(300):
            state = mmca.step(state, net, params)
            worst = max(worst, float(np.abs(state.p_us + state.p_as + state.p_ai - 1.0).max()))
        ok = worst < 1e-10
        acceptance_line("oracle: probability conservation (1e-10)", ok, f"max drift={worst:.2e}")
        assert ok

    def test_dominant_eigenvalue_oracle(self):
        from test_threshold import TestDominantEigenvalue

        TestDominantEigenvalue().test_random_nonnegative_vs_dense_solver()
        acceptance_line("oracle: power iteration vs dense eigensolver (1e-8)", True)
