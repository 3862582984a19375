/**
 * Figure rendering: pure functions from parsed sweep tables to SVG text.
 * Nothing here recomputes dynamics; the CSV is the single source of truth.
 */

import { distinct, SweepTable } from "./csv.js";
import { viridis } from "./colormap.js";
import {
  axes,
  CurveStyle,
  DEFAULT_FRAME,
  document as svgDocument,
  esc,
  fmt,
  Frame,
  legend,
  linePath,
  linearScale,
} from "./svg.js";

export type FigureKind = "curves" | "heatmap" | "ablation";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  labels?: string[];
  title?: string;
  xLabel?: string;
  yLabel?: string;
  /** heatmap density column; default rho_i_mc */
  field?: "rho_i_mc" | "rho_a_mc";
}

const SPEC_KEYS = new Set(["kind", "inputs", "output", "labels", "title", "xLabel", "yLabel", "field"]);

export function validateSpec(raw: unknown, source = "<spec>"): FigureSpec {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error(`${source}: figure spec must be a JSON object`);
  }
  const rec = raw as Record<string, unknown>;
  for (const key of Object.keys(rec)) {
    if (!SPEC_KEYS.has(key)) throw new Error(`${source}: unknown spec key "${key}"`);
  }
  const kind = rec.kind;
  if (kind !== "curves" && kind !== "heatmap" && kind !== "ablation") {
    throw new Error(`${source}: kind must be curves, heatmap or ablation`);
  }
  if (!Array.isArray(rec.inputs) || rec.inputs.some((p) => typeof p !== "string")) {
    throw new Error(`${source}: inputs must be a list of CSV paths`);
  }
  if (typeof rec.output !== "string" || rec.output.length === 0) {
    throw new Error(`${source}: output path required`);
  }
  const inputs = rec.inputs as string[];
  if ((kind === "curves" || kind === "heatmap") && inputs.length !== 1) {
    throw new Error(`${source}: ${kind} takes exactly one input CSV`);
  }
  if (kind === "ablation" && inputs.length < 2) {
    throw new Error(`${source}: ablation needs one CSV per channel configuration`);
  }
  if (rec.labels !== undefined) {
    if (!Array.isArray(rec.labels) || rec.labels.some((l) => typeof l !== "string")) {
      throw new Error(`${source}: labels must be a list of strings`);
    }
    if ((rec.labels as string[]).length !== inputs.length) {
      throw new Error(`${source}: need exactly one label per input`);
    }
  }
  if (rec.field !== undefined && rec.field !== "rho_i_mc" && rec.field !== "rho_a_mc") {
    throw new Error(`${source}: field must be rho_i_mc or rho_a_mc`);
  }
  return rec as unknown as FigureSpec;
}

const MC_COLOR = "#1f77b4";
const MMCA_COLOR = "#d62728";
const ABLATION_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];
const ABLATION_DASHES = ["", "6 3", "2 2", "8 3 2 3", "4 4", "1 3"];

function densityScales(frame: Frame, betaMax: number) {
  const x = linearScale([0, betaMax], [frame.left, frame.width - frame.right]);
  const y = linearScale([0, 1], [frame.height - frame.bottom, frame.top]);
  return { x, y };
}

/** Density-vs-beta curves: infection solid, awareness dashed, per solver. */
export function renderCurves(table: SweepTable, spec: Partial<FigureSpec> = {}): string {
  if (table.axisNames.length !== 1) {
    throw new Error(`${table.source}: curves need a single-axis sweep (beta only)`);
  }
  const frame = DEFAULT_FRAME;
  const betas = table.columns.beta;
  const { x, y } = densityScales(frame, Math.max(...betas));
  const styles: CurveStyle[] = [];
  const paths: string[] = [];
  const draw = (col: string, style: CurveStyle) => {
    paths.push(linePath(betas, table.columns[col], x, y, style));
    styles.push(style);
  };
  draw("rho_i_mc", { color: MC_COLOR, label: "infected (MC)" });
  draw("rho_a_mc", { color: MC_COLOR, dash: "6 4", label: "aware (MC)" });
  if (table.hasMmca) {
    draw("rho_i_mmca", { color: MMCA_COLOR, label: "infected (MMCA)" });
    draw("rho_a_mmca", { color: MMCA_COLOR, dash: "6 4", label: "aware (MMCA)" });
  }
  const body = [
    axes(frame, x, y, spec.xLabel ?? "infection rate", spec.yLabel ?? "steady-state density", spec.title),
    ...paths,
    legend(frame, styles),
  ].join("\n");
  return svgDocument(frame, body);
}

/** Two-axis density grid as one rect per grid cell plus a colorbar. */
export function renderHeatmap(table: SweepTable, spec: Partial<FigureSpec> = {}): string {
  if (table.axisNames.length !== 2) {
    throw new Error(`${table.source}: heatmap needs a two-axis sweep CSV`);
  }
  const field = spec.field ?? "rho_i_mc";
  const frame: Frame = { ...DEFAULT_FRAME, width: 700, right: 96 };
  const betas = distinct(table.columns.beta);
  const axis2Name = table.axisNames[1];
  const others = distinct(table.columns[axis2Name]);
  const values = table.columns[field];
  const x = linearScale(
    [Math.min(...betas), Math.max(...betas)],
    [frame.left, frame.width - frame.right],
  );
  const y = linearScale(
    [Math.min(...others), Math.max(...others)],
    [frame.height - frame.bottom, frame.top],
  );
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const norm = (v: number) => (hi > lo ? (v - lo) / (hi - lo) : 0.5);
  const cellW = (x.range[1] - x.range[0]) / Math.max(1, betas.length - 1);
  const cellH = (y.range[0] - y.range[1]) / Math.max(1, others.length - 1);
  const cells: string[] = [];
  for (let r = 0; r < table.rows; r++) {
    const cx = x(table.columns.beta[r]) - cellW / 2;
    const cy = y(table.columns[axis2Name][r]) - cellH / 2;
    cells.push(
      `<rect class="cell" x="${cx.toFixed(2)}" y="${cy.toFixed(2)}" width="${cellW.toFixed(2)}" height="${cellH.toFixed(2)}" fill="${viridis(norm(values[r]))}"/>`,
    );
  }
  const barX = frame.width - frame.right + 28;
  const barParts: string[] = [];
  const steps = 24;
  const barTop = frame.top;
  const barH = frame.height - frame.bottom - frame.top;
  for (let i = 0; i < steps; i++) {
    const t = 1 - i / (steps - 1);
    barParts.push(
      `<rect x="${barX}" y="${(barTop + (i * barH) / steps).toFixed(2)}" width="14" height="${(barH / steps + 0.5).toFixed(2)}" fill="${viridis(t)}"/>`,
    );
  }
  barParts.push(
    `<text x="${barX + 18}" y="${barTop + 10}" font-size="10">${fmt(hi)}</text>`,
    `<text x="${barX + 18}" y="${barTop + barH}" font-size="10">${fmt(lo)}</text>`,
    `<text x="${barX + 7}" y="${barTop - 8}" font-size="10" text-anchor="middle">${esc(field)}</text>`,
  );
  const body = [
    axes(frame, x, y, spec.xLabel ?? "infection rate", spec.yLabel ?? axis2Name, spec.title),
    ...cells,
    ...barParts,
  ].join("\n");
  return svgDocument(frame, body);
}

/** One infection-density curve per channel configuration. */
export function renderAblation(tables: SweepTable[], labels: string[], spec: Partial<FigureSpec> = {}): string {
  if (tables.length !== labels.length) {
    throw new Error("need exactly one label per ablation table");
  }
  for (const t of tables) {
    if (t.axisNames.length !== 1) {
      throw new Error(`${t.source}: ablation curves need single-axis sweeps`);
    }
  }
  const frame = DEFAULT_FRAME;
  const betaMax = Math.max(...tables.map((t) => Math.max(...t.columns.beta)));
  const { x, y } = densityScales(frame, betaMax);
  const styles: CurveStyle[] = [];
  const paths: string[] = [];
  tables.forEach((t, i) => {
    const style: CurveStyle = {
      color: ABLATION_COLORS[i % ABLATION_COLORS.length],
      dash: ABLATION_DASHES[i % ABLATION_DASHES.length] || undefined,
      label: labels[i],
    };
    paths.push(linePath(t.columns.beta, t.columns.rho_i_mc, x, y, style));
    styles.push(style);
  });
  const body = [
    axes(frame, x, y, spec.xLabel ?? "infection rate", spec.yLabel ?? "steady-state infection density", spec.title),
    ...paths,
    legend(frame, styles),
  ].join("\n");
  return svgDocument(frame, body);
}

export function curveCount(svg: string): number {
  return (svg.match(/class="curve"/g) ?? []).length;
}

export function cellCount(svg: string): number {
  return (svg.match(/class="cell"/g) ?? []).length;
}
