#!/usr/bin/env node
/**
 * render --spec <file>
 *
 * The spec file describes one figure:
 *   { "kind": "curves" | "heatmap" | "ablation",
 *     "inputs": ["path.csv", ...], "output": "figure.svg",
 *     "labels": [...], "title": "...", "xLabel": "...", "yLabel": "...",
 *     "field": "rho_i_mc" | "rho_a_mc" }
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseSweepCsv } from "./csv.js";
import { renderAblation, renderCurves, renderHeatmap, validateSpec } from "./render.js";

function usage(): never {
  console.error("usage: episense-render render --spec <figure-spec.json>");
  process.exit(2);
}

export function runCli(argv: string[]): number {
  if (argv.length !== 3 || argv[0] !== "render" || argv[1] !== "--spec") usage();
  const specPath = argv[2];
  let spec;
  try {
    spec = validateSpec(JSON.parse(readFileSync(specPath, "utf-8")), specPath);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const tables = spec.inputs.map((p) => parseSweepCsv(readFileSync(p, "utf-8"), p));
    let svg: string;
    if (spec.kind === "curves") {
      svg = renderCurves(tables[0], spec);
    } else if (spec.kind === "heatmap") {
      svg = renderHeatmap(tables[0], spec);
    } else {
      const labels = spec.labels ?? spec.inputs.map((p) => basename(p).replace(/\.csv$/, ""));
      svg = renderAblation(tables, labels, spec);
    }
    writeFileSync(spec.output, svg);
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("episense-render")) {
  process.exit(runCli(process.argv.slice(2)));
}
