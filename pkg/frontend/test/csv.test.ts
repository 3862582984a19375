import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { CsvContractError, distinct, parseSweepCsv } from "../src/csv.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const read = (name: string) => readFileSync(join(FIXTURES, name), "utf-8");

describe("parseSweepCsv", () => {
  it("parses a single-axis sweep with both solvers", () => {
    const table = parseSweepCsv(read("fig4.csv"), "fig4.csv");
    expect(table.axisNames).toEqual(["beta"]);
    expect(table.hasMmca).toBe(true);
    expect(table.rows).toBe(9);
    expect(table.columns.rho_i_mc).toHaveLength(9);
    expect(Math.max(...table.columns.beta)).toBe(1);
  });

  it("parses a two-axis heatmap table", () => {
    const table = parseSweepCsv(read("fig7ab.csv"), "fig7ab.csv");
    expect(table.axisNames).toEqual(["beta", "lambda"]);
    expect(table.rows).toBe(36);
    expect(distinct(table.columns.beta)).toHaveLength(6);
    expect(distinct(table.columns.lambda)).toHaveLength(6);
  });

  it("parses mc-only ablation files", () => {
    const table = parseSweepCsv(read("fig8_none.csv"), "fig8_none.csv");
    expect(table.hasMmca).toBe(false);
    expect(table.axisNames).toEqual(["beta"]);
  });

  it("rejects a renamed density column, naming it", () => {
    const text = read("fig4.csv").replace("rho_i_mc", "rho_x_mc");
    expect(() => parseSweepCsv(text, "bad.csv")).toThrow(/rho_i_mc/);
  });

  it("rejects a missing first beta column", () => {
    const text = read("fig4.csv").replace(/^beta/, "alpha2");
    expect(() => parseSweepCsv(text, "bad.csv")).toThrow(/beta/);
  });

  it("rejects extra trailing columns by name", () => {
    const lines = read("fig8_none.csv").trimEnd().split("\n");
    const mangled = [lines[0] + ",sneaky", ...lines.slice(1).map((l) => l + ",1")].join("\n");
    expect(() => parseSweepCsv(mangled, "bad.csv")).toThrow(/sneaky/);
  });

  it("rejects a header-only CSV", () => {
    const header = read("fig4.csv").split("\n")[0];
    expect(() => parseSweepCsv(header + "\n", "empty.csv")).toThrow(/no data rows/);
  });

  it("rejects an entirely empty file", () => {
    expect(() => parseSweepCsv("", "empty.csv")).toThrow(CsvContractError);
  });

  it("rejects ragged rows with the row number", () => {
    const lines = read("fig4.csv").trimEnd().split("\n");
    const mangled = [lines[0], lines[1] + ",0.5", ...lines.slice(2)].join("\n");
    expect(() => parseSweepCsv(mangled, "bad.csv")).toThrow(/row 2/);
  });

  it("rejects non-numeric cells", () => {
    const lines = read("fig4.csv").trimEnd().split("\n");
    const cells = lines[1].split(",");
    cells[1] = "oops";
    const mangled = [lines[0], cells.join(","), ...lines.slice(2)].join("\n");
    expect(() => parseSweepCsv(mangled, "bad.csv")).toThrow(/not a number/);
  });
});
