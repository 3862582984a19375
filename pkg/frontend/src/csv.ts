/**
 * Strict parser for the simulation sweep CSV contract:
 *
 *   beta[,<axis2>],rho_i_mc,rho_i_sd,rho_a_mc,rho_a_sd[,rho_i_mmca,rho_a_mmca]
 *
 * where <axis2> is the second sweep parameter (lambda, lambda_star, theta,
 * alpha, delta, mu or gamma).  Anything else is rejected with the offending
 * column named; rendering never guesses at malformed data.
 */

export const MC_COLUMNS = ["rho_i_mc", "rho_i_sd", "rho_a_mc", "rho_a_sd"] as const;
export const MMCA_COLUMNS = ["rho_i_mmca", "rho_a_mmca"] as const;
export const AXIS2_NAMES = ["lambda", "lambda_star", "theta", "alpha", "delta", "mu", "gamma"];

export interface SweepTable {
  source: string;
  axisNames: string[];
  columns: Record<string, number[]>;
  rows: number;
  hasMmca: boolean;
}

export class CsvContractError extends Error {}

export function parseSweepCsv(text: string, source = "<csv>"): SweepTable {
  const lines = text.split(/\r?\n/).filter((ln) => ln.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvContractError(`${source}: empty CSV`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  if (header[0] !== "beta") {
    throw new CsvContractError(`${source}: first column must be "beta", got "${header[0]}"`);
  }

  const axisNames = ["beta"];
  let pos = 1;
  if (pos < header.length && AXIS2_NAMES.includes(header[pos])) {
    axisNames.push(header[pos]);
    pos += 1;
  }
  for (const want of MC_COLUMNS) {
    if (header[pos] !== want) {
      if (header.includes(want)) {
        throw new CsvContractError(
          `${source}: column "${header[pos] ?? "<end>"}" unexpected where "${want}" belongs`,
        );
      }
      throw new CsvContractError(`${source}: missing column "${want}"`);
    }
    pos += 1;
  }
  let hasMmca = false;
  if (pos < header.length) {
    for (const want of MMCA_COLUMNS) {
      if (header[pos] !== want) {
        throw new CsvContractError(
          `${source}: unknown column "${header[pos]}" (expected "${want}" or end of header)`,
        );
      }
      pos += 1;
    }
    hasMmca = true;
  }
  if (pos !== header.length) {
    throw new CsvContractError(`${source}: unknown column "${header[pos]}"`);
  }

  if (lines.length === 1) {
    throw new CsvContractError(`${source}: CSV has a header but no data rows`);
  }

  const columns: Record<string, number[]> = {};
  for (const name of header) columns[name] = [];
  for (let r = 1; r < lines.length; r++) {
    const cells = lines[r].split(",");
    if (cells.length !== header.length) {
      throw new CsvContractError(
        `${source}: row ${r + 1} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    for (let c = 0; c < cells.length; c++) {
      const value = Number(cells[c]);
      if (!Number.isFinite(value)) {
        throw new CsvContractError(`${source}: row ${r + 1}, column "${header[c]}": not a number`);
      }
      columns[header[c]].push(value);
    }
  }
  return { source, axisNames, columns, rows: lines.length - 1, hasMmca };
}

/** Distinct values of one column, in first-appearance order. */
export function distinct(values: number[]): number[] {
  const seen = new Set<number>();
  const out: number[] = [];
  for (const v of values) {
    if (!seen.has(v)) {
      seen.add(v);
      out.push(v);
    }
  }
  return out;
}
