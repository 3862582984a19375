/** Minimal SVG scaffolding: scales, ticks, axes, line paths. */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function ticks(lo: number, hi: number, count = 6): number[] {
  if (hi === lo) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10((hi - lo) / count)));
  const err = (hi - lo) / (count * step);
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const start = Math.ceil(lo / s) * s;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12; v += s) out.push(Number(v.toFixed(10)));
  return out;
}

export function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

export const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 440,
  left: 64,
  right: 24,
  top: 36,
  bottom: 52,
};

export function axes(
  frame: Frame,
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  title?: string,
): string {
  const parts: string[] = [];
  const bottomY = frame.height - frame.bottom;
  parts.push(
    `<line x1="${frame.left}" y1="${bottomY}" x2="${frame.width - frame.right}" y2="${bottomY}" stroke="black"/>`,
    `<line x1="${frame.left}" y1="${frame.top}" x2="${frame.left}" y2="${bottomY}" stroke="black"/>`,
  );
  for (const t of ticks(x.domain[0], x.domain[1])) {
    const px = x(t);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${bottomY}" x2="${px.toFixed(2)}" y2="${bottomY + 5}" stroke="black"/>`,
      `<text x="${px.toFixed(2)}" y="${bottomY + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(y.domain[0], y.domain[1])) {
    const py = y(t);
    parts.push(
      `<line x1="${frame.left - 5}" y1="${py.toFixed(2)}" x2="${frame.left}" y2="${py.toFixed(2)}" stroke="black"/>`,
      `<text x="${frame.left - 8}" y="${(py + 3.5).toFixed(2)}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(frame.left + frame.width - frame.right) / 2}" y="${frame.height - 12}" text-anchor="middle" font-size="13">${esc(xLabel)}</text>`,
    `<text transform="translate(16 ${(frame.top + bottomY) / 2}) rotate(-90)" text-anchor="middle" font-size="13">${esc(yLabel)}</text>`,
  );
  if (title) {
    parts.push(
      `<text x="${(frame.left + frame.width - frame.right) / 2}" y="${frame.top - 14}" text-anchor="middle" font-size="14" font-weight="bold">${esc(title)}</text>`,
    );
  }
  return parts.join("\n");
}

export interface CurveStyle {
  color: string;
  dash?: string;
  label: string;
}

export function linePath(
  xs: number[],
  ys: number[],
  x: Scale,
  y: Scale,
  style: CurveStyle,
): string {
  const d = xs
    .map((v, i) => `${i === 0 ? "M" : "L"}${x(v).toFixed(2)},${y(ys[i]).toFixed(2)}`)
    .join(" ");
  const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
  return `<path class="curve" d="${d}" fill="none" stroke="${style.color}" stroke-width="1.8"${dash}><title>${esc(style.label)}</title></path>`;
}

export function legend(frame: Frame, styles: CurveStyle[]): string {
  const x0 = frame.width - frame.right - 172;
  const y0 = frame.top + 8;
  const rows = styles.map((s, i) => {
    const y = y0 + 16 * i;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    return (
      `<line x1="${x0}" y1="${y}" x2="${x0 + 26}" y2="${y}" stroke="${s.color}" stroke-width="1.8"${dash}/>` +
      `<text x="${x0 + 32}" y="${y + 3.5}" font-size="11">${esc(s.label)}</text>`
    );
  });
  return rows.join("\n");
}

export function document(frame: Frame, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" ` +
    `viewBox="0 0 ${frame.width} ${frame.height}" font-family="sans-serif">\n` +
    `<rect width="${frame.width}" height="${frame.height}" fill="white"/>\n${body}\n</svg>\n`
  );
}
