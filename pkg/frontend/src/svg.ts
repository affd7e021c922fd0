/**
 * Minimal hand-rolled SVG chart scaffolding: one plot area with linear or
 * log axes, tick labels, polylines, markers, and a legend.  Output is
 * deterministic text, friendly to diffing in CI.
 */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const WIDTH = 760;
export const HEIGHT = 520;
export const MARGINS: Margins = { top: 48, right: 24, bottom: 56, left: 72 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f",
];

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(2);
  return Number(v.toPrecision(6)).toString();
}

export class Scale {
  constructor(
    readonly lo: number,
    readonly hi: number,
    readonly pixLo: number,
    readonly pixHi: number,
    readonly log: boolean = false,
  ) {}

  at(v: number): number {
    const [a, b] = this.log
      ? [Math.log10(this.lo), Math.log10(this.hi)]
      : [this.lo, this.hi];
    const x = this.log ? Math.log10(v) : v;
    const f = b === a ? 0.5 : (x - a) / (b - a);
    return this.pixLo + f * (this.pixHi - this.pixLo);
  }

  ticks(count = 6): number[] {
    if (this.log) {
      const lo = Math.ceil(Math.log10(this.lo) - 1e-9);
      const hi = Math.floor(Math.log10(this.hi) + 1e-9);
      const out: number[] = [];
      for (let e = lo; e <= hi; e++) out.push(10 ** e);
      if (out.length >= 2) return out;
      // fewer than two decades: fall back to linear ticks in log space
      const la = Math.log10(this.lo);
      const lb = Math.log10(this.hi);
      return Array.from({ length: count }, (_, i) =>
        10 ** (la + ((lb - la) * i) / (count - 1)));
    }
    const range = this.hi - this.lo || 1;
    const rough = range / count;
    const mag = 10 ** Math.floor(Math.log10(rough));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough)!;
    const start = Math.ceil(this.lo / step) * step;
    const out: number[] = [];
    for (let v = start; v <= this.hi + step * 1e-9; v += step) {
      out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out;
  }
}

export function extent(values: number[], padFrac = 0.05): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = (hi - lo) * padFrac;
  return [lo - pad, hi + pad];
}

export interface Series {
  label: string;
  color: string;
  points: [number, number][];
  dash?: string;
  markers?: boolean;
  width?: number;
}

export class Chart {
  private body: string[] = [];
  readonly x: Scale;
  readonly y: Scale;

  constructor(
    readonly title: string,
    xRange: [number, number],
    yRange: [number, number],
    readonly xLabel: string,
    readonly yLabel: string,
    opts: { xLog?: boolean; yLog?: boolean } = {},
  ) {
    this.x = new Scale(xRange[0], xRange[1], MARGINS.left,
      WIDTH - MARGINS.right, opts.xLog ?? false);
    this.y = new Scale(yRange[0], yRange[1], HEIGHT - MARGINS.bottom,
      MARGINS.top, opts.yLog ?? false);
  }

  polyline(series: Series): void {
    const pts = series.points
      .map(([px, py]) => `${this.x.at(px).toFixed(2)},${this.y.at(py).toFixed(2)}`)
      .join(" ");
    const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
    this.body.push(
      `<polyline fill="none" stroke="${series.color}" ` +
        `stroke-width="${series.width ?? 1.6}"${dash} points="${pts}"/>`,
    );
    if (series.markers) {
      for (const [px, py] of series.points) {
        this.body.push(
          `<circle cx="${this.x.at(px).toFixed(2)}" ` +
            `cy="${this.y.at(py).toFixed(2)}" r="2.6" ` +
            `fill="${series.color}"/>`,
        );
      }
    }
  }

  marker(px: number, py: number, color: string, r = 4): void {
    this.body.push(
      `<circle cx="${this.x.at(px).toFixed(2)}" cy="${this.y.at(py).toFixed(2)}" ` +
        `r="${r}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
  }

  annotate(text: string, xFrac: number, yFrac: number, color = "#333"): void {
    const px = MARGINS.left + xFrac * (WIDTH - MARGINS.left - MARGINS.right);
    const py = MARGINS.top + yFrac * (HEIGHT - MARGINS.top - MARGINS.bottom);
    this.body.push(
      `<text x="${px.toFixed(1)}" y="${py.toFixed(1)}" font-size="13" ` +
        `fill="${color}">${esc(text)}</text>`,
    );
  }

  legend(entries: { label: string; color: string; dash?: string }[]): void {
    const x0 = WIDTH - MARGINS.right - 210;
    let y = MARGINS.top + 8;
    for (const e of entries) {
      const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
      this.body.push(
        `<line x1="${x0}" y1="${y}" x2="${x0 + 26}" y2="${y}" ` +
          `stroke="${e.color}" stroke-width="2"${dash}/>`,
      );
      this.body.push(
        `<text x="${x0 + 32}" y="${y + 4}" font-size="12" fill="#333">` +
          `${esc(e.label)}</text>`,
      );
      y += 18;
    }
  }

  private axes(): string {
    const parts: string[] = [];
    const bot = HEIGHT - MARGINS.bottom;
    parts.push(
      `<rect x="${MARGINS.left}" y="${MARGINS.top}" ` +
        `width="${WIDTH - MARGINS.left - MARGINS.right}" ` +
        `height="${bot - MARGINS.top}" fill="none" stroke="#999"/>`,
    );
    for (const t of this.x.ticks()) {
      const px = this.x.at(t);
      parts.push(`<line x1="${px.toFixed(2)}" y1="${bot}" ` +
        `x2="${px.toFixed(2)}" y2="${bot + 5}" stroke="#666"/>`);
      parts.push(`<text x="${px.toFixed(2)}" y="${bot + 20}" ` +
        `font-size="11" text-anchor="middle" fill="#333">` +
        `${esc(fmt(t))}</text>`);
    }
    for (const t of this.y.ticks()) {
      const py = this.y.at(t);
      parts.push(`<line x1="${MARGINS.left - 5}" y1="${py.toFixed(2)}" ` +
        `x2="${MARGINS.left}" y2="${py.toFixed(2)}" stroke="#666"/>`);
      parts.push(`<text x="${MARGINS.left - 9}" y="${(py + 4).toFixed(2)}" ` +
        `font-size="11" text-anchor="end" fill="#333">` +
        `${esc(fmt(t))}</text>`);
    }
    parts.push(`<text x="${(MARGINS.left + WIDTH - MARGINS.right) / 2}" ` +
      `y="${HEIGHT - 14}" font-size="13" text-anchor="middle" ` +
      `fill="#111">${esc(this.xLabel)}</text>`);
    parts.push(`<text x="18" y="${(MARGINS.top + bot) / 2}" font-size="13" ` +
      `text-anchor="middle" fill="#111" ` +
      `transform="rotate(-90 18 ${(MARGINS.top + bot) / 2})">` +
      `${esc(this.yLabel)}</text>`);
    parts.push(`<text x="${WIDTH / 2}" y="26" font-size="15" ` +
      `text-anchor="middle" fill="#111">${esc(this.title)}</text>`);
    return parts.join("\n");
  }

  render(): string {
    return [
      `<?xml version="1.0" encoding="UTF-8"?>`,
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
        `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      this.axes(),
      ...this.body,
      `</svg>`,
      ``,
    ].join("\n");
  }
}
