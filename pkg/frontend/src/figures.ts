/**
 * The four figure kinds.  Every number drawn or annotated comes from a
 * CSV cell; nothing is recomputed (the decay fit line uses the CSV's
 * fit_exponent and is merely anchored at the data's log-mean point).
 */

import { loadTables, num, SchemaError, Table } from "./csv.js";
import { Chart, extent, PALETTE, Series } from "./svg.js";

export type FigureKind =
  | "foliation_levels"
  | "energy_vs_s"
  | "decay_loglog"
  | "sobolev_ratios";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
}

const REGION_STYLE: Record<string, { dash?: string; widthScale: number }> = {
  interior: { widthScale: 1.0 },
  transition: { dash: "5,3", widthScale: 1.0 },
  exterior: { dash: "1.5,2.5", widthScale: 0.9 },
};

function groupBy<T>(items: T[], key: (it: T) => string): Map<string, T[]> {
  const out = new Map<string, T[]>();
  for (const it of items) {
    const k = key(it);
    if (!out.has(k)) out.set(k, []);
    out.get(k)!.push(it);
  }
  return out;
}

function bySortedNumeric(values: Iterable<string>): string[] {
  return [...values].sort((a, b) => Number(a) - Number(b));
}

export function foliationLevels(table: Table): string {
  const rows = table.rows;
  const rs = rows.map((r) => num(r, "r"));
  const ts = rows.map((r) => num(r, "T"));
  const chart = new Chart("Foliation level curves t = T(s, r)",
    extent(rs, 0.02), extent(ts), "r", "t");
  const bySlice = groupBy(rows, (r) => r.s);
  const sValues = bySortedNumeric(bySlice.keys());
  sValues.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const slice = bySlice.get(s)!;
    // region shading: one sub-polyline per region tag, styled per region
    for (const region of ["interior", "transition", "exterior"]) {
      const pts = slice.filter((r) => r.region === region)
        .map((r) => [num(r, "r"), num(r, "T")] as [number, number]);
      if (pts.length < 2) continue;
      const style = REGION_STYLE[region] ?? { widthScale: 1 };
      chart.polyline({
        label: "", color, points: pts, dash: style.dash,
        width: 1.6 * style.widthScale,
      });
    }
  });
  chart.legend(sValues.map((s, i) => ({
    label: `s = ${s}`, color: PALETTE[i % PALETTE.length],
  })).concat([
    { label: "interior (solid)", color: "#555" },
    { label: "transition (dashed)", color: "#555" },
    { label: "exterior (dotted)", color: "#555" },
  ]));
  return chart.render();
}

export function energyVsS(table: Table): string {
  const rows = [...table.rows].sort((a, b) => num(a, "s") - num(b, "s"));
  const sVals = rows.map((r) => num(r, "s"));
  const all = rows.flatMap((r) => [num(r, "E_total"), num(r, "E_int"),
    num(r, "E_tran"), num(r, "E_ext")]);
  const chart = new Chart("Weighted energy per slice", extent(sVals, 0.02),
    extent(all), "s", "E");
  const cols: [string, string][] = [["E_total", "total"],
    ["E_int", "interior"], ["E_tran", "transition"], ["E_ext", "exterior"]];
  cols.forEach(([col, label], i) => {
    chart.polyline({
      label,
      color: PALETTE[i % PALETTE.length],
      points: rows.map((r) => [num(r, "s"), num(r, col)]),
      markers: true,
    });
  });
  chart.legend(cols.map(([, label], i) => ({
    label, color: PALETTE[i % PALETTE.length],
  })));
  chart.annotate(`eta = ${rows[0].eta}, c = ${rows[0].c}`, 0.03, 0.05);
  return chart.render();
}

export function decayLogLog(table: Table): string {
  const rows = table.rows.filter((r) => num(r, "sup") > 0);
  if (rows.length === 0) {
    throw new SchemaError("decay CSV has no positive sup values");
  }
  const ts = rows.map((r) => num(r, "t_char"));
  const sups = rows.map((r) => num(r, "sup"));
  const chart = new Chart("Slice sup-norm decay",
    [Math.min(...ts) * 0.9, Math.max(...ts) * 1.1],
    [Math.min(...sups) * 0.8, Math.max(...sups) * 1.25],
    "characteristic time", "sup",
    { xLog: true, yLog: true });
  const byRegion = groupBy(rows, (r) => r.region);
  let i = 0;
  for (const [region, rws] of byRegion) {
    const sorted = [...rws].sort((a, b) => num(a, "t_char")
      - num(b, "t_char"));
    chart.polyline({
      label: region,
      color: PALETTE[i % PALETTE.length],
      points: sorted.map((r) => [num(r, "t_char"), num(r, "sup")]),
      markers: true,
    });
    i += 1;
  }
  chart.legend([...byRegion.keys()].map((region, j) => ({
    label: region, color: PALETTE[j % PALETTE.length],
  })));

  const fitCell = rows.find((r) => r.fit_exponent !== "")?.fit_exponent;
  if (fitCell !== undefined) {
    const p = Number(fitCell);
    // anchor the reference slope line at the log-mean data point
    const mx = Math.exp(ts.reduce((a, t) => a + Math.log(t), 0) / ts.length);
    const my = Math.exp(sups.reduce((a, v) => a + Math.log(v), 0)
      / sups.length);
    const [t0, t1] = [Math.min(...ts), Math.max(...ts)];
    chart.polyline({
      label: "fit",
      color: "#333",
      dash: "6,4",
      points: [[t0, my * (t0 / mx) ** p], [t1, my * (t1 / mx) ** p]],
    });
    const err = rows.find((r) => r.fit_stderr !== "")?.fit_stderr;
    const errTxt = err !== undefined ? ` +- ${Number(err).toFixed(3)}` : "";
    chart.annotate(`exponent = ${p.toFixed(3)}${errTxt}`, 0.04, 0.08);
  }
  return chart.render();
}

export function sobolevRatios(table: Table): string {
  const rows = table.rows;
  const refs = rows.map((r) => num(r, "refinement"));
  const ratios = rows.map((r) => num(r, "ratio"));
  const hasPositive = ratios.some((v) => v > 0);
  const yRange: [number, number] = hasPositive
    ? [Math.min(...ratios.filter((v) => v > 0)) * 0.8,
      Math.max(...ratios) * 1.25]
    : [0, 1];
  const chart = new Chart("Inequality constant estimates vs refinement",
    [Math.min(...refs) * 0.9, Math.max(...refs) * 1.1], yRange,
    "quadrature nodes", "sup LHS / RHS",
    { xLog: true, yLog: hasPositive });
  const groups = groupBy(rows, (r) =>
    `${r.inequality} s=${r.s} ${r.param}`);
  let i = 0;
  const entries: { label: string; color: string }[] = [];
  let alarms = 0;
  for (const [label, rws] of groups) {
    const color = PALETTE[i % PALETTE.length];
    const sorted = [...rws].sort((a, b) => num(a, "refinement")
      - num(b, "refinement"));
    const pts = sorted
      .filter((r) => !hasPositive || num(r, "ratio") > 0)
      .map((r) => [num(r, "refinement"), num(r, "ratio")] as
        [number, number]);
    if (pts.length >= 2) {
      chart.polyline({ label, color, points: pts, markers: true });
    }
    for (const r of sorted) {
      if (r.alarm === "1" && num(r, "ratio") > 0) {
        chart.marker(num(r, "refinement"), num(r, "ratio"), "#d62728", 6);
        alarms += 1;
      }
    }
    entries.push({ label, color });
    i += 1;
  }
  chart.legend(entries.slice(0, 12));
  if (alarms > 0) {
    chart.annotate(`ALARM: ${alarms} flagged point(s)`, 0.04, 0.05,
      "#d62728");
  }
  return chart.render();
}

const RENDERERS: Record<FigureKind, { schema: string;
  render: (t: Table) => string }> = {
  foliation_levels: { schema: "foliate", render: foliationLevels },
  energy_vs_s: { schema: "energy", render: energyVsS },
  decay_loglog: { schema: "decay", render: decayLogLog },
  sobolev_ratios: { schema: "sobolev", render: sobolevRatios },
};

export function renderFigure(kind: FigureKind, inputs: string[]): string {
  const spec = RENDERERS[kind];
  if (!spec) {
    throw new SchemaError(`unknown figure kind '${kind}'`);
  }
  const table = loadTables(inputs, spec.schema);
  return spec.render(table);
}
