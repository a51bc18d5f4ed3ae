// Figure renderers for scan CSV files. Every figure is a pure function of
// the CSV content: values, roots, and slopes are read from the data rows and
// the summary block, never recomputed, so the rendered annotations are
// exactly the numbers the scan reported.

import { readFileSync, writeFileSync } from "node:fs";

import {
  MalformedSummary,
  ScanTable,
  okColumn,
  parseScanCsv,
  requireColumns,
  requireSummaryNumber,
} from "./csv.js";
import { el, label3, polyline, scaleLinear, scaleLog, svgDocument, text } from "./svg.js";

export type FigureKind = "detuning" | "slab" | "alignment" | "validation";

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
}

const W = 640;
const H = 420;
const MARGIN = { left: 70, right: 30, top: 40, bottom: 50 };

function frame(title: string): string[] {
  return [
    el("rect", { x: 0, y: 0, width: W, height: H, fill: "white" }),
    el("rect", {
      x: MARGIN.left,
      y: MARGIN.top,
      width: W - MARGIN.left - MARGIN.right,
      height: H - MARGIN.top - MARGIN.bottom,
      fill: "none",
      stroke: "#333",
    }),
    text(title, { x: W / 2, y: 24, "text-anchor": "middle", "font-size": 15, class: "title" }),
  ];
}

function axisLabels(xlab: string, ylab: string): string[] {
  return [
    text(xlab, { x: W / 2, y: H - 12, "text-anchor": "middle", "font-size": 12 }),
    text(ylab, {
      x: 16,
      y: H / 2,
      "text-anchor": "middle",
      "font-size": 12,
      transform: `rotate(-90 16 ${H / 2})`,
    }),
  ];
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

export function renderDetuning(table: ScanTable): string {
  requireColumns(table, ["delta", "de_p2", "status"]);
  const delta = okColumn(table, "delta");
  const value = okColumn(table, "de_p2");
  const root = requireSummaryNumber(table, "root_delta");
  const crossover = requireSummaryNumber(table, "crossover_delta");
  const [x0, x1] = extent(delta);
  const [y0, y1] = extent(value.concat([0]));
  const sx = scaleLinear(x0, x1, MARGIN.left, W - MARGIN.right);
  const sy = scaleLinear(y0, y1, H - MARGIN.bottom, MARGIN.top);
  const parts = frame("3-body term vs detuning").concat(axisLabels("delta", "energy"));
  parts.push(
    el("line", {
      x1: MARGIN.left, x2: W - MARGIN.right, y1: sy(0), y2: sy(0),
      stroke: "#999", "stroke-dasharray": "4 3", class: "zero-line",
    })
  );
  parts.push(
    polyline(delta.map((d, i) => [sx(d), sy(value[i])]), { stroke: "#1f77b4", "stroke-width": 1.5, class: "series-de-p2" })
  );
  if (Number.isFinite(root)) {
    parts.push(
      el("line", {
        x1: sx(root), x2: sx(root), y1: MARGIN.top, y2: H - MARGIN.bottom,
        stroke: "#d62728", class: "crossover-marker",
        "data-root-delta": String(root), "data-crossover-delta": String(crossover),
      }),
      text(`root delta = ${label3(root)}`, {
        x: sx(root) + 6, y: MARGIN.top + 16, "font-size": 12,
        fill: "#d62728", class: "crossover-label",
      })
    );
  }
  parts.push(text(`min/max delta: ${label3(x0)} .. ${label3(x1)}`, {
    x: MARGIN.left, y: H - 32, "font-size": 10, fill: "#555",
  }));
  return svgDocument(W, H, parts);
}

export function renderSlab(table: ScanTable): string {
  requireColumns(table, ["z0", "incoherent_sum", "coherent_sum_sq", "status"]);
  const z0 = okColumn(table, "z0");
  const series: Array<[string, string, string]> = [
    ["incoherent_sum", "#1f77b4", "slope_incoherent"],
    ["coherent_sum_sq", "#d62728", "slope_coherent"],
  ];
  const all = series.flatMap(([name]) => okColumn(table, name));
  const [x0, x1] = extent(z0);
  const [y0, y1] = extent(all);
  const sx = scaleLog(x0, x1, MARGIN.left, W - MARGIN.right);
  const sy = scaleLog(y0, y1, H - MARGIN.bottom, MARGIN.top);
  const parts = frame("probe-slab coupling sums vs distance (log-log)").concat(
    axisLabels("z0", "lattice sum")
  );
  series.forEach(([name, color, slopeKey], idx) => {
    const ys = okColumn(table, name);
    const slope = requireSummaryNumber(table, slopeKey);
    parts.push(
      polyline(z0.map((z, i) => [sx(z), sy(ys[i])]), {
        stroke: color, "stroke-width": 1.5, class: `series-${name}`,
      }),
      text(`${name} slope = ${slope.toFixed(3)}`, {
        x: W - MARGIN.right - 8, y: MARGIN.top + 18 + 16 * idx,
        "text-anchor": "end", "font-size": 12, fill: color,
        class: `slope-label-${name}`, [`data-${slopeKey.replace("_", "-")}`]: String(slope),
      })
    );
  });
  return svgDocument(W, H, parts);
}

export function renderAlignment(table: ScanTable): string {
  requireColumns(table, ["theta", "total", "cavity_total", "status"]);
  const theta = okColumn(table, "theta");
  const cx = W / 2;
  const cy = (H + MARGIN.top) / 2;
  const rMax = Math.min(W, H) / 2 - 70;
  const parts = frame("energy landscape vs dipole tilt (polar)");
  for (const frac of [0.5, 1.0]) {
    parts.push(el("circle", { cx, cy, r: rMax * frac, fill: "none", stroke: "#ddd" }));
  }
  const seriesDefs: Array<[string, string]> = [["total", "#1f77b4"], ["cavity_total", "#d62728"]];
  for (const [name, color] of seriesDefs) {
    const values = okColumn(table, name);
    const [v0, v1] = extent(values);
    const sr = scaleLinear(v0, v1 === v0 ? v0 + 1 : v1, 0.35 * rMax, rMax);
    parts.push(
      polyline(
        theta.map((t, i) => [cx + sr(values[i]) * Math.cos(t), cy - sr(values[i]) * Math.sin(t)]),
        { stroke: color, "stroke-width": 1.5, class: `series-${name}` }
      ),
      text(name, {
        x: MARGIN.left, y: MARGIN.top + 18 + 16 * seriesDefs.findIndex(([n]) => n === name),
        "font-size": 12, fill: color,
      })
    );
  }
  return svgDocument(W, H, parts);
}

export function renderValidation(table: ScanTable): string {
  requireColumns(table, ["lam", "residual", "status"]);
  const lam = okColumn(table, "lam");
  const residual = okColumn(table, "residual");
  const pairs = lam
    .map((l, i) => [l, residual[i]] as [number, number])
    .filter(([, r]) => r > 0)
    .sort((a, b) => a[0] - b[0]);
  const [x0, x1] = extent(pairs.map((p) => p[0]));
  const [y0, y1] = extent(pairs.map((p) => p[1]));
  const sx = scaleLog(x0, x1, MARGIN.left, W - MARGIN.right);
  const sy = scaleLog(y0, y1, H - MARGIN.bottom, MARGIN.top);
  const parts = frame("analytic-vs-exact residual vs coupling scale (log-log)").concat(
    axisLabels("coupling scale", "residual")
  );
  parts.push(
    polyline(pairs.map(([l, r]) => [sx(l), sy(r)]), {
      stroke: "#1f77b4", "stroke-width": 1.5, class: "series-residual",
    })
  );
  const expMin = table.summary["residual_decay_exponent_min"];
  if (typeof expMin === "number") {
    parts.push(
      text(`decay exponent >= ${expMin.toFixed(3)}`, {
        x: W - MARGIN.right - 8, y: MARGIN.top + 18, "text-anchor": "end",
        "font-size": 12, fill: "#333", class: "exponent-label",
        "data-exponent-min": String(expMin),
      })
    );
  }
  return svgDocument(W, H, parts);
}

const RENDERERS: Record<FigureKind, (t: ScanTable) => string> = {
  detuning: renderDetuning,
  slab: renderSlab,
  alignment: renderAlignment,
  validation: renderValidation,
};

export function renderFigure(kind: FigureKind, csvText: string): string {
  const renderer = RENDERERS[kind];
  if (!renderer) {
    throw new Error(`unknown figure kind '${kind}'`);
  }
  return renderer(parseScanCsv(csvText));
}

export function renderFigureFile(spec: FigureSpec): void {
  const csv = readFileSync(spec.input, "utf-8");
  writeFileSync(spec.output, renderFigure(spec.kind, csv), "utf-8");
}
