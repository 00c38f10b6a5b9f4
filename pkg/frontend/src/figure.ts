// The four figure kinds. Each consumes parsed CSV rows, reduces trial
// groups to median plus interquartile band, and emits a standalone SVG.

import { LayerRow, SchemaError, SweepRow } from "./csv.js";
import { Summary, groupBy, summarize } from "./stats.js";
import { HEIGHT, MARGIN, SvgDoc, WIDTH, linearScale, log2Scale } from "./svg.js";

export const KINDS = ["hit-vs-k", "hit-vs-L", "baseline", "layers"] as const;
export type FigureKind = (typeof KINDS)[number];

const SERIES_COLORS = ["#1f6fb2", "#c2502a", "#3b8749", "#7a4fa3"];
const BAND_COLORS = ["#1f6fb233", "#c2502a33", "#3b874933", "#7a4fa333"];

export interface SeriesPoint extends Summary {
  x: number;
  misses: number;
}

/** Median/IQR of hit times per x key; trials that never hit are dropped
 * from the order statistics but counted. */
export function computeSeries(rows: SweepRow[], key: (r: SweepRow) => number): SeriesPoint[] {
  const points: SeriesPoint[] = [];
  for (const [x, group] of groupBy(rows, key)) {
    const hits = group.filter((r) => r.hitStep >= 0).map((r) => r.hitStep);
    if (hits.length === 0) {
      throw new SchemaError(`no successful trials at x=${x}`);
    }
    points.push({ x, misses: group.length - hits.length, ...summarize(hits) });
  }
  if (points.length === 0) {
    throw new SchemaError("no data points");
  }
  return points;
}

function uniqueValues(rows: SweepRow[], field: "k" | "L"): number[] {
  return [...new Set(rows.map((r) => r[field]))].sort((a, b) => a - b);
}

function restrict(
  rows: SweepRow[],
  field: "k" | "L",
  wanted: number | undefined,
): SweepRow[] {
  const present = uniqueValues(rows, field);
  if (wanted !== undefined) {
    const kept = rows.filter((r) => r[field] === wanted);
    if (kept.length === 0) {
      throw new SchemaError(`no rows with ${field}=${wanted} (have ${present.join(",")})`);
    }
    return kept;
  }
  if (present.length > 1) {
    throw new SchemaError(
      `mixed ${field} values (${present.join(",")}); fix one with --${field}`,
    );
  }
  return rows;
}

function plotMedianBand(
  doc: SvgDoc,
  pts: SeriesPoint[],
  xScale: (x: number) => number,
  yScale: (y: number) => number,
  idx: number,
): void {
  if (pts.length > 1) {
    const upper = pts.map((p) => [xScale(p.x), yScale(p.q3)] as [number, number]);
    const lower = [...pts]
      .reverse()
      .map((p) => [xScale(p.x), yScale(p.q1)] as [number, number]);
    doc.polygon([...upper, ...lower], BAND_COLORS[idx % BAND_COLORS.length]!);
  }
  doc.polyline(
    pts.map((p) => [xScale(p.x), yScale(p.median)] as [number, number]),
    SERIES_COLORS[idx % SERIES_COLORS.length]!,
  );
}

function hitFigure(
  rows: SweepRow[],
  xField: "k" | "L",
  fixedField: "k" | "L",
  fixed: number | undefined,
  title: string,
): string {
  const kept = restrict(rows, fixedField, fixed);
  const series = computeSeries(kept, (r) => r[xField]);
  const fixedVal = uniqueValues(kept, fixedField)[0];
  const doc = new SvgDoc(`${title} (${fixedField}=${fixedVal})`);
  const xs = series.map((p) => p.x);
  const yMax = Math.max(...series.map((p) => p.q3));
  const xScale = log2Scale(xs[0]!, xs[xs.length - 1]!, MARGIN.left, WIDTH - MARGIN.right);
  const yScale = linearScale(0, yMax * 1.05, HEIGHT - MARGIN.bottom, MARGIN.top);
  doc.axes(xScale, yScale, xField, "hit step (median, IQR band)");
  plotMedianBand(doc, series, xScale, yScale, 0);
  return doc.render();
}

function baselineFigure(rows: SweepRow[], fixedL: number | undefined): string {
  const kept = restrict(rows, "L", fixedL);
  const modes = [...new Set(kept.map((r) => r.mode))].sort();
  if (modes.length < 2) {
    throw new SchemaError(
      `baseline comparison needs at least two modes, got "${modes.join(",")}"`,
    );
  }
  const perMode = modes.map((mode) =>
    computeSeries(kept.filter((r) => r.mode === mode), (r) => r.k),
  );
  const L = uniqueValues(kept, "L")[0];
  const doc = new SvgDoc(`hit step by schedule (L=${L})`);
  const xsAll = perMode.flatMap((s) => s.map((p) => p.x));
  const yMax = Math.max(...perMode.flatMap((s) => s.map((p) => p.q3)));
  const xScale = log2Scale(
    Math.min(...xsAll), Math.max(...xsAll), MARGIN.left, WIDTH - MARGIN.right,
  );
  const yScale = linearScale(0, yMax * 1.05, HEIGHT - MARGIN.bottom, MARGIN.top);
  doc.axes(xScale, yScale, "k", "hit step (median, IQR band)");
  perMode.forEach((series, i) => plotMedianBand(doc, series, xScale, yScale, i));
  doc.legend(modes.map((m, i) => [m, SERIES_COLORS[i % SERIES_COLORS.length]!]));
  return doc.render();
}

function layersFigure(rows: LayerRow[]): string {
  const total = rows.reduce((acc, r) => acc + r.duration, 0);
  const doc = new SvgDoc(`leading-layer spans (total ${total} steps)`);
  const yMax = Math.max(...rows.map((r) => r.duration), 1);
  const xScale = linearScale(
    -0.5, rows.length - 0.5, MARGIN.left, WIDTH - MARGIN.right,
  );
  xScale.ticks = rows
    .map((r) => r.layer)
    .filter((l) => l % Math.ceil(rows.length / 16) === 0);
  const yScale = linearScale(0, yMax * 1.05, HEIGHT - MARGIN.bottom, MARGIN.top);
  doc.axes(xScale, yScale, "layer", "steps leading");
  const slot = (WIDTH - MARGIN.left - MARGIN.right) / rows.length;
  for (const row of rows) {
    const x = xScale(row.layer - 0.5) + slot * 0.125;
    const y = yScale(row.duration);
    doc.rect(x, y, slot * 0.75, yScale(0) - y, SERIES_COLORS[0]!);
  }
  return doc.render();
}

export interface FigureInput {
  sweeps: SweepRow[];
  layers: LayerRow[];
  k?: number;
  L?: number;
}

export function renderFigure(kind: FigureKind, input: FigureInput): string {
  switch (kind) {
    case "hit-vs-k":
      return hitFigure(input.sweeps, "k", "L", input.L, "hit step vs k");
    case "hit-vs-L":
      return hitFigure(input.sweeps, "L", "k", input.k, "hit step vs L");
    case "baseline":
      return baselineFigure(input.sweeps, input.L);
    case "layers":
      if (input.layers.length === 0) {
        throw new SchemaError("layers figure needs a layers CSV");
      }
      return layersFigure(input.layers);
  }
}
