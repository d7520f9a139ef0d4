/**
 * Figure renderers. Curve kinds draw one line per (scheme, K) series with a
 * shaded min-max band over trials; the modes kind draws a grid of per-cell
 * heatmap panels, magnitudes on top and phases (in units of pi) below.
 */

import { Series } from "./aggregate.js";
import { cyclicColor, sequentialColor, SERIES_PALETTE } from "./color.js";
import { ModesTable } from "./csv.js";
import { fmt, linearScale, SvgDoc, ticks } from "./svg.js";

export interface CurveStyle {
  xLabel: string;
  yLabel: string;
  title: string;
}

export const CURVE_STYLES: Record<string, CurveStyle> = {
  rate_vs_n: {
    xLabel: "number of reflecting cells N",
    yLabel: "achievable rate (bits/s/Hz)",
    title: "Rate vs surface size",
  },
  dof_vs_d: {
    xLabel: "wall separation D (m)",
    yLabel: "effective rank",
    title: "Degrees of freedom vs distance",
  },
  dof_vs_dris: {
    xLabel: "surface offset d_ris (m)",
    yLabel: "effective rank",
    title: "Degrees of freedom vs surface position",
  },
};

const MARGIN = { left: 64, right: 16, top: 36, bottom: 46 };

function formatK(k: number): string {
  return Number.isInteger(k) ? `K=${k}` : `K=${k.toPrecision(3)}`;
}

export function renderCurves(series: Series[], style: CurveStyle): string {
  if (series.length === 0 || series.every((s) => s.points.length === 0)) {
    throw new Error("nothing to plot: the series selection is empty");
  }
  const width = 720;
  const height = 480;
  const doc = new SvgDoc(width, height);
  const xs = series.flatMap((s) => s.points.map((p) => p.sweepValue));
  const lows = series.flatMap((s) => s.points.map((p) => p.min));
  const highs = series.flatMap((s) => s.points.map((p) => p.max));
  const xScale = linearScale(Math.min(...xs), Math.max(...xs), MARGIN.left, width - MARGIN.right);
  const yMin = Math.min(0, ...lows);
  const yMax = Math.max(...highs) * 1.05 || 1;
  const yScale = linearScale(yMin, yMax, height - MARGIN.bottom, MARGIN.top);

  // axes and grid
  doc.open("g", { class: "axes", stroke: "#444444", "stroke-width": 1 });
  doc.element("line", {
    x1: MARGIN.left, y1: height - MARGIN.bottom, x2: width - MARGIN.right, y2: height - MARGIN.bottom,
  });
  doc.element("line", { x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: height - MARGIN.bottom });
  doc.close("g");
  doc.open("g", { class: "ticks", "font-size": 11, fill: "#222222" });
  for (const t of ticks(xScale.min, xScale.max, 8)) {
    const px = xScale.toPixel(t);
    doc.element("line", {
      x1: px, y1: height - MARGIN.bottom, x2: px, y2: height - MARGIN.bottom + 4,
      stroke: "#444444",
    });
    doc.text(fmt(t), { x: px, y: height - MARGIN.bottom + 16, "text-anchor": "middle" });
  }
  for (const t of ticks(yScale.min, yScale.max, 8)) {
    const py = yScale.toPixel(t);
    doc.element("line", { x1: MARGIN.left - 4, y1: py, x2: MARGIN.left, y2: py, stroke: "#444444" });
    doc.text(fmt(t), { x: MARGIN.left - 8, y: py + 4, "text-anchor": "end" });
    doc.element("line", {
      x1: MARGIN.left, y1: py, x2: width - MARGIN.right, y2: py,
      stroke: "#dddddd", "stroke-width": 0.5,
    });
  }
  doc.close("g");
  doc.text(style.xLabel, {
    x: (MARGIN.left + width - MARGIN.right) / 2, y: height - 12,
    "text-anchor": "middle", "font-size": 13,
  });
  doc.text(style.yLabel, {
    x: 16, y: (MARGIN.top + height - MARGIN.bottom) / 2, "text-anchor": "middle",
    "font-size": 13, transform: `rotate(-90 16 ${fmt((MARGIN.top + height - MARGIN.bottom) / 2)})`,
  });
  doc.text(style.title, { x: width / 2, y: 20, "text-anchor": "middle", "font-size": 15 });

  series.forEach((s, idx) => {
    const color = SERIES_PALETTE[idx % SERIES_PALETTE.length];
    const line: Array<[number, number]> = s.points.map((p) => [
      xScale.toPixel(p.sweepValue),
      yScale.toPixel(p.mean),
    ]);
    const hasBand = s.points.some((p) => p.max > p.min);
    doc.open("g", { class: "series", "data-scheme": s.scheme, "data-k": String(s.k) });
    if (hasBand) {
      const upper: Array<[number, number]> = s.points.map((p) => [
        xScale.toPixel(p.sweepValue),
        yScale.toPixel(p.max),
      ]);
      const lower: Array<[number, number]> = [...s.points]
        .reverse()
        .map((p) => [xScale.toPixel(p.sweepValue), yScale.toPixel(p.min)]);
      doc.polygon([...upper, ...lower], { fill: color, "fill-opacity": "0.15", stroke: "none" });
    }
    doc.polyline(line, { stroke: color, "stroke-width": 2 });
    for (const [px, py] of line) {
      doc.element("circle", { cx: px, cy: py, r: 3, fill: color });
    }
    doc.close("g");
  });

  // legend
  doc.open("g", { class: "legend", "font-size": 12 });
  series.forEach((s, idx) => {
    const color = SERIES_PALETTE[idx % SERIES_PALETTE.length];
    const y = MARGIN.top + 8 + 18 * idx;
    doc.element("rect", { x: MARGIN.left + 10, y: y - 9, width: 14, height: 4, fill: color });
    doc.text(`${s.scheme} ${formatK(s.k)}`, { x: MARGIN.left + 30, y, fill: "#222222" });
  });
  doc.close("g");
  return doc.render();
}

interface PanelGrid {
  cols: number[];
  rows: number[];
  colOf: Map<number, number>;
  rowOf: Map<number, number>;
}

function panelGrid(xs: number[], ys: number[]): PanelGrid {
  const cols = [...new Set(xs)].sort((a, b) => a - b);
  const rows = [...new Set(ys)].sort((a, b) => a - b);
  return {
    cols,
    rows,
    colOf: new Map(cols.map((v, i) => [v, i])),
    rowOf: new Map(rows.map((v, i) => [v, i])),
  };
}

export function renderModes(table: ModesTable, requested?: number): string {
  const total = table.magnitudes.length;
  const count = requested === undefined ? total : requested;
  if (count < 1 || count > total) {
    throw new Error(`requested ${count} modes but the CSV carries ${total}`);
  }
  const grid = panelGrid(table.x, table.y);
  const panelsPerRow = Math.min(count, 3);
  const panelRows = Math.ceil(count / panelsPerRow);
  const panelSize = 168;
  const gap = 26;
  const blockGap = 44;
  const width = panelsPerRow * (panelSize + gap) + gap;
  const height = 2 * panelRows * (panelSize + gap) + blockGap + 70;
  const doc = new SvgDoc(width, height);
  doc.text("Cell magnitude of the strongest modes", {
    x: width / 2, y: 22, "text-anchor": "middle", "font-size": 14,
  });
  const phaseBlockTop = panelRows * (panelSize + gap) + blockGap + 30;
  doc.text("Cell phase (units of pi)", {
    x: width / 2, y: phaseBlockTop - 10, "text-anchor": "middle", "font-size": 14,
  });

  for (let mode = 0; mode < count; mode++) {
    const col = mode % panelsPerRow;
    const row = Math.floor(mode / panelsPerRow);
    const magTop = 34 + row * (panelSize + gap);
    const phaseTop = phaseBlockTop + row * (panelSize + gap);
    const left = gap + col * (panelSize + gap);
    drawPanel(doc, table, grid, mode, left, magTop, panelSize, "magnitude");
    drawPanel(doc, table, grid, mode, left, phaseTop, panelSize, "phase");
  }
  return doc.render();
}

function drawPanel(
  doc: SvgDoc,
  table: ModesTable,
  grid: PanelGrid,
  mode: number,
  left: number,
  top: number,
  size: number,
  kind: "magnitude" | "phase",
): void {
  const mags = table.magnitudes[mode];
  const peak = Math.max(...mags);
  const active = peak > 0;
  doc.open("g", {
    class: `panel panel-${kind}`,
    "data-mode": String(mode + 1),
    "data-active": active ? "1" : "0",
  });
  doc.element("rect", {
    x: left, y: top, width: size, height: size,
    fill: active ? "none" : "#f4f4f4", stroke: "#333333", "stroke-width": 1,
  });
  doc.text(`mode ${mode + 1}${active ? "" : " (no power)"}`, {
    x: left + size / 2, y: top + size + 14, "text-anchor": "middle", "font-size": 11,
  });
  if (active) {
    const cw = size / grid.cols.length;
    const ch = size / grid.rows.length;
    for (let i = 0; i < table.x.length; i++) {
      const cx = grid.colOf.get(table.x[i])!;
      const cy = grid.rowOf.get(table.y[i])!;
      const color =
        kind === "magnitude"
          ? sequentialColor(mags[i] / peak)
          : cyclicColor(table.phases[mode][i]);
      doc.element("rect", {
        x: left + cx * cw,
        y: top + (grid.rows.length - 1 - cy) * ch,
        width: cw + 0.5,
        height: ch + 0.5,
        fill: color,
      });
    }
  }
  doc.close("g");
}
