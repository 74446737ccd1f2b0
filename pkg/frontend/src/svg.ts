/**
 * Minimal SVG rendering of log-log panels. No DOM, no dependencies:
 * panels are assembled as strings with decade ticks and a shared
 * legend row above the panel grid.
 */

import { Series } from "./series.js";

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

const PANEL_W = 330;
const PANEL_H = 300;
const MARGIN = { top: 34, right: 14, bottom: 46, left: 62 };
const LEGEND_H = 26;

function niceLogRange(values: number[]): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  return [Math.floor(Math.log10(lo)), Math.ceil(Math.log10(hi))];
}

function fmtPow(exp: number): string {
  return exp === 0 ? "1" : `1e${exp}`;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function renderPanel(panel: Panel, x0: number, y0: number): string {
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;
  const xs = panel.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = panel.series.flatMap((s) => s.points.map((p) => p[1]));
  if (xs.length === 0) {
    throw new Error(`panel "${panel.title}": no plottable points`);
  }
  const [xLo, xHi] = niceLogRange(xs);
  const [yLo, yHi] = niceLogRange(ys);
  const sx = (v: number) =>
    x0 + MARGIN.left + ((Math.log10(v) - xLo) / Math.max(xHi - xLo, 1e-9)) * innerW;
  const sy = (v: number) =>
    y0 + MARGIN.top + (1 - (Math.log10(v) - yLo) / Math.max(yHi - yLo, 1e-9)) * innerH;

  const parts: string[] = [];
  parts.push(
    `<rect x="${x0 + MARGIN.left}" y="${y0 + MARGIN.top}" width="${innerW}" height="${innerH}" fill="white" stroke="#444"/>`,
  );
  const xStep = Math.max(1, Math.ceil((xHi - xLo) / 6));
  for (let e = xLo; e <= xHi; e += xStep) {
    const px = sx(10 ** e);
    parts.push(
      `<line x1="${px.toFixed(1)}" y1="${y0 + MARGIN.top}" x2="${px.toFixed(1)}" y2="${y0 + MARGIN.top + innerH}" stroke="#ddd"/>`,
      `<text x="${px.toFixed(1)}" y="${y0 + MARGIN.top + innerH + 16}" font-size="10" text-anchor="middle">${fmtPow(e)}</text>`,
    );
  }
  const yStep = Math.max(1, Math.ceil((yHi - yLo) / 6));
  for (let e = yLo; e <= yHi; e += yStep) {
    const py = sy(10 ** e);
    parts.push(
      `<line x1="${x0 + MARGIN.left}" y1="${py.toFixed(1)}" x2="${x0 + MARGIN.left + innerW}" y2="${py.toFixed(1)}" stroke="#ddd"/>`,
      `<text x="${x0 + MARGIN.left - 6}" y="${(py + 3).toFixed(1)}" font-size="10" text-anchor="end">${fmtPow(e)}</text>`,
    );
  }
  for (const series of panel.series) {
    const path = series.points
      .map(([px, py], i) => `${i === 0 ? "M" : "L"}${sx(px).toFixed(2)},${sy(py).toFixed(2)}`)
      .join(" ");
    const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
    parts.push(
      `<path d="${path}" fill="none" stroke="${series.color}" stroke-width="1.6"${dash}/>`,
    );
  }
  parts.push(
    `<text x="${x0 + PANEL_W / 2}" y="${y0 + MARGIN.top - 10}" font-size="12" text-anchor="middle" font-weight="bold">${esc(panel.title)}</text>`,
    `<text x="${x0 + MARGIN.left + innerW / 2}" y="${y0 + PANEL_H - 10}" font-size="11" text-anchor="middle">${esc(panel.xLabel)}</text>`,
    `<text x="${x0 + 14}" y="${y0 + MARGIN.top + innerH / 2}" font-size="11" text-anchor="middle" transform="rotate(-90 ${x0 + 14} ${y0 + MARGIN.top + innerH / 2})">${esc(panel.yLabel)}</text>`,
  );
  return parts.join("\n");
}

export function renderFigure(panels: Panel[], legend: Series[]): string {
  const width = PANEL_W * panels.length;
  const height = PANEL_H + LEGEND_H;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];
  let lx = 16;
  for (const entry of legend) {
    const dash = entry.dash ? ` stroke-dasharray="${entry.dash}"` : "";
    parts.push(
      `<line x1="${lx}" y1="${LEGEND_H / 2}" x2="${lx + 26}" y2="${LEGEND_H / 2}" stroke="${entry.color}" stroke-width="2"${dash}/>`,
      `<text x="${lx + 32}" y="${LEGEND_H / 2 + 4}" font-size="11">${esc(entry.label)}</text>`,
    );
    lx += 40 + entry.label.length * 6.2;
  }
  panels.forEach((panel, i) => {
    parts.push(renderPanel(panel, i * PANEL_W, LEGEND_H));
  });
  parts.push("</svg>");
  return parts.join("\n");
}
