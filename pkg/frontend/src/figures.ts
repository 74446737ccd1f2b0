/**
 * Figure assembly from a directory of harness traces.
 *
 * Figure 1: per (alpha, m) configuration, the mean best gap across
 * seeds overlaid with the theoretical bound column; one panel per
 * alpha. Figure 2: per panel (a)-(d), the two baselines and the two
 * restarted-solver variants, medians across seeds.
 */

import { readdirSync } from "node:fs";
import { join } from "node:path";

import { readTrace, TraceRow } from "./csv.js";
import { Meta, readMetaFor } from "./meta.js";
import { combine, plottable, Series } from "./series.js";
import { Panel, renderFigure } from "./svg.js";

interface Trace {
  file: string;
  meta: Meta;
  rows: TraceRow[];
}

function loadFigureTraces(dir: string, figure: string): Trace[] {
  const files = readdirSync(dir)
    .filter((name) => name.endsWith(".csv") && !name.endsWith(".fwgap.csv"))
    .sort();
  const traces: Trace[] = [];
  for (const name of files) {
    const path = join(dir, name);
    const meta = readMetaFor(path);
    if (meta["figure"] !== figure) continue;
    traces.push({ file: path, meta, rows: readTrace(path) });
  }
  if (traces.length === 0) {
    throw new Error(`${dir}: no figure-${figure} traces found`);
  }
  return traces;
}

function groupBy(traces: Trace[], key: (t: Trace) => string): Map<string, Trace[]> {
  const groups = new Map<string, Trace[]>();
  for (const t of traces) {
    const k = key(t);
    groups.set(k, [...(groups.get(k) ?? []), t]);
  }
  return groups;
}

const FIG1_COLORS = new Map<string, string>();

export function buildFigure1(dir: string): string {
  const traces = loadFigureTraces(dir, "1");
  for (const t of traces) {
    if (!t.rows.some((r) => Number.isFinite(r.bound))) {
      throw new Error(`${t.file}: bound column carries no finite values`);
    }
  }
  const byConfig = groupBy(traces, (t) => t.meta["config"] ?? "unknown");
  const alphas = [...new Set(traces.map((t) => Number(t.meta["alpha"])))].sort(
    (a, b) => b - a,
  );
  const panels: Panel[] = [];
  const legend: Series[] = [];
  for (const alpha of alphas) {
    const panelSeries: Series[] = [];
    const configs = [...byConfig.entries()]
      .filter(([, ts]) => Number(ts[0].meta["alpha"]) === alpha)
      .sort(([, a], [, b]) => Number(a[0].meta["m"]) - Number(b[0].meta["m"]));
    configs.forEach(([config, ts], idx) => {
      const color = FIG1_COLORS.get(config) ?? (idx === 0 ? "#d62728" : "#1f77b4");
      const files = ts.map((t) => t.file);
      const runs = ts.map((t) => t.rows);
      const m = ts[0].meta["m"];
      panelSeries.push({
        label: `solver (m=${m})`,
        color,
        points: plottable(combine(files, runs, "best_gap", "mean")),
      });
      panelSeries.push({
        label: `bound (m=${m})`,
        color,
        dash: "6 3",
        points: plottable(combine([files[0]], [runs[0]], "bound", "mean")),
      });
    });
    panels.push({
      title: `alpha = ${alpha}`,
      xLabel: "iteration",
      yLabel: "best primal-dual gap",
      series: panelSeries,
    });
    if (legend.length === 0) {
      legend.push(...panelSeries.map((s) => ({ ...s, points: [] })));
    }
  }
  return renderFigure(panels, legend);
}

const FIG2_STYLE: Record<string, { label: string; color: string }> = {
  fw: { label: "FW", color: "#2ca02c" },
  "fw-ls": { label: "FW-LS", color: "#000000" },
  "rpfw-m1": { label: "R-PFW (m=1)", color: "#d62728" },
  "rpfw-minv": { label: "R-PFW (m=1/sqrt(a))", color: "#1f77b4" },
};

function fig2Kind(meta: Meta): string {
  const algo = meta["algorithm"];
  if (algo === "fw" || algo === "fw-ls") return algo;
  if (algo === "rpfw") {
    return meta["m_mode"] === "one" ? "rpfw-m1" : "rpfw-minv";
  }
  throw new Error(`unsupported figure-2 algorithm ${algo}`);
}

export function buildFigure2(dir: string): string {
  const traces = loadFigureTraces(dir, "2");
  const panelIds = ["a", "b", "c", "d"];
  const byPanel = new Map<string, Trace[]>(panelIds.map((p) => [p, []]));
  for (const t of traces) {
    const tags = (t.meta["panel"] ?? "").split(",");
    for (const tag of tags) {
      if (byPanel.has(tag)) byPanel.get(tag)!.push(t);
    }
  }
  const panels: Panel[] = [];
  for (const panelId of panelIds) {
    const members = byPanel.get(panelId)!;
    if (members.length === 0) {
      throw new Error(`${dir}: no traces tagged for panel (${panelId})`);
    }
    const byKind = groupBy(members, (t) => fig2Kind(t.meta));
    const series: Series[] = [];
    for (const kind of Object.keys(FIG2_STYLE)) {
      const ts = byKind.get(kind);
      if (!ts) continue;
      const style = FIG2_STYLE[kind];
      series.push({
        label: style.label,
        color: style.color,
        points: plottable(
          combine(ts.map((t) => t.file), ts.map((t) => t.rows), "best_gap", "median"),
        ),
      });
    }
    const first = members[0].meta;
    const problem = first["problem"];
    panels.push({
      title: `(${panelId}) ${problem}`,
      xLabel: "iteration",
      yLabel: panelId === "a" ? "best primal-dual gap" : "",
      series,
    });
  }
  const legend = Object.values(FIG2_STYLE).map((s) => ({
    label: s.label,
    color: s.color,
    points: [] as Array<[number, number]>,
  }));
  return renderFigure(panels, legend);
}
