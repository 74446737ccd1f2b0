/** Aggregation of per-seed traces into plottable series. */

import { TraceRow } from "./csv.js";

export interface Series {
  label: string;
  color: string;
  dash?: string;
  points: Array<[number, number]>;
}

function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 === 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

function alignIterations(files: string[], runs: TraceRow[][]): number[] {
  const grid = runs[0].map((r) => r.iteration);
  for (let i = 1; i < runs.length; i++) {
    const other = runs[i].map((r) => r.iteration);
    if (other.length !== grid.length || other.some((v, j) => v !== grid[j])) {
      throw new Error(
        `${files[i]}: iteration grid differs from ${files[0]}; seeds of one configuration must share a logging schedule`,
      );
    }
  }
  return grid;
}

/** Combine seed runs column-wise with the given reducer (mean/median). */
export function combine(
  files: string[],
  runs: TraceRow[][],
  column: "best_gap" | "bound" | "gap",
  how: "mean" | "median",
): Array<[number, number]> {
  const grid = alignIterations(files, runs);
  const points: Array<[number, number]> = [];
  for (let j = 0; j < grid.length; j++) {
    const values = runs.map((run) => run[j][column]);
    const v =
      how === "mean"
        ? values.reduce((a, b) => a + b, 0) / values.length
        : median(values);
    points.push([grid[j], v]);
  }
  return points;
}

/** Keep only points a log-log plot can draw. */
export function plottable(points: Array<[number, number]>): Array<[number, number]> {
  return points.filter(([x, y]) => x > 0 && y > 0 && Number.isFinite(y));
}
