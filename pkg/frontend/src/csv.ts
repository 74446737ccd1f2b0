/**
 * Trace CSV parsing against the fixed harness schema.
 *
 * Every diagnostic names the offending file so batch invocations fail
 * with an actionable message.
 */

import { readFileSync } from "node:fs";

export const TRACE_COLUMNS = [
  "iteration",
  "primal",
  "dual",
  "gap",
  "best_gap",
  "bound",
  "alpha",
  "m",
  "wall_ns",
] as const;

export interface TraceRow {
  iteration: number;
  primal: number;
  dual: number;
  gap: number;
  best_gap: number;
  bound: number;
  alpha: number;
  m: number;
  wall_ns: number;
}

export function parseTrace(file: string, text: string): TraceRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${file}: empty trace file`);
  }
  const header = lines[0].split(",");
  const missing = TRACE_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new Error(`${file}: missing column(s) ${missing.join(", ")}`);
  }
  const extra = header.filter((c) => !(TRACE_COLUMNS as readonly string[]).includes(c));
  if (extra.length > 0) {
    throw new Error(`${file}: unknown column(s) ${extra.join(", ")}`);
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const rows: TraceRow[] = [];
  for (let ln = 1; ln < lines.length; ln++) {
    const parts = lines[ln].split(",");
    if (parts.length !== header.length) {
      throw new Error(`${file}:${ln + 1}: expected ${header.length} fields, got ${parts.length}`);
    }
    const num = (name: string) => Number(parts[index.get(name)!]);
    rows.push({
      iteration: num("iteration"),
      primal: num("primal"),
      dual: num("dual"),
      gap: num("gap"),
      best_gap: num("best_gap"),
      bound: num("bound"),
      alpha: num("alpha"),
      m: num("m"),
      wall_ns: num("wall_ns"),
    });
  }
  if (rows.length === 0) {
    throw new Error(`${file}: trace has a header but no data rows`);
  }
  return rows;
}

export function readTrace(path: string): TraceRow[] {
  return parseTrace(path, readFileSync(path, "utf8"));
}
