import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { TRACE_COLUMNS } from "../src/csv.js";

export function traceText(
  rows: Array<{ it: number; best: number; bound?: number; alpha?: number; m?: number }>,
): string {
  const lines = [TRACE_COLUMNS.join(",")];
  for (const r of rows) {
    const bound = r.bound === undefined ? "nan" : String(r.bound);
    lines.push(
      `${r.it},${10 / (r.it + 1)},1.0,${r.best},${r.best},${bound},${r.alpha ?? 0.01},${r.m ?? 1},5`,
    );
  }
  return lines.join("\n") + "\n";
}

export function metaText(entries: Record<string, string | number>): string {
  return (
    Object.entries(entries)
      .map(([k, v]) => `${k}=${v}`)
      .join("\n") + "\n"
  );
}

export function writeRun(
  dir: string,
  name: string,
  meta: Record<string, string | number>,
  rows: Array<{ it: number; best: number; bound?: number; alpha?: number; m?: number }>,
): void {
  writeFileSync(join(dir, `${name}.csv`), traceText(rows));
  writeFileSync(join(dir, `${name}.meta`), metaText(meta));
}

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "parafw-plots-"));
}

export function decayRows(
  n: number,
  scale: number,
  withBound: boolean,
): Array<{ it: number; best: number; bound?: number }> {
  const rows = [];
  for (let k = 1; k <= n; k++) {
    rows.push({
      it: k * 10,
      best: scale / (k * 10),
      bound: withBound ? (10 * scale) / (k * 10) + 0.01 : undefined,
    });
  }
  return rows;
}

export function makeFigure1Dir(): string {
  const dir = tempDir();
  for (const [alpha, ms] of [
    [0.01, [1, 10]],
    [0.001, [1, 32]],
  ] as Array<[number, number[]]>) {
    for (const m of ms) {
      for (const seed of [0, 1]) {
        writeRun(
          dir,
          `fig1_alpha${alpha}_m${m}_seed${seed}`,
          {
            figure: 1,
            algorithm: "pfw",
            problem: "simplex-ls",
            alpha,
            m,
            seed,
            config: `alpha${alpha}_m${m}`,
          },
          decayRows(20, 1 + seed * 0.1 + m * 0.01, true),
        );
      }
    }
  }
  return dir;
}

export function makeFigure2Dir(): string {
  const dir = tempDir();
  const panels: Record<string, string> = {
    "simplex-ls": "a,b",
    "trace-mc": "c,d",
  };
  for (const problem of ["simplex-ls", "trace-mc"]) {
    for (const algo of ["fw", "fw-ls"]) {
      writeRun(
        dir,
        `fig2_${problem}_${algo}`,
        { figure: 2, algorithm: algo, problem, panel: panels[problem] },
        decayRows(20, algo === "fw" ? 2 : 1.5, false),
      );
    }
    for (const mmode of ["theory", "one"]) {
      const panel = problem === "simplex-ls" ? (mmode === "theory" ? "a" : "b") : mmode === "theory" ? "c" : "d";
      for (const [tag, m_mode] of [
        ["m1", "one"],
        ["minv", "inv-sqrt-alpha"],
      ]) {
        for (const seed of [0, 1, 2]) {
          writeRun(
            dir,
            `fig2_${problem}_rpfw_M${mmode}_${tag}_seed${seed}`,
            {
              figure: 2,
              algorithm: "rpfw",
              problem,
              panel,
              m_mode,
              seed,
            },
            decayRows(20, 0.5 + seed * 0.05, false),
          );
        }
      }
    }
  }
  return dir;
}
