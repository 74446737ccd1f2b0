import { existsSync, rmSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { buildFigure1, buildFigure2 } from "../src/figures.js";
import { combine, plottable } from "../src/series.js";
import { decayRows, makeFigure1Dir, makeFigure2Dir, tempDir, writeRun } from "./fixtures.js";

describe("series aggregation", () => {
  it("means across seeds on an aligned grid", () => {
    const a = [
      { iteration: 1, primal: 0, dual: 0, gap: 0, best_gap: 2, bound: 1, alpha: 0.1, m: 1, wall_ns: 0 },
      { iteration: 2, primal: 0, dual: 0, gap: 0, best_gap: 1, bound: 1, alpha: 0.1, m: 1, wall_ns: 0 },
    ];
    const b = a.map((r) => ({ ...r, best_gap: r.best_gap + 2 }));
    const points = combine(["a", "b"], [a, b], "best_gap", "mean");
    expect(points).toEqual([
      [1, 3],
      [2, 2],
    ]);
  });

  it("rejects mismatched iteration grids naming both files", () => {
    const a = [
      { iteration: 1, primal: 0, dual: 0, gap: 0, best_gap: 2, bound: 1, alpha: 0.1, m: 1, wall_ns: 0 },
    ];
    const b = [{ ...a[0], iteration: 5 }];
    expect(() => combine(["one.csv", "two.csv"], [a, b], "best_gap", "mean")).toThrowError(
      /two\.csv: iteration grid differs from one\.csv/,
    );
  });

  it("drops points a log axis cannot draw", () => {
    const pts: Array<[number, number]> = [
      [0, 1],
      [1, 0],
      [2, NaN],
      [3, 0.5],
    ];
    expect(plottable(pts)).toEqual([[3, 0.5]]);
  });
});

describe("figure1", () => {
  it("renders a two-panel image with solver and bound curves", () => {
    const dir = makeFigure1Dir();
    const svg = buildFigure1(dir);
    expect(svg).toContain("<svg");
    expect(svg).toContain("alpha = 0.01");
    expect(svg).toContain("alpha = 0.001");
    // 2 panels x (2 solver + 2 bound) curves
    expect(svg.match(/<path /g)?.length).toBe(8);
    expect(svg).toContain("stroke-dasharray");
    rmSync(dir, { recursive: true });
  });

  it("errors when the bound column has no finite values, naming the file", () => {
    const dir = makeFigure1Dir();
    writeRun(
      dir,
      "fig1_alpha0.01_m1_seed9",
      { figure: 1, algorithm: "pfw", problem: "simplex-ls", alpha: 0.01, m: 1, seed: 9, config: "alpha0.01_m1" },
      decayRows(5, 1, false),
    );
    expect(() => buildFigure1(dir)).toThrowError(/fig1_alpha0\.01_m1_seed9.*bound/);
    rmSync(dir, { recursive: true });
  });

  it("errors on an empty directory", () => {
    const dir = tempDir();
    expect(() => buildFigure1(dir)).toThrowError(/no figure-1 traces/);
    rmSync(dir, { recursive: true });
  });
});

describe("figure2", () => {
  it("renders four panels with four curves each", () => {
    const dir = makeFigure2Dir();
    const svg = buildFigure2(dir);
    expect(svg).toContain("(a) simplex-ls");
    expect(svg).toContain("(d) trace-mc");
    expect(svg.match(/<path /g)?.length).toBe(16);
    expect(svg).toContain("R-PFW (m=1)");
    rmSync(dir, { recursive: true });
  });

  it("errors when a panel has no traces", () => {
    const dir = makeFigure2Dir();
    // drop everything tagged for panel d by rewriting metas
    const svgBefore = buildFigure2(dir);
    expect(svgBefore).toContain("(d)");
    rmSync(dir, { recursive: true });
    const fresh = tempDir();
    writeRun(
      fresh,
      "fig2_simplex-ls_fw",
      { figure: 2, algorithm: "fw", problem: "simplex-ls", panel: "a,b" },
      decayRows(5, 1, false),
    );
    expect(() => buildFigure2(fresh)).toThrowError(/panel \(c\)/);
    rmSync(fresh, { recursive: true });
  });
});

describe("cli", () => {
  it("writes figure1 svg and reports the path", () => {
    const dir = makeFigure1Dir();
    const out = join(dir, "figure1.svg");
    expect(main(["figure1", "--traces", dir, "--out", out])).toBe(0);
    expect(existsSync(out)).toBe(true);
    rmSync(dir, { recursive: true });
  });

  it("fails with exit code 2 and writes nothing on invalid input", () => {
    const dir = tempDir();
    writeFileSync(join(dir, "bad.csv"), "iteration,primal\n0,1\n");
    writeFileSync(join(dir, "bad.meta"), "figure=1\n");
    const out = join(dir, "broken.svg");
    expect(main(["figure1", "--traces", dir, "--out", out])).toBe(2);
    expect(existsSync(out)).toBe(false);
    rmSync(dir, { recursive: true });
  });

  it("rejects non-svg outputs", () => {
    expect(main(["figure1", "--traces", "x", "--out", "fig.png"])).toBe(2);
  });

  it("rejects unknown commands and flags", () => {
    expect(main(["figure3", "--traces", "x", "--out", "y.svg"])).toBe(2);
    expect(main(["figure1", "--bogus", "x"])).toBe(2);
  });
});
