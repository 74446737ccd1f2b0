/**
 * parafw-plots: render the experiment figures from harness trace CSVs.
 *
 *   parafw-plots figure1 --traces DIR --out figure1.svg
 *   parafw-plots figure2 --traces DIR --out figure2.svg
 *
 * Output is SVG; nothing is written when validation fails.
 */

import { writeFileSync } from "node:fs";

import { buildFigure1, buildFigure2 } from "./figures.js";

function parseArgs(argv: string[]): { command: string; traces: string; out: string } {
  const [command, ...rest] = argv;
  let traces = "";
  let out = "";
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    if (flag === "--traces") traces = value;
    else if (flag === "--out") out = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!command || !["figure1", "figure2"].includes(command)) {
    throw new Error("usage: parafw-plots <figure1|figure2> --traces DIR --out FILE.svg");
  }
  if (!traces || !out) throw new Error("--traces and --out are required");
  if (!out.endsWith(".svg")) {
    throw new Error(`unsupported output format for ${out}: only .svg is rendered`);
  }
  return { command, traces, out };
}

export function main(argv: string[]): number {
  try {
    const { command, traces, out } = parseArgs(argv);
    const svg = command === "figure1" ? buildFigure1(traces) : buildFigure2(traces);
    writeFileSync(out, svg);
    console.log(out);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}

