import { describe, expect, it } from "vitest";

import { parseTrace, TRACE_COLUMNS } from "../src/csv.js";

const HEADER = TRACE_COLUMNS.join(",");

describe("parseTrace", () => {
  it("parses well-formed traces", () => {
    const text = `${HEADER}\n0,10.0,1.0,9.0,9.0,nan,0.01,3,12\n5,5.0,1.0,4.0,4.0,100.0,0.01,3,55\n`;
    const rows = parseTrace("t.csv", text);
    expect(rows).toHaveLength(2);
    expect(rows[0].iteration).toBe(0);
    expect(rows[0].bound).toBeNaN();
    expect(rows[1].best_gap).toBe(4.0);
    expect(rows[1].m).toBe(3);
  });

  it("rejects missing columns and names the file", () => {
    const text = "iteration,primal,dual,gap,best_gap,alpha,m,wall_ns\n0,1,1,0,0,0.1,1,2\n";
    expect(() => parseTrace("runs/broken.csv", text)).toThrowError(
      /runs\/broken\.csv: missing column\(s\) bound/,
    );
  });

  it("rejects unknown columns", () => {
    const text = `${HEADER},surprise\n`;
    expect(() => parseTrace("x.csv", text)).toThrowError(/unknown column/);
  });

  it("rejects empty files and header-only files", () => {
    expect(() => parseTrace("empty.csv", "")).toThrowError(/empty\.csv: empty trace/);
    expect(() => parseTrace("h.csv", `${HEADER}\n`)).toThrowError(/no data rows/);
  });

  it("rejects ragged rows with a line number", () => {
    const text = `${HEADER}\n0,1,1\n`;
    expect(() => parseTrace("r.csv", text)).toThrowError(/r\.csv:2/);
  });
});
