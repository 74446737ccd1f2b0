"""Per-iteration telemetry records and their CSV/metadata files.

The trace schema is fixed:
``iteration,primal,dual,gap,best_gap,bound,alpha,m,wall_ns``. Reals are
written with 17 significant digits so parsing a written trace restores
it exactly; the bound column is NaN where no theoretical curve applies.
The wall_ns column is wall-clock only and is excluded from determinism
comparisons (documented diff rule: drop the last column).

Each trace has a sibling ``.meta`` file of plain ``key=value`` lines
holding everything needed to re-run the experiment bit-identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

CSV_HEADER = "iteration,primal,dual,gap,best_gap,bound,alpha,m,wall_ns"


def _feq(a: float, b: float) -> bool:
    return (math.isnan(a) and math.isnan(b)) or a == b


@dataclass(eq=False)
class RunRecord:
    iteration: int
    primal: float
    dual: float
    gap: float
    best_gap: float
    bound: float
    alpha: float
    m: int
    wall_ns: int

    def __eq__(self, other):
        if not isinstance(other, RunRecord):
            return NotImplemented
        if (self.iteration, self.m, self.wall_ns) != (
            other.iteration,
            other.m,
            other.wall_ns,
        ):
            return False
        return all(
            _feq(getattr(self, f), getattr(other, f))
            for f in ("primal", "dual", "gap", "best_gap", "bound", "alpha")
        )


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    return format(x, ".16e")


def format_record(r: RunRecord) -> str:
    return ",".join(
        [
            str(r.iteration),
            _fmt(r.primal),
            _fmt(r.dual),
            _fmt(r.gap),
            _fmt(r.best_gap),
            _fmt(r.bound),
            _fmt(r.alpha),
            str(r.m),
            str(r.wall_ns),
        ]
    )


def meta_path_for(path: str | Path) -> Path:
    return Path(path).with_suffix(".meta")


def write_trace(path: str | Path, records: list[RunRecord], meta: dict) -> None:
    """Write the CSV trace and its sibling metadata file."""
    path = Path(path)
    prev_iter = None
    best = math.inf
    for r in records:
        if prev_iter is not None and r.iteration <= prev_iter:
            raise ValueError("record iterations must be strictly increasing")
        prev_iter = r.iteration
        if r.best_gap > best + 1e-300:
            raise ValueError("best_gap column must be nonincreasing")
        best = min(best, r.best_gap)
    lines = [CSV_HEADER]
    lines.extend(format_record(r) for r in records)
    path.write_text("\n".join(lines) + "\n")
    write_meta(meta_path_for(path), meta)


def read_trace(path: str | Path) -> list[RunRecord]:
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected trace header")
    records = []
    for line in lines[1:]:
        t = line.split(",")
        records.append(
            RunRecord(
                iteration=int(t[0]),
                primal=float(t[1]),
                dual=float(t[2]),
                gap=float(t[3]),
                best_gap=float(t[4]),
                bound=float(t[5]),
                alpha=float(t[6]),
                m=int(t[7]),
                wall_ns=int(t[8]),
            )
        )
    return records


def write_meta(path: str | Path, meta: dict) -> None:
    lines = []
    for key, value in meta.items():
        if isinstance(value, float):
            value = format(value, ".17g")
        elif isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_meta(path: str | Path) -> dict[str, str]:
    meta: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        meta[key] = value
    return meta

