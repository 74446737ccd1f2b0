"""Restarted Parallel Frank-Wolfe: halve the smoothing level between
warm-started runs.

Each round runs the solver afresh (coefficient A and dual average d
reset to zero, the dual iterate re-initialized from the warm-started
primal point) for T_alpha = max(1, ceil(sqrt(L / alpha) log(1 / alpha)))
iterations with m_alpha parallel samples, then sets x0 to the returned
point and alpha to c * alpha. T_alpha would be zero at alpha = 1, so it
is clamped to 1 to make the first round do work. Telemetry keeps one
global iteration counter and a globally monotone best gap.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, replace

from parafw import _backend
from parafw.core import Point
from parafw.lmo import LMO
from parafw.pfw import PfwRun, pfw_config, run_pfw
from parafw.problems import Problem
from parafw.smoothing import SmoothingConfig
from parafw.telemetry import RunRecord

_ROUND_SALT = 0x524E44
_CEIL_GUARD = 1e-12


class MMode(enum.Enum):
    ONE = "one"
    INV_SQRT_ALPHA = "inv-sqrt-alpha"


@dataclass(frozen=True)
class RestartConfig:
    c: float = 0.5
    m_mode: MMode = MMode.INV_SQRT_ALPHA
    outer_rounds: int = 14
    initial_alpha: float = 1.0
    target_best_gap: float | None = None
    max_total_iterations: int | None = None

    def __post_init__(self):
        if not (0.0 < self.c < 1.0):
            raise ValueError("decrease factor c must lie in (0, 1)")
        if self.outer_rounds < 1:
            raise ValueError("outer_rounds must be >= 1")
        if self.initial_alpha <= 0:
            raise ValueError("initial_alpha must be positive")


def _guarded_ceil(x: float) -> int:
    return math.ceil(x - _CEIL_GUARD)


def schedule(alpha: float, L: float, mode: MMode) -> tuple[int, int]:
    """Per-round iteration budget and parallel sample count."""
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0, 1]")
    if L <= 0:
        raise ValueError("L must be positive")
    T = max(1, _guarded_ceil(math.sqrt(L / alpha) * math.log(1.0 / alpha)))
    if mode is MMode.ONE:
        m = 1
    else:
        m = max(1, _guarded_ceil(1.0 / math.sqrt(alpha)))
    return T, m


@dataclass
class RoundInfo:
    index: int
    alpha: float
    T: int
    m: int
    start_iteration: int
    lmo_calls: int


@dataclass
class RestartRun:
    records: list[RunRecord]
    rounds: list[RoundInfo]
    x: Point
    best_gap: float
    lmo_calls: int
    total_iterations: int


def run_restarted(
    cfg: RestartConfig,
    L: float,
    x0: Point,
    smoothing_template: SmoothingConfig,
    problem: Problem,
    lmo: LMO,
    gap_iters,
    wall_origin_ns: int | None = None,
) -> RestartRun:
    """Drive the outer loop; alpha and m of the template are overridden
    round by round, and each round gets a distinct derived seed root so
    sample streams never repeat across rounds."""
    t0 = time.perf_counter_ns() if wall_origin_ns is None else wall_origin_ns
    gap_set = set(int(i) for i in gap_iters)
    records: list[RunRecord] = []
    rounds: list[RoundInfo] = []
    x_cur = Point.of(x0)
    best_gap = math.inf
    lmo_calls = 0
    global_iter = 0
    alpha = cfg.initial_alpha
    for i in range(cfg.outer_rounds):
        T, m = schedule(alpha, L, cfg.m_mode)
        if cfg.max_total_iterations is not None:
            T = min(T, cfg.max_total_iterations - global_iter)
            if T <= 0:
                break
        smoothing = replace(
            smoothing_template,
            alpha=alpha,
            m=m,
            seed_root=_backend.derive_seed(smoothing_template.seed_root, _ROUND_SALT, i),
        )
        run_cfg = pfw_config(L=L, x0=x_cur, smoothing=smoothing, T=T, lmo=lmo)
        # global iteration 0 is logged by the first round only
        local_gaps = [
            k - global_iter
            for k in gap_set
            if (global_iter < k or k == global_iter == 0) and k <= global_iter + T
        ]
        try:
            run: PfwRun = run_pfw(
                run_cfg,
                problem,
                lmo,
                gap_iters=local_gaps,
                iteration_offset=global_iter,
                wall_origin_ns=t0,
            )
        except Exception as exc:
            raise RuntimeError(
                f"restart round {i} (alpha={alpha:.6g}) failed"
            ) from exc
        # fold the global best into this round's records
        for r in run.records:
            best_gap = min(best_gap, r.best_gap)
            r.best_gap = best_gap
        records.extend(run.records)
        rounds.append(
            RoundInfo(
                index=i, alpha=alpha, T=T, m=m, start_iteration=global_iter,
                lmo_calls=run.lmo_calls,
            )
        )
        lmo_calls += run.lmo_calls
        global_iter += T
        x_cur = Point(run.state.x, x_cur.shape)
        alpha = cfg.c * alpha
        if cfg.target_best_gap is not None and best_gap <= cfg.target_best_gap:
            break
        if cfg.max_total_iterations is not None and global_iter >= cfg.max_total_iterations:
            break
    return RestartRun(
        records=records, rounds=rounds, x=x_cur, best_gap=best_gap,
        lmo_calls=lmo_calls, total_iterations=global_iter,
    )
