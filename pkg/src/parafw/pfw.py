"""Parallel Frank-Wolfe: a dual-free accelerated method that only calls
gradients of the objective and a linear maximization oracle.

The dual of minimizing an L-smooth convex f over a compact convex K is
a composite problem whose smooth part is a smoothed support function of
K and whose simple part is the conjugate of f. Running the accelerated
Bregman engine on that dual with the regularizer chosen as a shifted
conjugate collapses the prox step into a closed-form primal update:

    x_{k+1} = (beta x_0 - d_{k+1}) / (A_{k+1} + beta),

which is also the convex combination
((A_k + beta) x_k + (A_{k+1} - A_k) (-g_k)) / (A_{k+1} + beta), so every
primal iterate stays feasible. Dual iterates are tracked as gradients
of f at feasible points; no conjugate subgradients are ever needed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from parafw.bregman import AlgParams, next_A
from parafw.core import Point
from parafw.lmo import LMO
from parafw.problems import Problem
from parafw.smoothing import SmoothingConfig, smoothed_support_grad
from parafw.telemetry import RunRecord

_WEAK_DUALITY_TOL = 1e-8


class InvariantViolation(RuntimeError):
    """A runtime invariant failed (infeasible iterate, negative gap...)."""


@dataclass(frozen=True)
class PfwConfig:
    """Resolved solver configuration; build via :func:`pfw_config`."""

    L: float
    x0: Point
    smoothing: SmoothingConfig
    T: int
    R_K: float
    beta: float

    @property
    def mu(self) -> float:
        return 1.0 / self.L

    @property
    def nu(self) -> float:
        return 1.0 / self.L

    @property
    def params(self) -> AlgParams:
        return AlgParams(beta=self.beta, mu=self.mu, nu=self.nu)


def pfw_config(
    L: float,
    x0: Point,
    smoothing: SmoothingConfig,
    T: int,
    lmo: LMO,
    beta: float | None = None,
) -> PfwConfig:
    """Validate and resolve a configuration against the oracle.

    beta defaults to R_K * M / alpha and must dominate mu = 1/L; alpha=0
    is only allowed with an explicit beta (degenerate test mode).
    """
    if L <= 0:
        raise ValueError("L must be positive")
    if T < 0:
        raise ValueError("iteration budget must be >= 0")
    x0 = Point.of(x0)
    if not lmo.contains(x0):
        raise ValueError("x0 is not feasible for the given oracle")
    if beta is None:
        if smoothing.alpha <= 0:
            raise ValueError("alpha must be positive unless beta is given explicitly")
        beta = lmo.radius * smoothing.M / smoothing.alpha
    mu = 1.0 / L
    if beta < mu:
        raise ValueError(
            f"need beta = R_K*M/alpha >= 1/L (got beta={beta:.6g} < mu={mu:.6g}); "
            "decrease alpha or loosen the smoothness estimate"
        )
    return PfwConfig(L=L, x0=x0, smoothing=smoothing, T=T, R_K=lmo.radius, beta=beta)


@dataclass
class PfwState:
    """Loop state; x is the primal iterate, y the dual one, z = grad f(x)."""

    k: int
    A: float
    d: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    best_gap: float
    last_g: np.ndarray | None = None


def pfw_init(cfg: PfwConfig, problem: Problem) -> PfwState:
    x0 = cfg.x0.data.copy()
    y0 = problem.grad_f(x0)
    return PfwState(
        k=0, A=0.0, d=np.zeros_like(x0), x=x0, y=y0, z=y0.copy(),
        best_gap=math.inf,
    )


def recursion_update(
    x_prev: np.ndarray, A_prev: float, A_next: float, beta: float, g: np.ndarray
) -> np.ndarray:
    """Equivalent convex-combination form of the primal update."""
    w = (A_prev + beta) / (A_next + beta)
    return w * x_prev + (1.0 - w) * (-g)


def pfw_step(state: PfwState, cfg: PfwConfig, problem: Problem, lmo: LMO) -> PfwState:
    """Advance one iteration; raises on infeasible primal iterates."""
    A_next = next_A(state.A, cfg.params)
    tau = 1.0 - state.A / A_next
    v = (1.0 - tau) * state.y + tau * state.z
    g = smoothed_support_grad(
        Point(v, cfg.x0.shape), cfg.smoothing, lmo, state.k
    ).data
    d_next = state.d + (A_next - state.A) * g
    x_next = (cfg.beta * cfg.x0.data - d_next) / (A_next + cfg.beta)
    if not lmo.contains(Point(x_next, cfg.x0.shape)):
        raise InvariantViolation(
            f"infeasible primal iterate at iteration {state.k + 1}"
        )
    z_next = problem.grad_f(x_next)
    y_next = (1.0 - tau) * state.y + tau * z_next
    return PfwState(
        k=state.k + 1, A=A_next, d=d_next, x=x_next, y=y_next, z=z_next,
        best_gap=state.best_gap, last_g=g,
    )


@dataclass(frozen=True)
class GapReport:
    primal: float
    dual: float
    gap: float
    best_gap: float


def fenchel_gap(
    x: np.ndarray, y: np.ndarray, problem: Problem, lmo: LMO
) -> tuple[float, float, float]:
    """(primal, dual, gap) for a primal-dual pair.

    The dual value is -s(-y) - f*(y), costing one oracle call and one
    conjugate evaluation. Weak duality is asserted up to numerics.
    """
    primal = problem.f(x)
    support = lmo.argmax_linear(Point(-np.asarray(y, dtype=np.float64), lmo.shape)).value
    dual = -support - problem.conjugate(y)
    gap = primal - dual
    if gap < -_WEAK_DUALITY_TOL:
        raise InvariantViolation(f"weak duality violated: gap={gap:.3e}")
    return primal, dual, gap


def evaluate_gap(state: PfwState, problem: Problem, lmo: LMO) -> GapReport:
    """Gap report at the current iterate pair; best_gap is the running min."""
    primal, dual, gap = fenchel_gap(state.x, state.y, problem, lmo)
    return GapReport(
        primal=primal, dual=dual, gap=gap, best_gap=min(state.best_gap, gap)
    )


def theorem2_bound(
    k: int,
    cfg: PfwConfig,
    f_gap0: float,
    rho: float,
    s1_0: float,
    M_theory: float | None = None,
) -> float:
    """Worst-case expected primal-dual gap after k iterations.

    The reported bound always uses the theoretical perturbation constant
    M (pass M_theory when the run itself uses the M=1 heuristic).
    """
    if f_gap0 < 0:
        raise ValueError("initial objective gap must be >= 0")
    M = cfg.smoothing.M if M_theory is None else M_theory
    alpha = cfg.smoothing.alpha
    lrm = cfg.L * cfg.R_K * M
    decay = math.exp(-k * math.sqrt(alpha) / (4.0 * math.sqrt(lrm)))
    variance_floor = (2.0 * cfg.R_K**2 * rho / cfg.smoothing.m) * math.sqrt(
        alpha * cfg.L / (cfg.R_K * M)
    )
    return decay * (cfg.R_K * M / alpha) * f_gap0 + variance_floor + alpha * s1_0


def alpha_for_epsilon(
    eps: float, L: float, R_K: float, M: float, m: int, rho: float, s1_0: float
) -> float:
    """Smoothing level guaranteeing an eps primal-dual gap."""
    if min(eps, L, R_K, M, m, rho, s1_0) <= 0:
        raise ValueError("all inputs must be positive")
    return min(eps / (3.0 * s1_0), M * eps**2 * m**2 / (36.0 * L * R_K**3 * rho**2))


def iterations_for_epsilon(
    eps: float, alpha: float, L: float, R_K: float, M: float, f_gap0: float
) -> int:
    """Iterations needed for an eps gap at smoothing level alpha."""
    if min(eps, alpha, L, R_K, M, f_gap0) <= 0:
        raise ValueError("all inputs must be positive")
    arg = 3.0 * R_K * M * f_gap0 / (eps * alpha)
    if arg <= 1.0:
        return 1
    k = (4.0 * math.sqrt(L * R_K * M) / math.sqrt(alpha)) * math.log(arg)
    return max(1, math.ceil(k))


@dataclass
class PfwRun:
    records: list[RunRecord]
    state: PfwState
    lmo_calls: int


def run_pfw(
    cfg: PfwConfig,
    problem: Problem,
    lmo: LMO,
    gap_iters: Iterable[int],
    bound_fn: Callable[[int], float] | None = None,
    iteration_offset: int = 0,
    initial_state: PfwState | None = None,
    wall_origin_ns: int | None = None,
) -> PfwRun:
    """Drive T iterations, logging gap records on the given schedule.

    Iteration indices in the records are offset so restarted runs can
    share one global counter; the best gap carries over via
    ``initial_state``.
    """
    gap_set = set(int(i) for i in gap_iters)
    t0 = time.perf_counter_ns() if wall_origin_ns is None else wall_origin_ns
    state = pfw_init(cfg, problem) if initial_state is None else initial_state
    records: list[RunRecord] = []
    lmo_calls = 0

    def log(local_iter: int) -> None:
        nonlocal lmo_calls
        report = evaluate_gap(state, problem, lmo)
        lmo_calls += 1
        state.best_gap = report.best_gap
        global_iter = iteration_offset + local_iter
        bound = float("nan") if bound_fn is None else bound_fn(global_iter)
        records.append(
            RunRecord(
                iteration=global_iter,
                primal=report.primal,
                dual=report.dual,
                gap=report.gap,
                best_gap=report.best_gap,
                bound=bound,
                alpha=cfg.smoothing.alpha,
                m=cfg.smoothing.m,
                wall_ns=time.perf_counter_ns() - t0,
            )
        )

    if 0 in gap_set and initial_state is None:
        log(0)
    for _ in range(cfg.T):
        state = pfw_step(state, cfg, problem, lmo)
        lmo_calls += cfg.smoothing.m
        if state.k in gap_set:
            log(state.k)
    return PfwRun(records=records, state=state, lmo_calls=lmo_calls)


def gap_schedule(total_iters: int, dense_until: int = 10_000, per_decade: int = 200) -> list[int]:
    """Evaluation schedule: every iteration up to dense_until, then
    logarithmically spaced, always including the final iteration."""
    dense = range(0, min(total_iters, dense_until) + 1)
    if total_iters <= dense_until:
        return list(dense)
    n_log = max(2, int(per_decade * math.log10(total_iters / dense_until)) + 1)
    tail = np.unique(
        np.round(
            np.logspace(math.log10(dense_until), math.log10(total_iters), n_log)
        ).astype(int)
    )
    return sorted(set(dense) | set(int(t) for t in tail) | {total_iters})
