"""Experiment presets: single runs, the two figure grids, and constant
estimation, with deterministic seed derivation and trace emission.

Seed discipline: the problem instance is generated from ``problem_seed``
while all algorithmic randomness derives from the run ``seed``. The
unit-smoothing bias constant is estimated once per instance with a
dedicated seed and shared across runs. Worker threads only schedule
whole runs; every run is self-contained, so thread count affects wall
time but never results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from parafw import __version__, _backend
from parafw.baselines import estimate_f_star, run_fw
from parafw.core import Point, NormKind, rho_constant
from parafw.lmo import LMO, SimplexLMO, TraceBallLMO
from parafw.pfw import gap_schedule, pfw_config, run_pfw, theorem2_bound
from parafw.problems import Problem, make_simplex_ls, make_trace_mc
from parafw.restart import MMode, RestartConfig, run_restarted
from parafw.smoothing import PerturbationKind, SmoothingConfig, m_constant, s1_at_zero
from parafw.telemetry import meta_path_for, write_trace

_ALGO_SALT = 0x414C474F
_S1_SALT = 0x53314553

DEFAULT_S1_SAMPLES = 200_000
DEFAULT_FSTAR_ITERS = 1_000_000


class ConfigError(ValueError):
    """Bad experiment configuration (CLI exit code 2)."""


@dataclass
class ProblemSetup:
    name: str
    problem: Problem
    lmo: LMO
    kind: PerturbationKind
    x0: Point
    dims: dict[str, int]
    problem_seed: int

    @property
    def M_theory(self) -> float:
        return m_constant(self.kind, self.lmo.shape)

    @property
    def rho(self) -> float:
        # Euclidean/Frobenius geometry throughout the experiments
        kind = NormKind.frobenius() if len(self.lmo.shape) == 2 else NormKind.l2()
        return rho_constant(kind, int(np.prod(self.lmo.shape))).value

    def s1_seed(self) -> int:
        return _backend.derive_seed(self.problem_seed, _S1_SALT, 0)


def build_problem(
    name: str, n: int = 200, d: int = 50, p: int = 10, q: int = 8,
    problem_seed: int = 0,
) -> ProblemSetup:
    if name == "simplex-ls":
        problem = make_simplex_ls(n, d, problem_seed)
        lmo = SimplexLMO(d)
        x0 = Point.vector(np.full(d, 1.0 / d))
        return ProblemSetup(
            name=name, problem=problem, lmo=lmo, kind=PerturbationKind.GUMBEL01,
            x0=x0, dims={"n": n, "d": d}, problem_seed=problem_seed,
        )
    if name == "trace-mc":
        problem = make_trace_mc(p, q, problem_seed)
        lmo = TraceBallLMO(p, q)
        x0 = Point.zeros((p, q))
        return ProblemSetup(
            name=name, problem=problem, lmo=lmo, kind=PerturbationKind.STD_NORMAL,
            x0=x0, dims={"p": p, "q": q}, problem_seed=problem_seed,
        )
    raise ConfigError(f"unknown problem {name!r} (expected simplex-ls or trace-mc)")


def resolve_M(setup: ProblemSetup, M_mode: str) -> float:
    if M_mode == "theory":
        return setup.M_theory
    if M_mode == "one":
        return 1.0
    raise ConfigError(f"unknown M mode {M_mode!r} (expected theory or one)")


def smoothing_root(seed: int) -> int:
    return _backend.derive_seed(seed, _ALGO_SALT, 0)


def make_schedule(iters: int, gap_every: int = 0) -> list[int]:
    if gap_every > 0:
        return sorted(set(range(0, iters + 1, gap_every)) | {iters})
    return gap_schedule(iters)


def base_meta(setup: ProblemSetup, algorithm: str, seed: int | None) -> dict:
    meta: dict = {
        "algorithm": algorithm,
        "problem": setup.name,
        **setup.dims,
        "problem_seed": setup.problem_seed,
        "L": setup.problem.L,
        "R_K": setup.lmo.radius,
        "M_theory": setup.M_theory,
        "rho": setup.rho,
        "perturbation": setup.kind.value,
        "code_version": __version__,
        "backend": _backend.backend_name(),
    }
    if seed is not None:
        meta["seed"] = seed
    return meta


def _emit(path: Path, records, meta: dict) -> None:
    try:
        write_trace(path, records, meta)
    except BaseException:
        # never leave partial outputs behind
        path.unlink(missing_ok=True)
        meta_path_for(path).unlink(missing_ok=True)
        raise


def run_pfw_experiment(
    setup: ProblemSetup,
    alpha: float,
    m: int,
    M_mode: str,
    iters: int,
    seed: int,
    out_path: Path | None = None,
    gap_every: int = 0,
    bound_inputs: tuple[float, float] | None = None,
    extra_meta: dict | None = None,
):
    """One plain solver run; ``bound_inputs=(f_gap0, s1_0)`` adds the
    theoretical curve (always evaluated at the theoretical M)."""
    M = resolve_M(setup, M_mode)
    smoothing = SmoothingConfig(
        alpha=alpha, kind=setup.kind, m=m, M=M, seed_root=smoothing_root(seed)
    )
    cfg = pfw_config(
        L=setup.problem.L, x0=setup.x0, smoothing=smoothing, T=iters, lmo=setup.lmo
    )
    bound_fn = None
    if bound_inputs is not None:
        f_gap0, s1_0 = bound_inputs

        def bound_fn(k: int) -> float:
            return theorem2_bound(
                k, cfg, f_gap0, setup.rho, s1_0, M_theory=setup.M_theory
            )

    run = run_pfw(cfg, setup.problem, setup.lmo, make_schedule(iters, gap_every), bound_fn)
    meta = base_meta(setup, "pfw", seed)
    meta.update(
        alpha=alpha, m=m, M_mode=M_mode, M=M, iters=iters, lmo_calls=run.lmo_calls
    )
    if bound_inputs is not None:
        meta.update(f_gap0=bound_inputs[0], s1_0=bound_inputs[1])
    if extra_meta:
        meta.update(extra_meta)
    if out_path is not None:
        _emit(out_path, run.records, meta)
    return run, meta


def run_rpfw_experiment(
    setup: ProblemSetup,
    M_mode: str,
    m_mode: MMode,
    iters: int,
    seed: int,
    out_path: Path | None = None,
    gap_every: int = 0,
    outer_rounds: int = 40,
    extra_meta: dict | None = None,
):
    M = resolve_M(setup, M_mode)
    template = SmoothingConfig(
        alpha=1.0, kind=setup.kind, m=1, M=M, seed_root=smoothing_root(seed)
    )
    cfg = RestartConfig(
        m_mode=m_mode, outer_rounds=outer_rounds, max_total_iterations=iters
    )
    run = run_restarted(
        cfg, setup.problem.L, setup.x0, template, setup.problem, setup.lmo,
        make_schedule(iters, gap_every),
    )
    expected_calls = sum(r.T * r.m for r in run.rounds)
    meta = base_meta(setup, "rpfw", seed)
    meta.update(
        M_mode=M_mode, M=M, m_mode=m_mode.value, iters=iters,
        rounds=len(run.rounds), lmo_calls=run.lmo_calls,
        grad_lmo_calls=expected_calls,
        final_alpha=run.rounds[-1].alpha if run.rounds else float("nan"),
    )
    if extra_meta:
        meta.update(extra_meta)
    if out_path is not None:
        _emit(out_path, run.records, meta)
    return run, meta


def run_fw_experiment(
    setup: ProblemSetup,
    iters: int,
    linesearch: bool,
    out_path: Path | None = None,
    gap_every: int = 0,
    extra_meta: dict | None = None,
):
    """Baseline runs; the main trace carries the Fenchel dual gap and a
    sibling ``*.fwgap.csv`` trace carries the standard Frank-Wolfe gap."""
    run = run_fw(
        setup.problem, setup.lmo, setup.x0, iters,
        make_schedule(iters, gap_every), linesearch=linesearch,
    )
    algo = "fw-ls" if linesearch else "fw"
    meta = base_meta(setup, algo, None)
    meta.update(iters=iters, lmo_calls=run.lmo_calls, gap_series="fenchel-dual")
    if extra_meta:
        meta.update(extra_meta)
    if out_path is not None:
        _emit(out_path, run.records, meta)
        fw_meta = dict(meta)
        fw_meta["gap_series"] = "frank-wolfe"
        side = out_path.with_suffix(".fwgap.csv")
        _emit(side, run.fw_gap_records, fw_meta)
    return run, meta


@dataclass
class Estimates:
    s1_0: float
    f_star: float
    f_star_gap: float
    f_gap0: float


def estimate_constants(
    setup: ProblemSetup,
    s1_samples: int = DEFAULT_S1_SAMPLES,
    fstar_iters: int = DEFAULT_FSTAR_ITERS,
) -> Estimates:
    """Instance constants for bound curves: the smoothing bias constant
    and a certified lower estimate of the optimal value."""
    s1 = s1_at_zero(setup.kind, setup.lmo, s1_samples, setup.s1_seed())
    f_star, final_gap = estimate_f_star(
        setup.problem, setup.lmo, setup.x0, iters=fstar_iters
    )
    f0 = setup.problem.f(setup.x0.data)
    return Estimates(
        s1_0=s1, f_star=f_star, f_star_gap=final_gap, f_gap0=f0 - f_star
    )


def _parallel(tasks, threads: int) -> None:
    if threads <= 1:
        for task in tasks:
            task()
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task) for task in tasks]
        for fut in futures:
            fut.result()


def inv_sqrt_ceil(alpha: float) -> int:
    return max(1, math.ceil(1.0 / math.sqrt(alpha) - 1e-12))


def figure1(
    out_dir: Path,
    seeds: list[int],
    iters: int = 100_000,
    threads: int = 1,
    problem_seed: int = 0,
    s1_samples: int = DEFAULT_S1_SAMPLES,
    fstar_iters: int = DEFAULT_FSTAR_ITERS,
    gap_every: int = 0,
) -> list[Path]:
    """Solver-vs-bound grid on the simplex instance: two smoothing
    levels crossed with m = 1 and m = ceil(1 / sqrt(alpha))."""
    out_dir.mkdir(parents=True, exist_ok=True)
    setup = build_problem("simplex-ls", n=200, d=50, problem_seed=problem_seed)
    est = estimate_constants(setup, s1_samples, fstar_iters)
    paths: list[Path] = []
    tasks = []
    for alpha in (1e-2, 1e-3):
        for m in (1, inv_sqrt_ceil(alpha)):
            for seed in seeds:
                path = out_dir / f"fig1_alpha{alpha:g}_m{m}_seed{seed}.csv"
                paths.append(path)
                tasks.append(
                    lambda a=alpha, mm=m, s=seed, pth=path: run_pfw_experiment(
                        setup, a, mm, "theory", iters, s, out_path=pth,
                        gap_every=gap_every,
                        bound_inputs=(est.f_gap0, est.s1_0),
                        extra_meta={"figure": 1, "config": f"alpha{a:g}_m{mm}"},
                    )
                )
    _parallel(tasks, threads)
    summary = base_meta(setup, "figure1", None)
    summary.update(
        seeds=seeds, iters=iters, s1_0=est.s1_0, f_star_estimate=est.f_star,
        f_star_final_gap=est.f_star_gap, f_gap0=est.f_gap0,
        alphas="0.01,0.001",
    )
    from parafw.telemetry import write_meta

    write_meta(out_dir / "figure1.meta", summary)
    return paths


_PANELS = {
    ("simplex-ls", "theory"): "a",
    ("simplex-ls", "one"): "b",
    ("trace-mc", "theory"): "c",
    ("trace-mc", "one"): "d",
}


def figure2(
    out_dir: Path,
    seeds: list[int],
    iters: int = 10_000,
    threads: int = 1,
    problem_seed: int = 0,
    gap_every: int = 0,
) -> list[Path]:
    """Four-way comparison (fixed-step FW, line-search FW, restarted
    solver with m = 1 and with m = ceil(1/sqrt(alpha))) on both
    instances and both M modes; baselines are deterministic so they run
    once per instance."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []
    tasks = []
    for name in ("simplex-ls", "trace-mc"):
        setup = build_problem(name, problem_seed=problem_seed)
        for linesearch in (False, True):
            algo = "fw-ls" if linesearch else "fw"
            path = out_dir / f"fig2_{name}_{algo}.csv"
            paths.append(path)
            tasks.append(
                lambda st=setup, ls=linesearch, pth=path, nm=name: run_fw_experiment(
                    st, iters, ls, out_path=pth, gap_every=gap_every,
                    extra_meta={"figure": 2, "panel": f"{_PANELS[(nm, 'theory')]},{_PANELS[(nm, 'one')]}"},
                )
            )
        for M_mode in ("theory", "one"):
            panel = _PANELS[(name, M_mode)]
            for m_mode in (MMode.ONE, MMode.INV_SQRT_ALPHA):
                mtag = "m1" if m_mode is MMode.ONE else "minv"
                for seed in seeds:
                    path = out_dir / f"fig2_{name}_rpfw_M{M_mode}_{mtag}_seed{seed}.csv"
                    paths.append(path)
                    tasks.append(
                        lambda st=setup, mm=M_mode, md=m_mode, s=seed, pth=path, pn=panel: run_rpfw_experiment(
                            st, mm, md, iters, s, out_path=pth,
                            gap_every=gap_every,
                            extra_meta={"figure": 2, "panel": pn},
                        )
                    )
    _parallel(tasks, threads)
    return paths
