"""Command-line entry point.

Subcommands: ``run`` (one algorithm, one configuration), ``figure1``
and ``figure2`` (the experiment grids), and ``estimate`` (instance
constants). Exit codes: 0 success, 2 configuration error, 3 runtime
invariant violation. The default output directory comes from the
``PARAFW_OUT`` environment variable when ``--out`` is omitted.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from parafw import __version__
from parafw.experiments import (
    DEFAULT_FSTAR_ITERS,
    DEFAULT_S1_SAMPLES,
    ConfigError,
    build_problem,
    estimate_constants,
    figure1,
    figure2,
    run_fw_experiment,
    run_pfw_experiment,
    run_rpfw_experiment,
)
from parafw.pfw import InvariantViolation
from parafw.restart import MMode


def _parse_seeds(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t != ""]
    except ValueError as exc:
        raise ConfigError(f"bad seed list {text!r}") from exc


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("PARAFW_OUT")
    if not out:
        raise ConfigError("no output directory: pass --out or set PARAFW_OUT")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _add_problem_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=["simplex-ls", "trace-mc"], default="simplex-ls")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--d", type=int, default=50)
    p.add_argument("--p", type=int, default=10)
    p.add_argument("--q", type=int, default=8)
    p.add_argument("--problem-seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parafw")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="one algorithm, one configuration")
    _add_problem_flags(run_p)
    run_p.add_argument("--algo", choices=["pfw", "rpfw", "fw", "fw-ls"], default="pfw")
    run_p.add_argument("--alpha", type=float, default=0.01)
    run_p.add_argument("--m", type=int, default=1)
    run_p.add_argument("--M-mode", dest="M_mode", choices=["theory", "one"], default="theory")
    run_p.add_argument(
        "--m-alpha-mode", choices=["one", "inv-sqrt-alpha"], default="inv-sqrt-alpha",
        help="per-round sample count rule for the restarted solver",
    )
    run_p.add_argument("--iters", type=int, default=10_000)
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--out", default=None)
    run_p.add_argument("--gap-every", type=int, default=0)
    run_p.add_argument("--threads", type=int, default=1)
    run_p.add_argument(
        "--bound", action="store_true",
        help="also estimate constants and emit the theoretical bound column",
    )
    run_p.add_argument("--s1-samples", type=int, default=DEFAULT_S1_SAMPLES)
    run_p.add_argument("--fstar-iters", type=int, default=DEFAULT_FSTAR_ITERS)

    for name, default_iters in (("figure1", 100_000), ("figure2", 10_000)):
        fig_p = sub.add_parser(name, help=f"emit the {name} trace grid")
        fig_p.add_argument("--out", default=None)
        fig_p.add_argument("--seeds", default="0,1,2,3,4")
        fig_p.add_argument("--iters", type=int, default=default_iters)
        fig_p.add_argument("--threads", type=int, default=1)
        fig_p.add_argument("--problem-seed", type=int, default=0)
        fig_p.add_argument("--gap-every", type=int, default=0)
        if name == "figure1":
            fig_p.add_argument("--s1-samples", type=int, default=DEFAULT_S1_SAMPLES)
            fig_p.add_argument("--fstar-iters", type=int, default=DEFAULT_FSTAR_ITERS)

    est_p = sub.add_parser("estimate", help="print instance constants")
    _add_problem_flags(est_p)
    est_p.add_argument("--s1-samples", type=int, default=DEFAULT_S1_SAMPLES)
    est_p.add_argument("--fstar-iters", type=int, default=200_000)

    return parser


def _cmd_run(args) -> int:
    out = _out_dir(args)
    setup = build_problem(
        args.problem, n=args.n, d=args.d, p=args.p, q=args.q,
        problem_seed=args.problem_seed,
    )
    tag = f"{args.algo}_{args.problem}_seed{args.seed}"
    path = out / f"{tag}.csv"
    if args.algo == "pfw":
        bound_inputs = None
        if args.bound:
            est = estimate_constants(setup, args.s1_samples, args.fstar_iters)
            bound_inputs = (est.f_gap0, est.s1_0)
        run_pfw_experiment(
            setup, args.alpha, args.m, args.M_mode, args.iters, args.seed,
            out_path=path, gap_every=args.gap_every, bound_inputs=bound_inputs,
        )
    elif args.algo == "rpfw":
        run_rpfw_experiment(
            setup, args.M_mode, MMode(args.m_alpha_mode), args.iters, args.seed,
            out_path=path, gap_every=args.gap_every,
        )
    else:
        run_fw_experiment(
            setup, args.iters, linesearch=(args.algo == "fw-ls"),
            out_path=path, gap_every=args.gap_every,
        )
    print(path)
    return 0


def _cmd_figdone(paths) -> int:
    for p in paths:
        print(p)
    return 0


def _cmd_estimate(args) -> int:
    setup = build_problem(
        args.problem, n=args.n, d=args.d, p=args.p, q=args.q,
        problem_seed=args.problem_seed,
    )
    est = estimate_constants(setup, args.s1_samples, args.fstar_iters)
    print(f"problem={setup.name}")
    for key, value in setup.dims.items():
        print(f"{key}={value}")
    print(f"problem_seed={setup.problem_seed}")
    print(f"s1_0={est.s1_0:.6g}")
    print(f"L={setup.problem.L:.10g}")
    print(f"R_K={setup.lmo.radius:.10g}")
    print(f"M_theory={setup.M_theory:.10g}")
    print(f"rho={setup.rho:.10g}")
    print(f"f_star_estimate={est.f_star:.10g}")
    print(f"f_star_final_gap={est.f_star_gap:.6g}")
    print(f"f_gap0={est.f_gap0:.10g}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "figure1":
            return _cmd_figdone_fig1(args)
        if args.command == "figure2":
            return _cmd_figdone_fig2(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except RuntimeError as exc:
        if isinstance(exc.__cause__, InvariantViolation):
            print(f"invariant violation: {exc} ({exc.__cause__})", file=sys.stderr)
            return 3
        raise


def _cmd_figdone_fig1(args) -> int:
    paths = figure1(
        _out_dir(args), _parse_seeds(args.seeds), iters=args.iters,
        threads=args.threads, problem_seed=args.problem_seed,
        s1_samples=args.s1_samples, fstar_iters=args.fstar_iters,
        gap_every=args.gap_every,
    )
    return _cmd_figdone(paths)


def _cmd_figdone_fig2(args) -> int:
    paths = figure2(
        _out_dir(args), _parse_seeds(args.seeds), iters=args.iters,
        threads=args.threads, problem_seed=args.problem_seed,
        gap_every=args.gap_every,
    )
    return _cmd_figdone(paths)


if __name__ == "__main__":
    sys.exit(main())
