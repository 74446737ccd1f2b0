"""CLI contract: subcommands, exit codes, file outputs, determinism."""

import os
import subprocess
import sys

import pytest

from parafw.cli import main
from parafw.telemetry import CSV_HEADER, read_meta, read_trace


def run_cli(args, tmp_path):
    env = dict(os.environ, PARAFW_OUT=str(tmp_path))
    proc = subprocess.run(
        [sys.executable, "-m", "parafw", *args],
        capture_output=True, text=True, env=env,
    )
    return proc


def test_run_emits_trace_and_meta(tmp_path):
    code = main([
        "run", "--problem", "simplex-ls", "--n", "30", "--d", "8",
        "--alpha", "0.05", "--m", "2", "--iters", "50", "--seed", "7",
        "--out", str(tmp_path),
    ])
    assert code == 0
    csv = tmp_path / "pfw_simplex-ls_seed7.csv"
    assert csv.exists()
    records = read_trace(csv)
    assert records[0].iteration == 0
    assert records[-1].iteration == 50
    meta = read_meta(tmp_path / "pfw_simplex-ls_seed7.meta")
    assert meta["algorithm"] == "pfw"
    assert meta["seed"] == "7"
    assert float(meta["alpha"]) == 0.05
    best = [r.best_gap for r in records]
    assert all(a >= b for a, b in zip(best, best[1:]))


def test_run_baseline_emits_both_series(tmp_path):
    code = main([
        "run", "--problem", "simplex-ls", "--n", "30", "--d", "8",
        "--algo", "fw", "--iters", "40", "--out", str(tmp_path),
    ])
    assert code == 0
    main_csv = tmp_path / "fw_simplex-ls_seed0.csv"
    side_csv = tmp_path / "fw_simplex-ls_seed0.fwgap.csv"
    assert main_csv.exists() and side_csv.exists()
    for rec in read_trace(main_csv):
        assert rec.bound != rec.bound  # NaN: no theoretical curve for baselines
    assert read_meta(tmp_path / "fw_simplex-ls_seed0.fwgap.meta")["gap_series"] == "frank-wolfe"


def test_run_rpfw_and_trace_problem(tmp_path):
    code = main([
        "run", "--problem", "trace-mc", "--p", "4", "--q", "3",
        "--algo", "rpfw", "--iters", "60", "--seed", "1", "--out", str(tmp_path),
    ])
    assert code == 0
    records = read_trace(tmp_path / "rpfw_trace-mc_seed1.csv")
    meta = read_meta(tmp_path / "rpfw_trace-mc_seed1.meta")
    assert int(meta["rounds"]) >= 2
    alphas = {r.alpha for r in records}
    assert len(alphas) >= 2  # telemetry reflects the halving schedule


def test_config_error_exit_code(tmp_path):
    # beta = R_K M / alpha < 1/L is a configuration error
    code = main([
        "run", "--problem", "simplex-ls", "--n", "30", "--d", "8",
        "--alpha", "1e9", "--iters", "10", "--out", str(tmp_path),
    ])
    assert code == 2


def test_unknown_flag_rejected(tmp_path):
    proc = run_cli(["run", "--bogus-flag", "1"], tmp_path)
    assert proc.returncode == 2


def test_out_dir_from_environment(tmp_path):
    proc = run_cli(
        ["run", "--problem", "simplex-ls", "--n", "20", "--d", "5",
         "--alpha", "0.1", "--iters", "10"],
        tmp_path,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "pfw_simplex-ls_seed0.csv").exists()


def test_estimate_prints_constants(tmp_path):
    proc = run_cli(
        ["estimate", "--problem", "simplex-ls", "--n", "30", "--d", "8",
         "--s1-samples", "20000", "--fstar-iters", "2000"],
        tmp_path,
    )
    assert proc.returncode == 0, proc.stderr
    out = dict(line.split("=", 1) for line in proc.stdout.strip().splitlines())
    assert float(out["s1_0"]) > 0
    assert float(out["L"]) > 0
    assert float(out["f_gap0"]) >= 0
    assert float(out["R_K"]) == 1.0


def _strip_wall(path):
    lines = path.read_text().splitlines()
    return [line.rsplit(",", 1)[0] for line in lines]


@pytest.mark.parametrize("threads", ["1", "8"])
def test_cli_determinism_excluding_wall_clock(tmp_path, threads):
    args = [
        "run", "--problem", "simplex-ls", "--n", "30", "--d", "8",
        "--alpha", "0.02", "--m", "3", "--iters", "120", "--seed", "3",
        "--threads", threads,
    ]
    a_dir = tmp_path / f"a{threads}"
    b_dir = tmp_path / f"b{threads}"
    assert run_cli(args + ["--out", str(a_dir)], tmp_path).returncode == 0
    assert run_cli(args + ["--out", str(b_dir)], tmp_path).returncode == 0
    a = _strip_wall(a_dir / "pfw_simplex-ls_seed3.csv")
    b = _strip_wall(b_dir / "pfw_simplex-ls_seed3.csv")
    assert a == b


def test_thread_count_never_changes_results(tmp_path):
    base = [
        "run", "--problem", "trace-mc", "--p", "4", "--q", "3",
        "--alpha", "0.05", "--m", "4", "--iters", "40", "--seed", "5",
    ]
    one = tmp_path / "t1"
    eight = tmp_path / "t8"
    assert run_cli(base + ["--threads", "1", "--out", str(one)], tmp_path).returncode == 0
    assert run_cli(base + ["--threads", "8", "--out", str(eight)], tmp_path).returncode == 0
    assert _strip_wall(one / "pfw_trace-mc_seed5.csv") == _strip_wall(
        eight / "pfw_trace-mc_seed5.csv"
    )


def test_figure_presets_small(tmp_path):
    # miniature figure invocations exercise the full emission path
    code = main([
        "figure1", "--out", str(tmp_path / "f1"), "--seeds", "0,1",
        "--iters", "300", "--s1-samples", "20000", "--fstar-iters", "3000",
        "--threads", "2",
    ])
    assert code == 0
    csvs = sorted((tmp_path / "f1").glob("fig1_*.csv"))
    assert len(csvs) == 8  # 2 alphas x 2 m values x 2 seeds
    for path in csvs:
        records = read_trace(path)
        assert all(r.bound == r.bound for r in records)  # bound column present
        meta = read_meta(path.with_suffix(".meta"))
        assert meta["figure"] == "1"
    assert (tmp_path / "f1" / "figure1.meta").exists()

    code = main([
        "figure2", "--out", str(tmp_path / "f2"), "--seeds", "0",
        "--iters", "150", "--threads", "2",
    ])
    assert code == 0
    names = {p.name for p in (tmp_path / "f2").glob("*.csv")}
    for prob in ("simplex-ls", "trace-mc"):
        assert f"fig2_{prob}_fw.csv" in names
        assert f"fig2_{prob}_fw-ls.csv" in names
        for mmode in ("Mtheory", "Mone"):
            for mtag in ("m1", "minv"):
                assert f"fig2_{prob}_rpfw_{mmode}_{mtag}_seed0.csv" in names


def test_csv_header_is_exact_contract(tmp_path):
    main([
        "run", "--problem", "simplex-ls", "--n", "20", "--d", "5",
        "--alpha", "0.1", "--iters", "5", "--out", str(tmp_path),
    ])
    first = (tmp_path / "pfw_simplex-ls_seed0.csv").read_text().splitlines()[0]
    assert first == CSV_HEADER == "iteration,primal,dual,gap,best_gap,bound,alpha,m,wall_ns"


def test_invariant_violation_maps_to_exit_code_3(tmp_path, monkeypatch):
    import parafw.cli as cli_mod
    from parafw.pfw import InvariantViolation

    def boom(*args, **kwargs):
        raise InvariantViolation("synthetic infeasible iterate")

    monkeypatch.setattr(cli_mod, "run_pfw_experiment", boom)
    code = main([
        "run", "--problem", "simplex-ls", "--n", "20", "--d", "5",
        "--alpha", "0.1", "--iters", "5", "--out", str(tmp_path),
    ])
    assert code == 3


def test_partial_outputs_removed_on_failure(tmp_path, monkeypatch):
    import parafw.experiments as exp
    from parafw.experiments import build_problem, run_pfw_experiment

    real_write = exp.write_trace

    def write_then_fail(path, records, meta):
        real_write(path, records, meta)
        raise OSError("disk full")

    monkeypatch.setattr(exp, "write_trace", write_then_fail)
    setup = build_problem("simplex-ls", n=20, d=5, problem_seed=0)
    target = tmp_path / "run.csv"
    with pytest.raises(OSError):
        run_pfw_experiment(setup, 0.1, 1, "theory", 5, 0, out_path=target)
    assert not target.exists()
    assert not (tmp_path / "run.meta").exists()
