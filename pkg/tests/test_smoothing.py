"""Perturbation sampling, smoothing constants, and the Monte-Carlo
support-function estimators."""

import math

import numpy as np
import pytest

from parafw import _backend
from parafw.core import Point
from parafw.lmo import SimplexLMO, TraceBallLMO
from parafw.smoothing import (
    PerturbationKind,
    SmoothingConfig,
    derive_seed,
    m_constant,
    s1_at_zero,
    sample_perturbation,
    smoothed_support_grad,
    smoothed_support_value,
)

EULER_GAMMA = 0.5772156649015329


def test_gumbel_inverse_cdf_at_mode_quantile():
    # U = 1/e maps to the mode: -log(-log(1/e)) = 0
    assert -math.log(-math.log(1.0 / math.e)) == pytest.approx(0.0, abs=1e-15)
    # the sampler applies exactly that transform to its uniform stream
    u = _backend.uniform_stream(99, 16)
    g = _backend.gumbel_stream(99, 16)
    assert np.allclose(g, -np.log(-np.log(u)), rtol=1e-15)


def test_gumbel_mean_matches_euler_mascheroni():
    # Monte Carlo oracle: the Gumbel(0,1) mean is the Euler-Mascheroni constant
    draws = _backend.gumbel_stream(2024, 1_000_000)
    assert np.mean(draws) == pytest.approx(EULER_GAMMA, abs=0.01)


def test_normal_moments():
    draws = _backend.normal_stream(2025, 1_000_000)
    assert np.mean(draws) == pytest.approx(0.0, abs=0.01)
    assert np.var(draws) == pytest.approx(1.0, abs=0.01)


def test_sample_perturbation_deterministic():
    a = sample_perturbation(PerturbationKind.GUMBEL01, (7,), 123)
    b = sample_perturbation(PerturbationKind.GUMBEL01, (7,), 123)
    assert np.array_equal(a.data, b.data)
    c = sample_perturbation(PerturbationKind.STD_NORMAL, (3, 4), 5)
    assert c.shape == (3, 4)


def test_m_constant_values():
    assert m_constant(PerturbationKind.GUMBEL01, (50,)) == pytest.approx(math.sqrt(50))
    assert m_constant(PerturbationKind.STD_NORMAL, (10, 8)) == pytest.approx(math.sqrt(80))
    assert m_constant(PerturbationKind.GUMBEL01, (1,)) == 1.0


def test_grad_alpha_zero_is_deterministic_oracle():
    lmo = SimplexLMO(3)
    y = Point.vector([-3.0, -1.0, -2.0])
    for m in (1, 4, 9):
        cfg = SmoothingConfig(alpha=0.0, kind=PerturbationKind.GUMBEL01, m=m)
        g = smoothed_support_grad(y, cfg, lmo, 0)
        assert np.array_equal(g.data, [-1.0, 0.0, 0.0])


def test_grad_first_sample_independent_of_m():
    # sample 0's seed depends only on (root, iteration, 0), so the m=1
    # estimate equals sample 0's contribution reconstructed by hand
    lmo = SimplexLMO(6)
    y = Point.vector(np.random.default_rng(0).standard_normal(6))
    cfg1 = SmoothingConfig(alpha=0.5, kind=PerturbationKind.GUMBEL01, m=1, seed_root=77)
    g1 = smoothed_support_grad(y, cfg1, lmo, iter_index=3)
    delta = sample_perturbation(
        PerturbationKind.GUMBEL01, (6,), derive_seed(77, 3, 0)
    )
    vertex = lmo.argmax_linear(Point.vector(-y.data + 0.5 * delta.data)).x_star
    assert np.array_equal(g1.data, -vertex.data)


def test_grad_determinism_and_membership():
    rng = np.random.default_rng(1)
    simplex = SimplexLMO(12)
    ball = TraceBallLMO(5, 4)
    for lmo, kind, shape in (
        (simplex, PerturbationKind.GUMBEL01, (12,)),
        (ball, PerturbationKind.STD_NORMAL, (5, 4)),
    ):
        y = Point(rng.standard_normal(int(np.prod(shape))), shape)
        cfg = SmoothingConfig(alpha=0.3, kind=kind, m=8, seed_root=42)
        g1 = smoothed_support_grad(y, cfg, lmo, 5)
        g2 = smoothed_support_grad(y, cfg, lmo, 5)
        assert np.array_equal(g1.data, g2.data)
        assert lmo.contains(Point(-g1.data, shape))
        g3 = smoothed_support_grad(y, cfg, lmo, 6)
        assert not np.array_equal(g1.data, g3.data)


def test_grad_mean_at_zero_is_symmetric():
    # at y = 0 the argmax of iid perturbations is uniform over vertices
    lmo = SimplexLMO(3)
    y = Point.zeros((3,))
    big = SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, m=100_000, seed_root=1)
    ref = SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, m=1_000_000, seed_root=2)
    g = smoothed_support_grad(y, big, lmo, 0).data
    g_ref = smoothed_support_grad(y, ref, lmo, 0).data
    se = math.sqrt((1 / 3) * (2 / 3)) * math.sqrt(1 / big.m + 1 / ref.m)
    assert np.all(np.abs(g - g_ref) <= 3 * se)
    assert np.all(np.abs(-g - 1.0 / 3.0) <= 4 * se)


def test_grad_unbiased_against_larger_reference():
    lmo = SimplexLMO(5)
    y = Point.vector(np.random.default_rng(3).standard_normal(5))
    est = SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, m=100_000, seed_root=10)
    ref = SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, m=1_000_000, seed_root=11)
    g = smoothed_support_grad(y, est, lmo, 0).data
    g_ref = smoothed_support_grad(y, ref, lmo, 0).data
    se = 0.5 * math.sqrt(1 / est.m + 1 / ref.m)
    assert np.all(np.abs(g - g_ref) <= 4 * se)


def test_variance_scaling_in_m():
    lmo = SimplexLMO(10)
    y = Point.vector(np.random.default_rng(4).standard_normal(10))
    ref_cfg = SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, m=400_000, seed_root=50)
    g_bar = smoothed_support_grad(y, ref_cfg, lmo, 0).data
    variances = {}
    for m in (1, 4, 16):
        cfg = SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, m=m, seed_root=51)
        sq = [
            float(np.sum((smoothed_support_grad(y, cfg, lmo, j).data - g_bar) ** 2))
            for j in range(400)
        ]
        variances[m] = float(np.mean(sq))
        # Euclidean rho = 1 and R_K = 1: variance of the m-average <= 4/m
        assert variances[m] <= 4.0 / m
    assert variances[4] <= 0.5 * variances[1]
    assert variances[16] <= 0.5 * variances[4]


def test_value_alpha_zero_exact():
    lmo = SimplexLMO(4)
    y = Point.vector([0.3, -1.0, 2.0, 0.0])
    cfg = SmoothingConfig(alpha=0.0, kind=PerturbationKind.GUMBEL01)
    est = smoothed_support_value(y, cfg, lmo, 100)
    assert est.value == 2.0
    assert est.stderr == 0.0


def test_value_at_zero_matches_gumbel_max_law():
    # max of d iid Gumbel(0,1) is Gumbel(log d, 1) with mean log d + gamma
    d = 50
    lmo = SimplexLMO(d)
    cfg = SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, seed_root=7)
    est = smoothed_support_value(Point.zeros((d,)), cfg, lmo, 1_000_000)
    assert est.value == pytest.approx(math.log(d) + EULER_GAMMA, abs=0.01)
    assert 0.0 < est.stderr < 0.01


def test_value_sandwich_on_random_points():
    rng = np.random.default_rng(5)
    lmo = SimplexLMO(8)
    kind = PerturbationKind.GUMBEL01
    s1 = s1_at_zero(kind, lmo, 200_000, seed=123)
    for alpha in (1.0, 0.1):
        for trial in range(10):
            y = Point.vector(rng.standard_normal(8))
            cfg = SmoothingConfig(alpha=alpha, kind=kind, seed_root=trial)
            est = smoothed_support_value(y, cfg, lmo, 20_000)
            s_exact = lmo.argmax_linear(y).value
            assert s_exact <= est.value + 3 * est.stderr
            assert est.value <= s_exact + alpha * s1 + 3 * est.stderr


def test_s1_at_zero_simplex():
    lmo = SimplexLMO(50)
    s1 = s1_at_zero(PerturbationKind.GUMBEL01, lmo, 200_000, seed=9)
    assert s1 == pytest.approx(math.log(50) + EULER_GAMMA, abs=0.02)
    tiny = s1_at_zero(PerturbationKind.GUMBEL01, SimplexLMO(1), 100_000, seed=9)
    assert tiny == pytest.approx(EULER_GAMMA, abs=0.01)


def test_s1_at_zero_trace_matches_svd_oracle():
    lmo = TraceBallLMO(2, 2)
    s1 = s1_at_zero(PerturbationKind.STD_NORMAL, lmo, 50_000, seed=31)
    # brute-force oracle: mean top singular value of Gaussian 2x2 matrices
    rng = np.random.default_rng(1234)
    samples = rng.standard_normal((50_000, 2, 2))
    tops = np.linalg.svd(samples, compute_uv=False)[:, 0]
    se = float(np.std(tops) / math.sqrt(len(tops))) * 2  # two independent estimates
    assert s1 == pytest.approx(float(np.mean(tops)), abs=3 * se)


def test_s1_at_zero_requires_enough_samples():
    with pytest.raises(ValueError):
        s1_at_zero(PerturbationKind.GUMBEL01, SimplexLMO(3), 100, seed=0)


def test_config_validation():
    with pytest.raises(ValueError):
        SmoothingConfig(alpha=-0.1, kind=PerturbationKind.GUMBEL01)
    with pytest.raises(ValueError):
        SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, m=0)
    with pytest.raises(ValueError):
        SmoothingConfig(alpha=1.0, kind=PerturbationKind.GUMBEL01, M=0.0)
