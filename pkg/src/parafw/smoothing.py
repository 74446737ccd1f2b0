"""Randomized smoothing of support functions via perturbed oracle calls.

The smoothed support function of a compact convex set K with parameter
alpha is the expectation over a perturbation Delta of
``max_{x in K} <x, y + alpha * Delta>``. Its gradient is the expected
argmax, so one linear-maximization call per sample yields an unbiased
stochastic gradient. Per-sample seeds are a counter-based hash of
(seed_root, iteration, sample index): parallel execution order cannot
change any result, and the reduction over samples runs in a fixed
sample-index order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from parafw import _backend
from parafw.core import Point, ShapeError
from parafw.lmo import LMO, SimplexLMO, TraceBallLMO

_VALUE_SALT = 0x56414C55


class PerturbationKind(enum.Enum):
    """Coordinate-wise perturbation families with smooth positive density."""

    GUMBEL01 = "gumbel01"
    STD_NORMAL = "std-normal"

    @property
    def _code(self) -> int:
        return (
            _backend.KIND_GUMBEL
            if self is PerturbationKind.GUMBEL01
            else _backend.KIND_NORMAL
        )


@dataclass(frozen=True)
class SmoothingConfig:
    """Smoothing parameter, perturbation family and parallel sample count.

    ``alpha == 0`` is allowed as a degenerate deterministic-oracle test
    mode; production solvers require alpha > 0. ``M`` is the smoothness
    constant of the perturbation (theoretical value or the M=1
    heuristic) and enters the solver through beta = R_K * M / alpha.
    """

    alpha: float
    kind: PerturbationKind
    m: int = 1
    M: float = 1.0
    seed_root: int = 0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.m < 1:
            raise ValueError("sample count m must be >= 1")
        if self.M <= 0:
            raise ValueError("M must be positive")


def m_constant(kind: PerturbationKind, shape) -> float:
    """Smoothness constant M of the perturbation family on this shape.

    Gumbel(0,1) in dimension d gives M = sqrt(d); standard normal
    entries on p x q give M = sqrt(p*q), i.e. sqrt(d) over the
    flattened coordinates in both cases.
    """
    del kind  # both supported families have M^2 = flattened dimension
    return math.sqrt(int(np.prod(shape)))


def derive_seed(seed_root: int, iter_index: int, sample_index: int) -> int:
    """Counter-based per-sample seed; see module docstring."""
    return _backend.derive_seed(seed_root, iter_index, sample_index)


def sample_perturbation(kind: PerturbationKind, shape, seed: int) -> Point:
    """One perturbation draw, deterministic in (kind, shape, seed).

    Gumbel uses the inverse CDF -log(-log(U)) on open-interval uniforms;
    normals come from Box-Muller pairs of the same uniform stream.
    """
    shape = tuple(int(s) for s in shape)
    dim = int(np.prod(shape))
    if kind is PerturbationKind.GUMBEL01:
        flat = _backend.gumbel_stream(seed, dim)
    else:
        flat = _backend.normal_stream(seed, dim)
    return Point(np.asarray(flat), shape)


def _value_root(seed_root: int) -> int:
    return _backend.mix64(seed_root ^ _VALUE_SALT)


def _support_value_batch(
    lmo: LMO, base: np.ndarray, alpha: float, kind: PerturbationKind,
    root: int, index0: int, n: int,
) -> np.ndarray:
    if isinstance(lmo, SimplexLMO):
        return _backend.simplex_support_values(
            np.ascontiguousarray(base.ravel()), alpha, root, index0, n, kind._code
        )
    if isinstance(lmo, TraceBallLMO):
        return _backend.trace_support_values(
            np.ascontiguousarray(base.reshape(lmo.shape)), alpha, root, index0, n,
            kind._code,
        )
    out = np.empty(n)
    for j in range(n):
        delta = sample_perturbation(kind, lmo.shape, _backend.derive_seed(root, 0, index0 + j))
        out[j] = lmo.argmax_linear(Point(base + alpha * delta.data, lmo.shape)).value
    return out


def smoothed_support_grad(
    y: Point, cfg: SmoothingConfig, lmo: LMO, iter_index: int
) -> Point:
    """Averaged stochastic gradient of y -> smoothed support of K at -y.

    Returns g = -(1/m) * sum_i argmax_{u in K} <u, -y + alpha Delta_i>;
    -g is a convex combination of oracle outputs and therefore lies in
    K. With alpha == 0 the estimator degenerates to the deterministic
    oracle direction for any m.
    """
    y = Point.of(y)
    if y.shape != lmo.shape:
        raise ShapeError(f"point shape {y.shape} != ambient {lmo.shape}")
    if cfg.alpha == 0.0:
        vertex = lmo.argmax_linear(Point(-y.data, y.shape)).x_star
        return Point(-vertex.data, y.shape)
    if isinstance(lmo, SimplexLMO):
        counts = _backend.simplex_grad_counts(
            np.ascontiguousarray(-y.data), cfg.alpha, cfg.seed_root, iter_index,
            cfg.m, cfg.kind._code,
        )
        return Point(-counts.astype(np.float64) / cfg.m, y.shape)
    if isinstance(lmo, TraceBallLMO):
        gsum = _backend.trace_grad_sum(
            np.ascontiguousarray(-y.as_array()), cfg.alpha, cfg.seed_root,
            iter_index, cfg.m, cfg.kind._code,
        )
        return Point(-gsum.ravel() / cfg.m, y.shape)
    acc = np.zeros_like(y.data)
    for i in range(cfg.m):
        seed = _backend.derive_seed(cfg.seed_root, iter_index, i)
        delta = sample_perturbation(cfg.kind, y.shape, seed)
        vertex = lmo.argmax_linear(Point(-y.data + cfg.alpha * delta.data, y.shape))
        acc += vertex.x_star.data
    return Point(-acc / cfg.m, y.shape)


class ValueEstimate(NamedTuple):
    value: float
    stderr: float
    n: int


def smoothed_support_value(
    y: Point, cfg: SmoothingConfig, lmo: LMO, n_samples: int,
    chunk: int = 1 << 15,
) -> ValueEstimate:
    """Monte-Carlo estimate of the smoothed support value at y.

    Averages ``max_{x in K} <x, y + alpha Delta>`` over n_samples
    independent draws and reports the standard error of the mean. With
    alpha == 0 the exact support value is returned with zero error.
    """
    y = Point.of(y)
    if y.shape != lmo.shape:
        raise ShapeError(f"point shape {y.shape} != ambient {lmo.shape}")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if cfg.alpha == 0.0:
        return ValueEstimate(lmo.argmax_linear(y).value, 0.0, n_samples)
    root = _value_root(cfg.seed_root)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        take = min(chunk, n_samples - done)
        vals = _support_value_batch(lmo, y.data, cfg.alpha, cfg.kind, root, done, take)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        done += take
    mean = total / n_samples
    if n_samples < 2:
        return ValueEstimate(mean, float("inf"), n_samples)
    var = max(0.0, (total_sq - n_samples * mean * mean) / (n_samples - 1))
    return ValueEstimate(mean, math.sqrt(var / n_samples), n_samples)


def s1_at_zero(
    kind: PerturbationKind, lmo: LMO, n_samples: int, seed: int,
    chunk: int = 1 << 15,
) -> float:
    """Monte-Carlo estimate of the unit-smoothing bias constant.

    Estimates E[sup_{x in K} <x, Delta>], deterministic given the seed.
    Estimated once per experiment with a dedicated seed and cached by
    the caller; there is no closed form for general K.
    """
    if n_samples < 10_000:
        raise ValueError("s1_at_zero needs n_samples >= 10^4")
    cfg = SmoothingConfig(alpha=1.0, kind=kind, m=1, M=1.0, seed_root=seed)
    zero = Point.zeros(lmo.shape)
    return smoothed_support_value(zero, cfg, lmo, n_samples, chunk=chunk).value
