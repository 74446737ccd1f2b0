"""Coordinate containers, norms, dual pairings and spectral utilities.

Points are flat float64 coordinate vectors tagged with a shape, either
``(d,)`` for vectors or ``(p, q)`` for matrices stored row-major. The
dual pairing is the Euclidean dot product over coordinates throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from parafw import _backend

_SPECTRAL_SALT = 0x53504543


class ShapeError(ValueError):
    """Shape or norm-kind incompatibility."""


@dataclass(frozen=True)
class Point:
    """Flat real coordinate container for primal and dual vectors."""

    data: np.ndarray
    shape: tuple[int, ...]

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float64).ravel()
        object.__setattr__(self, "data", data)
        expected = int(np.prod(self.shape))
        if data.size != expected:
            raise ShapeError(
                f"data has {data.size} coordinates, shape {self.shape} needs {expected}"
            )
        if len(self.shape) not in (1, 2):
            raise ShapeError(f"shape must be vector or matrix, got {self.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("point has non-finite coordinates")

    @classmethod
    def vector(cls, values) -> "Point":
        arr = np.asarray(values, dtype=np.float64).ravel()
        return cls(arr, (arr.size,))

    @classmethod
    def matrix(cls, values) -> "Point":
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ShapeError(f"matrix() expects 2-D input, got ndim={arr.ndim}")
        return cls(arr.ravel(), arr.shape)

    @classmethod
    def of(cls, values) -> "Point":
        if isinstance(values, Point):
            return values
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim == 2:
            return cls.matrix(arr)
        return cls.vector(arr)

    @classmethod
    def zeros(cls, shape) -> "Point":
        shape = tuple(int(s) for s in shape)
        return cls(np.zeros(int(np.prod(shape))), shape)

    @property
    def is_matrix(self) -> bool:
        return len(self.shape) == 2

    def as_array(self) -> np.ndarray:
        """Shaped (read-only flat copy is not made; reshape is a view)."""
        return self.data.reshape(self.shape)

    def __array__(self, dtype=None, copy=None):
        arr = self.data.reshape(self.shape)
        return arr.astype(dtype) if dtype is not None else arr


class NormKind:
    """A norm tag: L2, Lp(p), LInf, Frobenius, Trace or Spectral.

    Trace and Spectral apply to matrix shapes only and are dual to each
    other; the remaining kinds are coordinate norms on the flat data.
    """

    __slots__ = ("tag", "p")

    def __init__(self, tag: str, p: float | None = None):
        if tag not in ("l2", "lp", "linf", "frobenius", "trace", "spectral"):
            raise ValueError(f"unknown norm tag {tag!r}")
        if tag == "lp":
            if p is None or p < 1:
                raise ValueError("Lp norms require p >= 1")
        self.tag = tag
        self.p = float(p) if p is not None else None

    @classmethod
    def l2(cls) -> "NormKind":
        return cls("l2")

    @classmethod
    def lp(cls, p: float) -> "NormKind":
        return cls("lp", p)

    @classmethod
    def linf(cls) -> "NormKind":
        return cls("linf")

    @classmethod
    def frobenius(cls) -> "NormKind":
        return cls("frobenius")

    @classmethod
    def trace(cls) -> "NormKind":
        return cls("trace")

    @classmethod
    def spectral(cls) -> "NormKind":
        return cls("spectral")

    def dual(self) -> "NormKind":
        """The dual norm under the Euclidean pairing."""
        if self.tag in ("l2", "frobenius"):
            return self
        if self.tag == "lp":
            if self.p == 1.0:
                return NormKind.linf()
            q = self.p / (self.p - 1.0)
            return NormKind.lp(q)
        if self.tag == "linf":
            return NormKind.lp(1.0)
        if self.tag == "trace":
            return NormKind.spectral()
        return NormKind.trace()

    def __repr__(self):
        return f"NormKind({self.tag!r})" if self.p is None else f"NormKind({self.tag!r}, p={self.p})"

    def __eq__(self, other):
        return isinstance(other, NormKind) and self.tag == other.tag and self.p == other.p

    def __hash__(self):
        return hash((self.tag, self.p))


def _singular_values(x: Point) -> np.ndarray:
    return np.linalg.svd(x.as_array(), compute_uv=False)


def norm(x: Point, kind: NormKind) -> float:
    """Norm of a point; Trace and Spectral require a matrix shape."""
    x = Point.of(x)
    if kind.tag in ("trace", "spectral"):
        if not x.is_matrix:
            raise ShapeError(f"{kind.tag} norm requires a matrix point")
        sv = _singular_values(x)
        return float(np.sum(sv)) if kind.tag == "trace" else float(np.max(sv))
    if kind.tag in ("l2", "frobenius"):
        return float(np.linalg.norm(x.data))
    if kind.tag == "linf":
        return float(np.max(np.abs(x.data))) if x.data.size else 0.0
    # lp
    p = kind.p
    if p == 1.0:
        return float(np.sum(np.abs(x.data)))
    return float(np.sum(np.abs(x.data) ** p) ** (1.0 / p))


def dual_norm(x: Point, kind: NormKind) -> float:
    """Norm of a dual element, i.e. the dual of ``kind`` applied to x."""
    return norm(x, kind.dual())


def pairing(a: Point, b: Point) -> float:
    """Euclidean dual pairing over coordinates."""
    a = Point.of(a)
    b = Point.of(b)
    if a.shape != b.shape:
        raise ShapeError(f"pairing shape mismatch: {a.shape} vs {b.shape}")
    return float(a.data @ b.data)


@dataclass(frozen=True)
class RhoConstant:
    """Norm-dependent constant in the averaged-estimator variance bound."""

    value: float
    d: int
    norm: NormKind


def rho_constant(kind: NormKind, d: int, variant: str = "tight") -> RhoConstant:
    """Variance constant for averaging m independent vertex samples.

    For the sup-norm two admissible values exist: ``variant="tight"``
    gives 2(log d + 1), ``variant="loose"`` gives e^2 (log d + 1); the
    tight one is the default. ``log`` is the natural logarithm.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if variant not in ("tight", "loose"):
        raise ValueError(f"unknown variant {variant!r}")
    if kind.tag in ("l2", "frobenius"):
        value = 1.0
    elif kind.tag == "linf":
        scale = 2.0 if variant == "tight" else math.e**2
        value = scale * (math.log(d) + 1.0)
    elif kind.tag == "lp":
        p = kind.p
        if p == math.inf:
            raise ValueError("use NormKind.linf() for the sup norm")
        if 1.0 <= p < 2.0:
            value = float(d) ** (2.0 / p - 1.0)
        else:
            value = p - 1.0
    else:
        raise ValueError(f"no variance constant for norm kind {kind.tag!r}")
    return RhoConstant(value=value, d=d, norm=kind)


class SpectralTop(NamedTuple):
    sigma: float
    u: Point
    v: Point
    iterations: int
    is_zero: bool


def spectral_top(a: Point, tol: float = 1e-9, max_iter: int = 500) -> SpectralTop:
    """Largest singular triple of a matrix point.

    Power iteration from a start vector derived from a fixed seed and
    the matrix shape, so degenerate top singular values resolve
    deterministically. Clustered spectra can stall power iteration
    below the requested tolerance; if the iteration cap is reached the
    result is recomputed by a dense SVD instead, keeping the accuracy
    contract. For a zero matrix the result carries ``is_zero=True``
    with canonical unit vectors.
    """
    a = Point.of(a)
    if not a.is_matrix:
        raise ShapeError("spectral_top requires a matrix point")
    if tol <= 0:
        raise ValueError("tol must be positive")
    p, q = a.shape
    seed = _backend.derive_seed(_SPECTRAL_SALT, p, q)
    mat = np.ascontiguousarray(a.as_array())
    sigma, u, v, iters, is_zero = _backend.power_top(mat, tol, max_iter, seed)
    if iters >= max_iter and not is_zero:
        um, sv, vtm = np.linalg.svd(mat)
        sigma, u, v = float(sv[0]), um[:, 0], vtm[0, :]
        iters = max_iter
    return SpectralTop(float(sigma), Point.vector(u), Point.vector(v), int(iters), bool(is_zero))
