"""Linear maximization oracles over compact convex sets.

Each oracle answers argmax over its set of a linear functional, checks
membership up to a tolerance, and carries the dual-norm radius of the
set. Oracles are stateless and safe to call from many workers at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from parafw.core import Point, ShapeError, spectral_top


class LinearMax(NamedTuple):
    x_star: Point
    value: float


@dataclass(frozen=True)
class SimplexLMO:
    """The probability simplex {x >= 0, sum x = 1} in dimension d."""

    d: int
    membership_tol: float = 1e-9

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("simplex dimension must be >= 1")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.d,)

    @property
    def radius(self) -> float:
        # max Euclidean norm over the simplex, attained at the vertices
        return 1.0

    def canonical_point(self) -> Point:
        e1 = np.zeros(self.d)
        e1[0] = 1.0
        return Point.vector(e1)

    def argmax_linear(self, c: Point) -> LinearMax:
        """Vertex maximizing <x, c>; ties resolve to the smallest index."""
        c = Point.of(c)
        if c.shape != self.shape:
            raise ShapeError(f"direction shape {c.shape} != ambient {self.shape}")
        j = int(np.argmax(c.data))
        x = np.zeros(self.d)
        x[j] = 1.0
        return LinearMax(Point.vector(x), float(c.data[j]))

    def contains(self, x: Point) -> bool:
        x = Point.of(x)
        if x.shape != self.shape:
            return False
        tol = self.membership_tol
        return bool(
            np.all(x.data >= -tol) and abs(float(np.sum(x.data)) - 1.0) <= tol
        )


@dataclass(frozen=True)
class TraceBallLMO:
    """The unit nuclear-norm ball of p x q matrices.

    The oracle path (argmax_linear) answers to spectral_tol accuracy,
    with a dense-SVD safeguard behind the power iteration; stochastic
    gradient samples are solved exactly through small Gram
    eigendecompositions in the sampling kernels.
    """

    p: int
    q: int
    membership_tol: float = 1e-8
    spectral_tol: float = 1e-9
    spectral_max_iter: int = 500

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("matrix dimensions must be >= 1")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.p, self.q)

    @property
    def radius(self) -> float:
        # Frobenius norm of any X with nuclear norm <= 1 is <= 1
        return 1.0

    def canonical_point(self) -> Point:
        return Point.zeros(self.shape)

    def argmax_linear(self, c: Point) -> LinearMax:
        """Rank-one dyad u1 v1^T of the top singular pair of c."""
        c = Point.of(c)
        if c.shape != self.shape:
            raise ShapeError(f"direction shape {c.shape} != ambient {self.shape}")
        top = spectral_top(c, tol=self.spectral_tol, max_iter=self.spectral_max_iter)
        if top.is_zero:
            return LinearMax(self.canonical_point(), 0.0)
        x = np.outer(top.u.data, top.v.data)
        return LinearMax(Point.matrix(x), top.sigma)

    def contains(self, x: Point) -> bool:
        x = Point.of(x)
        if x.shape != self.shape:
            return False
        nuclear = float(np.sum(np.linalg.svd(x.as_array(), compute_uv=False)))
        return nuclear <= 1.0 + self.membership_tol


LMO = SimplexLMO | TraceBallLMO
