"""Quadratic test problems: least squares over the simplex and
generalized matrix completion over the trace ball.

Both objectives are quadratics, so the exact curvature along a
direction is available for line search, the smoothness constant is the
top eigenvalue of the Hessian, and the convex conjugate has a closed
form on the range of the data matrix (which contains every gradient,
hence every dual iterate the solvers produce).

Problems accept flat float64 coordinate arrays (row-major for
matrices); shaped arrays and Points are coerced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from parafw.core import Point, spectral_top

_RANGE_TOL = 1e-6


class ConjugateDomainError(ValueError):
    """Dual point outside the effective domain of the conjugate."""


class Problem(Protocol):
    shape: tuple[int, ...]
    L: float

    def f(self, x) -> float: ...

    def grad_f(self, x) -> np.ndarray: ...

    def conjugate(self, y) -> float: ...

    def curvature(self, h) -> float: ...


def _flat(x, dim: int) -> np.ndarray:
    if isinstance(x, Point):
        arr = x.data
    else:
        arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size != dim:
        raise ValueError(f"expected {dim} coordinates, got {arr.size}")
    return arr


@dataclass
class _GramPinv:
    """Cached eigendecomposition of a PSD Gram matrix for pinv solves."""

    evals: np.ndarray
    evecs: np.ndarray
    rank_mask: np.ndarray = field(init=False)

    def __post_init__(self):
        cutoff = max(self.evals[-1], 0.0) * 1e-12
        self.rank_mask = self.evals > cutoff

    def apply(self, z: np.ndarray, what: str) -> np.ndarray:
        """Pseudo-inverse application, guarding the range membership."""
        coeffs = self.evecs.T @ z
        out_of_range = coeffs.copy()
        out_of_range[self.rank_mask] = 0.0
        resid = float(np.linalg.norm(out_of_range))
        if resid > _RANGE_TOL * (1.0 + float(np.linalg.norm(z))):
            raise ConjugateDomainError(
                f"{what} outside the conjugate domain: range residual {resid:.3e}"
            )
        coeffs[self.rank_mask] /= self.evals[self.rank_mask]
        coeffs[~self.rank_mask] = 0.0
        return self.evecs @ coeffs


def _fenchel_young_selfcheck(problem: "Problem", x: np.ndarray) -> None:
    g = problem.grad_f(x)
    lhs = problem.f(x) + problem.conjugate(g)
    rhs = float(g @ _flat(x, g.size))
    scale = 1.0 + abs(lhs) + abs(rhs)
    if abs(lhs - rhs) > 1e-8 * scale:
        raise AssertionError(
            f"conjugate self-check failed: |{lhs} - {rhs}| > 1e-8 relative"
        )


class SimplexLS:
    """f(x) = 0.5 ||A x - b||^2 over R^d (the simplex enters via the oracle)."""

    def __init__(self, A: np.ndarray, b: np.ndarray):
        A = np.ascontiguousarray(A, dtype=np.float64)
        b = np.ascontiguousarray(b, dtype=np.float64).ravel()
        if A.ndim != 2 or b.size != A.shape[0]:
            raise ValueError("A must be n x d with b of length n")
        self.A = A
        self.b = b
        self.n, self.d = A.shape
        self.shape: tuple[int, ...] = (self.d,)
        self.Atb = A.T @ b
        gram = A.T @ A
        evals, evecs = np.linalg.eigh(gram)
        self._pinv = _GramPinv(evals, evecs)
        self.L = spectral_top(Point.matrix(A), tol=1e-9).sigma ** 2
        self._half_b2 = 0.5 * float(b @ b)
        rng = np.random.default_rng(0)
        _fenchel_young_selfcheck(self, rng.standard_normal(self.d))

    def f(self, x) -> float:
        x = _flat(x, self.d)
        r = self.A @ x - self.b
        return 0.5 * float(r @ r)

    def grad_f(self, x) -> np.ndarray:
        x = _flat(x, self.d)
        return self.A.T @ (self.A @ x - self.b)

    def curvature(self, h) -> float:
        h = _flat(h, self.d)
        Ah = self.A @ h
        return float(Ah @ Ah)

    def conjugate(self, y) -> float:
        y = _flat(y, self.d)
        z = y + self.Atb
        return 0.5 * float(z @ self._pinv.apply(z, "dual point")) - self._half_b2


class TraceMC:
    """f(X) = 0.5 ||C X - D||_F^2 for p x q matrices X."""

    def __init__(self, C: np.ndarray, D: np.ndarray):
        C = np.ascontiguousarray(C, dtype=np.float64)
        D = np.ascontiguousarray(D, dtype=np.float64)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or D.ndim != 2 or D.shape[0] != C.shape[0]:
            raise ValueError("C must be p x p and D must be p x q")
        self.C = C
        self.D = D
        self.p, self.q = D.shape
        self.shape = (self.p, self.q)
        self.CtD = C.T @ D
        gram = C.T @ C
        evals, evecs = np.linalg.eigh(gram)
        self._pinv = _GramPinv(evals, evecs)
        self.L = spectral_top(Point.matrix(C), tol=1e-9).sigma ** 2
        self._half_d2 = 0.5 * float(np.sum(D * D))
        rng = np.random.default_rng(0)
        _fenchel_young_selfcheck(self, rng.standard_normal(self.p * self.q))

    def _mat(self, x) -> np.ndarray:
        return _flat(x, self.p * self.q).reshape(self.p, self.q)

    def f(self, x) -> float:
        r = self.C @ self._mat(x) - self.D
        return 0.5 * float(np.sum(r * r))

    def grad_f(self, x) -> np.ndarray:
        r = self.C @ self._mat(x) - self.D
        return (self.C.T @ r).ravel()

    def curvature(self, h) -> float:
        ch = self.C @ self._mat(h)
        return float(np.sum(ch * ch))

    def conjugate(self, y) -> float:
        z = self._mat(y) + self.CtD
        pz = np.column_stack(
            [self._pinv.apply(z[:, j], "dual point") for j in range(self.q)]
        )
        return 0.5 * float(np.sum(z * pz)) - self._half_d2


def make_simplex_ls(n: int, d: int, seed: int) -> SimplexLS:
    """Instance with i.i.d. standard normal data; the seed is recorded
    in experiment metadata so runs are reproducible."""
    rng = np.random.default_rng(seed)
    return SimplexLS(rng.standard_normal((n, d)), rng.standard_normal(n))


def make_trace_mc(p: int, q: int, seed: int) -> TraceMC:
    rng = np.random.default_rng(seed)
    return TraceMC(rng.standard_normal((p, p)), rng.standard_normal((p, q)))


# -- CSV instance exchange (cross-implementation checks) ----------------


def save_matrix_csv(path: str | Path, arr: np.ndarray) -> None:
    arr = np.atleast_2d(np.asarray(arr, dtype=np.float64))
    lines = [f"{arr.shape[0]},{arr.shape[1]}"]
    for row in arr:
        lines.append(",".join(format(v, ".17g") for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_matrix_csv(path: str | Path) -> np.ndarray:
    lines = Path(path).read_text().strip().splitlines()
    rows, cols = (int(t) for t in lines[0].split(","))
    data = [[float(t) for t in line.split(",")] for line in lines[1 : rows + 1]]
    arr = np.asarray(data, dtype=np.float64)
    if arr.shape != (rows, cols):
        raise ValueError(f"{path}: expected {rows}x{cols}, got {arr.shape}")
    return arr


def save_simplex_ls(problem: SimplexLS, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_matrix_csv(directory / "A.csv", problem.A)
    save_matrix_csv(directory / "b.csv", problem.b.reshape(-1, 1))


def load_simplex_ls(directory: str | Path) -> SimplexLS:
    directory = Path(directory)
    return SimplexLS(
        load_matrix_csv(directory / "A.csv"),
        load_matrix_csv(directory / "b.csv").ravel(),
    )


def save_trace_mc(problem: TraceMC, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_matrix_csv(directory / "C.csv", problem.C)
    save_matrix_csv(directory / "D.csv", problem.D)


def load_trace_mc(directory: str | Path) -> TraceMC:
    directory = Path(directory)
    return TraceMC(
        load_matrix_csv(directory / "C.csv"), load_matrix_csv(directory / "D.csv")
    )
