"""Accelerated stochastic composite minimization with Bregman prox steps.

Minimizes F = G + H where G is beta-smooth with a stochastic gradient
oracle and H is mu-strongly convex with an efficient prox against a
nu-strongly convex regularizer w. The scalar coefficient sequence A_k
grows as the positive root of a per-step quadratic; its growth factor
drives the exponential term of the convergence bound, and the oracle's
variance sets the noise floor sigma^2 / (2 sqrt(mu beta)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np


class ComputationError(RuntimeError):
    """Non-finite intermediate in the coefficient recursion."""


@dataclass(frozen=True)
class AlgParams:
    """Smoothness of G, strong convexity of H and of the regularizer w."""

    beta: float
    mu: float
    nu: float

    def __post_init__(self):
        if self.beta <= 0 or self.mu <= 0 or self.nu <= 0:
            raise ValueError("beta, mu and nu must all be positive")

    @property
    def rho(self) -> float:
        return math.sqrt(self.mu * self.beta)


def next_A(A_k: float, p: AlgParams) -> float:
    """Advance the acceleration coefficient.

    Returns the positive root of
    ``(beta + rho) A^2 - (A_k (mu + 2 beta + rho) + beta nu) A + beta A_k^2``
    with rho = sqrt(mu beta). The root exceeds A_k and satisfies the
    growth bound A_{k+1} >= A_k (1 + sqrt(mu) / (2 (sqrt(beta) + sqrt(mu)))).
    """
    if A_k < 0:
        raise ValueError("A_k must be nonnegative")
    beta, mu, nu = p.beta, p.mu, p.nu
    rho = p.rho
    try:
        disc = (
            (beta * nu + mu * A_k) ** 2
            + 4.0 * A_k * beta * beta * nu
            + 5.0 * A_k * A_k * mu * beta
            + 2.0 * A_k * rho * (beta * nu + A_k * mu)
        )
        a_next = (A_k * (mu + 2.0 * beta + rho) + beta * nu + math.sqrt(disc)) / (
            2.0 * (beta + rho)
        )
    except OverflowError as exc:
        raise ComputationError(
            f"coefficient update overflowed at A_k={A_k!r}, params={p!r}"
        ) from exc
    if not math.isfinite(a_next):
        raise ComputationError(
            f"coefficient update overflowed at A_k={A_k!r}, params={p!r}"
        )
    return a_next


def growth_factor(p: AlgParams) -> float:
    """Lower bound on A_{k+1} / A_k for k >= 1."""
    return 1.0 + math.sqrt(p.mu) / (2.0 * (math.sqrt(p.beta) + math.sqrt(p.mu)))


class StochGradOracle(Protocol):
    """Unbiased stochastic gradient of G with declared variance bound."""

    sigma2: float

    def eval(self, v: np.ndarray, k: int) -> np.ndarray: ...


class BregmanProxOracle(Protocol):
    """Solves argmin_y <d, y> + A H(y) + beta w(y) to its declared tolerance."""

    def solve(self, d: np.ndarray, A: float, beta: float) -> np.ndarray: ...


@dataclass
class IterateState:
    """Full loop state: iterate index, coefficient, and the four vectors."""

    k: int
    A: float
    tau: float
    y: np.ndarray
    z: np.ndarray
    v: np.ndarray
    d: np.ndarray


def initial_state(z0: np.ndarray) -> IterateState:
    """Start from the minimizer of w: A_0 = 0, d_0 = 0, y_0 = z_0."""
    z0 = np.asarray(z0, dtype=np.float64)
    return IterateState(
        k=0, A=0.0, tau=1.0, y=z0.copy(), z=z0.copy(), v=z0.copy(),
        d=np.zeros_like(z0),
    )


def step(
    state: IterateState,
    p: AlgParams,
    grad: StochGradOracle,
    prox: BregmanProxOracle,
) -> IterateState:
    """One accelerated step; A_{k+1} is computed before tau_k."""
    A_next = next_A(state.A, p)
    tau = 1.0 - state.A / A_next
    v = (1.0 - tau) * state.y + tau * state.z
    try:
        g = grad.eval(v, state.k)
        d_next = state.d + (A_next - state.A) * g
        z_next = prox.solve(d_next, A_next, p.beta)
    except Exception as exc:
        raise RuntimeError(f"oracle failure at iteration {state.k}") from exc
    y_next = (1.0 - tau) * state.y + tau * z_next
    return IterateState(
        k=state.k + 1, A=A_next, tau=tau, y=y_next, z=z_next, v=v, d=d_next
    )


def theorem_bound(k: int, p: AlgParams, D_w: float, sigma2: float) -> float:
    """Worst-case suboptimality after k iterations.

    exp(-k sqrt(mu) / (2 (sqrt(beta) + sqrt(mu)))) * beta * D_w
    + sigma^2 / (2 sqrt(mu beta)); nonincreasing in k with limit the
    noise floor.
    """
    if D_w < 0 or sigma2 < 0:
        raise ValueError("D_w and sigma2 must be nonnegative")
    decay = math.exp(-k * math.sqrt(p.mu) / (2.0 * (math.sqrt(p.beta) + math.sqrt(p.mu))))
    return decay * p.beta * D_w + sigma2 / (2.0 * p.rho)


# Backwards-friendly alias used by the experiment harness.
theorem1_bound = theorem_bound


@dataclass
class QuadraticFixture:
    """Closed-form test problem: least-squares G, shifted-quadratic H.

    G(y) = 0.5 ||B y - c||^2 with beta = lambda_max(B^T B),
    H(y) = (mu / 2) ||y - h||^2,
    w(y) = 0.5 ||y - z0||^2 (nu = 1, minimized at z0, already shifted so
    that no runtime shifting is needed).
    """

    B: np.ndarray
    c: np.ndarray
    h: np.ndarray
    z0: np.ndarray
    params: AlgParams
    y_star: np.ndarray
    F_star: float
    sigma2: float
    _noise_rng: np.random.Generator

    def G(self, y: np.ndarray) -> float:
        r = self.B @ y - self.c
        return 0.5 * float(r @ r)

    def H(self, y: np.ndarray) -> float:
        d = y - self.h
        return 0.5 * self.params.mu * float(d @ d)

    def F(self, y: np.ndarray) -> float:
        return self.G(y) + self.H(y)

    def w(self, y: np.ndarray) -> float:
        d = y - self.z0
        return 0.5 * float(d @ d)

    def grad_G(self, y: np.ndarray) -> np.ndarray:
        return self.B.T @ (self.B @ y - self.c)

    def D_w(self) -> float:
        """Regularizer gap w(y_star) - w(y_0) >= 0 (y_0 minimizes w)."""
        return self.w(self.y_star) - self.w(self.z0)

    # oracle interfaces ------------------------------------------------
    def eval(self, v: np.ndarray, k: int) -> np.ndarray:
        g = self.grad_G(v)
        if self.sigma2 > 0.0:
            scale = math.sqrt(self.sigma2 / v.size)
            g = g + scale * self._noise_rng.standard_normal(v.size)
        return g

    def solve(self, d: np.ndarray, A: float, beta: float) -> np.ndarray:
        # exact minimizer of <d, y> + A H(y) + beta w(y): a scalar system
        mu = self.params.mu
        return (-d + A * mu * self.h + beta * self.z0) / (A * mu + beta)


def quadratic_fixture(
    dim: int, seed: int, mu: float = 1.0, sigma2: float = 0.0
) -> QuadraticFixture:
    """Random dense instance with exact oracles and a direct F_star solve."""
    if dim > 100:
        raise ValueError("fixture dimension capped at 100")
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((dim, dim))
    c = rng.standard_normal(dim)
    h = rng.standard_normal(dim)
    z0 = np.zeros(dim)
    gram = B.T @ B
    beta = float(np.linalg.eigvalsh(gram)[-1])
    params = AlgParams(beta=beta, mu=mu, nu=1.0)
    # direct minimization of F: (B^T B + mu I) y = B^T c + mu h
    y_star = np.linalg.solve(gram + mu * np.eye(dim), B.T @ c + mu * h)
    fixture = QuadraticFixture(
        B=B, c=c, h=h, z0=z0, params=params, y_star=y_star, F_star=0.0,
        sigma2=sigma2, _noise_rng=np.random.default_rng(seed + 1),
    )
    fixture.F_star = fixture.F(y_star)
    return fixture


def run_fixture(
    fixture: QuadraticFixture, iters: int,
    callback: Callable[[IterateState], None] | None = None,
) -> IterateState:
    state = initial_state(fixture.z0)
    for _ in range(iters):
        state = step(state, fixture.params, fixture, fixture)
        if callback is not None:
            callback(state)
    return state
