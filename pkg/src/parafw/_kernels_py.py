"""Pure-numpy implementation of the hot kernels.

This module is the fallback used when the compiled extension
(``parafw._kernels``) is unavailable. Both backends implement the same
contract:

* Counter-based random streams. Draw ``j`` of the stream with seed ``s``
  is ``mix64(s + (j + 1) * GOLDEN)`` where ``mix64`` is the SplitMix64
  output function. Uniforms are mapped to the open interval (0, 1) via
  ``((z >> 11) + 0.5) * 2**-53``, Gumbel(0, 1) via the inverse CDF
  ``-log(-log(u))`` and standard normals via Box-Muller pairs
  ``(u[2t], u[2t + 1])`` in stream order.
* Per-sample seeds come from ``derive_seed(root, stream, index)`` so
  results never depend on how samples are scheduled across workers.
* Reductions over samples use a fixed, schedule-independent order
  (sequential in the compiled kernel, numpy's pairwise order here).
  The two backends agree bit-exactly on integer outputs and to floating
  rounding on transcendental-function outputs.

Matrix arguments are row-major float64 with shape (p, q).
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_GAMMA_STREAM = 0xC2B2AE3D27D4EB4F
_GAMMA_INDEX = 0xD6E8FEB86659FD93
_MASK = (1 << 64) - 1
_TWO_PI = 6.283185307179586
_U53 = 2.0 ** -53

KIND_GUMBEL = 0
KIND_NORMAL = 1


def mix64(z: int) -> int:
    """SplitMix64 output function on a 64-bit state (scalar)."""
    z &= _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(root: int, stream: int, index: int) -> int:
    """Per-sample seed from (root, stream id, sample index), counter style."""
    h = mix64((root + GOLDEN) & _MASK)
    h = mix64(h ^ (((stream + 1) * _GAMMA_STREAM) & _MASK))
    h = mix64(h ^ (((index + 1) * _GAMMA_INDEX) & _MASK))
    return h


def _mix_u64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _derive_seed_vec(root: int, stream: int, indices: np.ndarray) -> np.ndarray:
    h0 = mix64((root + GOLDEN) & _MASK)
    h0 = mix64(h0 ^ (((stream + 1) * _GAMMA_STREAM) & _MASK))
    h = (indices.astype(np.uint64) + np.uint64(1)) * np.uint64(_GAMMA_INDEX)
    return _mix_u64(np.uint64(h0) ^ h)


def _uniform_block(seeds: np.ndarray, n: int) -> np.ndarray:
    """(len(seeds), n) uniforms in (0, 1); row i is the stream of seeds[i]."""
    steps = (np.arange(1, n + 1, dtype=np.uint64)) * np.uint64(GOLDEN)
    z = _mix_u64(seeds[:, None] + steps[None, :])
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * _U53


def uniform_stream(seed: int, n: int) -> np.ndarray:
    return _uniform_block(np.array([seed & _MASK], dtype=np.uint64), n)[0]


def gumbel_stream(seed: int, n: int) -> np.ndarray:
    u = uniform_stream(seed, n)
    return -np.log(-np.log(u))


def _normals_from_uniforms(u: np.ndarray, n: int) -> np.ndarray:
    # u has shape (..., 2 * ceil(n / 2)); Box-Muller in pair order.
    u1 = u[..., 0::2]
    u2 = u[..., 1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    ang = _TWO_PI * u2
    out = np.empty(u.shape[:-1] + (u.shape[-1],), dtype=np.float64)
    out[..., 0::2] = r * np.cos(ang)
    out[..., 1::2] = r * np.sin(ang)
    return out[..., :n]


def normal_stream(seed: int, n: int) -> np.ndarray:
    npairs = (n + 1) // 2
    u = uniform_stream(seed, 2 * npairs)
    return _normals_from_uniforms(u, n)


def _perturbation_draw_count(kind: int, dim: int) -> int:
    """Uniform draws consumed by one perturbation of ``dim`` coordinates."""
    if kind == KIND_GUMBEL:
        return dim
    return 2 * ((dim + 1) // 2)


def _perturbation_block(seeds: np.ndarray, kind: int, dim: int) -> np.ndarray:
    nu = _perturbation_draw_count(kind, dim)
    u = _uniform_block(seeds, nu)
    if kind == KIND_GUMBEL:
        return -np.log(-np.log(u))
    return _normals_from_uniforms(u, dim)


def simplex_grad_counts(
    base: np.ndarray, alpha: float, root: int, stream: int, m: int, kind: int
) -> np.ndarray:
    """Counts of argmax(base + alpha * Delta_i) over i = 0..m-1.

    Ties resolve to the smallest index. The counts are an exact integer
    reduction, independent of execution order.
    """
    d = base.shape[0]
    seeds = _derive_seed_vec(root, stream, np.arange(m, dtype=np.uint64))
    delta = _perturbation_block(seeds, kind, d)
    scores = base[None, :] + alpha * delta
    winners = np.argmax(scores, axis=1)
    return np.bincount(winners, minlength=d).astype(np.int64)


def simplex_support_values(
    base: np.ndarray, alpha: float, root: int, index0: int, n: int, kind: int
) -> np.ndarray:
    """max(base + alpha * Delta_j) for sample indices index0..index0+n-1."""
    d = base.shape[0]
    idx = np.arange(index0, index0 + n, dtype=np.uint64)
    seeds = _derive_seed_vec(root, 0, idx)
    delta = _perturbation_block(seeds, kind, d)
    return np.max(base[None, :] + alpha * delta, axis=1)


def _power_start(seed: int, offset: int, side: int) -> np.ndarray:
    steps = (np.arange(offset + 1, offset + side + 1, dtype=np.uint64)) * np.uint64(
        GOLDEN
    )
    z = _mix_u64(np.uint64(seed & _MASK) + steps)
    u = ((z >> np.uint64(11)).astype(np.float64) + 0.5) * _U53
    return u - 0.5


def power_top(
    a: np.ndarray, tol: float, max_iter: int, seed: int
) -> tuple[float, np.ndarray, np.ndarray, int, bool]:
    """Top singular triple of ``a`` by power iteration on the smaller Gram.

    Returns (sigma, u, v, iterations, is_zero). The start vector is
    derived from ``seed`` so repeated calls are reproducible even when
    the top singular value is degenerate.
    """
    p, q = a.shape
    if not np.any(a):
        u = np.zeros(p)
        v = np.zeros(q)
        u[0] = 1.0
        v[0] = 1.0
        return 0.0, u, v, 0, True
    right = q <= p
    g = a.T @ a if right else a @ a.T
    side = q if right else p
    v = _power_start(seed, 0, side)
    v /= np.linalg.norm(v)
    it = 0
    for it in range(1, max_iter + 1):
        w = g @ v
        r = float(v @ w)
        resid = float(np.linalg.norm(w - r * v))
        if resid <= 0.5 * tol * r:
            break
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            break
        v = w / nw
    if right:
        uvec = a @ v
        sigma = float(np.linalg.norm(uvec))
        u = uvec / sigma if sigma > 0 else np.eye(p)[0]
        return sigma, u, v, it, False
    vvec = a.T @ v
    sigma = float(np.linalg.norm(vvec))
    vv = vvec / sigma if sigma > 0 else np.eye(q)[0]
    return sigma, v, vv, it, False


def _trace_batch(
    base: np.ndarray, alpha: float, seeds: np.ndarray, kind: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top singular triples of base + alpha * Delta_i for a seed batch.

    Solved exactly through an eigendecomposition of the smaller Gram
    matrix: perturbed directions routinely carry tightly clustered top
    singular values, which defeat iterative methods, and the Gram side
    is tiny. The compiled backend uses a cyclic Jacobi sweep for the
    same computation. The returned dyad u v^T is sign-invariant.
    """
    p, q = base.shape
    dim = p * q
    delta = _perturbation_block(seeds, kind, dim)
    c = base[None, :, :] + alpha * delta.reshape(-1, p, q)
    right = q <= p
    if right:
        g = np.matmul(np.transpose(c, (0, 2, 1)), c)
    else:
        g = np.matmul(c, np.transpose(c, (0, 2, 1)))
    _, evecs = np.linalg.eigh(g)
    top = evecs[:, :, -1]
    if right:
        uvec = np.matmul(c, top[:, :, None])[:, :, 0]
        sigma = np.linalg.norm(uvec, axis=1)
        u = uvec / np.where(sigma > 0, sigma, 1.0)[:, None]
        return sigma, u, top
    vvec = np.matmul(np.transpose(c, (0, 2, 1)), top[:, :, None])[:, :, 0]
    sigma = np.linalg.norm(vvec, axis=1)
    vv = vvec / np.where(sigma > 0, sigma, 1.0)[:, None]
    return sigma, top, vv


def trace_grad_sum(
    base: np.ndarray, alpha: float, root: int, stream: int, m: int, kind: int
) -> np.ndarray:
    """Sum over samples of the top singular dyad u_i v_i^T of base + alpha*Delta_i."""
    seeds = _derive_seed_vec(root, stream, np.arange(m, dtype=np.uint64))
    _, u, v = _trace_batch(base, alpha, seeds, kind)
    return np.einsum("ij,ik->jk", u, v)


def trace_support_values(
    base: np.ndarray, alpha: float, root: int, index0: int, n: int, kind: int
) -> np.ndarray:
    """sigma_1(base + alpha * Delta_j) for sample indices index0..index0+n-1."""
    idx = np.arange(index0, index0 + n, dtype=np.uint64)
    seeds = _derive_seed_vec(root, 0, idx)
    sigma, _, _ = _trace_batch(base, alpha, seeds, kind)
    return sigma
