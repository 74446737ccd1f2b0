# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementation of the hot kernels.

Mirrors ``parafw._kernels_py`` function for function; see that module's
docstring for the stream layout contract shared by both backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, log, sin, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 GOLDEN_C = 0x9E3779B97F4A7C15ULL
cdef u64 GAMMA_STREAM = 0xC2B2AE3D27D4EB4FULL
cdef u64 GAMMA_INDEX = 0xD6E8FEB86659FD93ULL
cdef double TWO_PI = 6.283185307179586
cdef double U53 = 1.0 / 9007199254740992.0

GOLDEN = 0x9E3779B97F4A7C15
KIND_GUMBEL = 0
KIND_NORMAL = 1


cdef inline u64 _mix(u64 z) nogil:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z *= 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _stream_u(u64 seed, u64 j1) nogil:
    # draw number j1 (1-based) of the stream with the given seed
    return ((_mix(seed + j1 * GOLDEN_C) >> 11) + 0.5) * U53


cdef inline u64 _derive(u64 root, u64 stream, u64 index) nogil:
    cdef u64 h = _mix(root + GOLDEN_C)
    h = _mix(h ^ ((stream + 1) * GAMMA_STREAM))
    return _mix(h ^ ((index + 1) * GAMMA_INDEX))


def mix64(z):
    return int(_mix(<u64> (int(z) & 0xFFFFFFFFFFFFFFFF)))


def derive_seed(root, stream, index):
    return int(_derive(<u64> (int(root) & 0xFFFFFFFFFFFFFFFF),
                       <u64> (int(stream) & 0xFFFFFFFFFFFFFFFF),
                       <u64> (int(index) & 0xFFFFFFFFFFFFFFFF)))


def uniform_stream(seed, n):
    cdef Py_ssize_t i, nn = n
    cdef u64 s = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    out_arr = np.empty(nn, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(nn):
            out[i] = _stream_u(s, <u64> (i + 1))
    return out_arr


cdef inline void _fill_perturbation(u64 seed, int kind, Py_ssize_t dim,
                                    double* out) nogil:
    cdef Py_ssize_t t, npairs
    cdef double u1, u2, r, ang
    if kind == 0:
        for t in range(dim):
            out[t] = -log(-log(_stream_u(seed, <u64> (t + 1))))
    else:
        npairs = (dim + 1) // 2
        for t in range(npairs):
            u1 = _stream_u(seed, <u64> (2 * t + 1))
            u2 = _stream_u(seed, <u64> (2 * t + 2))
            r = sqrt(-2.0 * log(u1))
            ang = TWO_PI * u2
            out[2 * t] = r * cos(ang)
            if 2 * t + 1 < dim:
                out[2 * t + 1] = r * sin(ang)


def gumbel_stream(seed, n):
    cdef Py_ssize_t nn = n
    cdef u64 s = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    out_arr = np.empty(nn, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        _fill_perturbation(s, 0, nn, &out[0])
    return out_arr


def normal_stream(seed, n):
    cdef Py_ssize_t nn = n
    cdef u64 s = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    out_arr = np.empty(nn, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        _fill_perturbation(s, 1, nn, &out[0])
    return out_arr


def simplex_grad_counts(double[::1] base, double alpha, root, stream,
                        m, int kind):
    cdef Py_ssize_t d = base.shape[0]
    cdef Py_ssize_t i, j, mm = m
    cdef u64 rr = <u64> (int(root) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 ss = <u64> (int(stream) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 seed
    cdef double best, val
    cdef Py_ssize_t bj
    counts_arr = np.zeros(d, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef double* delta = <double*> malloc(d * sizeof(double))
    if delta == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(mm):
                seed = _derive(rr, ss, <u64> i)
                _fill_perturbation(seed, kind, d, delta)
                bj = 0
                best = base[0] + alpha * delta[0]
                for j in range(1, d):
                    val = base[j] + alpha * delta[j]
                    if val > best:
                        best = val
                        bj = j
                counts[bj] += 1
    finally:
        free(delta)
    return counts_arr


def simplex_support_values(double[::1] base, double alpha, root, index0,
                           n, int kind):
    cdef Py_ssize_t d = base.shape[0]
    cdef Py_ssize_t i, j, nn = n
    cdef u64 rr = <u64> (int(root) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 i0 = <u64> (int(index0) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 seed
    cdef double best, val
    out_arr = np.empty(nn, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double* delta = <double*> malloc(d * sizeof(double))
    if delta == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(nn):
                seed = _derive(rr, 0, i0 + <u64> i)
                _fill_perturbation(seed, kind, d, delta)
                best = base[0] + alpha * delta[0]
                for j in range(1, d):
                    val = base[j] + alpha * delta[j]
                    if val > best:
                        best = val
                out[i] = best
    finally:
        free(delta)
    return out_arr


cdef int _power_core(double* a, Py_ssize_t p, Py_ssize_t q, double tol,
                     int max_iter, u64 seed, u64 start_offset,
                     double* u_out, double* v_out, double* sigma_out,
                     double* g, double* v, double* w) nogil:
    """Top singular triple of the p x q matrix ``a`` (row-major).

    Scratch: g (side*side), v, w (side) with side = min(p, q).
    Returns the number of power steps taken, or -1 for the zero matrix.
    """
    cdef Py_ssize_t i, j, k, side
    cdef bint right = q <= p
    cdef double acc, r, resid, nw, sigma, nv
    cdef int it = 0
    cdef bint nonzero = 0
    for i in range(p * q):
        if a[i] != 0.0:
            nonzero = 1
            break
    if not nonzero:
        for i in range(p):
            u_out[i] = 0.0
        for i in range(q):
            v_out[i] = 0.0
        u_out[0] = 1.0
        v_out[0] = 1.0
        sigma_out[0] = 0.0
        return -1
    side = q if right else p
    if right:
        for i in range(q):
            for j in range(q):
                acc = 0.0
                for k in range(p):
                    acc += a[k * q + i] * a[k * q + j]
                g[i * side + j] = acc
    else:
        for i in range(p):
            for j in range(p):
                acc = 0.0
                for k in range(q):
                    acc += a[i * q + k] * a[j * q + k]
                g[i * side + j] = acc
    nv = 0.0
    for i in range(side):
        v[i] = _stream_u(seed, start_offset + <u64> (i + 1)) - 0.5
        nv += v[i] * v[i]
    nv = sqrt(nv)
    for i in range(side):
        v[i] /= nv
    for it in range(1, max_iter + 1):
        r = 0.0
        for i in range(side):
            acc = 0.0
            for j in range(side):
                acc += g[i * side + j] * v[j]
            w[i] = acc
            r += v[i] * acc
        resid = 0.0
        for i in range(side):
            acc = w[i] - r * v[i]
            resid += acc * acc
        resid = sqrt(resid)
        if resid <= 0.5 * tol * r:
            break
        nw = 0.0
        for i in range(side):
            nw += w[i] * w[i]
        nw = sqrt(nw)
        if nw == 0.0:
            break
        for i in range(side):
            v[i] = w[i] / nw
    if right:
        sigma = 0.0
        for i in range(p):
            acc = 0.0
            for k in range(q):
                acc += a[i * q + k] * v[k]
            u_out[i] = acc
            sigma += acc * acc
        sigma = sqrt(sigma)
        if sigma > 0.0:
            for i in range(p):
                u_out[i] /= sigma
        else:
            for i in range(p):
                u_out[i] = 0.0
            u_out[0] = 1.0
        for i in range(q):
            v_out[i] = v[i]
    else:
        sigma = 0.0
        for i in range(q):
            acc = 0.0
            for k in range(p):
                acc += a[k * q + i] * v[k]
            v_out[i] = acc
            sigma += acc * acc
        sigma = sqrt(sigma)
        if sigma > 0.0:
            for i in range(q):
                v_out[i] /= sigma
        else:
            for i in range(q):
                v_out[i] = 0.0
            v_out[0] = 1.0
        for i in range(p):
            u_out[i] = v[i]
    sigma_out[0] = sigma
    return it


def power_top(double[:, ::1] a, double tol, int max_iter, seed):
    cdef Py_ssize_t p = a.shape[0]
    cdef Py_ssize_t q = a.shape[1]
    cdef Py_ssize_t side = q if q <= p else p
    cdef u64 s = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    u_arr = np.empty(p, dtype=np.float64)
    v_arr = np.empty(q, dtype=np.float64)
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef double sigma = 0.0
    cdef int it
    cdef double* scratch = <double*> malloc((side * side + 2 * side) * sizeof(double))
    if scratch == NULL:
        raise MemoryError()
    try:
        with nogil:
            it = _power_core(&a[0, 0], p, q, tol, max_iter, s, 0,
                             &u[0], &v[0], &sigma,
                             scratch, scratch + side * side,
                             scratch + side * side + side)
    finally:
        free(scratch)
    if it < 0:
        return 0.0, u_arr, v_arr, 0, True
    return sigma, u_arr, v_arr, it, False


cdef void _jacobi_top(double* g, Py_ssize_t nn, double* vmat, double* top) nogil:
    """Top eigenvector of the symmetric nn x nn matrix g (destroyed).

    Cyclic Jacobi with standard stable rotations; converges to machine
    precision in a handful of sweeps at these sizes, which clustered
    spectra cannot stall (unlike power iteration). vmat is nn*nn
    scratch; the eigenvector of the largest eigenvalue lands in top.
    """
    cdef Py_ssize_t i, j, k, sweep, best
    cdef double off, gij, theta, t, cph, sph, gik, gjk, vki, vkj, scale
    for i in range(nn * nn):
        vmat[i] = 0.0
    for i in range(nn):
        vmat[i * nn + i] = 1.0
    scale = 0.0
    for i in range(nn):
        for j in range(nn):
            scale += g[i * nn + j] * g[i * nn + j]
    if scale == 0.0:
        for i in range(nn):
            top[i] = 0.0
        top[0] = 1.0
        return
    for sweep in range(50):
        off = 0.0
        for i in range(nn - 1):
            for j in range(i + 1, nn):
                off += g[i * nn + j] * g[i * nn + j]
        if off <= 1e-30 * scale:
            break
        for i in range(nn - 1):
            for j in range(i + 1, nn):
                gij = g[i * nn + j]
                if gij == 0.0:
                    continue
                theta = (g[j * nn + j] - g[i * nn + i]) / (2.0 * gij)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                cph = 1.0 / sqrt(1.0 + t * t)
                sph = t * cph
                g[i * nn + i] -= t * gij
                g[j * nn + j] += t * gij
                g[i * nn + j] = 0.0
                g[j * nn + i] = 0.0
                for k in range(nn):
                    if k != i and k != j:
                        gik = g[i * nn + k]
                        gjk = g[j * nn + k]
                        g[i * nn + k] = cph * gik - sph * gjk
                        g[k * nn + i] = g[i * nn + k]
                        g[j * nn + k] = sph * gik + cph * gjk
                        g[k * nn + j] = g[j * nn + k]
                for k in range(nn):
                    vki = vmat[k * nn + i]
                    vkj = vmat[k * nn + j]
                    vmat[k * nn + i] = cph * vki - sph * vkj
                    vmat[k * nn + j] = sph * vki + cph * vkj
    best = 0
    for i in range(1, nn):
        if g[i * nn + i] > g[best * nn + best]:
            best = i
    for i in range(nn):
        top[i] = vmat[i * nn + best]


cdef void _trace_top(double* c, Py_ssize_t p, Py_ssize_t q,
                     double* g, double* vmat, double* v,
                     double* u_out, double* v_out, double* sigma_out) nogil:
    """Top singular triple of the p x q matrix c via the smaller Gram."""
    cdef Py_ssize_t i, j, k, side
    cdef bint right = q <= p
    cdef double acc, sigma
    side = q if right else p
    if right:
        for i in range(q):
            for j in range(q):
                acc = 0.0
                for k in range(p):
                    acc += c[k * q + i] * c[k * q + j]
                g[i * side + j] = acc
    else:
        for i in range(p):
            for j in range(p):
                acc = 0.0
                for k in range(q):
                    acc += c[i * q + k] * c[j * q + k]
                g[i * side + j] = acc
    _jacobi_top(g, side, vmat, v)
    if right:
        sigma = 0.0
        for i in range(p):
            acc = 0.0
            for k in range(q):
                acc += c[i * q + k] * v[k]
            u_out[i] = acc
            sigma += acc * acc
        sigma = sqrt(sigma)
        if sigma > 0.0:
            for i in range(p):
                u_out[i] /= sigma
        else:
            for i in range(p):
                u_out[i] = 0.0
            u_out[0] = 1.0
        for i in range(q):
            v_out[i] = v[i]
    else:
        sigma = 0.0
        for i in range(q):
            acc = 0.0
            for k in range(p):
                acc += c[k * q + i] * v[k]
            v_out[i] = acc
            sigma += acc * acc
        sigma = sqrt(sigma)
        if sigma > 0.0:
            for i in range(q):
                v_out[i] /= sigma
        else:
            for i in range(q):
                v_out[i] = 0.0
            v_out[0] = 1.0
        for i in range(p):
            u_out[i] = v[i]
    sigma_out[0] = sigma


def trace_grad_sum(double[:, ::1] base, double alpha, root, stream,
                   m, int kind):
    cdef Py_ssize_t p = base.shape[0]
    cdef Py_ssize_t q = base.shape[1]
    cdef Py_ssize_t side = q if q <= p else p
    cdef Py_ssize_t dim = p * q
    cdef Py_ssize_t i, j, k, mm = m
    cdef u64 rr = <u64> (int(root) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 ss = <u64> (int(stream) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 seed
    cdef double sigma = 0.0
    gsum_arr = np.zeros((p, q), dtype=np.float64)
    cdef double[:, ::1] gsum = gsum_arr
    cdef double* buf = <double*> malloc(
        (2 * dim + 2 * side * side + side + p + q) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* c = buf
    cdef double* delta = buf + dim
    cdef double* g = buf + 2 * dim
    cdef double* vmat = g + side * side
    cdef double* v = vmat + side * side
    cdef double* uo = v + side
    cdef double* vo = uo + p
    cdef double* bptr = &base[0, 0]
    try:
        with nogil:
            for i in range(mm):
                seed = _derive(rr, ss, <u64> i)
                _fill_perturbation(seed, kind, dim, delta)
                for j in range(dim):
                    c[j] = bptr[j] + alpha * delta[j]
                _trace_top(c, p, q, g, vmat, v, uo, vo, &sigma)
                for j in range(p):
                    for k in range(q):
                        gsum[j, k] += uo[j] * vo[k]
    finally:
        free(buf)
    return gsum_arr


def trace_support_values(double[:, ::1] base, double alpha, root, index0,
                         n, int kind):
    cdef Py_ssize_t p = base.shape[0]
    cdef Py_ssize_t q = base.shape[1]
    cdef Py_ssize_t side = q if q <= p else p
    cdef Py_ssize_t dim = p * q
    cdef Py_ssize_t i, j, nn = n
    cdef u64 rr = <u64> (int(root) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 i0 = <u64> (int(index0) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 seed
    cdef double sigma = 0.0
    out_arr = np.empty(nn, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double* buf = <double*> malloc(
        (2 * dim + 2 * side * side + side + p + q) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* c = buf
    cdef double* delta = buf + dim
    cdef double* g = buf + 2 * dim
    cdef double* vmat = g + side * side
    cdef double* v = vmat + side * side
    cdef double* uo = v + side
    cdef double* vo = uo + p
    cdef double* bptr = &base[0, 0]
    try:
        with nogil:
            for i in range(nn):
                seed = _derive(rr, 0, i0 + <u64> i)
                _fill_perturbation(seed, kind, dim, delta)
                for j in range(dim):
                    c[j] = bptr[j] + alpha * delta[j]
                _trace_top(c, p, q, g, vmat, v, uo, vo, &sigma)
                out[i] = sigma
    finally:
        free(buf)
    return out_arr
