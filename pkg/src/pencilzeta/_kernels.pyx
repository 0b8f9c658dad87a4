# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled counting kernels over prime fields.

Same contract as pencilzeta._kernels_py: exact zero counts of integer
exponent-vector polynomials over a coordinate box, chunked over the first
free coordinate.  Loops run without the GIL so callers can thread chunks.

Overflow guard: callers ensure m * p^2 < 2^63 (enforced in kernels.py).
"""
import numpy as np


cdef long _count_rec(const long[:, :, ::1] pt, long[:, ::1] part,
                     int depth, int k, int m, long p,
                     long start, long stop) noexcept nogil:
    cdef long total = 0
    cdef long x
    cdef int i
    cdef long acc
    if depth == k - 1:
        for x in range(start, stop):
            acc = 0
            for i in range(m):
                acc += part[depth, i] * pt[i, depth, x]
            if acc % p == 0:
                total += 1
        return total
    for x in range(start, stop):
        for i in range(m):
            part[depth + 1, i] = part[depth, i] * pt[i, depth, x] % p
        total += _count_rec(pt, part, depth + 1, k, m, p, 0, p)
    return total


def count_zeros(p, exps, coeffs, fixed=(), start=0, stop=None):
    """Count zeros over {fixed} x [start, stop) x F_p^(nfree-1)."""
    cdef long pp = p
    exps_arr = np.asarray(exps, dtype=np.int64)
    coeffs_arr = np.asarray([int(c) % p for c in coeffs], dtype=np.int64)
    cdef int m = exps_arr.shape[0]
    cdef int k = exps_arr.shape[1]
    cdef int nfixed = len(fixed)
    cdef int nfree = k - nfixed
    if stop is None:
        stop = p if nfree else 1
    if nfree == 0:
        val = 0
        for i in range(m):
            term = int(coeffs_arr[i])
            for j in range(k):
                term = term * pow(int(fixed[j]), int(exps_arr[i, j]), p) % p
            val = (val + term) % p
        return 1 if val == 0 else 0

    x = np.arange(p, dtype=np.int64)
    pt_np = np.empty((m, nfree, p), dtype=np.int64)
    part_np = np.zeros((nfree, m), dtype=np.int64)
    for i in range(m):
        c = int(coeffs_arr[i])
        for j in range(nfixed):
            c = c * pow(int(fixed[j]), int(exps_arr[i, j]), p) % p
        part_np[0, i] = c
        for j in range(nfree):
            e = int(exps_arr[i, nfixed + j])
            pt_np[i, j] = _powmod_vec(x, e, p)

    cdef const long[:, :, ::1] pt = pt_np
    cdef long[:, ::1] part = part_np
    cdef long lo = start, hi = stop
    cdef long result
    with nogil:
        result = _count_rec(pt, part, 0, nfree, m, pp, lo, hi)
    return int(result)


def exists_common_zero(p, polys, fixed=(), start=0, stop=None):
    """True if some point zeroes every (exps, coeffs) polynomial in polys."""
    cdef long pp = p
    prepared = []
    for exps, coeffs in polys:
        prepared.append(
            (np.asarray(exps, dtype=np.int64),
             np.asarray([int(c) % p for c in coeffs], dtype=np.int64))
        )
    cdef int k = prepared[0][0].shape[1]
    cdef int nfixed = len(fixed)
    cdef int nfree = k - nfixed
    if stop is None:
        stop = p if nfree else 1
    if nfree == 0:
        for exps_arr, coeffs_arr in prepared:
            val = 0
            for i in range(exps_arr.shape[0]):
                term = int(coeffs_arr[i])
                for j in range(k):
                    term = term * pow(int(fixed[j]), int(exps_arr[i, j]), p) % p
                val = (val + term) % p
            if val != 0:
                return False
        return True

    cdef int npolys = len(prepared)
    cdef int mmax = max(e.shape[0] for e, _ in prepared)
    x = np.arange(p, dtype=np.int64)
    pt_np = np.zeros((npolys, mmax, nfree, p), dtype=np.int64)
    part_np = np.zeros((npolys, nfree, mmax), dtype=np.int64)
    mcounts_np = np.zeros(npolys, dtype=np.int64)
    for pi, (exps_arr, coeffs_arr) in enumerate(prepared):
        mcounts_np[pi] = exps_arr.shape[0]
        for i in range(exps_arr.shape[0]):
            c = int(coeffs_arr[i])
            for j in range(nfixed):
                c = c * pow(int(fixed[j]), int(exps_arr[i, j]), p) % p
            part_np[pi, 0, i] = c
            for j in range(nfree):
                pt_np[pi, i, j] = _powmod_vec(x, int(exps_arr[i, nfixed + j]), p)

    cdef const long[:, :, :, ::1] pt = pt_np
    cdef long[:, :, ::1] part = part_np
    cdef const long[:] mcounts = mcounts_np
    cdef long lo = start, hi = stop
    cdef int found
    with nogil:
        found = _exists_rec2(pt, part, mcounts, npolys, 0, nfree, pp, lo, hi)
    return bool(found)


cdef int _exists_rec2(const long[:, :, :, ::1] pt, long[:, :, ::1] part,
                      const long[:] mcounts, int npolys,
                      int depth, int k, long p,
                      long start, long stop) noexcept nogil:
    cdef long x
    cdef int i, pi, ok
    cdef long acc
    if depth == k - 1:
        for x in range(start, stop):
            ok = 1
            for pi in range(npolys):
                acc = 0
                for i in range(mcounts[pi]):
                    acc += part[pi, depth, i] * pt[pi, i, depth, x]
                if acc % p != 0:
                    ok = 0
                    break
            if ok:
                return 1
        return 0
    for x in range(start, stop):
        for pi in range(npolys):
            for i in range(mcounts[pi]):
                part[pi, depth + 1, i] = part[pi, depth, i] * pt[pi, i, depth, x] % p
        if _exists_rec2(pt, part, mcounts, npolys, depth + 1, k, p, 0, p):
            return 1
    return 0


def _powmod_vec(x, e, p):
    out = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out
