"""Vectorized (numpy) counting kernels over prime fields.

This is the fallback backend; pencilzeta._kernels provides the same two
entry points compiled with Cython.  Both count exact zeros of

    F(x) = sum_i coeffs[i] * prod_j x_j^{exps[i][j]}   (mod p)

over a coordinate box with an optional fixed prefix.  The enumeration is
chunked over the first free coordinate via (start, stop) so callers can
partition work; results are independent of the partitioning.
"""
from __future__ import annotations

import numpy as np

BACKEND = "numpy"

# vectorize over at most this many trailing coordinates at once
_GRID_VARS = 3


def _pow_tables(p, exps):
    """pow_tables[i][j][x] = x**exps[i][j] mod p."""
    x = np.arange(p, dtype=np.int64)
    tables = []
    for row in exps:
        tables.append([_powmod_vec(x, e, p) for e in row])
    return tables


def _powmod_vec(x, e, p):
    out = np.ones_like(x)
    base = x % p
    e = int(e)
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def count_zeros(p, exps, coeffs, fixed=(), start=0, stop=None):
    """Count zeros over {fixed} x [start, stop) x F_p^(nfree-1)."""
    exps = [list(map(int, row)) for row in exps]
    coeffs = [int(c) % p for c in coeffs]
    k = len(exps[0])
    nfixed = len(fixed)
    nfree = k - nfixed
    if stop is None:
        stop = p if nfree else 1
    if nfree == 0:
        val = 0
        for c, row in zip(coeffs, exps):
            term = c
            for j, e in enumerate(row):
                term = term * pow(int(fixed[j]), e, p) % p
            val = (val + term) % p
        return int(val == 0)
    tables = _pow_tables(p, exps)
    m = len(exps)
    # scalar part from the fixed prefix
    prefix = [1] * m
    for i in range(m):
        c = coeffs[i]
        for j, v in enumerate(fixed):
            c = c * int(tables[i][j][int(v) % p]) % p
        prefix[i] = c

    gvars = list(range(k - min(nfree, _GRID_VARS), k))
    lead = list(range(nfixed, k - len(gvars)))

    # grid per monomial over the vectorized coordinates, built lazily per call
    shape = (p,) * len(gvars)

    def grid_of(i, chunk0=None):
        g = None
        for axis, j in enumerate(gvars):
            t = tables[i][j]
            if chunk0 is not None and j == gvars[0]:
                t = t[chunk0]
            cur_shape = [1] * len(gvars)
            cur_shape[axis] = -1
            t = t.reshape(cur_shape)
            g = t if g is None else (g * t) % p
        return g

    total = 0
    if not lead:
        # first free coordinate is a grid coordinate; apply (start, stop) there
        chunk0 = np.arange(start, stop)
        acc = np.zeros((len(chunk0),) + shape[1:], dtype=np.int64)
        for i in range(m):
            if prefix[i] == 0:
                continue
            acc += prefix[i] * grid_of(i, chunk0)
        return int(np.count_nonzero(acc % p == 0))

    # odometer over lead coordinates; first lead coordinate ranges [start, stop)
    grids = [grid_of(i) for i in range(m)]
    for idx in _odometer(len(lead), p, start, stop):
        acc = np.zeros(shape, dtype=np.int64)
        for i in range(m):
            c = prefix[i]
            if c:
                for pos, j in enumerate(lead):
                    c = c * int(tables[i][j][idx[pos]]) % p
            if c:
                acc += c * grids[i]
        total += int(np.count_nonzero(acc % p == 0))
    return total


def _odometer(ndigits, p, start, stop):
    """All index tuples with digit 0 in [start, stop) and the rest in [0, p)."""
    idx = [start] + [0] * (ndigits - 1)
    if start >= stop:
        return
    while True:
        yield idx
        pos = ndigits - 1
        while True:
            idx[pos] += 1
            if idx[pos] < (stop if pos == 0 else p):
                break
            if pos == 0:
                return
            idx[pos] = 0
            pos -= 1


def exists_common_zero(p, polys, fixed=(), start=0, stop=None):
    """True if some point in the box zeroes every polynomial in polys.

    polys is a list of (exps, coeffs) pairs over the same variables.
    """
    polys = [
        ([list(map(int, r)) for r in exps], [int(c) % p for c in coeffs])
        for exps, coeffs in polys
    ]
    k = len(polys[0][0][0])
    nfixed = len(fixed)
    nfree = k - nfixed
    if stop is None:
        stop = p if nfree else 1
    if nfree == 0:
        for exps, coeffs in polys:
            val = 0
            for c, row in zip(coeffs, exps):
                term = c
                for j, e in enumerate(row):
                    term = term * pow(int(fixed[j]), e, p) % p
                val = (val + term) % p
            if val:
                return False
        return True

    all_tables = [_pow_tables(p, exps) for exps, _ in polys]
    gvars = list(range(k - min(nfree, _GRID_VARS), k))
    lead = list(range(nfixed, k - len(gvars)))
    shape_len = len(gvars)

    def value_grid(pi, lead_idx, chunk0):
        exps, coeffs = polys[pi]
        tables = all_tables[pi]
        acc = None
        for i in range(len(exps)):
            c = coeffs[i]
            for j, v in enumerate(fixed):
                c = c * int(tables[i][j][int(v) % p]) % p
            for pos, j in enumerate(lead):
                c = c * int(tables[i][j][lead_idx[pos]]) % p
            if c == 0:
                continue
            g = None
            for axis, j in enumerate(gvars):
                t = tables[i][j]
                if chunk0 is not None and j == gvars[0]:
                    t = t[chunk0]
                cur_shape = [1] * shape_len
                cur_shape[axis] = -1
                g = t.reshape(cur_shape) if g is None else (g * t.reshape(cur_shape)) % p
            acc = c * g if acc is None else acc + c * g
        if acc is None:
            return None  # identically zero on this slice
        return acc % p

    chunk0 = np.arange(start, stop) if not lead else None

    def scan(lead_idx):
        mask = None
        for pi in range(len(polys)):
            vals = value_grid(pi, lead_idx, chunk0)
            if vals is None:
                continue
            cur = vals == 0
            mask = cur if mask is None else (mask & cur)
            if not mask.any():
                return False
        return True if mask is None else bool(mask.any())

    if not lead:
        return scan([])
    for idx in _odometer(len(lead), p, start, stop):
        if scan(idx):
            return True
    return False
