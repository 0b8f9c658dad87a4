"""Backend selection for the counting kernels.

Prefers the compiled extension; falls back to the vectorized numpy
implementation when the extension was not built.  Both backends share the
count_zeros / exists_common_zero contract, and the test suite checks them
against each other.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from . import _kernels_py

try:  # pragma: no cover - exercised via either branch depending on the build
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover
    _impl = _kernels_py
    BACKEND = "numpy"

# m * p^2 must stay below 2^63 in the compiled accumulator
_P_LIMIT = 1 << 29


def _checked(p, nterms):
    if p >= _P_LIMIT:
        raise ValueError(f"prime {p} too large for the counting kernels")
    if nterms > 16:
        raise ValueError("too many monomials for the counting kernels")


def count_zeros(p, exps, coeffs, fixed=(), jobs=1):
    """Zeros of sum_i coeffs[i] prod_j x_j^{exps[i][j]} over {fixed} x F_p^free."""
    _checked(p, len(coeffs))
    nfree = len(exps[0]) - len(fixed)
    if jobs <= 1 or nfree == 0:
        return _impl.count_zeros(p, exps, coeffs, fixed)
    bounds = _split(p, jobs)
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        futs = [
            pool.submit(_impl.count_zeros, p, exps, coeffs, fixed, a, b)
            for a, b in bounds
        ]
        return sum(f.result() for f in futs)


def exists_common_zero(p, polys, fixed=(), jobs=1):
    """Whether all polynomials in polys vanish simultaneously somewhere."""
    _checked(p, max(len(c) for _, c in polys))
    nfree = len(polys[0][0][0]) - len(fixed)
    if jobs <= 1 or nfree == 0:
        return _impl.exists_common_zero(p, polys, fixed)
    bounds = _split(p, jobs)
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        futs = [
            pool.submit(_impl.exists_common_zero, p, polys, fixed, a, b)
            for a, b in bounds
        ]
        return any(f.result() for f in futs)


def _split(p, jobs):
    jobs = max(1, min(jobs, p))
    step = (p + jobs - 1) // jobs
    return [(a, min(a + step, p)) for a in range(0, p, step)]
