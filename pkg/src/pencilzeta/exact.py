"""Exact integer and rational linear algebra for small matrices.

Everything here works on plain lists of Python ints / Fractions; the
matrices involved (exponent matrices, lattice presentations) are at most
a handful of rows, so asymptotics are irrelevant and exactness is the
whole point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def mat_det(A) -> int:
    """Determinant of a square integer matrix, exact."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    assert det.denominator == 1
    return int(det)


def mat_inv(A):
    """Inverse of a square matrix as a matrix of Fractions."""
    n = len(A)
    M = [
        [Fraction(A[i][j]) for j in range(n)]
        + [Fraction(1 if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def solve_ones(A):
    """Solve A x = (1, ..., 1) over the rationals."""
    inv = mat_inv(A)
    n = len(A)
    return [sum(inv[i][j] for j in range(n)) for i in range(n)]


def hnf_basis(rows):
    """Row-style Hermite basis of the lattice spanned by integer rows.

    Returns a list of independent rows in echelon form; callers here always
    pass full-rank generating sets (they include a multiple of the identity).
    """
    M = [list(r) for r in rows]
    ncols = len(M[0])
    pivot_row = 0
    for col in range(ncols):
        piv = next((r for r in range(pivot_row, len(M)) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[pivot_row], M[piv] = M[piv], M[pivot_row]
        while True:
            reduced = True
            for r in range(pivot_row + 1, len(M)):
                if M[r][col]:
                    q = M[r][col] // M[pivot_row][col]
                    M[r] = [a - q * b for a, b in zip(M[r], M[pivot_row])]
                    if M[r][col]:
                        M[pivot_row], M[r] = M[r], M[pivot_row]
                        reduced = False
            if reduced:
                break
        if M[pivot_row][col] < 0:
            M[pivot_row] = [-x for x in M[pivot_row]]
        # reduce rows above the pivot for a canonical form
        for r in range(pivot_row):
            q = M[r][col] // M[pivot_row][col]
            if q:
                M[r] = [a - q * b for a, b in zip(M[r], M[pivot_row])]
        pivot_row += 1
    return M[:pivot_row]


def snf_diagonal(M):
    """Diagonal of the Smith normal form of an integer matrix (nonzero part)."""
    M = [list(r) for r in M]
    if not M or not M[0]:
        return []
    nrows, ncols = len(M), len(M[0])
    diag = []
    s = 0
    while s < min(nrows, ncols):
        piv = None
        for i in range(s, nrows):
            for j in range(s, ncols):
                if M[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        M[s], M[i] = M[i], M[s]
        for row in M:
            row[s], row[j] = row[j], row[s]
        while True:
            clean = True
            for i in range(s + 1, nrows):
                if M[i][s]:
                    q = M[i][s] // M[s][s]
                    M[i] = [a - q * b for a, b in zip(M[i], M[s])]
                    if M[i][s]:
                        M[s], M[i] = M[i], M[s]
                        clean = False
            for j in range(s + 1, ncols):
                if M[s][j]:
                    q = M[s][j] // M[s][s]
                    for row in M:
                        row[j] -= q * row[s]
                    if M[s][j]:
                        for row in M:
                            row[s], row[j] = row[j], row[s]
                        clean = False
            if clean:
                break
        pivot = abs(M[s][s])
        # enforce divisibility: fold in any entry the pivot does not divide
        offender = None
        for i in range(s + 1, nrows):
            for j in range(s + 1, ncols):
                if M[i][j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            M[s] = [a + b for a, b in zip(M[s], M[offender])]
            continue
        diag.append(pivot)
        s += 1
    return diag


def abelian_invariants(diag):
    """Nontrivial invariant factors d1 | d2 | ... from an SNF diagonal."""
    return tuple(d for d in diag if d not in (0, 1))


def quotient_invariants(sub_lattice, big_lattice):
    """Invariant factors of big/sub for full-rank integer lattices sub <= big.

    Lattices are given by generating rows; both must be full rank in Z^n.
    """
    B = hnf_basis(big_lattice)
    S = hnf_basis(sub_lattice)
    n = len(B)
    if len(S) != n:
        raise ValueError("sublattice is not full rank")
    Binv = mat_inv(B)
    C = []
    for row in S:
        out = []
        for j in range(n):
            x = sum(Fraction(row[k]) * Binv[k][j] for k in range(n))
            if x.denominator != 1:
                raise ValueError("not a sublattice")
            out.append(int(x))
        C.append(out)
    return abelian_invariants(snf_diagonal(C))


def primitive_vector(v):
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    return [x // g for x in v]


def lcm_of(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, v)
    return out
