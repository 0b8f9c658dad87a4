"""Invertible polynomial combinatorics.

A polynomial F_A = sum_i prod_j x_j^{a_ij} is described by its square
exponent matrix A (one row per monomial).  This module computes weight
systems, the Calabi-Yau test, the Fermat/loop/chain decomposition, the
transposed (mirror) matrix and its dual weights, and the diagonal symmetry
groups Aut, SL, J together with the SL/J quotient.

All arithmetic is exact (ints and Fractions).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import CapExceeded, ValidationError
from . import exact

GROUP_ORDER_CAP = 1_000_000


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0 or any(len(r) != n for r in self.rows):
            raise ValidationError("exponent matrix must be square and nonempty")
        if any(x < 0 for r in self.rows for x in r):
            raise ValidationError("exponents must be nonnegative")

    @staticmethod
    def from_lists(rows) -> "ExponentMatrix":
        return ExponentMatrix(tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def n(self) -> int:
        """Number of variables (and monomials)."""
        return len(self.rows)

    def det(self) -> int:
        return exact.mat_det(self.rows)

    def transpose(self) -> "ExponentMatrix":
        n = self.n
        return ExponentMatrix(tuple(tuple(self.rows[j][i] for j in range(n)) for i in range(n)))

    def permuted(self, perm) -> "ExponentMatrix":
        """Simultaneous row/column permutation: variable i becomes perm[i]."""
        n = self.n
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        return ExponentMatrix(
            tuple(tuple(self.rows[inv[i]][inv[j]] for j in range(n)) for i in range(n))
        )

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.rows) + "]"


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple[int, ...]
    degree: int

    def __iter__(self):
        return iter(self.weights)

    @property
    def total(self) -> int:
        return sum(self.weights)


@dataclass(frozen=True)
class AtomicBlock:
    kind: str  # "fermat" | "loop" | "chain"
    variables: tuple[int, ...]
    exponents: tuple[int, ...]

    def canonical_key(self):
        """Permutation-invariant key; loop exponent cycles up to rotation."""
        if self.kind != "loop":
            return (self.kind, self.exponents)
        seq = self.exponents
        best = min(seq[s:] + seq[:s] for s in range(len(seq)))
        return ("loop", best)


@dataclass(frozen=True)
class AtomicDecomposition:
    blocks: tuple[AtomicBlock, ...]

    def key(self):
        return tuple(sorted(b.canonical_key() for b in self.blocks))


@dataclass(frozen=True)
class DiagonalSymmetry:
    """Diagonal torus element written as its phase vector, entries in [0,1)."""

    xi: tuple[Fraction, ...]

    @staticmethod
    def of(values) -> "DiagonalSymmetry":
        return DiagonalSymmetry(tuple(Fraction(v) % 1 for v in values))

    @property
    def age(self) -> Fraction:
        return sum(self.xi, Fraction(0))

    def is_narrow(self) -> bool:
        return all(x != 0 for x in self.xi)

    def __add__(self, other: "DiagonalSymmetry") -> "DiagonalSymmetry":
        return DiagonalSymmetry(tuple((a + b) % 1 for a, b in zip(self.xi, other.xi)))


@dataclass(frozen=True)
class SymmetryGroup:
    elements: frozenset[DiagonalSymmetry]
    abelian_invariants: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def weights(A: ExponentMatrix) -> WeightSystem:
    """The primitive positive integer solution of A r = d * (1,...,1)."""
    if A.det() == 0:
        raise ValidationError("exponent matrix is singular")
    x = exact.solve_ones(A.rows)
    if any(v <= 0 for v in x):
        raise ValidationError("no positive weight system exists")
    d = exact.lcm_of(v.denominator for v in x)
    r = [int(v * d) for v in x]
    g = d
    for v in r:
        g = gcd(g, v)
    return WeightSystem(tuple(v // g for v in r), d // g)


def is_calabi_yau(A: ExponentMatrix) -> bool:
    w = weights(A)
    return w.degree == w.total


def transpose_mirror(A: ExponentMatrix) -> tuple[ExponentMatrix, WeightSystem]:
    """The transposed matrix and its (dual) weight system."""
    At = A.transpose()
    return At, weights(At)


def atomic_decomposition(A: ExponentMatrix) -> AtomicDecomposition:
    """Exhibit A as a disjoint union of Fermat/loop/chain atoms.

    Each monomial is matched to a "main" variable; a two-variable monomial
    x_main^a * x_other feeds its other variable with exponent exactly 1.
    The feed edges must then form disjoint simple cycles (loops) and paths
    terminating in a power monomial (chains); isolated power monomials are
    Fermat atoms.
    """
    n = A.n
    candidates = []
    for i, row in enumerate(A.rows):
        nz = [(j, e) for j, e in enumerate(row) if e]
        if not nz:
            raise ValidationError(f"monomial {i} is empty")
        if len(nz) > 2:
            raise ValidationError(f"monomial {i} involves more than two variables")
        if len(nz) == 1:
            candidates.append([(nz[0][0], None)])
        else:
            (j, ej), (k, ek) = nz
            opts = []
            if ek == 1:
                opts.append((j, k))
            if ej == 1:
                opts.append((k, j))
            if not opts:
                raise ValidationError(
                    f"monomial {i} has no unit exponent to feed a neighbor"
                )
            candidates.append(opts)

    order = sorted(range(n), key=lambda i: len(candidates[i]))

    def matchings(pos, taken, rowmap):
        if pos == n:
            yield dict(rowmap)
            return
        i = order[pos]
        for main, fed in candidates[i]:
            if main in taken:
                continue
            taken.add(main)
            rowmap[i] = (main, fed)
            yield from matchings(pos + 1, taken, rowmap)
            taken.remove(main)
            del rowmap[i]

    last_error = ValidationError("no consistent monomial-to-variable assignment exists")
    for rowmap in matchings(0, set(), {}):
        try:
            return _blocks_from_matching(A, rowmap)
        except ValidationError as exc:
            last_error = exc
    raise last_error


def _blocks_from_matching(A: ExponentMatrix, rowmap) -> AtomicDecomposition:
    n = A.n
    feed = {}
    exponent_of = {}
    for i, (main, fed) in rowmap.items():
        feed[main] = fed
        exponent_of[main] = A.rows[i][main]

    indegree = {v: 0 for v in range(n)}
    for fed in feed.values():
        if fed is not None:
            indegree[fed] += 1
    if any(c > 1 for c in indegree.values()):
        raise ValidationError("a variable is fed by two monomials; not atomic")

    blocks = []
    seen = set()
    # chains (and Fermat atoms) start at in-degree-0 variables
    for start in range(n):
        if start in seen or indegree[start] != 0:
            continue
        path = [start]
        seen.add(start)
        cur = start
        while feed[cur] is not None:
            cur = feed[cur]
            if cur in seen:
                raise ValidationError("feed edges are not disjoint paths and cycles")
            path.append(cur)
            seen.add(cur)
        kind = "fermat" if len(path) == 1 else "chain"
        blocks.append(
            AtomicBlock(kind, tuple(path), tuple(exponent_of[v] for v in path))
        )
    # remaining variables lie on cycles
    for start in range(n):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        cur = feed[start]
        while cur != start:
            if cur is None or cur in seen:
                raise ValidationError("feed edges are not disjoint paths and cycles")
            cyc.append(cur)
            seen.add(cur)
            cur = feed[cur]
        blocks.append(
            AtomicBlock("loop", tuple(cyc), tuple(exponent_of[v] for v in cyc))
        )
    return AtomicDecomposition(tuple(blocks))


def validate_invertible(A: ExponentMatrix) -> tuple[WeightSystem, AtomicDecomposition]:
    """det != 0, positive weights, and atomic decomposition all hold."""
    if A.det() == 0:
        raise ValidationError("exponent matrix is singular")
    w = weights(A)
    dec = atomic_decomposition(A)
    return w, dec


def aut_group(A: ExponentMatrix) -> SymmetryGroup:
    """Diagonal symmetries: closure of the columns of A^{-1} modulo 1."""
    D = abs(A.det())
    if D == 0:
        raise ValidationError("exponent matrix is singular")
    if D > GROUP_ORDER_CAP:
        raise CapExceeded(f"|det A| = {D} exceeds group cap {GROUP_ORDER_CAP}")
    n = A.n
    inv = exact.mat_inv(A.rows)
    # integer coordinates D*xi mod D; all denominators divide D = |det A|
    gens = []
    for j in range(n):
        g = tuple(int((inv[i][j] % 1) * D) for i in range(n))
        gens.append(g)
    zero = (0,) * n
    elems = {zero}
    frontier = [zero]
    while frontier:
        e = frontier.pop()
        for g in gens:
            s = tuple((a + b) % D for a, b in zip(e, g))
            if s not in elems:
                elems.add(s)
                frontier.append(s)
    invariants = exact.abelian_invariants(exact.snf_diagonal([list(r) for r in A.rows]))
    group = SymmetryGroup(
        frozenset(
            DiagonalSymmetry(tuple(Fraction(x, D) for x in e)) for e in elems
        ),
        invariants,
    )
    assert group.order == D, "closure does not match |det A|"
    return group


def _lattice_of(elements, D, n):
    rows = [[int(x * D) for x in e.xi] for e in elements]
    rows += [[D if i == j else 0 for j in range(n)] for i in range(n)]
    return rows


def sl_j_quotient(A: ExponentMatrix):
    """The subgroup SL (age integral), the subgroup J, and SL/J invariants."""
    w = weights(A)
    aut = aut_group(A)
    n = A.n
    D = abs(A.det())
    sl_elems = frozenset(e for e in aut.elements if e.age.denominator == 1)
    j_gen = DiagonalSymmetry.of(Fraction(r, w.degree) for r in w.weights)
    j_elems = {j_gen}
    cur = j_gen
    while cur.xi != tuple(Fraction(0) for _ in range(n)):
        cur = cur + j_gen
        j_elems.add(cur)
    j_elems = frozenset(j_elems)
    if not j_elems <= sl_elems:
        raise ValidationError("J is not contained in SL; weights are inconsistent")
    L_sl = _lattice_of(sl_elems, D, n)
    L_j = _lattice_of(j_elems, D, n)
    scaled_identity = [[D if i == j else 0 for j in range(n)] for i in range(n)]
    quotient_inv = exact.quotient_invariants(L_j, L_sl)
    sl = SymmetryGroup(
        sl_elems, exact.quotient_invariants(scaled_identity, L_sl)
    )
    jg = SymmetryGroup(j_elems, (len(j_elems),) if len(j_elems) > 1 else ())
    return sl, jg, quotient_inv


def xi_set(A: ExponentMatrix):
    """Age-one combinations (A^T)^{-1} v with v >= 1 integral.

    Enumerates v with sum r_j v_j = d (equivalent to age one); returns the
    vectors whose coordinates all lie in [0, 1], plus the list of excluded
    vectors with a coordinate outside that range.
    """
    w = weights(A)
    r, d = w.weights, w.degree
    n = A.n
    At_inv = exact.mat_inv(A.transpose().rows)
    solutions = []

    def rec(j, remaining, v):
        if j == n - 1:
            if remaining >= r[j] and remaining % r[j] == 0:
                solutions.append(v + [remaining // r[j]])
            return
        tail_min = sum(r[j + 1 :])
        vj = 1
        while r[j] * vj + tail_min <= remaining:
            rec(j + 1, remaining - r[j] * vj, v + [vj])
            vj += 1

    rec(0, d, [])
    kept, excluded = [], []
    for v in solutions:
        xi = tuple(
            sum(At_inv[i][j] * v[j] for j in range(n)) for i in range(n)
        )
        if all(0 <= x <= 1 for x in xi):
            kept.append(xi)
        else:
            excluded.append(xi)
    return kept, excluded


def is_narrow(g: DiagonalSymmetry) -> bool:
    return g.is_narrow()
