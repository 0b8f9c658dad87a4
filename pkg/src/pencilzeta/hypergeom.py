"""Hypergeometric machinery: truncated series mod p, parameter analysis,
and finite-field hypergeometric sums in two normalizations.

The "classic" sum is the Gauss-sum quotient definition, available whenever
(q-1) clears all parameter denominators.  The "bcm" sum is the
gamma-quotient-free reformulation available for parameters defined over Q
at good q; the two agree on their overlap, which the test grid checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import polyint
from .errors import CapExceeded, RoundingError, ValidationError
from .fields import FieldTable, GaussSumTable

# residual bound: values are sums of ~q terms of size <= q^(d/2)
RESIDUAL_TOL_FACTOR = 1e-6

_CHUNK = 1 << 20


def _normalize(values) -> tuple[Fraction, ...]:
    return tuple(sorted(Fraction(v) % 1 for v in values))


@dataclass(frozen=True)
class HypergeometricParameters:
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", _normalize(self.alpha))
        object.__setattr__(self, "beta", _normalize(self.beta))
        if len(self.alpha) != len(self.beta):
            raise ValidationError("alpha and beta must have the same length")
        for a in self.alpha:
            for b in self.beta:
                if (a - b).denominator == 1:
                    raise ValidationError(
                        f"alpha and beta are not disjoint mod Z: {a} vs {b}"
                    )

    @staticmethod
    def of(alpha, beta) -> "HypergeometricParameters":
        return HypergeometricParameters(tuple(map(Fraction, alpha)), tuple(map(Fraction, beta)))

    @property
    def d(self) -> int:
        return len(self.alpha)

    def denominator_lcm(self) -> int:
        out = 1
        for v in self.alpha + self.beta:
            out = out * v.denominator // gcd(out, v.denominator)
        return out

    def __str__(self):
        fa = ",".join(map(str, self.alpha))
        fb = ",".join(map(str, self.beta))
        return f"({fa}; {fb})"


def rising(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def truncated_series(params: HypergeometricParameters, z: int, p: int, cutoff: int) -> int:
    """Partial sum of the hypergeometric series in F_p.

    Lower parameters are taken in the classical normalization: a beta entry
    of 0 stands for the implicit 1, so its rising factorial is k! and the
    usual k! divisor of nFm series is always present.
    """
    if cutoff > p - 1:
        raise ValidationError("cutoff must be at most p - 1")
    for v in params.alpha + params.beta:
        if v.denominator % p == 0:
            raise ValidationError(f"denominator of {v} is divisible by p")
    alphas = [v.numerator * pow(v.denominator, p - 2, p) % p for v in params.alpha]
    betas = [
        (b.numerator * pow(b.denominator, p - 2, p) + (1 if b == 0 else 0)) % p
        for b in params.beta
    ]
    total, term = 0, 1
    z = z % p
    for k in range(cutoff + 1):
        total = (total + term) % p
        num = den = 1
        for a in alphas:
            num = num * ((a + k) % p) % p
        for b in betas:
            den = den * ((b + k) % p) % p
        if den == 0:
            if k == cutoff:
                break
            raise ZeroDivisionError(
                f"a lower rising factorial vanishes mod {p} at k = {k + 1}"
            )
        term = term * num % p * pow(den, p - 2, p) % p * z % p
    return total


# --- parameter analysis ---

def _orbit_profile(values):
    """Multiplicity of each reduced fraction, grouped by denominator."""
    counts: dict[Fraction, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    by_denom: dict[int, dict[Fraction, int]] = {}
    for v, c in counts.items():
        by_denom.setdefault(v.denominator, {})[v] = c
    return by_denom


def _full_orbit_split(values):
    """Split a multiset into complete Galois orbits and a remainder."""
    by_denom = _orbit_profile(values)
    complete: dict[int, int] = {}
    leftovers: list[Fraction] = []
    for n, group in by_denom.items():
        orbit = [Fraction(k, n) for k in range(n) if gcd(k, n) == 1] if n > 1 else [Fraction(0)]
        m = min(group.get(v, 0) for v in orbit)
        if m:
            complete[n] = m
        for v, c in group.items():
            extra = c - m
            leftovers.extend([v] * extra)
    return complete, leftovers


def field_of_definition(params: HypergeometricParameters):
    """Whether both parameter products are integer (cyclotomic) polynomials.

    Returns (defined_over_Q, description) where the description lists the
    cyclotomic factors of each side or the offending residues.
    """
    desc = {}
    over_q = True
    for side, values in (("alpha", params.alpha), ("beta", params.beta)):
        complete, leftovers = _full_orbit_split(values)
        desc[side] = {
            "cyclotomic_factors": {n: m for n, m in sorted(complete.items())},
            "off_orbit": [str(v) for v in leftovers],
        }
        if leftovers:
            over_q = False
    return over_q, desc


def is_good(q: int, params: HypergeometricParameters) -> bool:
    return gcd(q, params.denominator_lcm()) == 1


def is_splittable(q: int, params: HypergeometricParameters):
    """Partition (alpha0, alpha', beta0, beta') with the 0-parts defined over
    Q and the primed parts cleared by q-1, or None when impossible.

    Complete Galois orbits go to the over-Q part; off-orbit residues must be
    cleared by q-1.
    """
    out = []
    for values in (params.alpha, params.beta):
        complete, leftovers = _full_orbit_split(values)
        for v in leftovers:
            if (q - 1) % v.denominator != 0:
                return None
        zero_part = []
        for n, m in complete.items():
            orbit = [Fraction(k, n) for k in range(n) if gcd(k, n) == 1] if n > 1 else [Fraction(0)]
            zero_part.extend(orbit * m)
        out.append((tuple(sorted(zero_part)), tuple(sorted(leftovers))))
    (a0, a1), (b0, b1) = out
    return a0, a1, b0, b1


def splittable_bruteforce(q: int, params: HypergeometricParameters):
    """Exhaustive reference search over orbit-closed sub-multisets; oracle for
    is_splittable in the tests."""
    from itertools import product

    def options(values):
        complete, leftovers = _full_orbit_split(values)
        choices = []
        items = sorted(complete.items())
        for counts in product(*[range(m + 1) for _, m in items]):
            zero_part, primed = [], list(leftovers)
            for (n, m), take in zip(items, counts):
                orbit = (
                    [Fraction(k, n) for k in range(n) if gcd(k, n) == 1]
                    if n > 1
                    else [Fraction(0)]
                )
                zero_part.extend(orbit * take)
                primed.extend(orbit * (m - take))
            choices.append((tuple(sorted(zero_part)), tuple(sorted(primed))))
        return choices

    for a0, a1 in options(params.alpha):
        if any((q - 1) % v.denominator for v in a1):
            continue
        for b0, b1 in options(params.beta):
            if any((q - 1) % v.denominator for v in b1):
                continue
            return a0, a1, b0, b1
    return None


# --- BCM data ---

@dataclass(frozen=True)
class BcmData:
    p_list: tuple[int, ...]
    q_list: tuple[int, ...]
    M: Fraction
    epsilon: int
    d_multiplicities: dict  # cyclotomic index -> multiplicity in D(x)
    s0: int

    def s(self, m: int, qx: int) -> int:
        """Multiplicity of e^(2 pi i m / qx) as a root of D(x)."""
        n = qx // gcd(m % qx, qx) if m % qx else 1
        return self.d_multiplicities.get(n, 0)


def bcm_data(params: HypergeometricParameters) -> BcmData:
    """Resolve the cyclotomic quotient prod(x - e^{2pi i a}) / prod(x - e^{2pi i b})
    into prod(x^{p_j} - 1) / prod(x^{q_j} - 1)."""
    over_q, desc = field_of_definition(params)
    if not over_q:
        raise ValidationError("parameters are not defined over Q")
    need: dict[int, int] = {}
    for n, m in desc["alpha"]["cyclotomic_factors"].items():
        need[n] = need.get(n, 0) + m
    for n, m in desc["beta"]["cyclotomic_factors"].items():
        need[n] = need.get(n, 0) - m
    p_list, q_list = [], []
    for n in sorted(need, reverse=True):
        # adding x^n - 1 contributes every cyclotomic divisor of n once
        c = need.get(n, 0)
        if c == 0:
            continue
        if c > 0:
            p_list.extend([n] * c)
        else:
            q_list.extend([n] * (-c))
        for d in range(1, n + 1):
            if n % d == 0:
                need[d] = need.get(d, 0) - c
    if any(v for v in need.values()):
        raise RuntimeError("cyclotomic resolution failed")
    p_list.sort()
    q_list.sort()
    lhs = [1]
    for v in p_list:
        lhs = polyint.pmul(lhs, polyint.x_power_minus_one(v))
    rhs = [1]
    for v in q_list:
        rhs = polyint.pmul(rhs, polyint.x_power_minus_one(v))
    alpha_poly = [1]
    for n, m in desc["alpha"]["cyclotomic_factors"].items():
        alpha_poly = polyint.pmul(alpha_poly, polyint.ppow(polyint.cyclotomic(n), m))
    beta_poly = [1]
    for n, m in desc["beta"]["cyclotomic_factors"].items():
        beta_poly = polyint.pmul(beta_poly, polyint.ppow(polyint.cyclotomic(n), m))
    # defining identity, checked exactly
    if polyint.pmul(lhs, beta_poly) != polyint.pmul(rhs, alpha_poly):
        raise RuntimeError("cyclotomic resolution does not satisfy its identity")
    M = Fraction(1)
    for v in p_list:
        M *= Fraction(v) ** v
    for v in q_list:
        M /= Fraction(v) ** v
    eps = (-1) ** (sum(q_list) % 2)
    dmult: dict[int, int] = {}
    for n in set(p_list) | set(q_list):
        for d in range(1, n + 1):
            if n % d:
                continue
            a = sum(1 for v in p_list if v % d == 0)
            b = sum(1 for v in q_list if v % d == 0)
            if min(a, b):
                dmult[d] = min(a, b)
    return BcmData(
        p_list=tuple(p_list),
        q_list=tuple(q_list),
        M=M,
        epsilon=eps,
        d_multiplicities=dmult,
        s0=dmult.get(1, 0),
    )


# --- finite field hypergeometric sums ---

@dataclass(frozen=True)
class HyperSumValue:
    raw: complex
    rounded: int | None
    residual: float
    tolerance: float
    definition: str

    @property
    def value(self) -> int:
        if self.rounded is None:
            raise ValidationError("value was not rounded to an exact element")
        return self.rounded


def _residual_tolerance(f: FieldTable, d: int, tolerance=None) -> float:
    if tolerance is not None:
        return tolerance
    return RESIDUAL_TOL_FACTOR * f.q ** (d / 2)


def _finish(raw: complex, f, params, definition, tolerance) -> HyperSumValue:
    tol = _residual_tolerance(f, params.d, tolerance)
    over_q, _ = field_of_definition(params)
    if not over_q:
        return HyperSumValue(raw, None, 0.0, tol, definition)
    nearest = round(raw.real)
    residual = abs(raw - nearest)
    if residual > tol:
        raise RoundingError(
            f"rounding residual {residual:.3g} exceeds tolerance {tol:.3g}"
        )
    return HyperSumValue(raw, int(nearest), residual, tol, definition)


def hyper_sum_classic(
    f: FieldTable,
    params: HypergeometricParameters,
    t: int,
    gauss: GaussSumTable | None = None,
    tolerance=None,
) -> HyperSumValue:
    """Gauss-sum quotient definition; needs (q-1) * alpha_i and (q-1) * beta_i
    integral and t nonzero."""
    if t == 0:
        raise ValidationError("t must be a unit")
    N = f.qx
    for v in params.alpha + params.beta:
        if (v * N).denominator != 1:
            raise ValidationError(
                f"(q-1) * {v} is not an integer; classic definition unavailable"
            )
    gauss = f.gauss_table() if gauss is None else gauss
    g = gauss.values
    c = f.mul(f.pow(f.minus_one, params.d), t)
    log_c = int(f.log_table[c])
    total = 0j
    for lo in range(0, N, _CHUNK):
        hi = min(lo + _CHUNK, N)
        m = np.arange(lo, hi, dtype=np.int64)
        w = np.exp(2j * np.pi * ((m * log_c) % N) / N)
        for a in params.alpha:
            av = int(a * N)
            w *= g[(m + av) % N] / g[av % N]
        for b in params.beta:
            bv = int(b * N)
            w *= g[(-m - bv) % N] / g[(-bv) % N]
        total += np.sum(w)
    raw = -total / N
    return _finish(complex(raw), f, params, "classic", tolerance)


def hyper_sum_bcm(
    f: FieldTable,
    params: HypergeometricParameters,
    t: int,
    gauss: GaussSumTable | None = None,
    tolerance=None,
) -> HyperSumValue:
    """Beukers-Cohen-Mellit definition for parameters defined over Q at good q."""
    if t == 0:
        raise ValidationError("t must be a unit")
    if not is_good(f.q, params):
        bad = params.denominator_lcm()
        raise ValidationError(
            f"q = {f.q} is not good: gcd with denominator lcm {bad} exceeds 1"
        )
    data = bcm_data(params)
    N = f.qx
    gauss = f.gauss_table() if gauss is None else gauss
    g = gauss.values
    m_elem = f.mul(f.scalar(data.M.numerator), f.inv(f.scalar(data.M.denominator)))
    c = f.mul(f.scalar(data.epsilon), f.mul(f.inv(m_elem), t))
    log_c = int(f.log_table[c])
    total = 0j
    for lo in range(0, N, _CHUNK):
        hi = min(lo + _CHUNK, N)
        m = np.arange(lo, hi, dtype=np.int64)
        w = np.exp(2j * np.pi * ((m * log_c) % N) / N)
        for v in data.p_list:
            w *= g[(v * m) % N]
        for v in data.q_list:
            w *= g[(-v * m) % N]
        # q^(s(m) - s0) with s(m) read off the order of e^(2 pi i m / N)
        n_of_m = np.empty(hi - lo, dtype=np.int64)
        nz = m != 0
        n_of_m[~nz] = 1
        n_of_m[nz] = N // np.gcd(m[nz], N)
        s_vec = np.zeros(hi - lo, dtype=np.int64)
        for n, mult in data.d_multiplicities.items():
            s_vec[n_of_m == n] = mult
        w *= np.power(float(f.q), (s_vec - data.s0).astype(np.float64))
        total += np.sum(w)
    r, s = len(data.p_list), len(data.q_list)
    raw = (-1) ** (r + s) / (1 - f.q) * total
    return _finish(complex(raw), f, params, "bcm", tolerance)
