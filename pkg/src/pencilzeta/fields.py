"""Finite field tables: F_{p^r} with discrete logs, traces, characters, Gauss sums.

Elements of F_{p^r} are encoded as integers in [0, q) via base-p digits of
the residue polynomial: c0 + c1*x + ... + c_{r-1}*x^{r-1}  <->  c0 + c1*p + ...
Multiplication goes through exp/log tables with respect to a fixed generator;
addition is digitwise mod p.

Construction is deterministic: the modulus is the lexicographically smallest
monic irreducible of degree r (low-to-high coefficient vector read as a base-p
integer, scanned upward) and the generator is the smallest encoded element of
multiplicative order q-1.  variant=1 selects the second-smallest choices, used
to verify that derived quantities do not depend on the convention.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, ValidationError

# Tables hold q-1 entries; 2.5e7 covers F_{281^3}.
TABLE_CAP = 25_000_000

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class PrimePower:
    p: int
    r: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")
        if self.r < 1:
            raise ValidationError("exponent must be >= 1")

    @property
    def q(self) -> int:
        return self.p**self.r


# --- polynomial helpers over F_p (coefficient lists, low degree first) ---

def _poly_mulmod(a, b, mod, p):
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _poly_rem(res, mod, p)


def _poly_rem(c, mod, p):
    deg = len(mod) - 1
    c = [x % p for x in c]
    while len(c) > deg:
        lead = c[-1]
        if lead:
            off = len(c) - 1 - deg
            for k in range(deg + 1):
                c[off + k] = (c[off + k] - lead * mod[k]) % p
        c.pop()
    while len(c) < deg:
        c.append(0)
    return c


def _poly_powx(e, mod, p):
    """x^e mod (mod) by square and multiply."""
    result = _poly_rem([1], mod, p)
    base = _poly_rem([0, 1], mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]

    def trim(c):
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = trim(a), trim(b)
    while b:
        while len(a) >= len(b):
            inv = pow(b[-1], p - 2, p)
            f = a[-1] * inv % p
            off = len(a) - len(b)
            for k in range(len(b)):
                a[off + k] = (a[off + k] - f * b[k]) % p
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return a


def _is_irreducible(mod, p, r):
    if r == 1:
        return True
    xq = _poly_powx(p**r, mod, p)
    x_itself = _poly_rem([0, 1], mod, p)
    if xq != x_itself:
        return False
    for ell in factorize(r):
        xe = _poly_powx(p ** (r // ell), mod, p)
        diff = [(a - b) % p for a, b in zip(xe, x_itself)]
        if len(_poly_gcd(list(mod), diff, p)) > 1:
            return False
    return True


def _find_modulus(p, r, skip=0):
    """Monic irreducibles of degree r in increasing encoded order."""
    if r == 1:
        # x, x+1, x+2, ... are all irreducible
        return [skip % p, 1]
    found = 0
    for enc in range(p**r):
        coeffs = []
        e = enc
        for _ in range(r):
            coeffs.append(e % p)
            e //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p, r):
            if found == skip:
                return mod
            found += 1
    raise RuntimeError("no irreducible found")  # unreachable


class FieldTable:
    """Realized finite field with exp/log/trace tables.

    Immutable after construction; all query methods are pure and therefore
    safe to share across threads.
    """

    def __init__(self, p: int, r: int, variant: int = 0):
        pp = PrimePower(p, r)
        q = pp.q
        if q - 1 > TABLE_CAP:
            raise CapExceeded(f"q-1 = {q - 1} exceeds table cap {TABLE_CAP}")
        self.prime_power = pp
        self.p, self.r, self.q = p, r, q
        self.qx = q - 1  # order of the multiplicative group
        self.variant = variant
        self.modulus = _find_modulus(p, r, skip=variant if r > 1 else 0)
        self._mul_matrices = {}
        self.generator = self._find_generator(skip=variant)
        self._build_tables()
        self._gauss_cache: dict[str, GaussSumTable] = {}

    # --- scalar polynomial arithmetic used during construction ---

    def _vec_of(self, enc: int):
        c = []
        e = enc
        for _ in range(self.r):
            c.append(e % self.p)
            e //= self.p
        return c

    def _enc_of(self, vec) -> int:
        e = 0
        for c in reversed(vec):
            e = e * self.p + int(c % self.p)
        return e

    def _mul_vec(self, a, b):
        res = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] += ai * bj
        return _poly_rem(res, self.modulus, self.p)

    def _pow_vec(self, a, e):
        result = [1] + [0] * (self.r - 1)
        base = list(a)
        while e:
            if e & 1:
                result = self._mul_vec(result, base)
            base = self._mul_vec(base, base)
            e >>= 1
        return result

    def _find_generator(self, skip=0):
        one = [1] + [0] * (self.r - 1)
        fac = factorize(self.qx) if self.qx > 1 else {}
        found = 0
        for enc in range(1, self.q):
            v = self._vec_of(enc)
            if any(self._pow_vec(v, self.qx // ell) == one for ell in fac):
                continue
            if self._pow_vec(v, self.qx) != one:
                continue  # not invertible (cannot happen in a field, kept as a guard)
            if found == skip:
                return enc
            found += 1
        raise RuntimeError("no generator found")

    def _mul_matrix(self, vec):
        """Matrix of y -> vec*y acting on coefficient vectors, mod p."""
        r = self.r
        M = np.zeros((r, r), dtype=np.int64)
        for j in range(r):
            col = _poly_rem([0] * j + list(vec), self.modulus, self.p)
            M[:, j] = col
        return M

    def _build_tables(self):
        p, r, q, N = self.p, self.r, self.q, self.qx
        M = self._mul_matrix(self._vec_of(self.generator))
        # exp table: columns M^j * e0, grown by doubling then advanced blockwise
        block = min(N, 1 << 16)
        V = np.zeros((r, 1), dtype=np.int64)
        V[0, 0] = 1
        step = M.copy()
        while V.shape[1] < block:
            take = min(V.shape[1], block - V.shape[1])
            V = np.concatenate([V, (step @ V[:, :take]) % p], axis=1)
            if V.shape[1] < block:
                step = (step @ step) % p
        Mblock = _mat_pow_mod(M, V.shape[1], p)
        powers_of_p = np.array([p**i for i in range(r)], dtype=np.int64)
        exp = np.empty(N, dtype=np.int32)
        j = 0
        cur = V
        while j < N:
            b = min(cur.shape[1], N - j)
            exp[j : j + b] = (powers_of_p @ cur[:, :b]).astype(np.int32)
            j += b
            if j < N:
                cur = (Mblock @ cur) % p
        self.exp_table = exp
        log = np.full(q, -1, dtype=np.int32)
        log[exp] = np.arange(N, dtype=np.int32)
        self.log_table = log
        # trace(x^i) for the residue class x, via traces of multiplication matrices
        Mx = self._mul_matrix([0, 1] if r > 1 else [1])
        taus = []
        acc = np.eye(r, dtype=np.int64)
        for _ in range(r):
            taus.append(int(np.trace(acc)) % p)
            acc = (acc @ Mx) % p
        tr = np.zeros(q, dtype=np.int64)
        idx = np.arange(q, dtype=np.int64)
        for i in range(r):
            tr += ((idx // p**i) % p) * taus[i]
        self.trace_table = (tr % p).astype(np.int32)

    # --- element arithmetic ---

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[(int(self.log_table[a]) + int(self.log_table[b])) % self.qx])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.exp_table[(-int(self.log_table[a])) % self.qx])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        return int(self.exp_table[(int(self.log_table[a]) * (e % self.qx)) % self.qx])

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        return self._enc_of([x + y for x, y in zip(self._vec_of(a), self._vec_of(b))])

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        return self._enc_of([-x for x in self._vec_of(a)])

    def scalar(self, c: int) -> int:
        """Embed an integer (element of the prime field) as a constant."""
        return c % self.p

    @property
    def minus_one(self) -> int:
        return self.p - 1

    def add_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized addition of encoded elements."""
        if self.r == 1:
            return (a + b) % self.p
        out = np.zeros_like(a)
        pi = 1
        for _ in range(self.r):
            out += pi * (((a // pi) + (b // pi)) % self.p)
            pi *= self.p
        return out

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized multiplication of encoded elements."""
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        la = self.log_table[np.broadcast_to(a, out.shape)[nz]].astype(np.int64)
        lb = self.log_table[np.broadcast_to(b, out.shape)[nz]].astype(np.int64)
        out[nz] = self.exp_table[(la + lb) % self.qx]
        return out

    def pow_vec(self, a: np.ndarray, e: int) -> np.ndarray:
        out = np.zeros(a.shape, dtype=np.int64)
        if e == 0:
            out[:] = 1
            return out
        nz = a != 0
        out[nz] = self.exp_table[(self.log_table[a[nz]].astype(np.int64) * (e % self.qx)) % self.qx]
        return out

    # --- characters ---

    def trace(self, x: int) -> int:
        """Field trace down to F_p: x + x^p + ... + x^{p^{r-1}}."""
        return int(self.trace_table[x])

    def additive_character(self, x: int) -> complex:
        return complex(np.exp(2j * np.pi * self.trace(x) / self.p))

    def mult_character_power(self, x: int, m: int) -> complex:
        """omega(x)^m for the generator-based character omega."""
        if x == 0:
            raise ValidationError("multiplicative character undefined at 0")
        return complex(np.exp(2j * np.pi * ((m * int(self.log_table[x])) % self.qx) / self.qx))

    def fingerprint(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "modulus": list(map(int, self.modulus)),
            "generator": int(self.generator),
        }

    def __repr__(self):
        return f"FieldTable(q={self.q}, modulus={self.modulus}, generator={self.generator})"

    # --- Gauss sums ---

    def gauss_table(self, method: str = "auto") -> "GaussSumTable":
        if method not in ("auto", "fft", "direct"):
            raise ValidationError(f"unknown method {method!r}")
        if method == "auto":
            method = "direct" if self.q <= 512 else "fft"
        cached = self._gauss_cache.get(method)
        if cached is None:
            cached = GaussSumTable.build(self, method)
            self._gauss_cache[method] = cached
        return cached


def _mat_pow_mod(M, e, p):
    r = M.shape[0]
    out = np.eye(r, dtype=np.int64)
    base = M.copy()
    while e:
        if e & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        e >>= 1
    return out


@dataclass
class GaussSumTable:
    """values[m] = sum over x != 0 of omega(x)^m * theta(x), for m = 0..q-2."""

    field: FieldTable
    values: np.ndarray
    method: str = "fft"

    @staticmethod
    def build(f: FieldTable, method: str) -> "GaussSumTable":
        N = f.qx
        theta = np.exp(2j * np.pi * f.trace_table[f.exp_table].astype(np.float64) / f.p)
        if method == "direct":
            if N > 20_000:
                raise CapExceeded("direct Gauss summation capped at q <= 20001")
            j = np.arange(N)
            vals = np.empty(N, dtype=np.complex128)
            for m in range(N):
                vals[m] = np.sum(np.exp(2j * np.pi * ((m * j) % N) / N) * theta)
        else:
            import scipy.fft

            spec = scipy.fft.fft(theta)
            # g(m) = sum_j e^{+2 pi i m j / N} theta_j = FFT(theta)[-m mod N]
            vals = np.empty(N, dtype=np.complex128)
            vals[0] = spec[0]
            vals[1:] = spec[1:][::-1]
        table = GaussSumTable(field=f, values=vals, method=method)
        if abs(table.values[0] + 1.0) > 1e-6:
            raise RuntimeError("Gauss table sanity check failed: g(0) != -1")
        return table

    def g(self, m: int) -> complex:
        return complex(self.values[m % self.field.qx])


@lru_cache(maxsize=8)
def build_field(p: int, r: int = 1, variant: int = 0) -> FieldTable:
    """Construct (and cache) the deterministic field table for F_{p^r}."""
    return FieldTable(p, r, variant=variant)
