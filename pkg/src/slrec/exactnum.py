"""Exact integers, rationals and cyclotomic numbers.

Rationals are plain ``fractions.Fraction``.  Elements of Q(zeta_n) are stored
as coefficient vectors modulo the n-th cyclotomic polynomial (``CycRat``).
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

Rat = Fraction

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, CycRat):
        return x.to_rat()
    raise TypeError(f"not a rational: {x!r}")


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x) if x else out
    return out


# ---------------------------------------------------------------------------
# valuations, primality, factorization


def nu_p(x, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    x = as_rat(x)
    if x == 0:
        raise ValueError("valuation of zero")
    if p < 2:
        raise ValueError("p must be prime")
    num, den = abs(x.numerator), x.denominator
    if p == 2:
        return ((num & -num).bit_length() - 1) - ((den & -den).bit_length() - 1)
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def nu2(x) -> int:
    return nu_p(x, 2)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases (deterministic below 3.3e24)."""
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


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def factorize(x: int) -> Factorization:
    if x == 0:
        raise ValueError("cannot factorize zero")
    sign = -1 if x < 0 else 1
    n = abs(x)
    counts: dict[int, int] = {}
    for p in range(2, 1000):
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack += [d, m // d]
    return Factorization(sign, tuple(sorted(counts.items())))


def mult_order(u: int, modulus: int) -> tuple[int, int]:
    """(preperiod, period) of the sequence u^0, u^1, ... modulo ``modulus``."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    seen: dict[int, int] = {}
    x, i = 1 % modulus, 0
    u %= modulus
    while x not in seen:
        seen[x] = i
        x = x * u % modulus
        i += 1
    return seen[x], i - seen[x]


def divisors(n: int) -> list[int]:
    f = factorize(n)
    out = [1]
    for p, e in f.factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n).factors:
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


# ---------------------------------------------------------------------------
# dense rational polynomial helpers (constant term first), used for Q[z]/Phi_n


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        c = Fraction(c) / lead
        q[i - db] = c
        for j in range(db + 1):
            if b[j]:
                a[i - db + j] -= c * b[j]
    return _trim(q), _trim(a[:db] if db > 0 else [])


def _reduce_monic(a: list, mod: tuple[int, ...]) -> list:
    """a mod a monic integer polynomial, in place friendly."""
    a = list(a)
    d = len(mod) - 1
    nz = [(j, mod[j]) for j in range(d) if mod[j]]
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c == 0:
            continue
        a[i] = 0
        for j, mj in nz:
            a[i - d + j] -= c * mj
    return a[:d]


@lru_cache(maxsize=None)
def _cyclo(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d == n:
            continue
        q, r = _pdivmod(num, list(_cyclo(d)))
        assert not r
        num = q
    return tuple(int(c) for c in num)


def cyclotomic_polynomial(n: int):
    """Phi_n as a Poly over the rationals."""
    from .polyfield import Poly

    return Poly([Fraction(c) for c in _cyclo(n)])


@lru_cache(maxsize=None)
def _hash_weight(n: int, j: int) -> Fraction:
    # normalized trace of zeta_n^j, invariant under lifting
    m = n // gcd(n, j)
    return Fraction(mobius(m), euler_phi(m))


@lru_cache(maxsize=None)
def _lift_table(n: int, big: int) -> tuple[tuple[Fraction, ...], ...]:
    """Images of zeta_n^j (j < phi(n)) as coefficient vectors in Q(zeta_big)."""
    step = big // n
    mod = _cyclo(big)
    out = []
    for j in range(len(_cyclo(n)) - 1):
        vec = [0] * (j * step + 1)
        vec[j * step] = 1
        red = _reduce_monic(vec, mod) if len(vec) >= len(mod) else vec
        red = red + [0] * (len(mod) - 1 - len(red))
        out.append(tuple(Fraction(x) for x in red))
    return tuple(out)


class CycRat:
    """Exact element of the cyclotomic field Q(zeta_n), zeta_n = exp(2 pi i / n)."""

    __slots__ = ("n", "c")

    def __init__(self, coeffs=(), n: int = 1):
        if n < 1:
            raise ValueError("conductor must be positive")
        mod = _cyclo(n)
        vals = [Fraction(x) for x in coeffs]
        if len(vals) >= len(mod):
            vals = _reduce_monic(vals, mod)
        vals += [Fraction(0)] * (len(mod) - 1 - len(vals))
        self.n = n
        self.c = tuple(vals)

    @classmethod
    def _raw(cls, c: tuple, n: int) -> "CycRat":
        obj = object.__new__(cls)
        obj.n = n
        obj.c = c
        return obj

    @classmethod
    def zeta(cls, n: int, j: int = 1) -> "CycRat":
        j %= n
        vec = [0] * (j + 1)
        vec[j] = 1
        return cls(vec, n)

    @classmethod
    def coerce(cls, x) -> "CycRat":
        if isinstance(x, CycRat):
            return x
        return cls([as_rat(x)], 1)

    # -- structure
    def lift(self, big: int) -> "CycRat":
        if big == self.n:
            return self
        if big % self.n:
            raise ValueError("can only lift to a multiple of the conductor")
        table = _lift_table(self.n, big)
        out = [Fraction(0)] * (len(_cyclo(big)) - 1)
        for cj, img in zip(self.c, table):
            if cj:
                for i, v in enumerate(img):
                    if v:
                        out[i] += cj * v
        return CycRat._raw(tuple(out), big)

    def _pair(self, other) -> tuple["CycRat", "CycRat"]:
        other = CycRat.coerce(other)
        if self.n == other.n:
            return self, other
        big = lcm(self.n, other.n)
        return self.lift(big), other.lift(big)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def to_rat(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.c[0] if self.c else Fraction(0)

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, (CycRat, int, Fraction)):
            return NotImplemented
        a, b = self._pair(other)
        return CycRat._raw(tuple(x + y for x, y in zip(a.c, b.c)), a.n)

    __radd__ = __add__

    def __neg__(self):
        return CycRat._raw(tuple(-x for x in self.c), self.n)

    def __sub__(self, other):
        if not isinstance(other, (CycRat, int, Fraction)):
            return NotImplemented
        a, b = self._pair(other)
        return CycRat._raw(tuple(x - y for x, y in zip(a.c, b.c)), a.n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycRat._raw(tuple(x * other for x in self.c), self.n)
        if not isinstance(other, CycRat):
            return NotImplemented
        a, b = self._pair(other)
        if a.n <= 2:
            return CycRat._raw((a.c[0] * b.c[0],), a.n)
        prod = _pmul(list(a.c), list(b.c))
        return CycRat(prod, a.n)

    __rmul__ = __mul__

    def inv(self) -> "CycRat":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.n <= 2:
            return CycRat._raw((1 / self.c[0],), self.n)
        # extended Euclid: s*a + t*Phi = g (a unit)
        mod = [Fraction(x) for x in _cyclo(self.n)]
        r0, r1 = mod, _trim(list(self.c))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            qs = _pmul(q, s1)
            s_next = [(s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)
                      for i in range(max(len(s0), len(qs)))]
            s0, s1 = s1, _trim(s_next)
        g = r1[0]
        return CycRat([x / g for x in s1], self.n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycRat._raw(tuple(x / other for x in self.c), self.n)
        if not isinstance(other, CycRat):
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return CycRat.coerce(other) * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = CycRat([1], self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def conj(self) -> "CycRat":
        """Complex conjugation, the automorphism zeta -> zeta^-1."""
        vec = [Fraction(0)] * self.n
        for j, x in enumerate(self.c):
            vec[(-j) % self.n] += x
        return CycRat(vec, self.n)

    # -- comparison
    def __eq__(self, other):
        if not isinstance(other, (CycRat, int, Fraction)):
            return NotImplemented
        a, b = self._pair(other)
        return a.c == b.c

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_rat())
        return hash(sum((x * _hash_weight(self.n, j) for j, x in enumerate(self.c) if x), Fraction(0)))

    # -- embeddings
    def to_complex(self) -> complex:
        w = cmath.exp(2j * math.pi / self.n)
        return sum((float(x) * w**j for j, x in enumerate(self.c) if x), 0j)

    def abs_bounds(self) -> tuple[float, float]:
        """Rigorous-enough [lo, hi] enclosure of |x| under the standard embedding."""
        v = abs(self.to_complex())
        err = 1e-12 * (1 + sum(abs(float(x)) for x in self.c)) * max(1, len(self.c))
        return max(0.0, v - err), v + err

    def __repr__(self):
        if self.is_rational():
            return f"CycRat({self.to_rat()})"
        terms = []
        for j, x in enumerate(self.c):
            if x:
                terms.append(f"{x}*zeta({self.n})^{j}" if j else f"{x}")
        return "CycRat(" + " + ".join(terms) + ")"


def root_of_unity_order(x) -> int | None:
    """Order of x as a root of unity, or None."""
    x = CycRat.coerce(x)
    if x.is_zero():
        raise ValueError("zero is not a unit")
    bound = 2 * x.n
    for m in divisors(bound):
        if x**m == 1:
            return m
    return None


def field_abs_bounds(x) -> tuple[float, float]:
    if isinstance(x, CycRat):
        return x.abs_bounds()
    v = abs(float(as_rat(x)))
    return v * (1 - 1e-15), v * (1 + 1e-15)


def denominator(x) -> int:
    """Least D > 0 with D*x integral (in Z[zeta_n] for cyclotomic x)."""
    if isinstance(x, CycRat):
        return lcm(*(c.denominator for c in x.c)) if x.c else 1
    return as_rat(x).denominator


def conjugate_moduli(x) -> list[float]:
    """|sigma(x)| over all complex embeddings sigma of Q(zeta_n)."""
    if not isinstance(x, CycRat):
        return [abs(float(as_rat(x)))]
    out = []
    for k in range(1, x.n + 1):
        if gcd(k, x.n) != 1:
            continue
        w = cmath.exp(2j * math.pi * k / x.n)
        out.append(abs(sum((float(c) * w**j for j, c in enumerate(x.c) if c), 0j)))
    return out


def solve_power(mu, gamma) -> tuple:
    """All m >= 0 with mu^m == gamma.

    Returns ("none",), ("single", m) or ("progression", m0, period).
    """
    if mu == 0:
        if gamma == 1:
            return ("single", 0)
        return ("single", 1) if gamma == 0 else ("none",)
    if gamma == 0:
        return ("none",)
    order = root_of_unity_order(mu)
    if order is not None:
        x = CycRat.coerce(mu) ** 0
        for j in range(order):
            if x == gamma:
                return ("progression", j, order)
            x = x * mu
        return ("none",)
    rational = not isinstance(mu, CycRat) or mu.is_rational()
    if rational and (not isinstance(gamma, CycRat) or gamma.is_rational()):
        m, g = as_rat(mu), as_rat(gamma)
        p = next(p for p, _ in factorize(m.numerator * m.denominator).factors)
        v = nu_p(m, p)
        w = nu_p(g, p)
        if w % v or w // v < 0:
            return ("none",)
        j = w // v
        return ("single", j) if m**j == g else ("none",)
    # a non-torsion cyclotomic number: bound the exponent first
    bound = _power_bound(mu, gamma)
    x = CycRat.coerce(mu) ** 0
    for j in range(bound + 1):
        if x == gamma:
            return ("single", j)
        x = x * mu
    return ("none",)


def _power_bound(mu, gamma) -> int:
    mu, gamma = CycRat.coerce(mu)._pair(CycRat.coerce(gamma))
    if denominator(mu) > 1:
        # some prime ideal divides the denominator of mu^j with multiplicity >= j/phi(n)
        return len(mu.c) * max(1, denominator(gamma).bit_length()) + 1
    mods_mu = conjugate_moduli(mu)
    mods_g = conjugate_moduli(gamma)
    best = max(range(len(mods_mu)), key=lambda i: mods_mu[i])
    if mods_mu[best] <= 1 + 1e-9:
        raise ArithmeticError("cannot bound exponent for this multiplier")
    ratio = math.log(max(mods_g[best], 1e-300)) / math.log(mods_mu[best])
    return max(0, math.ceil(ratio)) + 2
