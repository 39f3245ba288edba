"""Dense univariate polynomials over Q or Q(zeta_n).

Coefficients are ``Fraction`` or ``CycRat``; mixed inputs are fine since the
cyclotomic type absorbs rationals.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import TYPE_CHECKING

from .exactnum import CycRat, as_rat, field_abs_bounds, lcm, nu_p, solve_power

if TYPE_CHECKING:
    from .semilinear import EPSet1

DEFAULT_DEGREE_CAP = 10**6


class DegreeCapExceeded(ArithmeticError):
    pass


class BudgetExhausted(RuntimeError):
    pass


def default_degree_cap() -> int:
    env = os.environ.get("SLREC_DEGREE_CAP")
    return int(env) if env else DEFAULT_DEGREE_CAP


def _norm(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, CycRat) and x.is_rational():
        return x.to_rat()
    return x


class Poly:
    """Coefficient tuple, constant term first; the zero polynomial is ()."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [_norm(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def z(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, x) -> "Poly":
        return cls([x])

    @classmethod
    def monomial(cls, coeff, k: int) -> "Poly":
        return cls([0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self):
        return self.c[-1] if self.c else Fraction(0)

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def is_rational(self) -> bool:
        return all(not isinstance(x, CycRat) for x in self.c)

    def coeff(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return _norm(acc)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction, CycRat)):
            return self == Poly([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.c), len(other.c))
        return Poly([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.c or not other.c:
            return Poly()
        a = [(i, x) for i, x in enumerate(self.c) if x]
        b = [(j, y) for j, y in enumerate(other.c) if y]
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in a:
            for j, y in b:
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out, base = Poly([1]), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def scale(self, x) -> "Poly":
        return Poly([a * x for a in self.c])

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = 1 / self.lead
        return Poly([a * inv for a in self.c])

    def low_order(self) -> int:
        """Multiplicity of the root 0."""
        for i, x in enumerate(self.c):
            if x:
                return i
        raise ValueError("zero polynomial")

    def shift_down(self, v: int) -> "Poly":
        return Poly(self.c[v:])

    def __divmod__(self, other):
        return poly_divmod(self, _as_poly(other))

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def _format_coeff(x) -> str:
    if isinstance(x, CycRat):
        parts = []
        for j, c in enumerate(x.c):
            if not c:
                continue
            z = "" if j == 0 else (f"zeta({x.n})" if j == 1 else f"zeta({x.n})^{j}")
            if not z:
                parts.append(str(c))
            elif c == 1:
                parts.append(z)
            else:
                parts.append(f"{c}*{z}")
        return "(" + " + ".join(parts) + ")"
    return str(x)


def format_poly(p: Poly) -> str:
    """Text form accepted by the command-line parser (for rational and
    single-power cyclotomic coefficients)."""
    if p.is_zero():
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        a = p.c[k]
        if not a:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        coeff = _format_coeff(a)
        if mono and coeff == "1":
            terms.append(mono)
        elif mono and coeff == "-1":
            terms.append("-" + mono)
        elif mono:
            terms.append(f"{coeff}*{mono}")
        else:
            terms.append(coeff)
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder; sparse-aware in the divisor."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    db = b.degree
    if a.degree < db:
        return Poly(), a
    inv = 1 / b.lead
    bnz = [(j, y) for j, y in enumerate(b.c[:-1]) if y]
    r = list(a.c)
    q = [Fraction(0)] * (a.degree - db + 1)
    for i in range(a.degree, db - 1, -1):
        x = r[i]
        if not x:
            continue
        t = x * inv
        q[i - db] = t
        r[i] = Fraction(0)
        for j, y in bnz:
            r[i - db + j] = r[i - db + j] - t * y
    return Poly(q), Poly(r[:db])


def compose(p: Poly, q: Poly) -> Poly:
    """p(q(z))."""
    if p.is_zero():
        return Poly()
    out = Poly([p.c[-1]])
    for a in reversed(p.c[:-1]):
        out = out * q
        if a:
            out = out + Poly([a])
    return out


def iterate(p: Poly, m: int, cap: int | None = None) -> Poly:
    """p composed with itself m times; p^0 = z."""
    if m < 0:
        raise ValueError("iteration count must be nonnegative")
    cap = default_degree_cap() if cap is None else cap
    if p.degree >= 2 and p.degree**m > cap:
        raise DegreeCapExceeded("iteration degree cap exceeded")
    out, base = Poly.z(), p
    while m:
        if m & 1:
            out = compose(base, out)
        m >>= 1
        if m:
            base = compose(base, base)
    return out


def _primitive_int(p: Poly) -> list[int]:
    den = lcm(*(as_rat(x).denominator for x in p.c))
    ints = [int(as_rat(x) * den) for x in p.c]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if ints[-1] < 0:
        g = -g
    return [x // g for x in ints]


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Primitive part of the pseudo-remainder of a by b, integer coefficients."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    bnz = [(j, y) for j, y in enumerate(b[:-1]) if y]
    for i in range(len(a) - 1, db - 1, -1):
        x = a[i]
        if not x:
            continue
        g = gcd(x, lb)
        mult_a, mult_b = lb // g, x // g
        if mult_a != 1:
            a = [v * mult_a for v in a[: i + 1]]
        a[i] = 0
        for j, y in bnz:
            a[i - db + j] -= mult_b * y
        cont = 0
        for v in a[:i]:
            if v:
                cont = gcd(cont, v)
                if cont == 1:
                    break
        if cont > 1:
            a = [v // cont for v in a[:i]]
        else:
            a = a[:i]
    a = a[:db]
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd.  Over Q: primitive pseudo-remainder sequence on integer
    coefficients.  Over Q(zeta): Euclid with monic remainders."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_rational() and q.is_rational():
        a, b = _primitive_int(p), _primitive_int(q)
        if len(a) < len(b):
            a, b = b, a
        while len(b) > 1:
            r = _int_prem(a, b)
            if not r:
                return Poly(b).monic()
            g = 0
            for v in r:
                g = gcd(g, v)
            r = [v // g for v in r]
            a, b = b, r
        if len(b) == 1:
            return Poly([1])
        return Poly(a).monic()
    a, b = p.monic(), q.monic()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        _, r = poly_divmod(a, b)
        a, b = b, r.monic()
    return a.monic()


def common_root_exists(p: Poly, q: Poly, exclude_zero: bool = False) -> bool:
    g = poly_gcd(p, q)
    if exclude_zero and g.degree >= 1:
        g = g.shift_down(g.low_order())
    return g.degree >= 1


def has_root(p: Poly, exclude_zero: bool = False) -> bool:
    """Whether p has a complex root (the zero polynomial vanishes everywhere)."""
    if p.is_zero():
        return True
    if exclude_zero and p.degree >= 1:
        p = p.shift_down(p.low_order())
    return p.degree >= 1


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitResult:
    progression: "EPSet1"
    classification: str  # empty | finite-singleton | infinite-progression
    witness: str = ""


def _classify(s) -> str:
    if s.is_empty():
        return "empty"
    return "infinite-progression" if s.period else "finite-singleton"


def _result(members: set[int], base: int | None, period: int, witness: str) -> OrbitResult:
    from .semilinear import EPSet1

    if base is None:
        s = EPSet1.finite(members)
    else:
        s = EPSet1.union(EPSet1.finite(members), EPSet1.progression(base, period))
    return OrbitResult(s, _classify(s), witness)


def _escape_radius(h: Poly) -> float | None:
    """R such that |x| > R implies |h(x)| > |x| strictly and the orbit diverges."""
    d = h.degree
    lead_lo, _ = field_abs_bounds(h.lead)
    rest = sum(field_abs_bounds(a)[1] for a in h.c[:-1])
    if d >= 2:
        return max(1.0, (rest + 2.0) / lead_lo)
    if d == 1 and lead_lo > 1:
        return (rest + 1.0) / (lead_lo - 1.0) + 1.0
    return None


def _padic_escape(h: Poly, x, target) -> bool:
    """For rational data: some prime where the orbit's valuation strictly drops forever."""
    if not h.is_rational() or isinstance(x, CycRat) or isinstance(target, CycRat):
        return False
    d = h.degree
    if d < 2 or x == 0:
        return False
    x = as_rat(x)
    primes = set()
    for v in [x.denominator] + [as_rat(a).denominator for a in h.c]:
        n = v
        p = 2
        while p * p <= n:
            while n % p == 0:
                primes.add(p)
                n //= p
            p += 1
        if n > 1:
            primes.add(n)
    for p in primes:
        vx = nu_p(x, p)
        if vx >= 0:
            continue
        v = -vx
        vd = nu_p(h.lead, p)
        ok = (d - 1) * v > vd
        for i, a in enumerate(h.c[:-1]):
            if a:
                ok = ok and (d - i) * v > vd - nu_p(a, p)
        if ok and (target == 0 or nu_p(target, p) > -v):
            return True
    return False


def orbit_progression(h: Poly, lam, target, budget: int = 10_000) -> OrbitResult:
    """{m >= 0 : h^m(lam) = target}, with a cycle or a proof of escape."""
    if budget < 1:
        raise ValueError("budget must be positive")
    lam, target = _norm(lam), _norm(target)
    if h.degree == 1:
        return _affine_orbit(h, lam, target)
    if h.degree <= 0:
        first = {0} if lam == target else set()
        c = h(lam)
        if c == lam:
            return _result(set(), 0, 1, "cycle") if lam == target else _result(set(), None, 0, "cycle")
        if c == target:
            return _result(first, 1, 1, "cycle")
        return _result(first, None, 0, "cycle")
    radius = _escape_radius(h)
    seen = {lam: 0}
    orbit = [lam]
    x = lam
    for j in range(1, budget + 1):
        x = h(x)
        if x in seen:
            pre = seen[x]
            per = j - pre
            hits = [i for i, y in enumerate(orbit) if y == target]
            pre_hits = {i for i in hits if i < pre}
            cyc = [i for i in hits if i >= pre]
            if cyc:
                return _result(pre_hits, cyc[0], per, "cycle")
            return _result(pre_hits, None, 0, "cycle")
        seen[x] = j
        orbit.append(x)
        lo, _ = field_abs_bounds(x)
        _, t_hi = field_abs_bounds(target)
        if radius is not None and lo > radius and lo > t_hi:
            hits = {i for i, y in enumerate(orbit) if y == target}
            return _result(hits, None, 0, "escape")
        if _padic_escape(h, x, target):
            hits = {i for i, y in enumerate(orbit) if y == target}
            return _result(hits, None, 0, "escape")
    raise BudgetExhausted("budget exhausted, orbit not resolved")


def _affine_orbit(h: Poly, lam, target) -> OrbitResult:
    b, a = h.coeff(0), h.coeff(1)
    if a == 1:
        if b == 0:
            return _result(set(), 0, 1, "identity") if lam == target else _result(set(), None, 0, "identity")
        q = (target - lam) / b
        q = _norm(q)
        if isinstance(q, Fraction) and q.denominator == 1 and q >= 0:
            return _result({int(q)}, None, 0, "translation")
        return _result(set(), None, 0, "translation")
    fix = _norm(b / (1 - a))
    if lam == fix:
        return _result(set(), 0, 1, "fixed") if target == fix else _result(set(), None, 0, "fixed")
    sol = solve_power(a, _norm((target - fix) / (lam - fix)))
    if sol[0] == "none":
        return _result(set(), None, 0, "multiplier")
    if sol[0] == "single":
        return _result({sol[1]}, None, 0, "multiplier")
    return _result(set(), sol[1], sol[2], "multiplier")


def chebyshev_poly(d: int) -> Poly:
    """Monic T_d with T_d(z + 1/z) = z^d + z^-d."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = Poly([2]), Poly.z()
    if d == 0:
        return prev
    for _ in range(d - 1):
        prev, cur = cur, Poly.z() * cur - prev
    return cur
