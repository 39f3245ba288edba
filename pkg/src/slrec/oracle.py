"""Brute-force recurrence windows by exact algebra.

Three independent routes: polynomial gcds over Q or Q(zeta), the explicit
degree-one solvability conditions, and pure exponent arithmetic for
power-map systems with root-of-unity data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import CycRat
from .polyfield import (
    Poly,
    compose,
    default_degree_cap,
    has_root,
    poly_gcd,
)
from .semilinear import Window

DEFAULT_WINDOW = 12


@dataclass(frozen=True)
class PolyTriple:
    f: Poly
    g: Poly
    c: Poly
    exclude_zero: bool = False

    def conductor(self) -> int:
        from .exactnum import lcm

        out = 1
        for p in (self.f, self.g, self.c):
            for x in p.c:
                if isinstance(x, CycRat):
                    out = lcm(out, x.n)
        return out


def _iterates(p: Poly, count: int, cap: int) -> list[Poly | None]:
    """p^0 .. p^(count-1); None once the degree would pass the cap."""
    out: list[Poly | None] = []
    cur = Poly.z()
    for m in range(count):
        if m:
            if cur is None or cur.degree * max(p.degree, 1) > cap:
                cur = None
            else:
                cur = compose(p, cur)
        out.append(cur)
    return out


def _cell(F: Poly, G: Poly, exclude_zero: bool) -> tuple[bool, str]:
    if F.is_zero() and G.is_zero():
        return True, "both identically equal"
    if F.is_zero():
        return has_root(G, exclude_zero), "first identically equal"
    if G.is_zero():
        return has_root(F, exclude_zero), "second identically equal"
    g = poly_gcd(F, G)
    if exclude_zero and g.degree >= 1:
        g = g.shift_down(g.low_order())
    return g.degree >= 1, f"gcd degree {g.degree}"


def recurrence_window(t: PolyTriple, M: int = DEFAULT_WINDOW, N: int = DEFAULT_WINDOW,
                      cap: int | None = None) -> Window:
    """Cell (m, n) is true iff f^m and g^n meet c at a common point."""
    cap = default_degree_cap() if cap is None else cap
    fs = _iterates(t.f, M, cap)
    gs = _iterates(t.g, N, cap)
    rows, cells, errors = [], {}, {}
    for m in range(M):
        row = []
        for n in range(N):
            if fs[m] is None or gs[n] is None:
                errors[(m, n)] = "iteration degree cap exceeded"
                row.append(False)
                continue
            ok, why = _cell(fs[m] - t.c, gs[n] - t.c, t.exclude_zero)
            cells[(m, n)] = why
            row.append(ok)
        rows.append(row)
    return Window(M, N, rows, "oracle:gcd", {"cells": cells, "errors": errors})


def affine_window(A1, B1, A2, B2, C, D, M: int = DEFAULT_WINDOW, N: int = DEFAULT_WINDOW) -> Window:
    """Degree-one maps f = A1 z + B1, g = A2 z + B2 against c = C z + D.

    C = 0 (constant c) is allowed; the solvability conditions are the same.
    """
    if A1 == 0 or A2 == 0:
        raise ValueError("A1 and A2 must be nonzero")

    def orbit(A, B, count):
        out, power, beta = [], 1, 0
        for _ in range(count):
            out.append((power, beta))
            beta = A * beta + B
            power = power * A
        return out

    fa, ga = orbit(A1, B1, M), orbit(A2, B2, N)
    rows = []
    for m in range(M):
        am, beta = fa[m]
        row = []
        for n in range(N):
            an, delta = ga[n]
            c1 = am != C or beta == D
            c2 = an != C or delta == D
            c3 = (am - C) * (delta - D) == (an - C) * (beta - D)
            row.append(bool(c1 and c2 and c3))
        rows.append(row)
    return Window(M, N, rows, "oracle:affine")


@dataclass(frozen=True)
class TorsionSpec:
    """The system lambda^(d1^m - d3) = xi^a, lambda^(d2^n - d4) = xi^(a - e G_n),
    G_n = (d2^n - 1)/(d2 - 1), xi a primitive k-th root of unity, lambda nonzero.

    With d3 = d4 = 0 this is f = z^d1, g = xi^e z^d2, c = xi^a.
    """

    d1: int
    d2: int
    k: int
    a: int
    e: int
    d3: int = 0
    d4: int = 0

    def __post_init__(self):
        if abs(self.d1) < 2 or abs(self.d2) < 2:
            raise ValueError("need |d1|, |d2| >= 2")
        if self.k < 1 or not (0 <= self.a < self.k and 0 <= self.e < self.k):
            raise ValueError("need k >= 1 and 0 <= a, e < k")


def torsion_cell(k: int, a: int, b: int, A: int, B: int) -> tuple[bool, int | None]:
    """Is there a nonzero lambda with lambda^A = xi^a and lambda^B = xi^b?

    Returns (answer, witness) where lambda = exp(2 pi i w / (k|A||B|)) when
    both exponents are nonzero.
    """
    a %= k
    b %= k
    if A == 0 and B == 0:
        return a == 0 and b == 0, None
    if A == 0:
        return a == 0, None
    if B == 0:
        return b == 0, None
    N = k * abs(A) * abs(B)
    r1 = a * abs(A) * abs(B)
    r2 = b * abs(A) * abs(B)
    g1 = _gcd(A, N)
    if r1 % g1:
        return False, None
    step = N // g1
    e0 = (r1 // g1) * pow((A // g1) % step, -1, step) % step if step > 1 else 0
    coef = B * step
    g2 = _gcd(coef, N)
    rhs = (r2 - B * e0) % N
    if rhs % g2:
        return False, None
    if N // g2 > 1:
        t = (rhs // g2) * pow((coef // g2) % (N // g2), -1, N // g2) % (N // g2)
    else:
        t = 0
    return True, (e0 + step * t) % N


def _gcd(x: int, y: int) -> int:
    from math import gcd

    return gcd(x, y)


def _geom(d: int, n: int) -> int:
    return (d**n - 1) // (d - 1)


def torsion_window(spec: TorsionSpec, M: int = DEFAULT_WINDOW, N: int = DEFAULT_WINDOW) -> Window:
    rows, cells = [], {}
    for m in range(M):
        A = spec.d1**m - spec.d3
        row = []
        for n in range(N):
            B = spec.d2**n - spec.d4
            b = spec.a - spec.e * _geom(spec.d2, n)
            ok, w = torsion_cell(spec.k, spec.a, b, A, B)
            cells[(m, n)] = w
            row.append(ok)
        rows.append(row)
    return Window(M, N, rows, "oracle:torsion", {"cells": cells})


def iterate_sign(eps: int, d: int, m: int) -> int:
    """Sign s with (eps*T_d)^m = s*T_(d^m)."""
    if m == 0:
        return 1
    if d % 2 == 0:
        return eps
    return eps ** (m % 2)


def chebyshev_lift_window(r: int, s: int, t: int, eps1: int, eps2: int, eps3: int,
                          M: int = DEFAULT_WINDOW, N: int = DEFAULT_WINDOW) -> Window:
    """f = eps1 T_r, g = eps2 T_s, c = eps3 T_t, lifted through z + 1/z to
    torsion systems with xi = -1 and exponents r^m -/+ t, s^n -/+ t."""
    rows = []
    for m in range(M):
        a = 0 if iterate_sign(eps1, r, m) * eps3 == 1 else 1
        row = []
        for n in range(N):
            b = 0 if iterate_sign(eps2, s, n) * eps3 == 1 else 1
            ok = any(
                torsion_cell(2, a, b, r**m - eta * t, s**n - kap * t)[0]
                for eta in (1, -1)
                for kap in (1, -1)
            )
            row.append(ok)
        rows.append(row)
    return Window(M, N, rows, "oracle:torsion-lift")
