"""Closed-form recurrence-set engines.

Each engine builds an exact membership formula for its family, then hands
the formula to :func:`slrec.semilinear.synthesize` together with a period
modulus and threshold derived from multiplicative orders.  Synthesis
re-checks the explicit set against the formula, so a wrong modulus fails
loudly instead of producing a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable

from .exactnum import (
    CycRat,
    as_rat,
    factorize,
    field_abs_bounds,
    lcm,
    mult_order,
    nu2,
    nu_p,
    root_of_unity_order,
    solve_power,
)
from .polyfield import (
    _escape_radius,
    BudgetExhausted,
    Poly,
    _norm,
    compose,
    has_root,
    iterate,
    orbit_progression,
    poly_divmod,
    poly_gcd,
)
from .semilinear import (
    EPSet1,
    LinSet,
    NonSLCertificate,
    SemiLin2,
    Window,
    gap_certificate,
    nonsl_certificate,
    synthesize,
    window_enumerate,
)


class EngineError(ValueError):
    """Input outside an engine's hypotheses."""


class Unsupported(EngineError):
    pass


@dataclass
class EngineResult:
    """What an engine hands back.

    ``member`` is the exact formula; ``semilin2`` the explicit set (None when
    the set is provably not semilinear).  ``verified`` is the side of the
    square on which the two were compared during synthesis.
    """

    formula_id: str
    member: Callable[[int, int], bool]
    semilin2: SemiLin2 | None
    verified: int = 0
    certificate: NonSLCertificate | None = None
    flags: tuple[str, ...] = ()
    params: dict = field(default_factory=dict)

    def window(self, M: int, N: int) -> Window:
        if self.semilin2 is not None:
            return window_enumerate(self.semilin2, M, N, "engine:" + self.formula_id)
        return window_enumerate(self.member, M, N, "formula:" + self.formula_id)

    def to_dict(self) -> dict:
        d = {"formula": self.formula_id, "params": self.params, "verified_window": self.verified}
        d["semilin2"] = self.semilin2.to_dict() if self.semilin2 is not None else None
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_dict()
        if self.flags:
            d["flags"] = list(self.flags)
        return d


def _synth(formula_id, pred, L, T, cones=(), params=None) -> EngineResult:
    S = synthesize(pred, L, T, cones)
    return EngineResult(formula_id, pred, S, T + 4 * L, params=params or {})


# ---------------------------------------------------------------------------
# divisibility criterion for lambda^A = xi^a, lambda^B = xi^b


def lemma41_check(k: int, a: int, b: int, d1: int, d2: int, d3: int, d4: int, m: int, n: int) -> bool:
    """k * gcd(|d1^m - d3|, |d2^n - d4|) divides b(d1^m - d3) - a(d2^n - d4)."""
    if k < 1:
        raise EngineError("k must be positive")
    if abs(d1) < 2 or abs(d2) < 2:
        raise EngineError("need |d1|, |d2| >= 2")
    if m < 0 or n < 0 or abs(d1) ** m <= abs(d3) or abs(d2) ** n <= abs(d4):
        raise EngineError("precondition |d1|^m > |d3| and |d2|^n > |d4| violated")
    A, B = d1**m - d3, d2**n - d4
    return (b * A - a * B) % (k * gcd(A, B)) == 0


def _div_member(k: int, a: int, b: int, A: int, B: int) -> bool:
    """Same criterion for arbitrary integer exponents, zero included."""
    if A == 0 or B == 0:
        return (A != 0 or a % k == 0) and (B != 0 or b % k == 0)
    return (b * A - a * B) % (k * gcd(A, B)) == 0


def lte_nu2(x: int, y: int, n: int, sign) -> int:
    """nu_2(x^n - y^n) (sign '-') or nu_2(x^n + y^n) (sign '+') for odd x, y."""
    if x % 2 == 0 or y % 2 == 0:
        raise EngineError("x and y must be odd")
    if n < 1:
        raise EngineError("n must be positive")
    minus = sign in ("-", -1, "minus")
    if not minus and sign not in ("+", 1, "plus"):
        raise EngineError("sign must be '+' or '-'")
    if minus:
        if n % 2 == 0:
            return nu2(n) + nu2(x - y) + nu2(x + y) - 1
        return nu2(x - y)
    if n % 2 == 0:
        return 1
    return nu2(x + y)


# ---------------------------------------------------------------------------
# power maps: f = z^d1, g = zeta z^d2, c = const root of unity


@dataclass(frozen=True)
class PowerSpec:
    d1: int
    d2: int
    zeta_ord: int = 1
    zeta_exp: int = 0
    c_ord: int = 1
    c_exp: int = 0

    def __post_init__(self):
        if abs(self.d1) < 2 or abs(self.d2) < 2:
            raise EngineError("need |d1|, |d2| >= 2")
        if self.zeta_ord < 1 or self.c_ord < 1:
            raise EngineError("root orders must be positive")

    @property
    def k(self) -> int:
        return lcm(self.zeta_ord, self.c_ord)

    @property
    def a(self) -> int:
        return self.c_exp * (self.k // self.c_ord) % self.k

    @property
    def e(self) -> int:
        return self.zeta_exp * (self.k // self.zeta_ord) % self.k

    @property
    def Q0(self) -> int:
        return self.d2 - 1

    @property
    def Q(self) -> int:
        return abs(self.d2 - 1)

    def polys(self) -> tuple[Poly, Poly, Poly]:
        """(f, g, c) for positive degrees; negative degrees are rational maps."""
        if self.d1 < 0 or self.d2 < 0:
            raise EngineError("polynomial form needs positive degrees")
        zeta = CycRat.zeta(self.zeta_ord, self.zeta_exp)
        c = CycRat.zeta(self.c_ord, self.c_exp)
        return Poly.monomial(1, self.d1), Poly.monomial(zeta, self.d2), Poly.const(c)

    def to_dict(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "zeta_ord": self.zeta_ord, "zeta_exp": self.zeta_exp,
                "c_ord": self.c_ord, "c_exp": self.c_exp, "k": self.k, "a": self.a, "e": self.e}


def power_row0(spec: PowerSpec) -> EPSet1:
    """{m : c^(d1^m - 1) = 1}, the n = 0 slice."""
    c = CycRat.zeta(spec.c_ord, spec.c_exp)
    o = root_of_unity_order(c)
    if o == 1:
        return EPSet1.full()
    pre, per = mult_order(spec.d1 % o, o)
    return EPSet1.from_predicate(lambda m: pow(spec.d1, m, o) == 1 % o, pre + 1, per)


def _power_member(spec: PowerSpec):
    k, a, e, d1, d2 = spec.k, spec.a, spec.e, spec.d1, spec.d2
    f1, f2 = factorize(abs(d1)), factorize(abs(d2))
    common = [(p, f1.exponent(p), f2.exponent(p)) for p in f1.primes() if f2.exponent(p)]

    def member(m: int, n: int) -> bool:
        A, B = d1**m, d2**n
        g = 1
        for p, tau, mu in common:
            g *= p ** min(m * tau, n * mu)
        b = a - e * ((B - 1) // (d2 - 1))
        return (b * A - a * B) % (k * g) == 0

    return member, common


def power_engine(spec: PowerSpec) -> EngineResult:
    member, common = _power_member(spec)
    params = spec.to_dict()
    if spec.k == 1 or (spec.a == 0 and spec.e == 0):
        return EngineResult("power", member, SemiLin2.full(), 0, params=params)
    M = spec.k * spec.Q
    L, pre_max = 2, 0
    primes = set(factorize(abs(spec.d1)).primes()) | set(factorize(abs(spec.d2)).primes())
    for p in sorted(primes):
        pre, per = mult_order(p % M, M)
        L = lcm(L, per)
        pre_max = max(pre_max, pre)
    cones = []
    for _, tau, mu in common:
        g = gcd(tau, mu)
        if (tau // g, mu // g) not in cones:
            cones.append((tau // g, mu // g))
    return _synth("power", member, L, pre_max + 1, cones, params)


# ---------------------------------------------------------------------------
# Chebyshev maps


def _m0(r: int, t: int) -> int:
    mr, mt = nu2(r), nu2(t)
    m = 1
    while not (r**m > t and mr * (mr * m - mt - 2) >= 0):
        m += 1
    return m


def V_classify(r: int, s: int, t: int, eps1: int, eps2: int) -> tuple[str, int, int]:
    """'full' or 'empty' on the quadrant [m0, inf) x [n0, inf), with (m0, n0)."""
    if r < 2 or s < 2 or t < 1 or eps1 not in (1, -1) or eps2 not in (1, -1):
        raise EngineError("need r, s >= 2, t >= 1 and signs in {1, -1}")
    m0, n0 = _m0(r, t), _m0(s, t)
    if eps1 == 1 and eps2 == 1:
        return "full", m0, n0
    if eps1 != eps2:
        # the +1 side carries (u, t), the other side v
        u, v = (r, s) if eps1 == 1 else (s, r)
        if (u - t) % 2:
            verdict = "empty"
        elif u % 2 == 0:
            verdict = "full" if v % 2 else "empty"
        else:
            verdict = "full"
        return verdict, m0, n0
    if (r - t) % 2 or (s - t) % 2:
        return ("full" if (r - s) % 2 == 0 else "empty"), m0, n0
    return "full", m0, n0


def iterate_sign(eps: int, d: int, m: int) -> int:
    if m == 0:
        return 1
    return eps if d % 2 == 0 else eps ** (m % 2)


@dataclass(frozen=True)
class ChebSpec:
    r: int
    s: int
    t: int
    eps1: int = 1
    eps2: int = 1
    eps3: int = 1

    def __post_init__(self):
        if self.r < 2 or self.s < 2 or self.t < 1:
            raise EngineError("need r, s >= 2 and t >= 1")
        if any(e not in (1, -1) for e in (self.eps1, self.eps2, self.eps3)):
            raise EngineError("signs must be +1 or -1")

    @property
    def m0(self) -> int:
        return _m0(self.r, self.t)

    @property
    def n0(self) -> int:
        return _m0(self.s, self.t)

    def polys(self) -> tuple[Poly, Poly, Poly]:
        from .polyfield import chebyshev_poly

        return (chebyshev_poly(self.r).scale(self.eps1), chebyshev_poly(self.s).scale(self.eps2),
                chebyshev_poly(self.t).scale(self.eps3))

    def to_dict(self) -> dict:
        return {"r": self.r, "s": self.s, "t": self.t, "eps": [self.eps1, self.eps2, self.eps3],
                "m0": self.m0, "n0": self.n0}


def _cheb_member(spec: ChebSpec):
    r, s, t, e3 = spec.r, spec.s, spec.t, spec.eps3
    m0, n0 = spec.m0, spec.n0
    verdicts = {}

    def member(m: int, n: int) -> bool:
        x = iterate_sign(spec.eps1, r, m) * e3
        y = iterate_sign(spec.eps2, s, n) * e3
        if m >= m0 and n >= n0:
            if (x, y) not in verdicts:
                verdicts[(x, y)] = V_classify(r, s, t, x, y)[0] == "full"
            return verdicts[(x, y)]
        a, b = (1 - x) // 2, (1 - y) // 2
        return any(_div_member(2, a, b, r**m - eta * t, s**n - kap * t) for eta in (1, -1) for kap in (1, -1))

    return member


def chebyshev_engine(spec: ChebSpec) -> EngineResult:
    member = _cheb_member(spec)
    params = spec.to_dict()
    if spec.eps1 == spec.eps2 == spec.eps3 == 1:
        return EngineResult("chebyshev", member, SemiLin2.full(), 0, params=params)
    L, T = 2, max(spec.m0, spec.n0)
    for u, v, cut in ((spec.r, spec.s, spec.m0), (spec.s, spec.r, spec.n0)):
        for i in range(cut):
            for eta in (1, -1):
                A = u**i - eta * spec.t
                if A:
                    pre, per = mult_order(v % (2 * abs(A)), 2 * abs(A))
                    L = lcm(L, per)
                    T = max(T, pre)
    return _synth("chebyshev", member, L, T + 1, (), params)


# ---------------------------------------------------------------------------
# gallery


def _a_rs(r: int, s: int) -> int:
    return nu2(r - 1) + nu2(r + 1) - nu2(s - 1) - nu2(s + 1)


def powertil_member(r: int, s: int) -> Callable[[int, int], bool]:
    """Nonzero-lambda set for f = z^r, g = z^s, c = -z."""
    a = _a_rs(r, s)

    def member(m: int, n: int) -> bool:
        if m == 0 or n == 0:
            return False
        if m % 2 == 0 and n % 2 == 0:
            return nu2(m // 2) + a == nu2(n // 2)
        return lemma41_check(2, 1, 1, r, s, 1, 1, m, n)

    return member


def powertil_rows(r: int, s: int, count: int = 4) -> list[tuple[int, EPSet1, str]]:
    """Rows m = 2^N of {(m, n) > 0 : (2m, 2n) in the set}, each {n : nu2(n) = N + a}."""
    a = _a_rs(r, s)
    start = max(1, 1 - a)
    rows = []
    for N in range(start, start + count):
        Np = N + a
        rows.append((2**N, EPSet1.progression(2**Np, 2 ** (Np + 1)), "formula:powertil"))
    return rows


def gallery(name: str, **params) -> EngineResult:
    if name == "deg1counter1":

        def member(m: int, n: int) -> bool:
            return n == 2**m - 1

        cert = gap_certificate([2**m - 1 for m in range(1, 6)], "formula:deg1counter1")
        return EngineResult("deg1counter1", member, None, certificate=cert,
                            flags=("not semilinear",), params={})
    if name == "deg1counter2":
        k = int(params.get("k", 2))
        if k < 2:
            raise EngineError("k must be at least 2")

        def member(m: int, n: int) -> bool:
            if n == 0:
                return True
            if m == 0 or m % (k - 1):
                return False
            q = m // (k - 1)
            return n == 2 ** (q * k) - 2**q

        cert = gap_certificate([2 ** (q * k) - 2**q for q in range(1, 5)], "formula:deg1counter2")
        return EngineResult("deg1counter2", member, None, certificate=cert,
                            flags=("not semilinear",), params={"k": k})
    if name == "powertil":
        r, s = int(params.get("r", 3)), int(params.get("s", 3))
        if r < 3 or s < 3 or r % 2 == 0 or s % 2 == 0:
            raise EngineError("powertil needs odd r, s >= 3")
        cert = nonsl_certificate(powertil_rows(r, s))
        return EngineResult("powertil", powertil_member(r, s), None, certificate=cert,
                            flags=("not semilinear",), params={"r": r, "s": s, "a": _a_rs(r, s)})
    raise EngineError(f"unknown gallery entry {name!r}")


# ---------------------------------------------------------------------------
# degree-one triples: f = A1 z + B1, g = A2 z + B2, c = C z + D


DEFAULT_HORIZON = 200


@dataclass(frozen=True)
class AffineSpec:
    A1: object
    B1: object
    A2: object
    B2: object
    C: object
    D: object
    horizon: int = DEFAULT_HORIZON

    def __post_init__(self):
        for name in ("A1", "B1", "A2", "B2", "C", "D"):
            object.__setattr__(self, name, _norm(getattr(self, name)))
        if self.A1 == 0 or self.A2 == 0:
            raise EngineError("A1 and A2 must be nonzero")

    def swapped(self) -> "AffineSpec":
        return AffineSpec(self.A2, self.B2, self.A1, self.B1, self.C, self.D, self.horizon)

    def polys(self) -> tuple[Poly, Poly, Poly]:
        return Poly([self.B1, self.A1]), Poly([self.B2, self.A2]), Poly([self.D, self.C])

    def to_dict(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("A1", "B1", "A2", "B2", "C", "D")}


def _is_torsion(x) -> int | None:
    return root_of_unity_order(x)


def _nonneg_int(q) -> int | None:
    q = _norm(q)
    if isinstance(q, Fraction) and q.denominator == 1 and q >= 0:
        return int(q)
    return None


def P_set(alpha, gamma, mu) -> EPSet1:
    """{m >= 0 : alpha mu^m = gamma} for nonzero mu."""
    if alpha == 0:
        return EPSet1.full() if gamma == 0 else EPSet1.empty()
    sol = solve_power(mu, _norm(gamma / alpha))
    if sol[0] == "none":
        return EPSet1.empty()
    if sol[0] == "single":
        return EPSet1.finite([sol[1]])
    return EPSet1.progression(sol[1], sol[2])


def _E_set(A, B, C, D) -> EPSet1:
    """{m : A^m != C or beta_m = D}."""
    Z = P_set(1, C, A).complement()
    if A == 1:
        if B == 0:
            W = EPSet1.full() if D == 0 else EPSet1.empty()
        else:
            q = _nonneg_int(D / B)
            W = EPSet1.finite([q]) if q is not None else EPSet1.empty()
    else:
        U = _norm(B / (A - 1))
        W = P_set(U, U + D, A)
    return Z.union(W)


# S3 is kept as a list of pieces: ("prod", X, Y), ("pts", set), ("ray", LinSet)


def _transpose_pieces(pieces):
    out = []
    for p in pieces:
        if p[0] == "prod":
            out.append(("prod", p[2], p[1]))
        elif p[0] == "pts":
            out.append(("pts", {(n, m) for m, n in p[1]}))
        else:
            L = p[1]
            out.append(("ray", LinSet((L.base[1], L.base[0]), [(g[1], g[0]) for g in L.gens])))
    return out


class _Ctx:
    """Mutable bag of flags raised while computing S3."""

    def __init__(self, horizon: int):
        self.horizon = horizon
        self.flags: list[str] = []
        self.nonsl = None


def _unit_circle(x) -> bool:
    if isinstance(x, CycRat):
        return x * x.conj() == 1
    return abs(as_rat(x)) == 1


def _abs_lo(x) -> float:
    return field_abs_bounds(x)[0]


def _abs_hi(x) -> float:
    return field_abs_bounds(x)[1]


def _s3_translations(s: AffineSpec):
    B1, B2, C = s.B1, s.B2, s.C
    full = ("prod", EPSet1.full(), EPSet1.full())
    if C == 1:
        return [full]
    if B1 == 0:
        return [full] if B2 == 0 else [("prod", EPSet1.full(), EPSet1.finite([0]))]
    if B2 == 0:
        return [("prod", EPSet1.finite([0]), EPSet1.full())]
    ratio = _norm(B2 / B1)
    if isinstance(ratio, Fraction) and ratio > 0:
        p, q = ratio.numerator, ratio.denominator
        return [("ray", LinSet((0, 0), [(p, q)]))]
    return [("pts", {(0, 0)})]


def _s3_one_translation(s: AffineSpec, ctx: _Ctx):
    """A1 = 1, A2 != 1."""
    A2, B1, B2, C, D = s.A2, s.B1, s.B2, s.C, s.D
    E = _norm(A2 * D - B2 * C + B2 - D)
    if B1 == 0:
        return [("prod", EPSet1.full(), P_set(E, E, A2))]
    colC = P_set(1, C, A2)
    not_colC = colC.complement()
    S31 = colC.intersect(P_set(B2 * (1 - C), (1 - C) * (A2 * D + B2 - D), A2))
    pieces = [("prod", EPSet1.full(), S31)]
    K = _norm(E / (B1 * (A2 - 1)))
    if E == 0:
        return pieces + [("prod", EPSet1.finite([0]), not_colC)]
    if C == 1:
        q = _nonneg_int(K)
        return pieces + ([("prod", EPSet1.finite([q]), not_colC)] if q is not None else [])

    def R(y):
        return _norm(K * (y - 1) / (y - C))

    order = _is_torsion(A2)
    if order is not None:
        y = _norm(A2**0)
        for j in range(order):
            if y != C:
                q = _nonneg_int(R(y))
                if q is not None:
                    pieces.append(("prod", EPSet1.finite([q]), EPSet1.progression(j, order)))
            y = _norm(y * A2)
        return pieces

    def scan(limit):
        pts, y = set(), _norm(A2**0)
        for n in range(limit):
            if y != C:
                q = _nonneg_int(R(y))
                if q is not None:
                    pts.add((q, n))
            y = _norm(y * A2)
        return pts

    if _unit_circle(A2):
        ctx.flags.append("unit-modulus multiplier: finiteness assumed, checked up to horizon")
        return pieces + [("pts", scan(ctx.horizon))]
    big = _abs_lo(A2) > 1
    if not big and C == 0:
        return pieces + _s3_c0_branch(K, A2, ctx)
    # R(A2^n) tends to a limit it never attains; beyond some n no integer is close enough
    lim = K if big else _norm(K / C)
    if isinstance(lim, Fraction):
        eps = float(abs(lim - round(lim))) if lim.denominator != 1 else 1.0
    else:
        z = lim.to_complex()
        eps = abs(z - round(z.real)) if abs(z.imag) > 1e-12 or abs(z.real - round(z.real)) > 1e-12 else 1.0
    eps *= 0.5
    kc, cc, Cabs = _abs_hi(K), _abs_hi(_norm(C - 1)), _abs_hi(C) if C != 0 else 0.0
    n = 0
    a2lo, a2hi = field_abs_bounds(A2)
    while True:
        if big:
            ylo = a2lo**n
            if ylo > Cabs and kc * cc / (ylo - Cabs) < eps:
                break
        else:
            yhi = a2hi**n
            clo = _abs_lo(C)
            if yhi < clo and kc * cc * yhi / (clo * (clo - yhi)) < eps:
                break
        n += 1
        if n > 100000:
            raise EngineError("tail bound did not converge")
    return pieces + [("pts", scan(n + 1))]


def _s3_c0_branch(K, A2, ctx: _Ctx):
    """Constant c with |A2| < 1: m = K (1 - A2^-n), the constant-target shape."""
    w = _norm(1 / A2)
    if isinstance(w, Fraction) and w.denominator == 1:
        w = int(w)
        Kf = as_rat(K)
        b = Kf.denominator // gcd(Kf.numerator, Kf.denominator) if Kf else 1

        def ok(n):
            v = Kf * (1 - Fraction(w) ** n)
            return v.denominator == 1 and v >= 0

        pre, per = mult_order(w % b, b) if b > 1 else (0, 1)
        # beyond pre, integrality is per-periodic and the sign is 2-periodic
        P = lcm(per, 2)
        tail = [n for n in range(pre + 2, pre + 2 + P) if ok(n)]
        if tail:
            pts = [int(Kf * (1 - Fraction(w) ** n)) for n in range(pre + 2, pre + 2 + 4 * P) if ok(n)]
            ctx.nonsl = gap_certificate(sorted(pts)[:6], "formula:affine-constant-c")
            ctx.flags.append("not semilinear")
            return []
        return [("pts", {(int(Kf * (1 - Fraction(w) ** n)), n) for n in range(pre + 2) if ok(n)})]
    if isinstance(w, Fraction):
        # the denominator of K w^n grows without bound
        Kf, p = as_rat(K), factorize(w.denominator).primes()[0]
        limit = max(0, nu_p(Kf, p)) + 2 if Kf else 1
        bound = limit + 2
        pts = set()
        for n in range(bound + 1):
            v = Kf * (1 - w**n)
            if v.denominator == 1 and v >= 0:
                pts.add((int(v), n))
        return [("pts", pts)]
    ctx.flags.append("horizon-verified (constant c, cyclotomic multiplier)")
    pts = set()
    y = _norm(A2**0)
    for n in range(ctx.horizon):
        q = _nonneg_int(_norm(K * (y - 1) / y))
        if q is not None:
            pts.add((q, n))
        y = _norm(y * A2)
    return [("pts", pts)]


def _curve(s: AffineSpec):
    """Coefficients of alpha x y + beta x + gamma y + delta = 0 with x = A1^m, y = A2^n."""
    U = _norm(s.B1 / (s.A1 - 1))
    V = _norm(s.B2 / (s.A2 - 1))
    C, D = s.C, s.D
    return _norm(U - V), _norm(D + V - C * U), _norm(-(D + U - C * V)), _norm(C * (U - V))


def _s3_scalings(s: AffineSpec, ctx: _Ctx):
    al, be, ga, de = _curve(s)
    full = EPSet1.full()
    if al == be == ga == de == 0:
        return [("prod", full, full)]
    A1, A2 = s.A1, s.A2
    if _norm(al * de - be * ga) == 0:
        # the curve splits into a vertical and a horizontal line
        if al != 0:
            return [("prod", P_set(1, _norm(-ga / al), A1), full), ("prod", full, P_set(1, _norm(-be / al), A2))]
        if be == 0:
            return [("prod", full, P_set(ga, _norm(-de), A2))]
        return [("prod", P_set(be, _norm(-de), A1), full)]
    o1 = _is_torsion(A1)
    if o1 is not None:
        pieces, x = [], _norm(A1**0)
        for j in range(o1):
            pieces.append(("prod", EPSet1.progression(j, o1), P_set(_norm(al * x + ga), _norm(-(be * x + de)), A2)))
            x = _norm(x * A1)
        return pieces
    if _is_torsion(A2) is not None:
        return _transpose_pieces(_s3_scalings(s.swapped(), ctx))
    coeffs = _rational_curve(al, be, ga, de)
    if coeffs is None or isinstance(A1, CycRat) or isinstance(A2, CycRat):
        raise Unsupported("unsupported: two non-torsion cyclotomic multipliers")
    al, be, ga, de = coeffs
    A1, A2 = as_rat(A1), as_rat(A2)
    if be == 0 and ga == 0:
        return _lattice_pieces(A1, A2, 1, -de / al)
    if al == 0 and de == 0:
        return _lattice_pieces(A1, A2, -1, -ga / be)
    pts = _mobius_points(A1, A2, (al, be, ga, de))
    if pts is None:
        t = _mobius_points(A2, A1, (al, ga, be, de))
        pts = None if t is None else {(m, n) for n, m in t}
    if pts is None:
        ctx.flags.append("horizon-verified (no effective tail bound)")
        pts = set()
        for m in range(ctx.horizon):
            x = A1**m
            den = al * x + ga
            if den:
                sol = solve_power(A2, -(be * x + de) / den)
                if sol[0] == "single":
                    pts.add((m, sol[1]))
    return [("pts", pts)]


def _rational_curve(*cs):
    lead = next(c for c in cs if c != 0)
    out = [_norm(c / lead) for c in cs]
    if any(isinstance(c, CycRat) for c in out):
        return None
    return [as_rat(c) for c in out]


def _lattice_pieces(A1: Fraction, A2: Fraction, sigma: int, kappa: Fraction):
    """(m, n) >= 0 with A1^m * A2^(sigma n) = kappa, both multipliers non-torsion."""
    if kappa == 0:
        return []
    primes = set()
    for v in (A1, A2, kappa):
        for part in (v.numerator, v.denominator):
            primes |= set(factorize(abs(part)).primes())
    eqs = [(nu_p(A1, p), sigma * nu_p(A2, p), nu_p(kappa, p)) for p in sorted(primes)]
    eqs = [e for e in eqs if e != (0, 0, 0)]

    def sign_ok(m, n):
        return (A1**m * A2 ** (sigma * n) > 0) == (kappa > 0)

    def check(m, n):
        return all(u * m + v * n == w for u, v, w in eqs) and sign_ok(m, n)

    if not eqs:
        return []
    base = next((e for e in eqs if e[0] or e[1]), None)
    if base is None:
        return []
    u, v, w = base
    for u2, v2, w2 in eqs:
        if u * v2 - v * u2 != 0:
            det = u * v2 - v * u2
            m, n = Fraction(w * v2 - v * w2, det), Fraction(u * w2 - w * u2, det)
            if m.denominator == n.denominator == 1 and m >= 0 and n >= 0 and check(int(m), int(n)):
                return [("pts", {(int(m), int(n))})]
            return []
    if any(u * w2 - w * u2 or v * w2 - w * v2 for u2, v2, w2 in eqs):
        return []
    g = gcd(u, v)
    if w % g:
        return []
    # u and v are both nonzero: a zero column would make a multiplier a unit of Z
    if u * v > 0:
        pts = set()
        for m in range(0, w // u + 1):
            if (w - u * m) % v == 0:
                n = (w - u * m) // v
                if n >= 0 and check(m, n):
                    pts.add((m, n))
        return [("pts", pts)]
    dm, dn = abs(v) // g, abs(u) // g
    m = next(m for m in range(dm) if (w - u * m) % v == 0)
    n = (w - u * m) // v
    while n < 0:
        m, n = m + dm, n + dn
    pieces = []
    for t in (0, 1):
        mm, nn = m + t * dm, n + t * dn
        if check(mm, nn):
            pieces.append(("ray", LinSet((mm, nn), [(2 * dm, 2 * dn)])))
    return pieces


def _val_profile(beta, delta, p: int, w: int):
    """(c0, s, H): nu_p(beta x + delta) = c0 + s m for m >= H, x = A^m with nu_p(A) = w."""
    if beta == 0:
        return nu_p(delta, p), 0, 0
    if delta == 0:
        return nu_p(beta, p), w, 0
    vb, vd = nu_p(beta, p), nu_p(delta, p)
    if w > 0:
        # beta x dies out: need vb + w m > vd
        return vd, 0, max(0, (vd - vb) // w + 1)
    return vb, w, max(0, (vb - vd) // (-w) + 1)


def _mobius_points(A1: Fraction, A2: Fraction, coeffs) -> set | None:
    """All (m, n) with A2^n = psi(A1^m), psi(x) = -(beta x + delta)/(alpha x + gamma),
    or None when no tail bound on m is available."""
    al, be, ga, de = coeffs

    def direct(limit):
        pts = set()
        x = Fraction(1)
        for m in range(limit):
            den = al * x + ga
            if den:
                sol = solve_power(A2, -(be * x + de) / den)
                if sol[0] == "single":
                    pts.add((m, sol[1]))
            x *= A1
        return pts

    def via_n(ns):
        pts = set()
        for n in ns:
            y = A2**n
            den = al * y + be
            if den:
                sol = solve_power(A1, -(ga * y + de) / den)
                if sol[0] == "single":
                    pts.add((sol[1], n))
        return pts

    # archimedean: psi(A1^m) tends to a finite nonzero limit it never attains
    det = al * de - be * ga
    H = None
    if abs(A1) > 1 and al != 0 and be != 0:
        Lim = -be / al
        H = 0
        while not (abs(al) * abs(A1) ** H > abs(ga)
                   and abs(al) * (abs(al) * abs(A1) ** H - abs(ga)) >= 2 * abs(det) / abs(Lim)):
            H += 1
    elif abs(A1) < 1 and ga != 0 and de != 0:
        Lim = -de / ga
        H = 0
        while not (abs(al) * abs(A1) ** H < abs(ga)
                   and abs(A1) ** H * abs(det) * 2 <= abs(Lim) * abs(ga) * (abs(ga) - abs(al) * abs(A1) ** H)):
            H += 1
    if H is not None:
        lo, hi = abs(Lim) / 2, 3 * abs(Lim) / 2
        ns, n, y = [], 0, Fraction(1)
        # |A2| != 1, so only finitely many powers land in [lo, hi]
        while (abs(A2) > 1 and y <= hi) or (abs(A2) < 1 and y >= lo):
            if lo <= y <= hi:
                ns.append(n)
            n, y = n + 1, y * abs(A2)
        return direct(H) | via_n(ns)
    # p-adic: the valuation of psi(A1^m) becomes affine in m
    for p in sorted(set(factorize(A1.numerator).primes()) | set(factorize(A1.denominator).primes())):
        w = nu_p(A1, p)
        c_num, s_num, h1 = _val_profile(be, de, p, w)
        c_den, s_den, h2 = _val_profile(al, ga, p, w)
        c0, s, Hp = c_num - c_den, s_num - s_den, max(h1, h2)
        v2 = nu_p(A2, p)
        if v2 == 0:
            if s == 0 and c0 == 0:
                continue
            extra = 0
            if s != 0 and (-c0) % s == 0 and -c0 // s >= 0:
                extra = -c0 // s + 1
            return direct(max(Hp, extra))
        if s == 0:
            ns = [c0 // v2] if c0 % v2 == 0 and c0 // v2 >= 0 else []
            return direct(Hp) | via_n(ns)
    return None


def _pullback(E: EPSet1, b: int, g: int) -> EPSet1:
    """{k >= 0 : b + k g in E}."""
    if g == 0:
        return EPSet1.full() if b in E else EPSet1.empty()
    N = max(0, -(-(E.threshold - b) // g)) + 1
    return EPSet1.from_predicate(lambda k: (b + k * g) in E, N, max(E.period, 1))


def _assemble(pieces, E1: EPSet1, E2: EPSet1) -> SemiLin2:
    out = SemiLin2.empty()
    for p in pieces:
        if p[0] == "prod":
            out = out.union(SemiLin2.product(p[1].intersect(E1), p[2].intersect(E2)))
        elif p[0] == "pts":
            out = out.union(SemiLin2((), [q for q in p[1] if q[0] in E1 and q[1] in E2]))
        else:
            L = p[1]
            (b0, b1), ((g0, g1),) = L.base, L.gens
            K = _pullback(E1, b0, g0).intersect(_pullback(E2, b1, g1))
            comps, spor = [], []
            for k0, per in K.progressions():
                base = (b0 + k0 * g0, b1 + k0 * g1)
                if per:
                    comps.append(LinSet(base, [(per * g0, per * g1)]))
                else:
                    spor.append(base)
            out = out.union(SemiLin2(comps, spor))
    return out


def affine_engine(spec: AffineSpec) -> EngineResult:
    ctx = _Ctx(spec.horizon)
    A1, A2 = spec.A1, spec.A2
    if A1 == 1 and A2 == 1:
        pieces, case = _s3_translations(spec), "translations"
    elif A1 == 1:
        pieces, case = _s3_one_translation(spec, ctx), "f-translation"
    elif A2 == 1:
        pieces, case = _transpose_pieces(_s3_one_translation(spec.swapped(), ctx)), "g-translation"
    else:
        pieces, case = _s3_scalings(spec, ctx), "scalings"
    E1 = _E_set(A1, spec.B1, spec.C, spec.D)
    E2 = _E_set(A2, spec.B2, spec.C, spec.D)
    params = dict(spec.to_dict(), case=case)
    f, g, c = spec.polys()

    def direct(m: int, n: int) -> bool:
        # closed-form conditions on the iterates, used when no explicit set exists
        F, G = iterate(f, m), iterate(g, n)
        am, bm, an, dn = F.coeff(1), F.coeff(0), G.coeff(1), G.coeff(0)
        return ((am != spec.C or bm == spec.D) and (an != spec.C or dn == spec.D)
                and (am - spec.C) * (dn - spec.D) == (an - spec.C) * (bm - spec.D))

    if ctx.nonsl is not None:
        return EngineResult("affine", direct, None, certificate=ctx.nonsl, flags=tuple(ctx.flags), params=params)
    S = _assemble(pieces, E1, E2)
    return EngineResult("affine", direct, S, flags=tuple(ctx.flags), params=params)


# ---------------------------------------------------------------------------
# decomposed non-exceptional pairs: f = zeta1 h^k1, g = zeta2 h^k2, h = z^r R(z^s)


@dataclass(frozen=True)
class DecompSpec:
    """``c_const`` for a constant c, otherwise c = xi^z3 h^k3 with xi = exp(2 pi i / s)."""

    h: Poly
    k1: int
    k2: int
    z1: int = 0
    z2: int = 0
    c_const: object = None
    z3: int = 0
    k3: int = 0
    s_hint: int | None = None
    budget: int = 10_000

    def __post_init__(self):
        h = self.h
        if h.degree < 2 or h.lead != 1:
            raise EngineError("h must be monic of degree >= 2")
        if h.coeff(h.degree - 1) != 0:
            raise EngineError("h must be centered")
        if self.k1 < 1 or self.k2 < 1 or self.k3 < 0:
            raise EngineError("need k1, k2 >= 1 and k3 >= 0")
        if self.c_const is not None:
            object.__setattr__(self, "c_const", _norm(self.c_const))
        _ = self.s  # validates the hint

    @property
    def r(self) -> int:
        return self.h.low_order()

    @property
    def s(self) -> int:
        rest = [i - self.r for i, a in enumerate(self.h.c) if a and i > self.r]
        g = 0
        for e in rest:
            g = gcd(g, e)
        if self.s_hint is not None:
            if self.s_hint < 1 or (g and g % self.s_hint):
                raise EngineError("h is not of the form z^r R(z^s) for the given s")
            return self.s_hint
        return g or 1

    @property
    def d(self) -> int:
        return self.h.degree

    def xi(self, j: int):
        return _norm(CycRat.zeta(self.s, j % self.s))

    def polys(self) -> tuple[Poly, Poly, Poly]:
        f = iterate(self.h, self.k1).scale(self.xi(self.z1))
        g = iterate(self.h, self.k2).scale(self.xi(self.z2))
        if self.c_const is not None:
            c = Poly.const(self.c_const)
        else:
            c = iterate(self.h, self.k3).scale(self.xi(self.z3))
        return f, g, c

    def to_dict(self) -> dict:
        from .polyfield import format_poly

        d = {"h": format_poly(self.h), "r": self.r, "s": self.s, "k1": self.k1, "k2": self.k2,
             "z1": self.z1 % self.s, "z2": self.z2 % self.s}
        if self.c_const is not None:
            d["c"] = str(self.c_const)
        else:
            d["z3"], d["k3"] = self.z3 % self.s, self.k3
        return d


def _deriv(p: Poly) -> Poly:
    return Poly([i * a for i, a in enumerate(p.c)][1:])


def _mod(p: Poly, F: Poly) -> Poly:
    return poly_divmod(p, F)[1]


def _finite_row(P: Poly, Q: Poly, c: Poly, budget: int, zero_row=None) -> EPSet1:
    """{n : P(lambda) = c(lambda) and Q^n(lambda) = c(lambda) for some lambda}."""
    F = P - c
    if F.is_zero():
        # every n works unless Q^n - c is a nonzero constant
        dc = max(c.degree, 0)
        top, cur, bad = 0, Poly.z(), set()
        while cur.degree <= dc:
            if not has_root(cur - c):
                bad.add(top)
            top += 1
            cur = compose(Q, cur)
        return EPSet1.from_predicate(lambda n: n not in bad, top + 1, 1)
    if F.degree < 1:
        return EPSet1.empty()
    if F.degree == 1:
        lam = _norm(-F.coeff(0) / F.coeff(1))
        return orbit_progression(Q, lam, c(lam), budget).progression
    if zero_row is not None:
        return zero_row
    Fs = poly_divmod(F, poly_gcd(F, _deriv(F)))[0]
    # orbit of the class of z in K[z]/(Fs) under Q
    seen, orbit = {}, []
    u = _mod(Poly.z(), Fs)
    cm = _mod(c, Fs)
    for j in range(budget):
        if u in seen:
            pre = seen[u]
            per = j - pre
            hits = [poly_gcd(Fs, orbit[i] - cm).degree >= 1 if not (orbit[i] - cm).is_zero() else True
                    for i in range(j)]
            return EPSet1.from_predicate(lambda n: hits[n if n < j else pre + (n - pre) % per], pre + 1, per)
        seen[u] = j
        orbit.append(u)
        acc = Poly()
        for a in reversed(Q.c):
            acc = _mod(acc * u + Poly.const(a), Fs)
        u = acc
    raise BudgetExhausted("budget exhausted, orbit not resolved")


def _seq_period(step, x0, mod: int) -> tuple[int, int]:
    seen, x, j = {}, x0 % mod, 0
    while x not in seen:
        seen[x] = j
        x, j = step(x) % mod, j + 1
    return seen[x], j - seen[x]


def decomposed_engine(spec: DecompSpec) -> EngineResult:
    f, g, c = spec.polys()
    params = spec.to_dict()
    h, s, d, k1, k2 = spec.h, spec.s, spec.d, spec.k1, spec.k2
    if spec.c_const is None:
        return _decomp_poly_c(spec, f, g, c, params)
    # constant c: it must be h-preperiodic
    c0 = spec.c_const
    seen, orbit, x = {}, [], c0
    radius = _escape_radius(h)
    for j in range(spec.budget):
        if x in seen:
            break
        if radius is not None and field_abs_bounds(x)[0] > radius:
            raise EngineError("Case 1.1 precondition unverified")
        seen[x] = j
        orbit.append(x)
        x = _norm(h(x))
    else:
        raise EngineError("Case 1.1 precondition unverified")
    opre = seen[x]
    oper = len(orbit) - opre
    twists = [_norm(spec.xi(l) * c0) for l in range(s)]
    hits = [{l for l in range(s) if twists[l] == o} for o in orbit]

    def oidx(j: int) -> int:
        return j if j < len(orbit) else opre + (j - opre) % oper

    a, b = spec.z1 % s, spec.z2 % s
    row0 = orbit_progression(g, c0, c0, spec.budget).progression
    col0 = orbit_progression(f, c0, c0, spec.budget).progression

    e_tab = {k1: [0], k2: [0]}

    def e_mod(k: int, m: int) -> int:
        # (d^(k m) - 1)/(d^k - 1) mod s
        tab = e_tab[k]
        while len(tab) <= m:
            tab.append((1 + pow(d, k, s) * tab[-1]) % s)
        return tab[m]

    def member(m: int, n: int) -> bool:
        if m == 0:
            return n in row0
        if n == 0:
            return m in col0
        j = k1 * m - k2 * n
        if j >= 0:
            phi = b * e_mod(k2, n) * pow(d, j, s) - a * e_mod(k1, m)
        else:
            j = -j
            phi = a * e_mod(k1, m) * pow(d, j, s) - b * e_mod(k2, n)
        return phi % s in hits[oidx(j)]

    L, T = lcm(2, oper), opre
    for k in (k1, k2):
        pre, per = _seq_period(lambda x, k=k: 1 + pow(d, k, s) * x, 0, s)
        L, T = lcm(L, per), max(T, pre)
    if s > 1:
        pre, per = mult_order(d % s, s)
        L, T = lcm(L, per), max(T, pre)
    for E in (row0, col0):
        L, T = lcm(L, max(E.period, 1)), max(T, E.threshold)
    res = _synth("decomposed:constant", member, L, T + 1, [(k1, k2)], params)
    return res


def _decomp_poly_c(spec: DecompSpec, f: Poly, g: Poly, c: Poly, params) -> EngineResult:
    if spec.r > 0:
        return EngineResult("decomposed:origin", lambda m, n: True, SemiLin2.full(), 0, params=params)
    k1, k2, k3, s = spec.k1, spec.k2, spec.k3, spec.s
    m0 = max(1, -(-(k3 + 1) // k1))
    n0 = max(1, -(-(k3 + 1) // k2))
    same = (spec.z1 - spec.z2) % s == 0
    Z0 = orbit_progression(spec.h, 0, 0, spec.budget).progression

    def zero_row(k: int) -> EPSet1:
        # twist differs from c's, so common points are the roots of h^k3 and the
        # condition reduces to h^|k n - k3|(0) = 0
        per = max(Z0.period, 1)
        return EPSet1.from_predicate(lambda n: abs(k * n - k3) in Z0,
                                     -(-(Z0.threshold + k3) // k) + 1, per)

    rows, cols = [], []
    for m in range(m0):
        P = iterate(f, m)
        zr = None
        if m and k1 * m == k3 and (spec.z1 - spec.z3) % s:
            zr = zero_row(k2)
        rows.append(_finite_row(P, g, c, spec.budget, zr))
    for n in range(n0):
        G = iterate(g, n)
        zr = None
        if n and k2 * n == k3 and (spec.z2 - spec.z3) % s:
            zr = zero_row(k1)
        cols.append(_finite_row(G, f, c, spec.budget, zr))

    def member(m: int, n: int) -> bool:
        if m < m0:
            return n in rows[m]
        if n < n0:
            return m in cols[n]
        return same or ((k1 * m - k3) in Z0 and (k2 * n - k3) in Z0)

    L, T = lcm(2, max(Z0.period, 1)), max(m0, n0, Z0.threshold + k3)
    for E in rows + cols:
        L, T = lcm(L, max(E.period, 1)), max(T, E.threshold)
    fid = "decomposed:same-twist" if same else "decomposed:twisted"
    return _synth(fid, member, L, T + 1, (), params)

