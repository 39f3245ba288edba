"""Semilinear sets in dimension one and two.

Dimension one uses a canonical eventually periodic form (``EPSet1``); dimension
two uses finite unions of linear sets plus an explicit finite part
(``SemiLin2``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable

from .exactnum import lcm


class SaturationExceeded(RuntimeError):
    pass


class SynthesisError(RuntimeError):
    pass


class CertificateError(ValueError):
    pass


# ---------------------------------------------------------------------------
# dimension one


@dataclass(frozen=True)
class EPSet1:
    """{x < N : x in exceptions} union {x >= N : (x - N) mod p in residues}."""

    exceptions: frozenset
    threshold: int
    period: int
    residues: frozenset

    # -- construction
    @staticmethod
    def from_predicate(mem: Callable[[int], bool], N: int, p: int) -> "EPSet1":
        """Canonical form of a set known to be p-periodic from N on (p = 0: finite below N)."""
        if p <= 0:
            members = {x for x in range(N) if mem(x)}
            top = max(members) + 1 if members else 0
            return EPSet1(frozenset(members), top, 0, frozenset())
        pattern = [bool(mem(N + i)) for i in range(p)]
        if not any(pattern):
            members = {x for x in range(N) if mem(x)}
            top = max(members) + 1 if members else 0
            return EPSet1(frozenset(members), top, 0, frozenset())
        q = next(d for d in range(1, p + 1) if p % d == 0 and all(pattern[i] == pattern[i % d] for i in range(p)))
        cache = {N + i: pattern[i % q] for i in range(q)}

        def at(x: int) -> bool:
            if x >= N:
                return pattern[(x - N) % q]
            if x not in cache:
                cache[x] = bool(mem(x))
            return cache[x]

        n0 = N
        while n0 > 0 and at(n0 - 1) == at(n0 - 1 + q):
            n0 -= 1
        exc = frozenset(x for x in range(n0) if at(x))
        res = frozenset(i for i in range(q) if at(n0 + i))
        return EPSet1(exc, n0, q, res)

    @staticmethod
    def finite(xs: Iterable[int]) -> "EPSet1":
        xs = frozenset(int(x) for x in xs)
        if any(x < 0 for x in xs):
            raise ValueError("members must be nonnegative")
        return EPSet1(xs, max(xs) + 1 if xs else 0, 0, frozenset())

    @staticmethod
    def empty() -> "EPSet1":
        return EPSet1(frozenset(), 0, 0, frozenset())

    @staticmethod
    def full() -> "EPSet1":
        return EPSet1(frozenset(), 0, 1, frozenset({0}))

    @staticmethod
    def progression(a: int, b: int) -> "EPSet1":
        """{a + b k : k >= 0}; b = 0 gives {a}."""
        if b == 0:
            return EPSet1.finite([a])
        return EPSet1.from_predicate(lambda x: x >= a and (x - a) % b == 0, a, b)

    # -- queries
    def __contains__(self, x: int) -> bool:
        if x < 0:
            return False
        if x < self.threshold:
            return x in self.exceptions
        return self.period > 0 and (x - self.threshold) % self.period in self.residues

    def member(self, x: int) -> bool:
        return x in self

    def is_empty(self) -> bool:
        return not self.exceptions and not self.residues

    def is_finite(self) -> bool:
        return self.period == 0

    def elements_below(self, bound: int) -> list[int]:
        return [x for x in range(bound) if x in self]

    def _frame(self) -> tuple[int, int]:
        return self.threshold, max(self.period, 1)

    # -- boolean algebra
    @staticmethod
    def _combine(sets: list["EPSet1"], op) -> "EPSet1":
        N = max(s.threshold for s in sets)
        p = lcm(*(s.period for s in sets if s.period)) if any(s.period for s in sets) else 1
        return EPSet1.from_predicate(lambda x: op([x in s for s in sets]), N, p)

    def union(self, other: "EPSet1") -> "EPSet1":
        return EPSet1._combine([self, other], any)

    def intersect(self, other: "EPSet1") -> "EPSet1":
        return EPSet1._combine([self, other], all)

    def complement(self) -> "EPSet1":
        return EPSet1._combine([self], lambda v: not v[0])

    def difference(self, other: "EPSet1") -> "EPSet1":
        return EPSet1._combine([self, other], lambda v: v[0] and not v[1])

    def shift(self, k: int) -> "EPSet1":
        """{x + k : x in self}."""
        return EPSet1.from_predicate(lambda x: x >= k and (x - k) in self, self.threshold + k, self.period)

    @staticmethod
    def union_all(sets: Iterable["EPSet1"]) -> "EPSet1":
        sets = list(sets)
        if not sets:
            return EPSet1.empty()
        return EPSet1._combine(sets, any)

    def progressions(self) -> list[tuple[int, int]]:
        """Decomposition as (base, step) pairs; step 0 means a single point."""
        out = [(x, 0) for x in sorted(self.exceptions)]
        out += [(self.threshold + r, self.period) for r in sorted(self.residues)]
        return out

    # -- serialization
    def to_dict(self) -> dict:
        return {
            "exceptions": sorted(self.exceptions),
            "threshold": self.threshold,
            "period": self.period,
            "residues": sorted(self.residues),
        }

    @staticmethod
    def from_dict(d: dict) -> "EPSet1":
        s = EPSet1(frozenset(d["exceptions"]), d["threshold"], d["period"], frozenset(d["residues"]))
        return EPSet1.from_predicate(s.member, s.threshold, s.period)

    def describe(self) -> str:
        parts = [str(x) for x in sorted(self.exceptions)]
        for r in sorted(self.residues):
            parts.append(f"{self.threshold + r}+{self.period}k")
        return "{" + ", ".join(parts) + "}"


def eventual_period(a: EPSet1) -> int:
    return a.period


def numerical_semigroup_set(gens: Iterable[int], offset: int = 0) -> EPSet1:
    """{offset + sum c_i g_i : c_i >= 0}."""
    gens = sorted(set(int(g) for g in gens))
    if not gens or gens[0] < 1:
        raise ValueError("generators must be positive")
    g = 0
    for x in gens:
        g = gcd(g, x)
    norm = [x // g for x in gens]
    bound = norm[0] * (norm[1] if len(norm) > 1 else 1) + 1
    reach = [False] * (bound + 1)
    reach[0] = True
    for i in range(1, bound + 1):
        reach[i] = any(i >= x and reach[i - x] for x in norm)

    def mem(x: int) -> bool:
        y = x - offset
        if y < 0 or y % g:
            return False
        y //= g
        return y > bound or reach[y]

    return EPSet1.from_predicate(mem, offset + g * bound, g)


# ---------------------------------------------------------------------------
# dimension two


Point = tuple[int, int]


@dataclass(frozen=True)
class LinSet:
    base: Point
    gens: tuple[Point, ...]

    def __init__(self, base, gens=()):
        base = (int(base[0]), int(base[1]))
        clean = sorted({(int(x), int(y)) for x, y in gens})
        if any(x < 0 or y < 0 for x, y in clean) or base[0] < 0 or base[1] < 0:
            raise ValueError("linear sets live in the nonnegative quadrant")
        clean = tuple(g for g in clean if g != (0, 0))
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "gens", clean)

    def to_dict(self) -> dict:
        return {"base": list(self.base), "gens": [list(g) for g in self.gens]}


def _reach_rows(gens: tuple[Point, ...], dx: int, dy: int) -> list[int]:
    """Row bitmasks of monoid(gens) inside [0,dx] x [0,dy]."""
    width = dy + 1
    mask = (1 << width) - 1
    flat = [gy for gx, gy in gens if gx == 0]
    steep = [(gx, gy) for gx, gy in gens if gx > 0]
    rows = []
    for x in range(dx + 1):
        r = 1 if x == 0 else 0
        for gx, gy in steep:
            if gx <= x:
                r |= (rows[x - gx] << gy) & mask
        for gy in flat:
            step = gy
            while step <= dy and r:
                new = r | ((r << step) & mask)
                if new == r and step == gy:
                    break
                r = new
                step *= 2
        changed = True
        while changed and flat:
            changed = False
            for gy in flat:
                new = r | ((r << gy) & mask)
                if new != r:
                    r, changed = new, True
        rows.append(r)
    return rows


def member_lin(L: LinSet, p: Point) -> bool:
    dx, dy = p[0] - L.base[0], p[1] - L.base[1]
    if dx < 0 or dy < 0:
        return False
    if dx == 0 and dy == 0:
        return True
    rows = _reach_rows(L.gens, dx, dy)
    return bool((rows[dx] >> dy) & 1)


@dataclass(frozen=True)
class SemiLin2:
    components: tuple[LinSet, ...] = ()
    sporadic: frozenset = field(default_factory=frozenset)

    def __init__(self, components=(), sporadic=()):
        seen = []
        for c in components:
            if c not in seen:
                seen.append(c)
        object.__setattr__(self, "components", tuple(seen))
        object.__setattr__(self, "sporadic", frozenset((int(a), int(b)) for a, b in sporadic))

    @staticmethod
    def full() -> "SemiLin2":
        return SemiLin2([LinSet((0, 0), [(1, 0), (0, 1)])])

    @staticmethod
    def empty() -> "SemiLin2":
        return SemiLin2()

    @staticmethod
    def product(a: EPSet1, b: EPSet1) -> "SemiLin2":
        comps, spor = [], []
        for x0, px in a.progressions():
            for y0, py in b.progressions():
                gens = ([(px, 0)] if px else []) + ([(0, py)] if py else [])
                if gens:
                    comps.append(LinSet((x0, y0), gens))
                else:
                    spor.append((x0, y0))
        return SemiLin2(comps, spor)

    def member(self, p: Point) -> bool:
        if tuple(p) in self.sporadic:
            return True
        return any(member_lin(c, p) for c in self.components)

    def __contains__(self, p: Point) -> bool:
        return self.member(p)

    def union(self, other: "SemiLin2") -> "SemiLin2":
        return SemiLin2(self.components + other.components, self.sporadic | other.sporadic)

    def transpose(self) -> "SemiLin2":
        return SemiLin2(
            [LinSet(c.base[::-1], [g[::-1] for g in c.gens]) for c in self.components],
            [(b, a) for a, b in self.sporadic],
        )

    def points(self, M: int, N: int) -> set[Point]:
        """All members in [0,M) x [0,N)."""
        out = {p for p in self.sporadic if p[0] < M and p[1] < N}
        for c in self.components:
            if c.base[0] >= M or c.base[1] >= N:
                continue
            stack = [c.base]
            seen = {c.base}
            while stack:
                x, y = stack.pop()
                for gx, gy in c.gens:
                    q = (x + gx, y + gy)
                    if q[0] < M and q[1] < N and q not in seen:
                        seen.add(q)
                        stack.append(q)
            out |= seen
        return out

    def to_dict(self) -> dict:
        return {
            "dim": 2,
            "sporadic": [list(p) for p in sorted(self.sporadic)],
            "linear": [c.to_dict() for c in self.components],
        }

    @staticmethod
    def from_dict(d: dict) -> "SemiLin2":
        if d.get("dim", 2) != 2:
            raise ValueError("expected a two-dimensional set")
        comps = [LinSet(tuple(c["base"]), [tuple(g) for g in c["gens"]]) for c in d.get("linear", [])]
        return SemiLin2(comps, [tuple(p) for p in d.get("sporadic", [])])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def member(S, p) -> bool:
    if isinstance(S, EPSet1):
        return p in S
    if isinstance(S, LinSet):
        return member_lin(S, p)
    return S.member(p)


def union(S, T):
    if isinstance(S, EPSet1):
        return S.union(T)
    return S.union(T)


# -- linear Diophantine systems over N (Contejean-Devie completion)


def default_saturation_bound(bases: list[Point], gens: list[Point]) -> int:
    mb = max((max(b) for b in bases), default=0)
    sg = sum(x + y for x, y in gens)
    return 2 * (mb + sg) * max(1, len(gens))


def solve_nonneg(cols: list[tuple[int, ...]], rhs: tuple[int, ...], bound: int):
    """Minimal solutions of sum_j x_j cols[j] = rhs over N.

    Returns (particular, homogeneous): the minimal solutions of the
    inhomogeneous system and the Hilbert basis of the homogeneous one.
    """
    k = len(rhs)
    n = len(cols)
    allcols = list(cols) + [tuple(-r for r in rhs)]
    t = n
    basis: list[tuple[int, ...]] = []
    frontier = []
    for j in range(n + 1):
        x = [0] * (n + 1)
        x[j] = 1
        frontier.append((tuple(x), allcols[j]))
    while frontier:
        for x, img in frontier:
            if not any(img):
                basis.append(x)
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for x, img in frontier:
            if not any(img):
                continue
            for j in range(n + 1):
                if j == t and x[t] >= 1:
                    continue
                col = allcols[j]
                if sum(img[r] * col[r] for r in range(k)) >= 0:
                    continue
                y = list(x)
                y[j] += 1
                y = tuple(y)
                if y in nxt:
                    continue
                if any(all(y[i] >= b[i] for i in range(n + 1)) for b in basis):
                    continue
                if max(y) > bound:
                    raise SaturationExceeded(
                        f"saturation bound {bound} exceeded while solving the linear system"
                    )
                nxt[y] = tuple(img[r] + col[r] for r in range(k))
        frontier = list(nxt.items())
    part = [b[:n] for b in basis if b[t] == 1]
    hom = [b[:n] for b in basis if b[t] == 0]
    return part, hom


def intersect_lin(L1: LinSet, L2: LinSet, bound: int | None = None) -> SemiLin2:
    g1, g2 = list(L1.gens), list(L2.gens)
    if bound is None:
        bound = default_saturation_bound([L1.base, L2.base], g1 + g2)
    cols = [g for g in g1] + [(-x, -y) for x, y in g2]
    rhs = (L2.base[0] - L1.base[0], L2.base[1] - L1.base[1])
    if not cols:
        return SemiLin2([], [L1.base] if L1.base == L2.base else [])
    part, hom = solve_nonneg(cols, rhs, bound)
    k1 = len(g1)

    def image(c):
        return (
            L1.base[0] + sum(c[i] * g1[i][0] for i in range(k1)),
            L1.base[1] + sum(c[i] * g1[i][1] for i in range(k1)),
        )

    hgens = []
    for h in hom:
        v = (sum(h[i] * g1[i][0] for i in range(k1)), sum(h[i] * g1[i][1] for i in range(k1)))
        if v != (0, 0):
            hgens.append(v)
    comps, spor = [], []
    for c in part:
        b = image(c)
        if hgens:
            comps.append(LinSet(b, hgens))
        else:
            spor.append(b)
    return SemiLin2(comps, spor)


# -- slices, periods, diagonal


def slice_row(S: SemiLin2, m: int) -> EPSet1:
    pieces = [EPSet1.finite([n for (a, n) in S.sporadic if a == m])]
    for c in S.components:
        dx = m - c.base[0]
        if dx < 0:
            continue
        steep = [g for g in c.gens if g[0] > 0]
        flat = [g[1] for g in c.gens if g[0] == 0]
        reach: list[set[int]] = [set() for _ in range(dx + 1)]
        reach[0].add(0)
        for x in range(1, dx + 1):
            for gx, gy in steep:
                if gx <= x:
                    reach[x] |= {y + gy for y in reach[x - gx]}
        for y in sorted(reach[dx]):
            off = c.base[1] + y
            pieces.append(numerical_semigroup_set(flat, off) if flat else EPSet1.finite([off]))
    return EPSet1.union_all(pieces)


def slice_col(S: SemiLin2, n: int) -> EPSet1:
    return slice_row(S.transpose(), n)


def uniform_period_bound(S: SemiLin2) -> int:
    D = 1
    for c in S.components:
        ys = [g[1] for g in c.gens if g[0] == 0 and g[1] > 0]
        if ys:
            d = 0
            for y in ys:
                d = gcd(d, y)
            D = lcm(D, d)
    return D


def diagonal(S: SemiLin2, bound: int | None = None) -> EPSet1:
    pieces = [EPSet1.finite([a for (a, b) in S.sporadic if a == b])]
    for c in S.components:
        gens = list(c.gens)
        if not gens:
            if c.base[0] == c.base[1]:
                pieces.append(EPSet1.finite([c.base[0]]))
            continue
        cols = [(gx - gy,) for gx, gy in gens]
        rhs = (c.base[1] - c.base[0],)
        b = bound if bound is not None else default_saturation_bound([c.base], gens)
        part, hom = solve_nonneg(cols, rhs, b)
        steps = sorted({sum(h[i] * gens[i][0] for i in range(len(gens))) for h in hom} - {0})
        for sol in part:
            off = c.base[0] + sum(sol[i] * gens[i][0] for i in range(len(gens)))
            pieces.append(numerical_semigroup_set(steps, off) if steps else EPSet1.finite([off]))
    return EPSet1.union_all(pieces)


# -- predicate synthesis


def _clip(v: int, T: int):
    if -T < v < T:
        return v
    return "+" if v >= T else "-"


def _cell_constraints(sig: tuple, forms: list[tuple[int, int]], T: int):
    """Constraints (a, b, op, c) meaning a*m + b*n op c."""
    cons = [(1, 0, ">=", 0), (0, 1, ">=", 0)]
    for (a, b), s in zip([(1, 0), (0, 1)], sig[:2]):
        cons.append((a, b, ">=", T) if s == "+" else (a, b, "==", s))
    for (u, v), s in zip(forms, sig[2:]):
        if s == "+":
            cons.append((u, -v, ">=", T))
        elif s == "-":
            cons.append((u, -v, "<=", min(-T, T - 1)))
        else:
            cons.append((u, -v, "==", s))
    return cons


def _cell_rays(cons, forms) -> list[Point]:
    cands = {(1, 0), (0, 1)}
    for u, v in forms:
        if u * v > 0 or (u == 0) != (v == 0):
            g = gcd(u, v)
            cands.add((abs(v) // g, abs(u) // g))
    ok = []
    for d in cands:
        good = True
        for a, b, op, _ in cons:
            val = a * d[0] + b * d[1]
            if (op == ">=" and val < 0) or (op == "<=" and val > 0) or (op == "==" and val != 0):
                good = False
                break
        if good:
            ok.append(d)
    if not ok:
        return []
    # order by angle from the m-axis: compare via cross products
    from functools import cmp_to_key

    ok.sort(key=cmp_to_key(lambda p, q: -1 if p[0] * q[1] - p[1] * q[0] > 0 else 1))
    return [ok[0]] if ok[0] == ok[-1] else [ok[0], ok[-1]]


def _divisors(n: int) -> list[int]:
    return [d for d in range(2, n + 1) if n % d == 0]


def simplify(S: SemiLin2) -> SemiLin2:
    """Set-preserving cleanup: pull bases back along a generator when the slab
    behind them is already present, fuse cosets of a coarse generator into a
    finer one, and drop sporadic points covered by a component."""
    comps = set(S.components)
    spor = set(S.sporadic)
    changed = True
    while changed:
        changed = False
        for c in sorted(comps, key=lambda c: (c.base, c.gens)):
            for g in c.gens:
                b = (c.base[0] - g[0], c.base[1] - g[1])
                if b[0] < 0 or b[1] < 0:
                    continue
                rest = tuple(h for h in c.gens if h != g)
                if rest:
                    slab = LinSet(b, rest)
                    if slab not in comps:
                        continue
                    comps.discard(slab)
                elif b in spor:
                    spor.discard(b)
                else:
                    continue
                comps.discard(c)
                comps.add(LinSet(b, c.gens))
                changed = True
                break
            if changed:
                break
        if changed:
            continue
        for c in sorted(comps, key=lambda c: (c.base, c.gens)):
            for g in c.gens:
                for q in _divisors(gcd(g[0], g[1])):
                    step = (g[0] // q, g[1] // q)
                    grid = [LinSet((c.base[0] + i * step[0], c.base[1] + i * step[1]), c.gens) for i in range(q)]
                    if all(x in comps for x in grid):
                        comps.difference_update(grid)
                        comps.add(LinSet(c.base, [h for h in c.gens if h != g] + [step]))
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    spor = {p for p in spor if not any(member_lin(c, p) for c in comps)}
    order = sorted(comps, key=lambda c: (c.base, c.gens))
    return SemiLin2(order, spor)


def synthesize(
    pred: Callable[[int, int], bool],
    L: int,
    T: int,
    cones: Iterable[tuple[int, int]] = (),
    verify: bool = True,
) -> SemiLin2:
    """Explicit semilinear set for a predicate with a known periodic structure.

    Contract: ``pred(m, n)`` depends only on (m mod L, n mod L) together with
    the clipped values min(m, T), min(n, T) and clip_T(u*m - v*n) for each
    (u, v) in ``cones``, where clip_T keeps values in (-T, T) and collapses
    the rest to their sign.
    """
    if L < 1 or T < 0:
        raise ValueError("need L >= 1 and T >= 0")
    forms = [(int(u), int(v)) for u, v in cones]

    def sig(m: int, n: int) -> tuple:
        s = ["+" if m >= T else m, "+" if n >= T else n]
        s += [_clip(u * m - v * n, T) for u, v in forms]
        return tuple(s)

    maxc = max([1] + [max(abs(u), abs(v)) for u, v in forms])
    box = 3 * T * (maxc + 1) + 2 * L * maxc + 2
    rays_of: dict[tuple, list[Point]] = {}
    comps, spor = [], []
    any_true, all_true = False, True
    for m in range(box):
        for n in range(box):
            s = sig(m, n)
            rays = rays_of.get(s)
            if rays is None:
                rays = rays_of[s] = _cell_rays(_cell_constraints(s, forms, T), forms)
            minimal = True
            for rx, ry in rays:
                pm, pn = m - L * rx, n - L * ry
                if pm >= 0 and pn >= 0 and sig(pm, pn) == s:
                    minimal = False
                    break
            if not minimal:
                continue
            if not pred(m, n):
                all_true = False
                continue
            any_true = True
            if rays:
                comps.append(LinSet((m, n), [(L * rx, L * ry) for rx, ry in rays]))
            else:
                spor.append((m, n))
    # every signature class has its minimal points inside the box
    if all_true:
        out = SemiLin2.full()
    elif not any_true:
        out = SemiLin2.empty()
    else:
        out = simplify(SemiLin2(comps, spor))
    if verify:
        W = T + 4 * L
        got = out.points(W, W)
        for m in range(W):
            for n in range(W):
                if bool(pred(m, n)) != ((m, n) in got):
                    raise SynthesisError(f"synthesis verification failed at {(m, n)}")
    return out


# -- non-semilinearity certificates


@dataclass(frozen=True)
class NonSLCertificate:
    rows: tuple  # (m, EPSet1, provenance)
    periods: tuple[int, ...]
    mode: str  # proved | empirical
    kind: str = "row-periods"
    points: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        if self.kind == "gap-growth":
            return {"mode": self.mode, "kind": self.kind, "points": list(self.points), "gaps": list(self.periods)}
        return {
            "mode": self.mode,
            "kind": self.kind,
            "rows": [
                {"m": m, "period": p, "set": s.to_dict(), "provenance": prov}
                for (m, s, prov), p in zip(self.rows, self.periods)
            ],
        }


def nonsl_certificate(rows: Iterable[tuple[int, EPSet1, str]]) -> NonSLCertificate:
    rows = sorted(rows, key=lambda r: r[0])
    if len(rows) < 2:
        raise CertificateError("a certificate needs at least two rows")
    periods = tuple(eventual_period(s) for _, s, _ in rows)
    if any(p <= 0 for p in periods):
        raise CertificateError("every witness row must be infinite")
    if any(b <= a for a, b in zip(periods, periods[1:])):
        raise CertificateError("eventual periods must be strictly increasing")
    mode = "proved" if all(str(prov).startswith("formula") for _, _, prov in rows) else "empirical"
    return NonSLCertificate(tuple(rows), periods, mode)


# -- windows


@dataclass
class Window:
    M: int
    N: int
    rows: list[list[bool]]
    provenance: str = ""
    meta: dict = field(default_factory=dict)

    def __getitem__(self, mn: Point) -> bool:
        return self.rows[mn[0]][mn[1]]

    def true_cells(self) -> list[Point]:
        return [(m, n) for m in range(self.M) for n in range(self.N) if self.rows[m][n]]

    def to_dict(self) -> dict:
        d = {"M": self.M, "N": self.N, "rows": ["".join("1" if b else "0" for b in r) for r in self.rows]}
        if self.provenance:
            d["provenance"] = self.provenance
        if self.meta.get("errors"):
            d["errors"] = [[m, n, msg] for (m, n), msg in sorted(self.meta["errors"].items())]
        return d

    @staticmethod
    def from_dict(d: dict) -> "Window":
        rows = [[ch == "1" for ch in r] for r in d["rows"]]
        return Window(d["M"], d["N"], rows, d.get("provenance", ""))

    def render(self) -> str:
        return "\n".join("".join("1" if b else "0" for b in r) for r in self.rows)

    def transpose(self) -> "Window":
        rows = [[self.rows[m][n] for m in range(self.M)] for n in range(self.N)]
        return Window(self.N, self.M, rows, self.provenance)


def window_enumerate(S, M: int, N: int, provenance: str = "engine") -> Window:
    if M < 0 or N < 0:
        raise ValueError("window sizes must be nonnegative")
    if isinstance(S, SemiLin2):
        pts = S.points(M, N)
        rows = [[(m, n) in pts for n in range(N)] for m in range(M)]
    elif isinstance(S, LinSet):
        return window_enumerate(SemiLin2([S]), M, N, provenance)
    else:
        rows = [[bool(S(m, n)) for n in range(N)] for m in range(M)]
    return Window(M, N, rows, provenance)


def window_equal(W1: Window, W2: Window) -> tuple[bool, Point | None]:
    if (W1.M, W1.N) != (W2.M, W2.N):
        raise ValueError("windows have different shapes")
    for m in range(W1.M):
        for n in range(W1.N):
            if W1.rows[m][n] != W2.rows[m][n]:
                return False, (m, n)
    return True, None


def gap_certificate(points: Iterable[int], provenance: str) -> NonSLCertificate:
    """Dimension-one witness: consecutive members of an infinite set whose gaps
    strictly increase. Only a closed-form provenance makes this a proof, since
    an eventually periodic set has bounded gaps."""
    pts = sorted(set(int(p) for p in points))
    if len(pts) < 3:
        raise CertificateError("a gap certificate needs at least three points")
    gaps = tuple(b - a for a, b in zip(pts, pts[1:]))
    if any(b <= a for a, b in zip(gaps, gaps[1:])):
        raise CertificateError("gaps must be strictly increasing")
    mode = "proved" if str(provenance).startswith("formula") else "empirical"
    return NonSLCertificate((), gaps, mode, "gap-growth", tuple(pts))
