"""Command-line front end: ``slrec <command> ...``.

Exit codes: 0 ok, 1 verification mismatch, 2 input error, 3 budget or cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import CycRat, root_of_unity_order
from .oracle import (
    PolyTriple,
    TorsionSpec,
    affine_window,
    chebyshev_lift_window,
    recurrence_window,
    torsion_window,
)
from .polyfield import BudgetExhausted, DegreeCapExceeded, Poly, _norm
from .semilinear import (
    CertificateError,
    SaturationExceeded,
    SynthesisError,
    Window,
    diagonal,
    slice_row,
    uniform_period_bound,
    window_equal,
)
from . import engines as E

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# expression grammar


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    zeta: tuple[int, int] | None  # (conductor n, exponent j)
    power: int

    def value(self):
        if self.zeta is None:
            return self.coeff
        n, j = self.zeta
        return _norm(CycRat.zeta(n, j) * self.coeff)


@dataclass(frozen=True)
class ExprAST:
    terms: tuple[Term, ...]

    def to_poly(self) -> Poly:
        out = Poly()
        for t in self.terms:
            out = out + Poly.monomial(t.value(), t.power)
        return out


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.i = 0

    def _ws(self):
        while self.i < len(self.src) and self.src[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self._ws()
        return self.src[self.i] if self.i < len(self.src) else ""

    def eat(self, tok: str) -> bool:
        self._ws()
        if self.src.startswith(tok, self.i):
            self.i += len(tok)
            return True
        return False

    def expect(self, tok: str):
        if not self.eat(tok):
            raise ParseError(f"expected {tok!r}", self.i)

    def nat(self) -> int:
        self._ws()
        j = self.i
        while j < len(self.src) and self.src[j].isdigit():
            j += 1
        if j == self.i:
            if self.src.startswith("-", self.i):
                raise ParseError("negative exponent", self.i)
            raise ParseError("expected a natural number", self.i)
        v = int(self.src[self.i:j])
        self.i = j
        return v

    def rat(self) -> Fraction:
        neg = self.eat("-")
        num = self.nat()
        den = 1
        if self.eat("/"):
            pos = self.i
            den = self.nat()
            if den == 0:
                raise ParseError("zero denominator", pos)
        q = Fraction(num, den)
        return -q if neg else q

    def zeta(self) -> tuple[int, int]:
        self.expect("zeta(")
        pos = self.i
        n = self.nat()
        if n == 0:
            raise ParseError("zeta order must be positive", pos)
        self.expect(")")
        j = self.nat() if self.eat("^") else 1
        return n, j

    def zpow(self) -> int:
        self.expect("z")
        return self.nat() if self.eat("^") else 1

    def term(self, sign: int) -> Term:
        ch = self.peek()
        if ch == "z" and not self.src.startswith("zeta(", self.i):
            return Term(Fraction(sign), None, self.zpow())
        if ch == "z":
            coeff, zeta = Fraction(1), self.zeta()
        elif ch.isdigit() or ch == "-":
            coeff, zeta = self.rat(), None
            self._ws()
            if self.src.startswith("*", self.i):
                save = self.i
                self.i += 1
                if self.peek() == "z" and self.src.startswith("zeta(", self.i):
                    zeta = self.zeta()
                else:
                    self.i = save
        else:
            raise ParseError("expected a term", self.i)
        power = 0
        save = self.i
        star = self.eat("*")
        if self.peek() == "z" and not self.src.startswith("zeta(", self.i):
            power = self.zpow()
        elif star:
            raise ParseError("expected 'z' after '*'", self.i)
        else:
            self.i = save
        return Term(sign * coeff, zeta, power)

    def poly(self) -> ExprAST:
        if not self.peek():
            raise ParseError("empty expression", self.i)
        # a leading minus before z or zeta(...) is accepted as a sign
        save = self.i
        if self.eat("-") and self.peek() == "z":
            terms = [self.term(-1)]
        else:
            self.i = save
            terms = [self.term(1)]
        while True:
            if self.eat("+"):
                terms.append(self.term(1))
            elif self.eat("-"):
                terms.append(self.term(-1))
            else:
                break
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.i)
        return ExprAST(tuple(terms))


def parse_ast(src: str) -> ExprAST:
    return _Parser(src).poly()


def parse_poly(src: str) -> Poly:
    """Exact polynomial from text such as ``"1/2*z"`` or ``"zeta(3)*z^2 - 1"``."""
    return parse_ast(src).to_poly()


def print_ast(ast: ExprAST) -> str:
    out = []
    for i, t in enumerate(ast.terms):
        c = t.coeff
        if i:
            out.append(" - " if c < 0 else " + ")
            c = abs(c)
        if t.zeta is None and t.power and c == 1:
            body = ""
        else:
            body = str(c)
            if t.zeta is not None:
                n, j = t.zeta
                body += f"*zeta({n})^{j}"
        if t.power:
            mono = "z" if t.power == 1 else f"z^{t.power}"
            body = f"{body}*{mono}" if body else mono
        out.append(body)
    return "".join(out)


# ---------------------------------------------------------------------------
# argument plumbing


def _common(p: argparse.ArgumentParser, window: bool = True):
    if window:
        p.add_argument("-M", type=int, default=10, help="window rows (m in 0..M-1)")
        p.add_argument("-N", type=int, default=10, help="window columns (n in 0..N-1)")
    p.add_argument("--exclude-zero", action="store_true")
    p.add_argument("--degree-cap", type=int, default=None)
    p.add_argument("--horizon", type=int, default=E.DEFAULT_HORIZON)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)


def _triple_args(p):
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--c", required=True)


def _engine_family(sub, window: bool = True):
    """Attach the five engine families to a subparser collection."""
    p = sub.add_parser("power", help="f = z^d1, g = zeta z^d2, c a root of unity")
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--zeta-ord", type=int, default=1)
    p.add_argument("--zeta-exp", type=int, default=None)
    p.add_argument("--zeta", default=None, help="zeta as an expression")
    p.add_argument("--c-ord", type=int, default=1)
    p.add_argument("--c-exp", type=int, default=0)
    p.add_argument("--c", default=None, help="c as an expression")
    _common(p, window)

    p = sub.add_parser("chebyshev", help="f = eps1 T_r, g = eps2 T_s, c = eps3 T_t")
    for name in ("r", "s", "t"):
        p.add_argument(f"--{name}", type=int, required=True)
    for name in ("eps1", "eps2", "eps3"):
        p.add_argument(f"--{name}", type=int, default=1)
    _common(p, window)

    p = sub.add_parser("affine", help="degree-one f, g against c of degree <= 1")
    _triple_args(p)
    _common(p, window)

    p = sub.add_parser("decomposed", help="f = zeta1 h^k1, g = zeta2 h^k2")
    p.add_argument("--h", required=True)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--z1", type=int, default=0)
    p.add_argument("--z2", type=int, default=0)
    p.add_argument("--c", default=None, help="constant c")
    p.add_argument("--z3", type=int, default=0)
    p.add_argument("--k3", type=int, default=0)
    p.add_argument("--s", type=int, default=None)
    _common(p, window)

    p = sub.add_parser("gallery", help="named examples")
    p.add_argument("name", choices=("deg1counter1", "deg1counter2", "powertil"))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--s", type=int, default=3)
    _common(p, window)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slrec", description="Recurrence sets of polynomial triples.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="gcd oracle window for (f, g, c)")
    _triple_args(p)
    _common(p)

    p = sub.add_parser("affine-oracle", help="closed-form window for degree-one f, g")
    _triple_args(p)
    _common(p)

    p = sub.add_parser("torsion-oracle", help="window of the torsion system")
    for name in ("d1", "d2", "k"):
        p.add_argument(f"--{name}", type=int, required=True)
    for name in ("a", "e", "d3", "d4"):
        p.add_argument(f"--{name}", type=int, default=0)
    _common(p)

    for cmd, hlp in (("engine", "run a closed-form engine"),
                     ("verify", "compare an engine with its oracle"),
                     ("period", "row eventual periods of the engine set"),
                     ("diag", "diagonal of the engine set")):
        p = sub.add_parser(cmd, help=hlp)
        fam = p.add_subparsers(dest="family", required=True)
        _engine_family(fam)
        if cmd == "verify":
            for q in fam.choices.values():
                q.add_argument("--battery", type=int, default=0,
                               help="check this many random specs instead (power, chebyshev, affine)")

    p = sub.add_parser("slice", help="row slice of the engine set")
    p.add_argument("--row", type=int, required=True)
    fam = p.add_subparsers(dest="family", required=True)
    _engine_family(fam)

    p = sub.add_parser("certify", help="non-semilinearity certificate")
    p.add_argument("name", choices=("powertil", "deg1counter1"))
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--s", type=int, default=3)
    _common(p, window=False)
    return ap


def _const(src: str):
    p = parse_poly(src)
    if p.degree > 0:
        raise ValueError(f"expected a constant, got {src!r}")
    return p.coeff(0)


def _root(x) -> tuple[int, int]:
    """(order, exponent) with x = exp(2 pi i exponent / order)."""
    x = _norm(x)
    if x == 0:
        raise ValueError("zero is not a root of unity")
    k = root_of_unity_order(x)
    if k is None:
        raise ValueError(f"{x} is not a root of unity")
    for j in range(k):
        if _norm(CycRat.zeta(k, j)) == x:
            return k, j
    raise ValueError(f"{x} is not a root of unity")  # pragma: no cover


def _affine_coeffs(args) -> tuple:
    f, g, c = (parse_poly(s) for s in (args.f, args.g, args.c))
    if f.degree != 1 or g.degree != 1 or c.degree > 1:
        raise ValueError("affine needs deg f = deg g = 1 and deg c <= 1")
    return f.coeff(1), f.coeff(0), g.coeff(1), g.coeff(0), c.coeff(1), c.coeff(0)


def power_spec(args) -> E.PowerSpec:
    zo, ze = args.zeta_ord, args.zeta_exp
    if args.zeta is not None:
        zo, ze = _root(_const(args.zeta))
    elif ze is None:
        ze = 1 if zo > 1 else 0
    co, ce = args.c_ord, args.c_exp
    if args.c is not None:
        co, ce = _root(_const(args.c))
    return E.PowerSpec(args.d1, args.d2, zo, ze, co, ce)


def _decomp_spec(args) -> E.DecompSpec:
    h = parse_poly(args.h)
    c = _const(args.c) if args.c is not None else None
    return E.DecompSpec(h, args.k1, args.k2, args.z1, args.z2, c_const=c, z3=args.z3, k3=args.k3,
                        s_hint=args.s)


def run_engine(args) -> E.EngineResult:
    fam = args.family
    if fam == "power":
        return E.power_engine(power_spec(args))
    if fam == "chebyshev":
        return E.chebyshev_engine(E.ChebSpec(args.r, args.s, args.t, args.eps1, args.eps2, args.eps3))
    if fam == "affine":
        return E.affine_engine(E.AffineSpec(*_affine_coeffs(args), horizon=args.horizon))
    if fam == "decomposed":
        return E.decomposed_engine(_decomp_spec(args))
    return E.gallery(args.name, k=args.k, r=args.r, s=args.s)


def oracle_for(args, M: int, N: int) -> Window:
    fam = args.family
    if fam == "power":
        sp = power_spec(args)
        return torsion_window(TorsionSpec(sp.d1, sp.d2, sp.k, sp.a, sp.e), M, N)
    if fam == "chebyshev":
        return chebyshev_lift_window(args.r, args.s, args.t, args.eps1, args.eps2, args.eps3, M, N)
    if fam == "affine":
        return affine_window(*_affine_coeffs(args), M, N)
    if fam == "decomposed":
        f, g, c = _decomp_spec(args).polys()
        return recurrence_window(PolyTriple(f, g, c), M, N, args.degree_cap)
    if args.name == "powertil":
        return torsion_window(TorsionSpec(args.r, args.s, 2, 1, 0, 1, 1), M, N)
    if args.name == "deg1counter1":
        t = PolyTriple(Poly([0, Fraction(1, 2)]), Poly([-1, 1]), Poly([1]))
    else:
        t = PolyTriple(Poly([0, 2]), Poly([1, 1]), Poly.monomial(1, args.k))
    return recurrence_window(t, M, N, args.degree_cap)


def _random_args(fam: str, rng: random.Random, base):
    a = argparse.Namespace(**vars(base))
    if fam == "power":
        a.d1, a.d2 = rng.choice((2, 3, 4, 5)), rng.choice((2, 3, 4, 5))
        a.zeta = a.c = None
        a.zeta_ord, a.c_ord = rng.randint(1, 6), rng.randint(1, 6)
        a.zeta_exp, a.c_exp = rng.randrange(a.zeta_ord), rng.randrange(a.c_ord)
    elif fam == "chebyshev":
        a.r, a.s, a.t = rng.randint(2, 5), rng.randint(2, 5), rng.randint(1, 4)
        a.eps1, a.eps2, a.eps3 = (rng.choice((1, -1)) for _ in range(3))
    elif fam == "affine":
        def q(nonzero=False):
            while True:
                x = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                if x or not nonzero:
                    return str(x)
        a.f = f"{q(True)}*z + {q()}".replace("+ -", "- ")
        a.g = f"{q(True)}*z + {q()}".replace("+ -", "- ")
        a.c = f"{q()}*z + {q()}".replace("+ -", "- ")
    else:
        raise ValueError(f"no random battery for {fam}")
    return a


def _spec_summary(args) -> dict:
    keys = {"power": ("d1", "d2", "zeta_ord", "zeta_exp", "c_ord", "c_exp", "zeta", "c"),
            "chebyshev": ("r", "s", "t", "eps1", "eps2", "eps3"),
            "affine": ("f", "g", "c"),
            "decomposed": ("h", "k1", "k2", "z1", "z2", "c", "z3", "k3", "s"),
            "gallery": ("name", "k", "r", "s")}[args.family]
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _verify_one(args) -> dict:
    res = run_engine(args)
    W1 = res.window(args.M, args.N)
    W2 = oracle_for(args, args.M, args.N)
    ok, cell = window_equal(W1, W2)
    out = {"spec": _spec_summary(args), "formula": res.formula_id, "match": ok}
    if not ok:
        out["first_difference"] = {"cell": list(cell), "engine": W1[cell], "oracle": W2[cell]}
    return out


# ---------------------------------------------------------------------------
# output


def _emit(doc: dict, text: str, fmt: str):
    if fmt == "json":
        print(json.dumps(doc, indent=2, default=str))
    else:
        print(text)


def _window_doc(W: Window, fmt: str) -> int:
    _emit(W.to_dict(), W.render(), fmt)
    return EXIT_BUDGET if W.meta.get("errors") else EXIT_OK


def _cmd(args) -> int:
    cmd, fmt = args.command, args.format
    if getattr(args, "degree_cap", None) is not None and args.degree_cap < 1:
        raise ValueError("degree cap must be positive")
    if hasattr(args, "M") and (args.M < 0 or args.N < 0):
        raise ValueError("window sizes must be nonnegative")

    if cmd == "oracle":
        t = PolyTriple(parse_poly(args.f), parse_poly(args.g), parse_poly(args.c), args.exclude_zero)
        return _window_doc(recurrence_window(t, args.M, args.N, args.degree_cap), fmt)
    if cmd == "affine-oracle":
        return _window_doc(affine_window(*_affine_coeffs(args), args.M, args.N), fmt)
    if cmd == "torsion-oracle":
        sp = TorsionSpec(args.d1, args.d2, args.k, args.a % args.k, args.e % args.k, args.d3, args.d4)
        return _window_doc(torsion_window(sp, args.M, args.N), fmt)

    if cmd == "certify":
        res = E.gallery(args.name, r=args.r, s=args.s)
        cert = res.certificate
        doc = {"name": args.name, "certificate": cert.to_dict()}
        _emit(doc, f"{args.name}: {cert.mode} ({cert.kind}) values {list(cert.periods)}", fmt)
        return EXIT_OK

    if cmd == "verify":
        if args.battery:
            if args.family not in ("power", "chebyshev", "affine"):
                raise ValueError("--battery supports power, chebyshev and affine")
            rng = random.Random(args.seed)
            reports, status = [], EXIT_OK
            for _ in range(args.battery):
                while True:
                    a = _random_args(args.family, rng, args)
                    try:
                        rep = _verify_one(a)
                        break
                    except E.EngineError:
                        continue
                reports.append(rep)
                if not rep["match"]:
                    status = EXIT_MISMATCH
                    break
            bad = [r for r in reports if not r["match"]]
            text = f"{len(reports)} specs, {len(bad)} mismatches"
            if bad:
                text += f"; first: {bad[0]['spec']} cell {bad[0]['first_difference']['cell']}"
            _emit({"checked": len(reports), "mismatches": bad}, text, fmt)
            return status
        rep = _verify_one(args)
        text = "match" if rep["match"] else \
            f"mismatch at {tuple(rep['first_difference']['cell'])}: engine {rep['first_difference']['engine']}, " \
            f"oracle {rep['first_difference']['oracle']}"
        _emit(rep, text, fmt)
        return EXIT_OK if rep["match"] else EXIT_MISMATCH

    res = run_engine(args)
    if cmd == "engine":
        doc = res.to_dict()
        lines = [f"formula: {res.formula_id}"]
        if res.semilin2 is not None:
            lines.append(f"sporadic: {sorted(res.semilin2.sporadic)}")
            for c in res.semilin2.components:
                lines.append(f"linear: base {c.base} gens {list(c.gens)}")
        if res.certificate is not None:
            lines.append(f"certificate: {res.certificate.mode} ({res.certificate.kind})")
        lines.extend(f"flag: {f}" for f in res.flags)
        lines.append(res.window(args.M, args.N).render())
        _emit(doc, "\n".join(lines), fmt)
        return EXIT_OK
    if res.semilin2 is None:
        raise ValueError(f"{res.formula_id} is not semilinear; no slice/period/diagonal data")
    S = res.semilin2
    if cmd == "slice":
        if args.row < 0:
            raise ValueError("row must be nonnegative")
        row = slice_row(S, args.row)
        _emit({"row": args.row, "set": row.to_dict()}, row.describe(), fmt)
        return EXIT_OK
    if cmd == "period":
        D = uniform_period_bound(S)
        rows = [{"m": m, "threshold": r.threshold, "period": r.period}
                for m in range(args.M) for r in [slice_row(S, m)]]
        text = f"uniform bound {D}\n" + "\n".join(f"m={r['m']}: period {r['period']} from {r['threshold']}" for r in rows)
        _emit({"uniform_period_bound": D, "rows": rows}, text, fmt)
        return EXIT_OK
    if cmd == "diag":
        dg = diagonal(S)
        _emit({"diagonal": dg.to_dict()}, dg.describe(), fmt)
        return EXIT_OK
    raise ValueError(f"unknown command {cmd}")  # pragma: no cover


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return _cmd(args)
    except (BudgetExhausted, DegreeCapExceeded, SaturationExceeded) as exc:
        print(json.dumps({"error": "budget", "message": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    except ParseError as exc:
        print(json.dumps({"error": "parse", "message": str(exc), "position": exc.pos}), file=sys.stderr)
        return EXIT_INPUT
    except (E.EngineError, CertificateError, SynthesisError, ValueError) as exc:
        code = "unsupported" if isinstance(exc, E.Unsupported) else "input"
        print(json.dumps({"error": code, "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
