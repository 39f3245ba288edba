import json
from fractions import Fraction

import pytest

from slrec.cli import ParseError, main, parse_ast, parse_poly, print_ast
from slrec.exactnum import CycRat
from slrec.polyfield import Poly
from slrec.semilinear import SemiLin2


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_examples():
    assert parse_poly("1/2*z") == Poly([0, Fraction(1, 2)])
    p = parse_poly("zeta(3)*z^2 - 1")
    assert p == Poly([-1, 0, CycRat.zeta(3)]) and p.coeff(2).n == 3
    assert parse_poly(" 3 z^2+ -2/4*z -z^0 ") == Poly([-1, Fraction(-1, 2), 3])
    assert parse_poly("-z^3 + 2*zeta(4)^3") == Poly([2 * CycRat.zeta(4, 3), 0, 0, -1])
    assert parse_poly("zeta(2)") == Poly([-1])


@pytest.mark.parametrize("src,msg", [("z^-1", "negative exponent"), ("1/0*z", "zero denominator"),
                                     ("z +", "expected a term"), ("2*", "expected 'z'"), ("", "empty"),
                                     ("z z", "unexpected")])
def test_parse_errors(src, msg):
    with pytest.raises(ParseError, match=msg):
        parse_poly(src)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_poly("z^2 + 3*z^-4")
    assert exc.value.pos == 10


def test_print_roundtrip():
    for src in ("1/2*z", "zeta(3)*z^2 - 1", "-1*zeta(5)^2*z^7 + 3/4", "z^3 - z + 0"):
        ast = parse_ast(src)
        assert parse_ast(print_ast(ast)) == ast


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--f", "1/2*z", "--g", "z-1", "--c", "1", "-M", "4", "-N", "8")
    doc = json.loads(out)
    assert code == 0
    cells = {(m, n) for m, row in enumerate(doc["rows"]) for n, ch in enumerate(row) if ch == "1"}
    assert cells == {(0, 0), (1, 1), (2, 3), (3, 7)}


def test_engine_power_command(capsys):
    code, out, _ = run(capsys, "engine", "power", "--d1", "2", "--d2", "3", "--zeta-ord", "1", "--c", "zeta(2)")
    S = SemiLin2.from_dict(json.loads(out)["semilin2"])
    assert code == 0
    assert {(m, n) for m in range(10) for n in range(10) if S.member((m, n))} == {(0, n) for n in range(10)}


@pytest.mark.parametrize("argv", [
    ["power", "--d1", "2", "--d2", "3", "--c", "zeta(2)"],
    ["power", "--d1", "3", "--d2", "2", "--zeta", "zeta(6)", "--c", "zeta(3)^2"],
    ["chebyshev", "--r", "2", "--s", "3", "--t", "1", "--eps3", "-1"],
    ["affine", "--f", "2*z", "--g", "4*z", "--c", "2*z"],
    ["decomposed", "--h", "z^2-2", "--k1", "1", "--k2", "1", "--z2", "1", "--k3", "1"],
    ["gallery", "deg1counter1", "-N", "40"],
    ["gallery", "powertil", "-M", "16", "-N", "16"],
])
def test_verify_exit_zero(capsys, argv):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == 0, out


def test_verify_battery(capsys):
    code, out, _ = run(capsys, "verify", "affine", "--f", "z", "--g", "z", "--c", "z", "--battery", "15",
                       "--seed", "3", "--format", "text")
    assert code == 0 and out.startswith("15 specs, 0 mismatches")
    again = run(capsys, "verify", "affine", "--f", "z", "--g", "z", "--c", "z", "--battery", "15", "--seed", "3",
                "--format", "text")
    assert again[1] == out


def test_verify_reports_mismatch(capsys, monkeypatch):
    from slrec import cli

    real = cli.oracle_for

    def flipped(args, M, N):
        W = real(args, M, N)
        W.rows[1][2] = not W.rows[1][2]
        return W

    monkeypatch.setattr(cli, "oracle_for", flipped)
    code, out, _ = run(capsys, "verify", "power", "--d1", "2", "--d2", "3")
    assert code == 1
    assert json.loads(out)["first_difference"]["cell"] == [1, 2]


def test_slice_period_diag(capsys):
    base = ["power", "--d1", "2", "--d2", "2", "--zeta-ord", "3", "--c-ord", "3", "--c-exp", "1"]
    code, out, _ = run(capsys, "slice", "--row", "2", *base)
    assert code == 0 and "set" in json.loads(out)
    code, out, _ = run(capsys, "period", *base, "-M", "4")
    assert code == 0 and len(json.loads(out)["rows"]) == 4
    code, out, _ = run(capsys, "diag", *base, "--format", "text")
    assert code == 0 and out.startswith("{")


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "powertil")
    doc = json.loads(out)
    assert code == 0 and doc["certificate"]["mode"] == "proved"
    assert [r["period"] for r in doc["certificate"]["rows"]] == [4, 8, 16, 32]
    code, out, _ = run(capsys, "certify", "deg1counter1")
    assert json.loads(out)["certificate"]["kind"] == "gap-growth"


def test_exit_codes(capsys):
    assert run(capsys, "oracle", "--f", "z^-1", "--g", "z", "--c", "1")[0] == 2
    assert run(capsys, "engine", "power", "--d1", "1", "--d2", "3")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    code, _, err = run(capsys, "oracle", "--f", "z^2", "--g", "z^2", "--c", "z", "-M", "8", "--degree-cap", "16")
    assert code == 3
    code, _, err = run(capsys, "engine", "decomposed", "--h", "z^3-1", "--k1", "1", "--k2", "1", "--c", "0")
    assert code == 2 and "Case 1.1 precondition unverified" in err


def test_env_degree_cap(capsys, monkeypatch):
    monkeypatch.setenv("SLREC_DEGREE_CAP", "16")
    assert run(capsys, "oracle", "--f", "z^2", "--g", "z^2", "--c", "z", "-M", "8")[0] == 3


def test_text_format(capsys):
    code, out, _ = run(capsys, "torsion-oracle", "--d1", "2", "--d2", "3", "--k", "2", "--a", "1", "-M", "2",
                       "-N", "3", "--format", "text")
    assert code == 0 and out.split() == ["111", "000"]
