from fractions import Fraction

import pytest

from slrec import engines as E
from slrec.exactnum import CycRat
from slrec.oracle import PolyTriple, TorsionSpec, affine_window, recurrence_window, torsion_window
from slrec.polyfield import Poly
from slrec.semilinear import EPSet1, SemiLin2, window_equal


def P(*cs):
    return Poly([Fraction(c) for c in cs])


def cells(S, M=12, N=12):
    return {(m, n) for m in range(M) for n in range(N) if S.member((m, n))}


def test_lemma41_check():
    assert E.lemma41_check(2, 1, 1, 3, 3, 1, 1, 2, 2)
    assert not E.lemma41_check(2, 1, 1, 2, 3, 0, 0, 1, 1)
    assert all(E.lemma41_check(5, 0, 0, 2, 3, 0, 0, m, n) for m in range(4) for n in range(4))
    with pytest.raises(E.EngineError):
        E.lemma41_check(2, 1, 1, 3, 3, 9, 1, 1, 1)


def test_lte_nu2():
    assert E.lte_nu2(3, 1, 2, "-") == 3
    assert E.lte_nu2(3, 1, 3, "-") == 1
    assert E.lte_nu2(1, 1, 5, "+") == 1
    with pytest.raises(E.EngineError):
        E.lte_nu2(2, 1, 3, "-")


def test_power_engine_examples():
    assert E.power_engine(E.PowerSpec(2, 3)).semilin2 == SemiLin2.full()
    res = E.power_engine(E.PowerSpec(2, 3, 1, 0, 2, 1))
    assert cells(res.semilin2) == {(0, n) for n in range(12)}


@pytest.mark.parametrize("spec", [(2, 3, 2, 1, 2, 1), (3, 2, 4, 1, 6, 5), (2, 2, 6, 5, 3, 1), (4, 5, 1, 0, 5, 2),
                                  (5, 3, 3, 2, 6, 1)])
def test_power_engine_vs_oracle(spec):
    sp = E.PowerSpec(*spec)
    W = torsion_window(TorsionSpec(sp.d1, sp.d2, sp.k, sp.a, sp.e), 10, 10)
    assert window_equal(E.power_engine(sp).window(10, 10), W)[0]


def test_power_engine_vs_gcd_oracle():
    sp = E.PowerSpec(2, 3, 3, 1, 6, 1)
    f, g, c = sp.polys()
    W = recurrence_window(PolyTriple(f, g, c), 5, 5)
    assert window_equal(E.power_engine(sp).window(5, 5), W)[0]


def test_v_classify():
    assert E.V_classify(2, 3, 1, 1, -1) == ("empty", 2, 1)
    assert E.V_classify(4, 5, 3, 1, 1)[0] == "full"
    assert E.V_classify(3, 3, 1, -1, -1) == ("full", 1, 1)


def test_chebyshev_engine():
    assert E.chebyshev_engine(E.ChebSpec(2, 3, 1)).semilin2 == SemiLin2.full()
    from slrec.oracle import chebyshev_lift_window

    W = chebyshev_lift_window(2, 3, 1, 1, 1, -1, 8, 8)
    assert window_equal(E.chebyshev_engine(E.ChebSpec(2, 3, 1, 1, 1, -1)).window(8, 8), W)[0]
    with pytest.raises(E.EngineError):
        E.ChebSpec(2, 3, 1, 2, 1, 1)


def test_powertil():
    res = E.gallery("powertil", r=3, s=3)
    assert res.semilin2 is None and res.certificate.mode == "proved"
    assert list(res.certificate.periods) == [4, 8, 16, 32]
    assert res.params["a"] == 0
    assert E.gallery("powertil", r=3, s=5).params["a"] == 0
    assert E.gallery("powertil", r=7, s=3).params["a"] == 1
    with pytest.raises(E.EngineError):
        E.gallery("powertil", r=4, s=3)


def test_powertil_general_a_vs_oracle():
    # r = 7 gives a = 1; compare with the torsion system on the full grid
    res = E.gallery("powertil", r=7, s=3)
    W = torsion_window(TorsionSpec(7, 3, 2, 1, 0, 1, 1), 24, 24)
    assert window_equal(res.window(24, 24), W)[0]
    for m, row, _ in res.certificate.rows:
        assert all((n in row) == res.member(2 * m, 2 * n) for n in range(200))


def test_deg1counter_gallery():
    res = E.gallery("deg1counter1")
    assert res.member(3, 7) and not res.member(3, 6)
    W = affine_window(Fraction(1, 2), 0, 1, -1, 0, 1, 7, 70)
    assert window_equal(res.window(7, 70), W)[0]
    assert res.certificate.mode == "proved" and res.certificate.kind == "gap-growth"
    res2 = E.gallery("deg1counter2", k=2)
    W2 = recurrence_window(PolyTriple(P(0, 2), P(1, 1), P(0, 0, 1)), 5, 14)
    assert window_equal(res2.window(5, 14), W2)[0]
    with pytest.raises(E.EngineError):
        E.gallery("nope")


def test_affine_examples():
    res = E.affine_engine(E.AffineSpec(1, 1, 1, 1, 1, 0))
    assert cells(res.semilin2) == {(0, 0)}
    res = E.affine_engine(E.AffineSpec(Fraction(1, 2), 0, 1, -1, 0, 1))
    assert res.semilin2 is None and res.certificate.mode == "proved"
    assert window_equal(res.window(7, 70), affine_window(Fraction(1, 2), 0, 1, -1, 0, 1, 7, 70))[0]
    sp = E.AffineSpec(2, 0, 4, 0, 2, 0)
    assert window_equal(E.affine_engine(sp).window(10, 10), affine_window(2, 0, 4, 0, 2, 0, 10, 10))[0]


def test_affine_cyclotomic():
    z4, z3 = CycRat.zeta(4), CycRat.zeta(3)
    for args in [(z4, 1, -1, z4, 2, 0), (z3, 1 - z3, z4, 0, 3, 1), (-z4, z3, 2, 1, z4, 0)]:
        sp = E.AffineSpec(*args)
        W = affine_window(*args, 12, 12)
        assert window_equal(E.affine_engine(sp).window(12, 12), W)[0]


def test_affine_rejects_constant_maps():
    with pytest.raises(E.EngineError):
        E.AffineSpec(0, 1, 1, 1, 1, 0)


def test_decomposed_full_branches():
    assert E.decomposed_engine(E.DecompSpec(P(0, 0, 1), 1, 2, k3=0)).semilin2 == SemiLin2.full()
    assert E.decomposed_engine(E.DecompSpec(P(0, 1, 0, 1), 1, 1, 0, 1, z3=1, k3=1)).semilin2 == SemiLin2.full()


@pytest.mark.parametrize("spec", [
    dict(h=P(-2, 0, 1), k1=1, k2=1, z1=0, z2=1, z3=0, k3=0),
    dict(h=P(-2, 0, 1), k1=1, k2=2, z1=0, z2=1, z3=0, k3=2),
    dict(h=P(-1, 0, 1), k1=1, k2=1, z1=1, z2=1, z3=0, k3=2),
    dict(h=P(-2, 0, 1), k1=1, k2=1, z1=0, z2=1, c_const=2),
    dict(h=P(-1, 0, 1), k1=2, k2=1, z1=1, z2=0, c_const=0),
])
def test_decomposed_vs_gcd_oracle(spec):
    sp = E.DecompSpec(**spec)
    f, g, c = sp.polys()
    M = 6
    W = recurrence_window(PolyTriple(f, g, c), M, M)
    assert window_equal(E.decomposed_engine(sp).window(M, M), W)[0]


def test_decomposed_cyclotomic_twist():
    z3 = dict(h=P(-1, 0, 0, 1), k1=1, k2=1, z1=0, z2=2, z3=1, k3=1)
    sp = E.DecompSpec(**z3)
    f, g, c = sp.polys()
    W = recurrence_window(PolyTriple(f, g, c), 4, 4)
    assert window_equal(E.decomposed_engine(sp).window(4, 4), W)[0]


def test_decomposed_errors():
    with pytest.raises(E.EngineError):
        E.DecompSpec(P(0, 1, 1), 1, 1)  # not centered
    with pytest.raises(E.EngineError, match="Case 1.1 precondition unverified"):
        E.decomposed_engine(E.DecompSpec(P(-1, 0, 0, 1), 1, 1, c_const=0))


def test_engine_result_dict():
    d = E.power_engine(E.PowerSpec(2, 3, 1, 0, 2, 1)).to_dict()
    assert d["formula"] == "power" and SemiLin2.from_dict(d["semilin2"])
    row = E.power_row0(E.PowerSpec(2, 3, 1, 0, 2, 1))
    assert row == EPSet1.finite([0])  # (-1)^(2^m) = -1 only for m = 0
