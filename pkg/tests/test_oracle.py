from fractions import Fraction

import pytest

from slrec.exactnum import CycRat
from slrec.oracle import (
    PolyTriple,
    TorsionSpec,
    affine_window,
    chebyshev_lift_window,
    iterate_sign,
    recurrence_window,
    torsion_window,
)
from slrec.polyfield import Poly
from slrec.semilinear import window_equal


def P(*cs):
    return Poly([Fraction(c) for c in cs])


HALF_Z, Z_MINUS_1, ONE = P(0, Fraction(1, 2)), P(-1, 1), P(1)


def test_deg1counter_one():
    W = recurrence_window(PolyTriple(HALF_Z, Z_MINUS_1, ONE), 4, 8)
    assert set(W.true_cells()) == {(0, 0), (1, 1), (2, 3), (3, 7)}


def test_common_fixed_points():
    W = recurrence_window(PolyTriple(P(0, 0, 1), P(0, 0, 0, 1), P(0, 1)), 3, 3)
    assert W[(1, 1)]
    W0 = recurrence_window(PolyTriple(P(0, 0, 1), P(0, 0, 0, 1), P(0, 1), exclude_zero=True), 3, 3)
    assert W0[(1, 1)]  # lambda = 1 survives


def test_deg1counter_two():
    W = recurrence_window(PolyTriple(P(0, 2), P(1, 1), P(0, 0, 1)), 2, 3)
    assert all(W[(m, 0)] for m in range(2))
    assert W[(1, 2)] and not W[(1, 1)]


def test_affine_window():
    W = affine_window(1, 1, 1, 1, 1, 0, 5, 5)
    assert W.true_cells() == [(0, 0)]
    W1 = affine_window(Fraction(1, 2), 0, 1, -1, 0, 1, 8, 40)
    W2 = recurrence_window(PolyTriple(HALF_Z, Z_MINUS_1, ONE), 8, 40)
    assert window_equal(W1, W2)[0]


def test_affine_window_cyclotomic_matches_gcd_oracle():
    z4 = CycRat.zeta(4)
    for A1, B1, A2, B2, C, D in [(z4, 1, -1, z4, 2, 0), (z4, 0, z4, 1, 1, 1), (2, z4, z4, 0, 1, z4)]:
        W1 = affine_window(A1, B1, A2, B2, C, D, 8, 8)
        t = PolyTriple(Poly([B1, A1]), Poly([B2, A2]), Poly([D, C]))
        assert window_equal(W1, recurrence_window(t, 8, 8))[0]


def test_torsion_window_matches_gcd_oracle():
    for d1, d2, k, a, e in [(2, 3, 2, 1, 0), (2, 2, 3, 1, 2), (3, 2, 4, 3, 1), (2, 3, 6, 5, 1)]:
        W1 = torsion_window(TorsionSpec(d1, d2, k, a, e), 5, 5)
        xi = CycRat.zeta(k)
        t = PolyTriple(Poly.monomial(1, d1), Poly.monomial(xi**e, d2), Poly.const(xi**a))
        assert window_equal(W1, recurrence_window(t, 5, 5))[0]


def test_torsion_spec_validation():
    with pytest.raises(ValueError):
        TorsionSpec(1, 3, 2, 0, 0)
    with pytest.raises(ValueError):
        TorsionSpec(2, 3, 2, 2, 0)


def test_chebyshev_lift_matches_gcd_oracle():
    from slrec.polyfield import chebyshev_poly

    for r, s, t, e1, e2, e3 in [(2, 3, 1, 1, 1, -1), (3, 2, 2, -1, 1, 1), (2, 2, 1, -1, -1, 1)]:
        W1 = chebyshev_lift_window(r, s, t, e1, e2, e3, 4, 4)
        tri = PolyTriple(chebyshev_poly(r).scale(e1), chebyshev_poly(s).scale(e2), chebyshev_poly(t).scale(e3))
        assert window_equal(W1, recurrence_window(tri, 4, 4))[0]


def test_iterate_sign():
    assert iterate_sign(-1, 3, 2) == 1 and iterate_sign(-1, 3, 3) == -1
    assert iterate_sign(-1, 2, 5) == -1 and iterate_sign(-1, 2, 0) == 1


def test_degree_cap_reported():
    W = recurrence_window(PolyTriple(P(0, 0, 1), P(0, 0, 1), P(0, 1)), 6, 2, cap=8)
    assert W.meta["errors"]
