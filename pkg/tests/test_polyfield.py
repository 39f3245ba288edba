from fractions import Fraction

import pytest

from slrec.exactnum import CycRat
from slrec.polyfield import (
    BudgetExhausted,
    DegreeCapExceeded,
    Poly,
    chebyshev_poly,
    common_root_exists,
    compose,
    iterate,
    orbit_progression,
    poly_gcd,
)
from slrec.semilinear import EPSet1


def P(*cs):
    return Poly([Fraction(c) for c in cs])


Z = P(0, 1)


def test_compose():
    assert compose(P(0, 0, 1), P(1, 1)) == P(1, 2, 1)
    q = P(3, -1, 2)
    assert compose(Z, q) == q
    assert compose(P(0, 2), P(-1, 1)) == P(-2, 2)


def test_iterate():
    assert iterate(P(0, 0, 1), 3) == Poly.monomial(1, 8)
    assert iterate(P(-1, 1), 4) == P(-4, 1)
    assert iterate(P(0, Fraction(1, 2)), 5) == P(0, Fraction(1, 32))
    assert iterate(P(5, 3), 0) == Z


def test_iterate_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        iterate(P(0, 0, 1), 20, cap=1000)


def test_poly_gcd():
    assert poly_gcd(P(-1, 0, 1), P(-1, 1)) == P(-1, 1)
    assert poly_gcd(P(1, 0, 1), P(-1, 0, 1)) == P(1)
    assert poly_gcd(P(0, -1, 0, 1), P(0, 0, 1)) == Z


def test_poly_gcd_cyclotomic():
    z3 = CycRat.zeta(3)
    p = Poly([-z3, 1]) * Poly([1, 1])
    q = Poly([-z3, 1]) * Poly([5, 0, 1])
    assert poly_gcd(p, q) == Poly([-z3, 1])


def test_common_root_exists():
    assert common_root_exists(P(-1, 0, 1), P(-1, 1), False)
    assert not common_root_exists(Poly.monomial(1, 2), Poly.monomial(1, 3), True)
    z8 = Poly.monomial(1, 8) - Z
    z9 = Poly.monomial(1, 9) - Z
    assert common_root_exists(z8, z9, True)


def test_orbit_progression_examples():
    r = orbit_progression(P(0, 0, 1), -1, 1)
    assert r.progression == EPSet1.progression(1, 1)
    r = orbit_progression(P(1, 1), 0, 5)
    assert r.progression == EPSet1.finite([5]) and r.classification == "finite-singleton"
    r = orbit_progression(P(0, 0, 1), 2, 3)
    assert r.progression.is_empty() and r.witness == "escape"


def test_orbit_progression_rechecked_by_iteration():
    # the chebyshev map z^2 - 2 has many preperiodic rationals
    h = P(-2, 0, 1)
    for lam in (-2, -1, 0, 1, 2):
        for target in (-2, -1, 0, 1, 2):
            r = orbit_progression(h, lam, target)
            x, seq = Fraction(lam), []
            for _ in range(30):
                seq.append(x == target)
                x = h(x)
            assert [m in r.progression for m in range(30)] == seq


def test_orbit_budget():
    # 0 -> 1 -> 2 -> 5 -> 26 ...: two steps are not enough to decide
    h = P(1, 0, 1)
    with pytest.raises(BudgetExhausted):
        orbit_progression(h, 0, 5, budget=2)
    assert orbit_progression(h, 0, 5).progression == EPSet1.finite([3])


def test_chebyshev_poly():
    assert chebyshev_poly(2) == P(-2, 0, 1)
    assert chebyshev_poly(3) == P(0, -3, 0, 1)
    for d in range(2, 6):
        # T_d(x + 1/x) = x^d + x^-d, checked at x = 2
        assert chebyshev_poly(d)(Fraction(5, 2)) == 2**d + Fraction(1, 2**d)
