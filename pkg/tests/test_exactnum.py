from fractions import Fraction

import pytest

from slrec.exactnum import (
    CycRat,
    cyclotomic_polynomial,
    factorize,
    lcm,
    mult_order,
    nu2,
    nu_p,
    root_of_unity_order,
    solve_power,
)
from slrec.polyfield import Poly


def P(*cs):
    return Poly([Fraction(c) for c in cs])


@pytest.mark.parametrize("x,p,v", [(12, 2, 2), (Fraction(3, 8), 2, -3), (40, 5, 1), (7, 3, 0)])
def test_nu_p(x, p, v):
    assert nu_p(x, p) == v


def test_nu_p_rejects_zero():
    with pytest.raises(ValueError):
        nu2(0)


def test_factorize():
    f = factorize(12)
    assert (f.sign, f.factors) == (1, ((2, 2), (3, 1)))
    f = factorize(-6)
    assert (f.sign, f.factors) == (-1, ((2, 1), (3, 1)))
    assert factorize(1).factors == ()
    big = 2**61 - 1
    assert factorize(big * 3).factors == ((3, 1), (big, 1))
    assert factorize(360).exponent(3) == 2 and factorize(360).primes() == (2, 3, 5)


@pytest.mark.parametrize("u,M,want", [(2, 7, (0, 3)), (2, 12, (2, 2)), (1, 5, (0, 1)), (0, 4, (1, 1))])
def test_mult_order(u, M, want):
    assert mult_order(u, M) == want


def test_mult_order_matches_simulation():
    for M in range(2, 40):
        for u in range(-5, 12):
            pre, per = mult_order(u, M)
            seq = [pow(u, n, M) for n in range(3 * M)]
            assert all(seq[n + per] == seq[n] for n in range(pre, 2 * M))
            assert pre == 0 or seq[pre - 1 + per] != seq[pre - 1]


def test_cyclotomic_polynomial():
    assert cyclotomic_polynomial(1) == P(-1, 1)
    assert cyclotomic_polynomial(4) == P(1, 0, 1)
    assert cyclotomic_polynomial(6) == P(1, -1, 1)


def test_cyc_ops():
    z4, z3 = CycRat.zeta(4), CycRat.zeta(3)
    assert z4 * z4 == -1
    assert z3.inv() == z3 * z3 == -1 - z3
    x = (3 + 4 * z4) / 5
    assert x.conj() * x == 1
    assert CycRat.zeta(6) ** 3 == -1
    # mixed conductors lift to the lcm
    assert (z4 * z3) ** 12 == 1


def test_root_of_unity_order():
    assert root_of_unity_order(CycRat.coerce(-1)) == 2
    assert root_of_unity_order(CycRat.zeta(6)) == 6
    assert root_of_unity_order((3 + 4 * CycRat.zeta(4)) / 5) is None


def test_lcm():
    assert lcm(4, 6) == 12 and lcm() == 1


def test_solve_power():
    assert solve_power(Fraction(2), Fraction(8)) == ("single", 3)
    assert solve_power(Fraction(2), Fraction(3)) == ("none",)
    assert solve_power(CycRat.zeta(4), CycRat.coerce(-1)) == ("progression", 2, 4)
    assert solve_power(Fraction(1, 2), Fraction(4)) == ("none",)
