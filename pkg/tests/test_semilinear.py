import pytest

from slrec.semilinear import (
    CertificateError,
    EPSet1,
    LinSet,
    SemiLin2,
    SynthesisError,
    Window,
    diagonal,
    eventual_period,
    gap_certificate,
    intersect_lin,
    member_lin,
    nonsl_certificate,
    numerical_semigroup_set,
    simplify,
    slice_row,
    synthesize,
    uniform_period_bound,
    window_enumerate,
    window_equal,
)

EVENS = EPSet1.progression(0, 2)
ODDS = EPSet1.progression(1, 2)


def pts(S, M=30, N=30):
    return {(m, n) for m in range(M) for n in range(N) if S.member((m, n))}


def test_member_lin():
    L = LinSet((1, 0), [(1, 1), (0, 2)])
    assert member_lin(L, (3, 4))
    assert not member_lin(L, (3, 0))
    assert member_lin(LinSet((2, 5)), (2, 5))


def test_epset_union_and_canonical_form():
    assert EVENS.union(ODDS) == EPSet1.full()
    s = EPSet1.from_predicate(lambda x: x >= 3, 3, 1).union(EPSet1.finite([0]))
    assert (s.exceptions, s.threshold, s.period) == (frozenset({0}), 3, 1)


def test_epset_boolean_ops():
    assert EVENS.complement() == ODDS
    mult3 = EPSet1.progression(0, 3)
    assert EVENS.intersect(mult3) == EPSet1.progression(0, 6)
    assert ODDS.union(EPSet1.finite([0])).difference(EPSet1.finite([0])) == ODDS


def test_intersect_lin():
    a, b = LinSet((0, 0), [(1, 1)]), LinSet((0, 0), [(2, 2)])
    assert pts(intersect_lin(a, b)) == pts(SemiLin2([b]))
    L = LinSet((1, 0), [(1, 1), (0, 2)])
    assert pts(intersect_lin(L, L)) == pts(SemiLin2([L]))
    axes = intersect_lin(LinSet((0, 0), [(1, 0)]), LinSet((0, 0), [(0, 1)]))
    assert pts(axes) == {(0, 0)}


def test_numerical_semigroup_set():
    s = numerical_semigroup_set([3, 5], 0)
    assert (s.exceptions, s.threshold, s.period) == (frozenset({0, 3, 5, 6}), 8, 1)
    assert numerical_semigroup_set([2], 1) == ODDS
    assert numerical_semigroup_set([1], 0) == EPSet1.full()


def test_slice_row():
    assert slice_row(SemiLin2([LinSet((0, 0), [(1, 1)])]), 4) == EPSet1.finite([4])
    assert slice_row(SemiLin2([LinSet((0, 0), [(1, 0), (0, 2)])]), 1) == EVENS
    assert slice_row(SemiLin2([], [(3, 7)]), 3) == EPSet1.finite([7])


def test_periods():
    assert eventual_period(EVENS) == 2
    assert eventual_period(EPSet1.finite([1, 5])) == 0
    assert uniform_period_bound(SemiLin2([LinSet((0, 0), [(1, 0), (0, 4), (0, 6)])])) == 2


def test_diagonal():
    assert diagonal(SemiLin2.full()) == EPSet1.full()
    assert diagonal(SemiLin2([LinSet((1, 0), [(1, 1)])])).is_empty()
    assert diagonal(SemiLin2([LinSet((0, 0), [(2, 2)])])) == EVENS


def test_synthesize_examples():
    S = synthesize(lambda m, n: (m + n) % 2 == 0, 2, 0, [(1, 1)])
    assert pts(S) == {(m, n) for m in range(30) for n in range(30) if (m + n) % 2 == 0}
    assert synthesize(lambda m, n: False, 1, 0) == SemiLin2.empty()
    S = synthesize(lambda m, n: m >= 1, 1, 1)
    assert pts(S) == pts(SemiLin2([LinSet((1, 0), [(1, 0), (0, 1)])]))
    assert synthesize(lambda m, n: True, 3, 2, [(2, 1)]) == SemiLin2.full()


def test_synthesize_cone():
    S = synthesize(lambda m, n: 2 * m >= n and (m - n) % 3 == 0, 3, 1, [(2, 1)])
    assert pts(S, 40, 40) == {(m, n) for m in range(40) for n in range(40) if 2 * m >= n and (m - n) % 3 == 0}


def test_synthesize_rejects_bad_contract():
    # depends on m*n, which no clip signature captures
    with pytest.raises(SynthesisError):
        synthesize(lambda m, n: m * n == 12, 1, 1)


def test_simplify_preserves_set():
    S = SemiLin2([LinSet((0, 3), [(0, 2)]), LinSet((0, 4), [(0, 2)])], [(0, 0), (0, 1), (0, 2)])
    T = simplify(S)
    assert pts(T) == pts(S)
    assert T.components == (LinSet((0, 0), [(0, 1)]),) and not T.sporadic


def test_nonsl_certificate():
    rows = [(2**N, EPSet1.progression(2**N, 2 ** (N + 1)), "formula:powertil") for N in range(1, 5)]
    cert = nonsl_certificate(rows)
    assert cert.mode == "proved" and list(cert.periods) == [4, 8, 16, 32]
    with pytest.raises(CertificateError):
        nonsl_certificate(rows[:1])
    with pytest.raises(CertificateError):
        nonsl_certificate([(1, EVENS, "formula:x"), (2, EVENS, "formula:x")])
    emp = nonsl_certificate([(m, p, "oracle") for m, p, _ in rows])
    assert emp.mode == "empirical"


def test_gap_certificate():
    c = gap_certificate([0, 1, 3, 7, 15], "formula:deg1counter1")
    assert c.mode == "proved" and list(c.periods) == [1, 2, 4, 8]
    with pytest.raises(CertificateError):
        gap_certificate([0, 2, 4, 6], "formula:x")


def test_windows():
    W = window_enumerate(SemiLin2.full(), 2, 2)
    assert all(all(r) for r in W.rows)
    assert not any(any(r) for r in window_enumerate(SemiLin2.empty(), 3, 3).rows)
    W = window_enumerate(lambda m, n: n == 2**m - 1, 4, 9)
    assert set(W.true_cells()) == {(0, 0), (1, 1), (2, 3), (3, 7)}
    V = Window.from_dict(W.to_dict())
    assert window_equal(W, V) == (True, None)
    V.rows[2][3] = False
    assert window_equal(W, V) == (False, (2, 3))


def test_json_roundtrip():
    S = SemiLin2([LinSet((1, 2), [(0, 3), (2, 2)])], [(0, 5)])
    assert pts(SemiLin2.from_dict(S.to_dict())) == pts(S)
    assert EPSet1.from_dict(ODDS.to_dict()) == ODDS
