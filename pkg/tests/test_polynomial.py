import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assoclab.polynomial import (
    FaceVector,
    IntPolynomial,
    NonPolytopalWarning,
    check_H_recurrence,
    count_real_roots,
    eulerian,
    expand_gamma,
    f_from_h,
    f_from_tubings,
    gamma_from_h,
    h_from_f,
    H_from_recurrence,
    interleaves,
    is_real_rooted,
    is_symmetric,
    isolate_real_roots,
    narayana,
    narayana_closed_form,
    poly_gcd,
    square_free_decomposition,
    typeB_narayana,
)

P = IntPolynomial
small_ints = st.integers(min_value=-20, max_value=20)
coeff_lists = st.lists(small_ints, max_size=7)


def test_arithmetic_examples():
    assert P([0, 0, 1]).shift_eval(-1) == [1, -2, 1]
    assert P([1, 1]) * P([1, 1]) == [1, 2, 1]
    p = P([3, 0, 2])
    assert p + P() == p
    assert P([1, 0, 0]) == P([1])
    assert P().degree == -1


@given(coeff_lists, coeff_lists, coeff_lists)
def test_ring_axioms(a, b, c):
    a, b, c = P(a), P(b), P(c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == P()


@given(coeff_lists, st.integers(-5, 5), st.integers(-5, 5))
def test_shift_eval_agrees_with_evaluation(a, s, x):
    a = P(a)
    assert a.shift_eval(s)(x) == a(x + s)


@given(coeff_lists, coeff_lists.filter(lambda c: any(c)))
def test_division_identity(a, b):
    a, b = P(a), P(b)
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_gcd():
    a = P.from_roots([1, 2, 3])
    b = P.from_roots([2, 3, 5])
    assert poly_gcd(a, b) == P.from_roots([2, 3])


def test_face_vector_examples():
    assert f_from_tubings([0, 1, 1], 1).counts == (2, 1)
    assert f_from_tubings([0] + [1] * 6 + [2] * 6, 2).counts == (6, 6, 1)
    assert f_from_tubings([0], 0).counts == (1,)
    with pytest.raises(ValueError):
        f_from_tubings([0, 2], 1)


def test_h_from_f_examples():
    assert h_from_f((2, 1)) == [1, 1]
    assert h_from_f((6, 6, 1)) == [1, 4, 1]
    assert h_from_f((1,)) == [1]


def test_h_from_f_flags_negative_entries():
    with pytest.warns(NonPolytopalWarning):
        h_from_f((1, 3, 1))


def test_face_vector_invariants():
    with pytest.raises(ValueError):
        FaceVector((2, 2))
    with pytest.raises(ValueError):
        FaceVector((0, 1))


@given(st.lists(st.integers(0, 30), max_size=6))
def test_f_h_round_trip(middle):
    h = P([1, *middle, 1])
    fv = f_from_h(h)
    assert fv.dim == h.degree
    assert h_from_f(fv) == h


def test_gamma_examples():
    assert gamma_from_h(P([1, 4, 1]), 2) == [1, 2]
    assert gamma_from_h(P([1, 1]), 1) == [1]
    with pytest.raises(ValueError, match="symmetr"):
        gamma_from_h(P([1, 2]), 1)


@given(st.integers(0, 8), st.data())
def test_gamma_expansion_round_trip(d, data):
    gamma = P(data.draw(st.lists(st.integers(-10, 10), min_size=d // 2 + 1, max_size=d // 2 + 1)))
    h = expand_gamma(gamma, d)
    assert is_symmetric(h, d)
    assert gamma_from_h(h, d) == gamma


def test_narayana_small():
    assert narayana(2) == [1, 1]
    assert narayana(3) == [1, 3, 1]


@pytest.mark.parametrize("n", range(1, 13))
def test_narayana_matches_closed_form(n):
    assert narayana(n) == narayana_closed_form(n)
    assert narayana(n)(1) == math.comb(2 * n, n) // (n + 1)


def test_typeB_narayana():
    assert typeB_narayana(3) == [1, 4, 1]
    assert typeB_narayana(1) == [1]
    for n in range(8):
        assert typeB_narayana(n + 1)(1) == math.comb(2 * n, n)


def test_eulerian_small():
    assert eulerian(3) == [1, 4, 1]
    assert eulerian(4) == [1, 11, 11, 1]


def test_real_root_counts():
    assert count_real_roots(P([1, 0, 1])) == 0
    assert count_real_roots(P([1, 4, 1])) == 2
    with pytest.raises(ValueError):
        count_real_roots(P())


def test_real_rootedness_with_multiple_roots():
    assert is_real_rooted(P.from_roots([-1, -1, -1, 2]))
    assert not is_real_rooted(P.from_roots([-1, -1]) * P([1, 0, 1]))
    parts = square_free_decomposition(P.from_roots([1, 2, 2, 3, 3, 3]))
    assert [q.degree for q in parts] == [1, 1, 1]


@settings(max_examples=60)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6), st.integers(1, 3))
def test_root_count_of_products_of_linear_factors(roots, lead):
    p = P.from_roots(roots).scale(lead)
    assert count_real_roots(p) == len(set(roots))
    assert is_real_rooted(p)
    iv = isolate_real_roots(p)
    assert len(iv) == len(set(roots))
    for (lo, hi), r in zip(iv, sorted(set(roots))):
        assert lo < r <= hi


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=4, unique=True))
def test_rational_roots_isolate(roots):
    p = P([1])
    for r in roots:
        p = p * P([-r.numerator, r.denominator])
    assert count_real_roots(p) == len(roots)
    assert count_real_roots(p, Fraction(-5), Fraction(5)) == sum(1 for r in roots if r > -5)


@pytest.mark.parametrize("n", range(1, 11))
def test_narayana_real_rooted(n):
    assert is_real_rooted(narayana(n))


def test_interleaves_examples():
    assert interleaves(P([2, 1]), P.from_roots([-1, -3]))
    # alternating left needs f_1 <= g_1: root -2 lies left of -1
    assert interleaves(P([2, 1]), P([1, 1]))
    assert not interleaves(P([1, 1]), P([2, 1]))
    with pytest.raises(ValueError):
        interleaves(P([1, 1]), P.from_roots([-1, -2, -3]))
    with pytest.raises(ValueError):
        interleaves(P([1, 0, 1]), P.from_roots([-1, -2, -3]))


def test_interleaves_shared_roots_pass():
    assert interleaves(P([1, 1]), P.from_roots([-1, -1]))
    assert interleaves(P([1, 1]), P([1, 1]))


@pytest.mark.parametrize("n", range(2, 10))
def test_narayana_interleaving(n):
    assert interleaves(narayana(n - 1), narayana(n))


def test_H_recurrence_examples():
    assert H_from_recurrence(1) == [1, 4, 1]
    assert check_H_recurrence(1, P([1, 4, 1]))
    assert not check_H_recurrence(1, P([1, 5, 1]))


def test_isolation_with_repeated_root_at_bisection_point():
    p = P.from_roots([-4, -6, 0, 4, 0, -1])
    iv = isolate_real_roots(p)
    assert len(iv) == 5
    assert count_real_roots(p, -1, 0) == 1
    assert count_real_roots(p, Fraction(-1, 2), Fraction(1, 2)) == 1
