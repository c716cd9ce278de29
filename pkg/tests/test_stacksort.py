import math
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assoclab.dyck import catalan_conv
from assoclab.polynomial import IntPolynomial, gamma_from_h, narayana
from assoclab.stacksort import (
    DecreasingBinaryTree,
    all_shapes,
    branden_gamma_check,
    brute_force_preimage,
    descent_polynomial,
    descents,
    gen_S_nk,
    happy_phi,
    happy_phi_inverse,
    identity,
    inorder_read,
    inorder_tree,
    peaks,
    postorder_read,
    preimage,
    preimage_descent_polynomial,
    preimage_of_set,
    preimage_S_nk,
    shape_right_edges,
    stack_sort,
)

perms = st.integers(1, 9).flatmap(lambda n: st.permutations(range(1, n + 1))).map(tuple)


def test_stack_sort_examples():
    assert stack_sort((3, 4, 7, 5, 6, 1, 2)) == (3, 4, 5, 1, 2, 6, 7)
    assert stack_sort(identity(5)) == identity(5)
    assert stack_sort((2, 3, 1)) == (2, 1, 3)


def test_tree_readings_example():
    T = inorder_tree((3, 4, 7, 5, 6, 1, 2))
    assert inorder_read(T) == (3, 4, 7, 5, 6, 1, 2)
    assert postorder_read(T) == (3, 4, 5, 1, 2, 6, 7)


def test_descending_word_is_right_spine():
    T = inorder_tree((3, 2, 1))
    assert T.root == 3 and T.left == {} and T.right == {3: 2, 2: 1}


def test_tree_rejects_increasing_edge():
    with pytest.raises(ValueError):
        DecreasingBinaryTree(1, {1: 2}, {})


def test_statistics():
    assert descents((4, 3, 1, 2)) == 2
    assert peaks((1, 3, 2)) == 1
    assert descents(identity(6)) == 0 and peaks(identity(6)) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_stack_sort_is_postorder_of_inorder_tree(n):
    for w in permutations(range(1, n + 1)):
        T = inorder_tree(w)
        assert inorder_read(T) == w
        assert stack_sort(w) == postorder_read(T)
        assert T.right_edges() == descents(w)


@given(perms)
def test_shape_round_trip(w):
    T = inorder_tree(w)
    assert DecreasingBinaryTree.from_shape(T.shape(), inorder_read(T), order="inorder") == T
    assert DecreasingBinaryTree.from_shape(T.shape(), postorder_read(T)) == T
    assert shape_right_edges(T.shape()) == descents(w)


def test_all_shapes_catalan():
    assert [len(all_shapes(n)) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]


def test_gen_S_nk():
    assert gen_S_nk(1, 2) == [(1, 2, 3), (2, 1, 3)]
    assert gen_S_nk(4, 0) == [identity(4)]
    with pytest.raises(ValueError):
        gen_S_nk(0, 0)


def test_preimage_examples():
    assert preimage((1, 2, 3)) == [(1, 2, 3), (1, 3, 2), (2, 1, 3), (3, 1, 2), (3, 2, 1)]
    assert preimage((2, 1, 3)) == [(2, 3, 1)]
    assert preimage((3, 1, 2)) == []
    with pytest.raises(ValueError):
        preimage((1, 1))


@pytest.mark.parametrize("n", range(1, 9))
def test_preimage_matches_brute_force(n):
    buckets: dict = {}
    for w in permutations(range(1, n + 1)):
        buckets.setdefault(stack_sort(w), []).append(w)
    for t in permutations(range(1, n + 1)):
        assert preimage(t) == buckets.get(t, [])


@settings(max_examples=60, deadline=None)
@given(perms)
def test_preimage_polynomial_without_listing(t):
    assert preimage_descent_polynomial(t) == descent_polynomial(preimage(t))


def test_descent_polynomial_examples():
    assert descent_polynomial(preimage_of_set(gen_S_nk(1, 2))) == [1, 4, 1]
    assert descent_polynomial([identity(5)]) == [1]
    assert descent_polynomial([]) == IntPolynomial()


@pytest.mark.parametrize("n,k", [(n, k) for n in range(0, 8) for k in range(0, 8) if 1 <= n + k <= 7])
def test_preimage_S_nk_matches_brute_force(n, k):
    assert preimage_S_nk(n, k) == brute_force_preimage(gen_S_nk(n, k))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(0, 10) for k in range(0, 10) if 1 <= n + k <= 9])
def test_preimage_size(n, k):
    assert len(preimage_S_nk(n, k)) == math.factorial(k) * catalan_conv(n, k)


def test_branden_examples():
    r = branden_gamma_check(gen_S_nk(1, 2), 3)
    assert r.holds and r.gamma == (1, 2)
    for n in range(1, 9):
        r = branden_gamma_check([identity(n)], n)
        assert r.holds and r.gamma_integral_nonnegative
        assert list(r.gamma) == gamma_from_h(narayana(n), n - 1)


def test_branden_rejects_wrong_length():
    with pytest.raises(ValueError):
        branden_gamma_check([identity(3)], 4)


# --- happy coincidence ---------------------------------------------------


def _happy_domain(n):
    return [inorder_tree(w) for w in preimage(identity(n)) if w[0] < n and w[-1] < n]


def test_happy_phi_small():
    (T,) = _happy_domain(3)
    assert inorder_read(T) == (1, 3, 2)
    image = happy_phi(T)
    assert inorder_read(image) == (2, 3, 1)
    assert happy_phi_inverse(image) == T


@pytest.mark.parametrize("n", range(3, 9))
def test_happy_phi_bijection(n):
    dom = _happy_domain(n)
    images = [happy_phi(T) for T in dom]
    target = {inorder_tree(w) for w in preimage((2, 1) + tuple(range(3, n + 1)))}
    assert set(images) == target and len(images) == len(target)
    for T, U in zip(dom, images):
        assert U.right_edges() == T.right_edges()
        assert happy_phi_inverse(U) == T


@pytest.mark.parametrize("n", range(3, 9))
def test_happy_descent_polynomials_agree(n):
    lhs = descent_polynomial(w for w in preimage(identity(n)) if w[0] < n and w[-1] < n)
    assert lhs == preimage_descent_polynomial((2, 1) + tuple(range(3, n + 1)))


def test_happy_phi_preconditions():
    with pytest.raises(ValueError, match="end"):
        happy_phi(inorder_tree((3, 1, 2)))
    with pytest.raises(ValueError, match="s\\^-1"):
        happy_phi(inorder_tree((2, 3, 1)))
    with pytest.raises(ValueError, match="213"):
        happy_phi_inverse(inorder_tree((1, 3, 2)))
