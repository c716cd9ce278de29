import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from assoclab.dyck import (
    DyckPath,
    L,
    PairNK,
    catalan,
    catalan_conv,
    catalan_conv_by_sum,
    des_c,
    des_pair,
    dyck_to_tree,
    enumerate_D_nk,
    enumerate_dyck,
    enumerate_P_nk,
    first_return,
    mark,
    tree_to_dyck,
    valleys,
)
from assoclab.stacksort import all_shapes, shape_right_edges


def test_catalan_conv_examples():
    for n in range(8):
        assert catalan_conv(n, 0) == catalan(n)
        assert catalan_conv(n, 1) == catalan(n + 1)
    for k in range(8):
        assert catalan_conv(0, k) == 1
        assert catalan_conv(1, k) == k + 1
    assert catalan_conv(2, 2) == 9
    assert catalan_conv(3, 2) == 28


@pytest.mark.parametrize("total", range(0, 13))
def test_catalan_conv_closed_form_matches_sum(total):
    for n in range(total + 1):
        assert catalan_conv(n, total - n) == catalan_conv_by_sum(n, total - n)


def test_path_validation():
    with pytest.raises(ValueError):
        DyckPath("RU")
    with pytest.raises(ValueError):
        DyckPath("UUR")
    with pytest.raises(ValueError):
        DyckPath("UXRR")


def test_valleys_and_heights():
    assert valleys("URUR") == 1
    assert valleys("U" * 5 + "R" * 5) == 0
    assert L("UURR", 2) == 2
    assert L(DyckPath("UURR"), 3) == 1
    assert first_return("URUURR", 2) == 6


def test_left_chain_is_mountain():
    s = None
    for n in range(1, 7):
        s = (s, None)
        assert tree_to_dyck(s).steps == "U" * n + "R" * n


def test_right_edges_become_valleys_example():
    # root with a right child that has a right child: two right edges
    s = (None, (None, (None, None)))
    D = tree_to_dyck(s)
    assert D.steps == "URURUR" and valleys(D) == 2


@pytest.mark.parametrize("n", range(0, 11))
def test_tree_dyck_round_trip(n):
    seen = set()
    for s in all_shapes(n):
        D = tree_to_dyck(s)
        assert D.semilength == n
        assert dyck_to_tree(D) == s
        assert valleys(D) == shape_right_edges(s)
        seen.add(D.steps)
    assert len(seen) == catalan(n)


def test_mark_examples():
    P = "UUUUUUURRRRURRRURR"
    assert mark(P, 4).composition == (1, 2, 1)
    assert mark(P, 3).composition == (2, 1)
    assert mark("URUR", 0).composition == ()
    with pytest.raises(ValueError):
        mark("URUR", 2)


@given(st.integers(1, 7).flatmap(lambda m: st.sampled_from(list(enumerate_dyck(m)))), st.data())
def test_mark_invariants(steps, data):
    lead = len(steps) - len(steps.lstrip("U"))
    k = data.draw(st.integers(0, lead))
    M = mark(steps, k)
    assert sum(M.composition) == k == len(M.marked_positions)
    assert all(steps[i] == "R" for i in M.marked_positions)
    assert all(c > 0 for c in M.composition)


def test_des_c_examples():
    assert des_c((4, 3, 1, 2), (2, 2)) == 1
    assert des_c((3, 2, 1), (1, 1, 1)) == 0
    assert des_c((2, 1), (0, 2, 0)) == 1
    with pytest.raises(ValueError):
        des_c((1, 2), (1,))


def test_des_pair_example():
    assert des_pair(PairNK.make((1,), "URUR")) == 1
    assert des_pair(PairNK.make((1,), "UURR")) == 0


def test_pair_validation():
    with pytest.raises(ValueError):
        PairNK((2,), mark("URUR", 1))


def test_enumerate_D_nk_examples():
    assert [M.path.steps for M in enumerate_D_nk(1, 1)] == ["UURR", "URUR"]
    for k in range(1, 5):
        P = enumerate_P_nk(0, k)
        assert len(P) == math.factorial(k)
        assert {p.D.path.steps for p in P} == {"U" * k + "R" * k}


@pytest.mark.parametrize("total", range(1, 10))
def test_D_nk_counts(total):
    for n in range(total + 1):
        assert len(enumerate_D_nk(n, total - n)) == catalan_conv(n, total - n)


@pytest.mark.parametrize("total", range(1, 8))
def test_des_pair_distribution_symmetric(total):
    for n in range(total + 1):
        k = total - n
        dist = Counter(des_pair(p) for p in enumerate_P_nk(n, k))
        top = max(dist)
        assert [dist[i] for i in range(top + 1)] == [dist[top - i] for i in range(top + 1)]
        assert top == n + k - 1
