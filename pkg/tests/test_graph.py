from itertools import combinations, product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assoclab.graph import (
    BTree,
    Graph,
    GraphError,
    btree_descents,
    btree_from_tubing,
    check_btree,
    complete_graph,
    enumerate_btrees,
    enumerate_graph_tubings,
    enumerate_maximal,
    graph_face_vector,
    graph_from_json,
    graph_from_spec,
    graph_h_polynomial,
    hpoly_btrees,
    is_graph_tubing,
    line_graph_of_hasse,
    lollipop,
    lollipop_for_A,
    path_graph,
)
from assoclab.polynomial import eulerian, narayana
from assoclab.poset import build_poset, chain, crown, face_vector, make_A, ordinal_sum, antichain


def cycle_graph(n):
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)), tuple(range(1, n + 1)))


def star_graph(n):
    return Graph(n, frozenset((0, i) for i in range(1, n)), tuple(range(1, n + 1)))


@st.composite
def connected_graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    # random spanning tree plus extra edges, then a random labeling
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    pairs = list(combinations(range(n), 2))
    if pairs:
        edges |= set(draw(st.lists(st.sampled_from(pairs), max_size=4)))
    labels = draw(st.permutations(range(1, n + 1)))
    return Graph(n, frozenset(edges), tuple(labels))


@st.composite
def tree_posets(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    rel = []
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        rel.append((j, i) if draw(st.booleans()) else (i, j))
    return build_poset(n, rel)


# --- constructors --------------------------------------------------------


def test_lollipop_labels():
    G = lollipop(3, 4)
    assert G.n_vertices == 7
    # link 4 touches path vertex 3 and the whole clique
    assert sorted(G.label_edges()) == sorted([(1, 2), (2, 3), (3, 4)] + list(combinations(range(4, 8), 2)))


def test_lollipop_degenerate():
    G = lollipop(0, 2)
    assert G.label_edges() == [(1, 2)]
    P = lollipop(4, 1)
    assert nx.is_isomorphic(P.to_networkx(), path_graph(5).to_networkx())
    with pytest.raises(GraphError):
        lollipop(3, 0)


def test_lollipop_for_A_labeling():
    G = lollipop_for_A(4, 3)
    # path 3-2-1, link 4, clique 5..7
    assert (3, 4) in G.label_edges() and (1, 2) in G.label_edges()
    assert all((4, c) in G.label_edges() for c in (5, 6, 7))
    assert G.label_edges() == lollipop(3, 4).label_edges()
    assert nx.is_isomorphic(lollipop_for_A(0, 3).to_networkx(), complete_graph(3).to_networkx())


@pytest.mark.parametrize("n,k", [(n, k) for n in range(0, 6) for k in range(0, 5) if n + k >= 2])
def test_line_graph_of_A_is_lollipop(n, k):
    L = line_graph_of_hasse(make_A(n, k))
    assert nx.is_isomorphic(L.to_networkx(), lollipop_for_A(n, k).to_networkx())


def test_line_graph_examples():
    assert nx.is_isomorphic(line_graph_of_hasse(chain(5)).to_networkx(), path_graph(4).to_networkx())
    assert nx.is_isomorphic(line_graph_of_hasse(make_A(0, 4)).to_networkx(), complete_graph(4).to_networkx())
    with pytest.raises(GraphError, match="not a tree"):
        line_graph_of_hasse(crown())


# --- tubings -------------------------------------------------------------


def test_maximal_counts():
    assert len(enumerate_maximal(complete_graph(3))) == 6
    assert len(enumerate_maximal(path_graph(3))) == 5
    M = enumerate_maximal(path_graph(2))
    assert sorted(T.as_label_sets() for T in M) == [[(1,)], [(2,)]]


def test_disconnected_rejected():
    G = Graph(2, frozenset(), (1, 2))
    with pytest.raises(GraphError):
        enumerate_graph_tubings(G)


def test_compatibility_is_pairwise():
    G = path_graph(3)
    assert is_graph_tubing(G, [{0}, {2}])
    assert not is_graph_tubing(G, [{0}, {1}])  # adjacent singletons
    assert not is_graph_tubing(G, [{0, 1}, {1, 2}])
    assert is_graph_tubing(G, [{0}, {0, 1}])


@settings(max_examples=40, deadline=None)
@given(connected_graphs())
def test_maximal_tubings_have_n_minus_1_tubes(G):
    tubings = enumerate_graph_tubings(G)
    keys = {T.tubes for T in tubings}
    for T in tubings:
        if not any(T.tubes < U for U in keys):
            assert len(T) == G.n_vertices - 1


# --- B-trees -------------------------------------------------------------


def test_single_edge_btree():
    G = path_graph(2)
    B = btree_from_tubing(G, [{0}])
    assert B == BTree(2, {1: 2})
    assert hpoly_btrees(G) == [1, 1]


def test_path_btrees_not_all_isomorphic():
    trees = enumerate_btrees(path_graph(3))
    shapes = {tuple(sorted(len(c) for c in B.children().values())) for B in trees}
    assert len(shapes) > 1


def test_hpoly_examples():
    assert hpoly_btrees(path_graph(3)) == [1, 3, 1]
    assert hpoly_btrees(complete_graph(3)) == [1, 4, 1]


def test_descents_read_along_tree_edges():
    for k in range(1, 6):
        assert hpoly_btrees(complete_graph(k)) == eulerian(k)
    for n in range(1, 7):
        assert hpoly_btrees(path_graph(n)) == narayana(n)


def test_not_maximal_rejected():
    with pytest.raises(GraphError):
        btree_from_tubing(path_graph(3), [{0}])


def _all_rooted_trees(labels):
    labels = list(labels)
    for root in labels:
        others = [v for v in labels if v != root]
        for choice in product(labels, repeat=len(others)):
            parent = dict(zip(others, choice))
            ok = True
            for v in others:
                seen, u = set(), v
                while u != root:
                    if u in seen or parent[u] == u:
                        ok = False
                        break
                    seen.add(u)
                    u = parent[u]
                if not ok:
                    break
            if ok:
                yield BTree(root, parent)


@pytest.mark.parametrize("G", [path_graph(3), complete_graph(3), star_graph(4), cycle_graph(4), lollipop(1, 3)])
def test_btree_unique_by_exhaustive_search(G):
    candidates = list(_all_rooted_trees(G.labels))
    for M in enumerate_maximal(G):
        good = [B for B in candidates if check_btree(G, M.tubes, B) is None]
        assert good == [btree_from_tubing(G, M)]


@settings(max_examples=30, deadline=None)
@given(connected_graphs())
def test_btree_definition_replay(G):
    trees = set()
    for M in enumerate_maximal(G):
        B = btree_from_tubing(G, M)
        assert check_btree(G, M.tubes, B) is None
        trees.add(B)
    assert len(trees) == len(enumerate_maximal(G))


GRAPHS_7 = [path_graph(7), complete_graph(5), star_graph(6), cycle_graph(6), lollipop(3, 4), lollipop(2, 5), lollipop(5, 2)]


@pytest.mark.parametrize("G", GRAPHS_7)
def test_btree_h_matches_face_count(G):
    h = hpoly_btrees(G)
    assert h == graph_h_polynomial(G)
    assert sum(h) == len(enumerate_maximal(G))


@settings(max_examples=25, deadline=None)
@given(connected_graphs())
def test_btree_h_matches_face_count_random(G):
    assert hpoly_btrees(G) == graph_h_polynomial(G)


@settings(max_examples=25, deadline=None)
@given(tree_posets(max_n=7))
def test_tree_posets_match_line_graphs(P):
    assert face_vector(P) == graph_face_vector(line_graph_of_hasse(P))


@pytest.mark.parametrize(
    "P",
    [make_A(4, 3), make_A(2, 5), ordinal_sum(antichain(3), ordinal_sum(chain(1), antichain(4))), make_A(0, 7)],
)
def test_size_8_tree_posets_match_line_graphs(P):
    assert face_vector(P) == graph_face_vector(line_graph_of_hasse(P))


# --- inputs --------------------------------------------------------------


def test_graph_specs(tmp_path):
    assert graph_from_spec("path:3").label_edges() == [(1, 2), (2, 3)]
    assert len(graph_from_spec("complete:4").edges) == 6
    assert graph_from_spec("lollipop:3,4") == lollipop(3, 4)
    data = {"vertices": 3, "labels": [3, 1, 2], "edges": [[0, 1], [1, 2]]}
    G = graph_from_json(data)
    assert G.label_edges() == [(1, 2), (1, 3)]
    with pytest.raises(GraphError):
        graph_from_json({"vertices": 2, "labels": [1, 1], "edges": [[0, 1]]})
    with pytest.raises(GraphError):
        graph_from_spec("nope:1")
