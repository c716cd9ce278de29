"""Labeled graphs, graph tubings and B-trees, lollipop graphs and line graphs of Hasse diagrams.

Vertices are indices ``0..N-1``; each carries an integer label and every
statistic (descents, B-tree nodes) is expressed in labels.  Vertex subsets are
int bitmasks as in :mod:`assoclab.poset`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx

from .polynomial import FaceVector, IntPolynomial, f_from_tubings, h_from_f
from .poset import Poset, _connected, _popcount, from_mask, to_mask

__all__ = [
    "Graph",
    "GraphError",
    "GraphTubing",
    "BTree",
    "lollipop",
    "lollipop_for_A",
    "path_graph",
    "complete_graph",
    "line_graph_of_hasse",
    "is_graph_tube",
    "graph_tubes",
    "is_graph_tubing",
    "enumerate_graph_tubings",
    "enumerate_maximal",
    "graph_tubing_size_counts",
    "graph_face_vector",
    "graph_h_polynomial",
    "btree_from_tubing",
    "check_btree",
    "enumerate_btrees",
    "btree_descents",
    "hpoly_btrees",
    "graph_from_json",
    "graph_from_spec",
]


class GraphError(ValueError):
    """Invalid graph input or an operation outside its domain."""


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[int, ...]
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n_vertices
        edges = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(edges))
        labels = tuple(self.labels) if self.labels is not None else tuple(range(1, n + 1))
        if sorted(labels) != list(range(1, n + 1)):
            raise GraphError(f"labels {labels} are not a permutation of 1..{n}")
        object.__setattr__(self, "labels", labels)
        adj = [0] * n
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "adj", tuple(adj))

    def __len__(self) -> int:
        return self.n_vertices

    @property
    def full(self) -> int:
        return (1 << self.n_vertices) - 1

    def vertex_of(self, label: int) -> int:
        return self.labels.index(label)

    def is_connected(self) -> bool:
        return self.n_vertices > 0 and _connected(self.full, list(self.adj))

    def label_set(self, mask: int) -> frozenset[int]:
        return frozenset(self.labels[v] for v in from_mask(mask))

    def label_edges(self) -> list[tuple[int, int]]:
        return sorted((min(self.labels[u], self.labels[v]), max(self.labels[u], self.labels[v])) for u, v in self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g

    def to_json(self) -> dict:
        return {"vertices": self.n_vertices, "labels": list(self.labels), "edges": sorted(map(list, self.edges))}


def path_graph(n: int) -> Graph:
    """Path 1 - 2 - ... - n."""
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)), tuple(range(1, n + 1)))


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph(n, frozenset(combinations(range(n), 2)), tuple(range(1, n + 1)))


def lollipop(n: int, k: int) -> Graph:
    """Path of ``n`` vertices joined by an edge to a clique of ``k`` vertices.

    The link (the clique vertex touching the path) is labeled n+1, the other
    clique vertices n+2..n+k, and the path n, n-1, ..., 1 walking away from the
    link.  Vertex indices follow the labels.
    """
    if k < 1:
        raise GraphError("lollipop needs a nonempty clique")
    if n < 0:
        raise GraphError("lollipop needs n >= 0")
    # index = label - 1
    edges = {(i, i + 1) for i in range(n)}  # path 1..n then link n+1
    edges |= {(a, b) for a, b in combinations(range(n, n + k), 2)}
    return Graph(n + k, frozenset(edges), tuple(range(1, n + k + 1)))


def lollipop_for_A(n: int, k: int) -> Graph:
    """The labeled lollipop whose associahedron matches that of A_{n,k}.

    For n >= 1 this is L_{n-1,k+1}: path n-1..1, link n, clique n+1..n+k.
    For n = 0 the poset is a claw and the graph is the clique K_k on 1..k.
    """
    if n < 0 or k < 0 or n + k < 1:
        raise GraphError("need n, k >= 0 and n + k >= 1")
    if n == 0:
        return complete_graph(k)
    return lollipop(n - 1, k + 1)


def line_graph_of_hasse(P: Poset) -> Graph:
    """Vertices are Hasse edges (in ``P.covers`` order), adjacent when they share an endpoint."""
    if not P.is_connected():
        raise GraphError("poset is not connected")
    if len(P.covers) != P.n - 1:
        raise GraphError("Hasse diagram is not a tree")
    m = len(P.covers)
    edges = {(i, j) for i, j in combinations(range(m), 2) if set(P.covers[i]) & set(P.covers[j])}
    return Graph(m, frozenset(edges), tuple(range(1, m + 1)))


# ---------------------------------------------------------------------------
# tubes and tubings


def is_graph_tube(G: Graph, subset) -> bool:
    """Nonempty, connected and proper."""
    mask = to_mask(subset)
    return 0 < mask < G.full and mask & ~G.full == 0 and _connected(mask, list(G.adj))


def graph_tubes(G: Graph) -> list[int]:
    adj = list(G.adj)
    out = [m for m in range(1, G.full) if _connected(m, adj)]
    out.sort(key=lambda m: (_popcount(m), m))
    return out


def _neighborhood(G: Graph, mask: int) -> int:
    out = 0
    for v in from_mask(mask):
        out |= G.adj[v]
    return out


def _compatible(G: Graph, s: int, t: int) -> bool:
    inter = s & t
    if inter:
        return inter == s or inter == t
    # disjoint tubes: the union is a tube exactly when they are adjacent
    return not (_neighborhood(G, s) & t)


def is_graph_tubing(G: Graph, tubes: Iterable) -> bool:
    masks = [to_mask(t) for t in tubes]
    if not all(is_graph_tube(G, m) for m in masks):
        return False
    return all(_compatible(G, s, t) for s, t in combinations(masks, 2))


@dataclass(frozen=True)
class GraphTubing:
    tubes: frozenset[int]
    graph: Graph = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.tubes)

    def is_maximal(self) -> bool:
        return len(self.tubes) == self.graph.n_vertices - 1

    def as_label_sets(self) -> list[tuple[int, ...]]:
        return sorted((tuple(sorted(self.graph.label_set(t))) for t in self.tubes), key=lambda s: (len(s), s))

    def key(self) -> tuple:
        return tuple(sorted(self.tubes, key=lambda m: (_popcount(m), m)))


def _walk_tubings(G: Graph, tubes: list[int]) -> Iterator[int]:
    m = len(tubes)
    compat = [0] * m
    for i, s in enumerate(tubes):
        for j in range(i + 1, m):
            if _compatible(G, s, tubes[j]):
                compat[i] |= 1 << j
                compat[j] |= 1 << i

    def rec(chosen: int, cand: int):
        yield chosen
        c = cand
        while c:
            low = c & -c
            i = low.bit_length() - 1
            c ^= low
            later = cand & ~((low << 1) - 1)
            yield from rec(chosen | low, later & compat[i])

    yield from rec(0, (1 << m) - 1)


def _require_connected(G: Graph) -> None:
    if not G.is_connected():
        raise GraphError("graph is not connected")


def enumerate_graph_tubings(G: Graph) -> list[GraphTubing]:
    """Every tubing (the empty one included), sorted by size then content."""
    _require_connected(G)
    tubes = graph_tubes(G)
    out = [GraphTubing(frozenset(tubes[i] for i in from_mask(c)), G) for c in _walk_tubings(G, tubes)]
    out.sort(key=lambda T: (len(T), T.key()))
    return out


def enumerate_maximal(G: Graph) -> list[GraphTubing]:
    return [T for T in enumerate_graph_tubings(G) if T.is_maximal()]


def graph_tubing_size_counts(G: Graph) -> list[int]:
    _require_connected(G)
    counts = [0] * G.n_vertices
    for c in _walk_tubings(G, graph_tubes(G)):
        counts[_popcount(c)] += 1
    return counts


def graph_face_vector(G: Graph) -> FaceVector:
    counts = graph_tubing_size_counts(G)
    dim = G.n_vertices - 1
    return f_from_tubings((t for t, c in enumerate(counts) for _ in range(c)), dim)


def graph_h_polynomial(G: Graph) -> IntPolynomial:
    return h_from_f(graph_face_vector(G))


# ---------------------------------------------------------------------------
# B-trees


@dataclass(frozen=True)
class BTree:
    """Rooted tree on vertex labels; ``parent`` maps every non-root label to its parent."""

    root: int
    parent: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "parent", dict(sorted(self.parent.items())))

    def __hash__(self) -> int:
        return hash((self.root, tuple(self.parent.items())))

    def nodes(self) -> list[int]:
        return sorted([self.root, *self.parent])

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.nodes()}
        for c, p in self.parent.items():
            out[p].append(c)
        return out

    def ancestors(self, v: int) -> list[int]:
        """Strict ancestors of ``v``, nearest first."""
        out = []
        while v in self.parent:
            v = self.parent[v]
            out.append(v)
        return out

    def below(self, v: int, u: int) -> bool:
        """u <_T v, i.e. u is a strict descendant of v."""
        return v in self.ancestors(u)

    def descendants(self, v: int) -> frozenset[int]:
        """T_{<=v}, including v."""
        ch = self.children()
        out, stack = {v}, [v]
        while stack:
            for c in ch[stack.pop()]:
                out.add(c)
                stack.append(c)
        return frozenset(out)

    def edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs."""
        return sorted((p, c) for c, p in self.parent.items())

    def to_json(self) -> dict:
        return {"root": self.root, "parent": {str(c): p for c, p in self.parent.items()}}


def btree_from_tubing(G: Graph, M: GraphTubing | Iterable) -> BTree:
    """The B-tree of a maximal tubing, checked against the definition before returning."""
    tubes = list(M.tubes) if isinstance(M, GraphTubing) else [to_mask(t) for t in M]
    if len(tubes) != G.n_vertices - 1 or not is_graph_tubing(G, tubes):
        raise GraphError("not a maximal tubing")
    allt = sorted(set(tubes) | {G.full}, key=lambda m: (_popcount(m), m))
    root_of: dict[int, int] = {}
    for i, t in enumerate(allt):
        inner = [s for s in allt[:i] if s & t == s and s != t]
        covered = 0
        for s in inner:
            covered |= s
        rest = t & ~covered
        if _popcount(rest) != 1:
            raise GraphError(f"tube {sorted(G.label_set(t))} has {_popcount(rest)} uncovered vertices")
        root_of[t] = rest.bit_length() - 1
    parent = {}
    for i, t in enumerate(allt[:-1]):
        outer = next(s for s in allt[i + 1 :] if s & t == t and s != t)
        parent[G.labels[root_of[t]]] = G.labels[root_of[outer]]
    B = BTree(G.labels[root_of[G.full]], parent)
    problem = check_btree(G, tubes, B)
    if problem:
        raise AssertionError(f"constructed tree violates the B-tree definition: {problem}")
    return B


def check_btree(G: Graph, tubes: Iterable, B: BTree) -> Optional[str]:
    """Replay both B-tree conditions literally; return a message on the first failure."""
    tube_sets = {G.label_set(to_mask(t)) for t in tubes}
    if sorted(B.nodes()) != sorted(G.labels):
        return "node set differs from the vertex labels"
    desc = {v: B.descendants(v) for v in B.nodes()}
    for v in B.nodes():
        if v != B.root and desc[v] not in tube_sets:
            return f"descendants of {v} do not form a tube of the tubing"
    nodes = B.nodes()
    comparable = {(a, b) for a in nodes for b in nodes if a in desc[b] or b in desc[a]}

    def antichains(start: int, cur: list[int]):
        for i in range(start, len(nodes)):
            v = nodes[i]
            if all((v, u) not in comparable for u in cur):
                cur.append(v)
                yield list(cur)
                yield from antichains(i + 1, cur)
                cur.pop()

    for ac in antichains(0, []):
        if len(ac) >= 2 and frozenset().union(*(desc[v] for v in ac)) in tube_sets:
            return f"union over incomparable nodes {ac} is in the tubing"
    return None


def enumerate_btrees(G: Graph) -> list[BTree]:
    return [btree_from_tubing(G, M) for M in enumerate_maximal(G)]


def btree_descents(B: BTree) -> int:
    """Tree edges whose child carries the larger label."""
    return sum(1 for c, p in B.parent.items() if p < c)


def hpoly_btrees(G: Graph) -> IntPolynomial:
    counts: dict[int, int] = {}
    for B in enumerate_btrees(G):
        d = btree_descents(B)
        counts[d] = counts.get(d, 0) + 1
    top = max(counts, default=-1)
    return IntPolynomial([counts.get(i, 0) for i in range(top + 1)])


# ---------------------------------------------------------------------------
# input formats


def graph_from_json(data: dict) -> Graph:
    n = int(data["vertices"])
    labels = data.get("labels")
    edges = [tuple(e) for e in data.get("edges", [])]
    g = Graph(n, frozenset(edges), tuple(labels) if labels else tuple(range(1, n + 1)))
    return g


def graph_from_spec(spec: str) -> Graph:
    """``lollipop:n,k``, ``path:n``, ``complete:n`` or a path to a JSON graph file."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "lollipop" and arg:
            n, k = (int(x) for x in arg.split(","))
            return lollipop(n, k)
        if kind == "path" and arg:
            return path_graph(int(arg))
        if kind == "complete" and arg:
            return complete_graph(int(arg))
    except ValueError as e:
        raise GraphError(f"bad graph spec {spec!r}: {e}") from None
    path = Path(spec)
    if not path.exists():
        raise GraphError(f"unknown graph spec {spec!r}")
    return graph_from_json(json.loads(path.read_text()))
