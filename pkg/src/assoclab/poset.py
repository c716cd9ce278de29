"""Finite posets, their tubes and tubings, and autonomous-subposet surgery.

Element subsets are int bitmasks (bit ``i`` set means element ``i``).  Public
functions also accept any iterable of element indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import networkx as nx

from .polynomial import FaceVector, IntPolynomial, f_from_tubings, h_from_f

__all__ = [
    "Poset",
    "PosetError",
    "Tubing",
    "build_poset",
    "chain",
    "antichain",
    "ordinal_sum",
    "make_A",
    "crown",
    "to_mask",
    "from_mask",
    "is_tube",
    "proper_tubes",
    "check_tubing",
    "is_tubing",
    "iter_tubings",
    "enumerate_tubings",
    "tubing_size_counts",
    "face_vector",
    "h_polynomial",
    "is_autonomous",
    "replace_autonomous",
    "induced_subposet",
    "is_isomorphic",
    "poset_from_json",
    "poset_from_spec",
]


class PosetError(ValueError):
    """Invalid poset input or an operation outside its domain."""


def to_mask(subset) -> int:
    if isinstance(subset, int):
        return subset
    m = 0
    for x in subset:
        m |= 1 << x
    return m


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class Poset:
    """A finite poset given by its Hasse diagram.

    ``up[x]`` and ``down[x]`` are bitmasks of the principal filter and ideal
    of ``x`` (both contain ``x``).
    """

    n: int
    covers: tuple[tuple[int, int], ...]
    up: tuple[int, ...] = field(repr=False)
    down: tuple[int, ...] = field(repr=False)
    names: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __len__(self) -> int:
        return self.n

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def neighbors(self) -> list[int]:
        """Undirected Hasse adjacency as bitmasks."""
        adj = [0] * self.n
        for a, b in self.covers:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj

    def minimal(self) -> list[int]:
        return [x for x in range(self.n) if self.down[x] == 1 << x]

    def maximal(self) -> list[int]:
        return [x for x in range(self.n) if self.up[x] == 1 << x]

    def is_connected(self) -> bool:
        return self.n > 0 and _connected(self.full, self.neighbors())

    def hasse_graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.covers)
        return g

    def to_json(self) -> dict:
        names = list(self.names) if self.names else [str(i) for i in range(self.n)]
        return {"elements": names, "covers": [[names[a], names[b]] for a, b in self.covers]}


def _find_cycle(n: int, succ: list[list[int]]) -> Optional[list[int]]:
    color = [0] * n
    parent = [-1] * n
    for s in range(n):
        if color[s]:
            continue
        stack = [(s, iter(succ[s]))]
        color[s] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
                continue
            if color[nxt] == 1:
                cyc = [nxt]
                u = v
                while u != nxt:
                    cyc.append(u)
                    u = parent[u]
                cyc.append(nxt)
                return cyc[::-1]
            if color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = v
                stack.append((nxt, iter(succ[nxt])))
    return None


def build_poset(n_elements: int, covers: Iterable[Sequence[int]], names: Optional[Sequence[str]] = None) -> Poset:
    """Build a poset from order relations; redundant pairs are reduced away."""
    n = n_elements
    if n < 0:
        raise PosetError("negative element count")
    pairs = set()
    for a, b in covers:
        if not (0 <= a < n and 0 <= b < n):
            raise PosetError(f"relation ({a}, {b}) out of range for {n} elements")
        if a == b:
            raise PosetError(f"self-relation on {a}")
        pairs.add((a, b))
    succ = [[] for _ in range(n)]
    for a, b in sorted(pairs):
        succ[a].append(b)
    cyc = _find_cycle(n, succ)
    if cyc is not None:
        raise PosetError(f"relations contain a cycle: {' < '.join(map(str, cyc))}")
    # transitive closure in reverse topological order
    order = list(nx.topological_sort(nx.DiGraph([(a, b) for a, b in pairs]))) if pairs else []
    rest = [x for x in range(n) if x not in set(order)]
    order = order + rest
    up = [1 << x for x in range(n)]
    for x in reversed(order):
        for y in succ[x]:
            up[x] |= up[y]
    down = [1 << x for x in range(n)]
    for x in range(n):
        for y in from_mask(up[x]):
            down[y] |= 1 << x
    hasse = []
    for a in range(n):
        strict = up[a] & ~(1 << a)
        for b in from_mask(strict):
            between = strict & down[b] & ~(1 << b)
            if not between:
                hasse.append((a, b))
    return Poset(n, tuple(sorted(hasse)), tuple(up), tuple(down), tuple(names) if names else None)


def chain(n: int) -> Poset:
    if n < 1:
        raise PosetError("chain needs n >= 1")
    return build_poset(n, [(i, i + 1) for i in range(n - 1)])


def antichain(k: int) -> Poset:
    if k < 0:
        raise PosetError("antichain needs k >= 0")
    return build_poset(k, [])


def ordinal_sum(P: Poset, Q: Poset) -> Poset:
    """Every element of P below every element of Q; Q is reindexed after P."""
    off = P.n
    rel = list(P.covers) + [(a + off, b + off) for a, b in Q.covers]
    rel += [(a, b + off) for a in P.maximal() for b in Q.minimal()]
    return build_poset(P.n + Q.n, rel)


def make_A(n: int, k: int) -> Poset:
    """A_{n,k}: a chain of n+1 elements with an antichain of k elements on top."""
    if n < 0 or k < 0 or n + k < 1:
        raise PosetError("make_A needs n, k >= 0 and n + k >= 1")
    return ordinal_sum(chain(n + 1), antichain(k))


def crown() -> Poset:
    """a<b, a<d, c<b, c<d with a, b, c, d = 0, 1, 2, 3."""
    return build_poset(4, [(0, 1), (0, 3), (2, 1), (2, 3)], names=["a", "b", "c", "d"])


# ---------------------------------------------------------------------------
# tubes


def _connected(mask: int, adj: list[int]) -> bool:
    if not mask:
        return False
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        nxt &= mask & ~seen
        seen |= nxt
        frontier = nxt
    return seen == mask


def _convex(P: Poset, mask: int) -> bool:
    above = 0
    below = 0
    m = mask
    while m:
        low = m & -m
        x = low.bit_length() - 1
        above |= P.up[x]
        below |= P.down[x]
        m ^= low
    return (above & below) & ~mask == 0


def is_tube(P: Poset, subset) -> bool:
    """Connected in the Hasse diagram and order-convex."""
    mask = to_mask(subset)
    if mask & ~P.full:
        raise PosetError("subset contains elements outside the poset")
    return _connected(mask, P.neighbors()) and _convex(P, mask)


def proper_tubes(P: Poset) -> list[int]:
    """All tubes with 1 < size < |P|, ordered by (size, mask)."""
    adj = P.neighbors()
    out = []
    for m in range(1, P.full):
        c = _popcount(m)
        if 1 < c < P.n and _connected(m, adj) and _convex(P, m):
            out.append(m)
    out.sort(key=lambda m: (_popcount(m), m))
    return out


def _upset(P: Poset, mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= P.up[low.bit_length() - 1]
        mask ^= low
    return out


def _precedes(P: Poset, s: int, t: int) -> bool:
    """s < t: disjoint, and some element of s lies below some element of t."""
    return not (s & t) and bool(_upset(P, s) & t)


@dataclass(frozen=True)
class Tubing:
    tubes: frozenset[int]
    poset: Poset = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.tubes)

    def as_sets(self) -> list[tuple[int, ...]]:
        return sorted((from_mask(t) for t in self.tubes), key=lambda s: (len(s), s))

    def key(self) -> tuple:
        return tuple(sorted(self.tubes, key=lambda m: (_popcount(m), m)))


def check_tubing(P: Poset, tubes: Iterable) -> Optional[dict]:
    """Return None for a valid tubing, else a dict describing the violation."""
    masks = [to_mask(t) for t in tubes]
    for i, t in enumerate(masks):
        if not is_tube(P, t) or not 1 < _popcount(t) < P.n:
            raise PosetError(f"member {i} ({from_mask(t)}) is not a proper tube")
    for (i, s), (j, t) in combinations(enumerate(masks), 2):
        if s & t and not (s & t == s or s & t == t):
            return {"kind": "overlap", "tubes": [from_mask(s), from_mask(t)]}
    succ = [[j for j, t in enumerate(masks) if _precedes(P, s, t)] for s in masks]
    cyc = _find_cycle(len(masks), succ)
    if cyc is not None:
        return {"kind": "cycle", "tubes": [from_mask(masks[i]) for i in cyc]}
    return None


def is_tubing(P: Poset, tubes: Iterable) -> bool:
    return check_tubing(P, tubes) is None


class _TubingIndex:
    """Pairwise data over the proper tubes of P, shared by the enumerators."""

    def __init__(self, P: Poset):
        if P.n < 2:
            raise PosetError("poset associahedron needs |P| >= 2")
        if not P.is_connected():
            raise PosetError("poset is not connected")
        self.P = P
        self.tubes = proper_tubes(P)
        m = len(self.tubes)
        self.compat = [0] * m
        self.prec = [0] * m
        ups = [_upset(P, t) for t in self.tubes]
        for i, s in enumerate(self.tubes):
            for j, t in enumerate(self.tubes):
                if i == j:
                    continue
                inter = s & t
                if inter == s or inter == t or not inter:
                    self.compat[i] |= 1 << j
                if not inter and ups[i] & t:
                    self.prec[i] |= 1 << j

    def creates_cycle(self, chosen: int, new: int) -> bool:
        # any new cycle passes through `new`
        allowed = chosen | (1 << new)
        seen = 0
        frontier = self.prec[new] & allowed
        while frontier:
            if frontier >> new & 1:
                return True
            seen |= frontier
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= self.prec[low.bit_length() - 1]
                f ^= low
            frontier = nxt & allowed & ~seen
        return False

    def walk(self) -> Iterator[int]:
        """Yield each tubing as a bitmask over tube indices, depth-first."""
        m = len(self.tubes)

        def rec(chosen: int, cand: int):
            yield chosen
            c = cand
            while c:
                low = c & -c
                i = low.bit_length() - 1
                c ^= low
                if self.creates_cycle(chosen, i):
                    continue
                # only later indices, to visit each subset once
                later = cand & ~((low << 1) - 1)
                yield from rec(chosen | low, later & self.compat[i])

        yield from rec(0, (1 << m) - 1)


def iter_tubings(P: Poset) -> Iterator[Tubing]:
    idx = _TubingIndex(P)
    for chosen in idx.walk():
        yield Tubing(frozenset(idx.tubes[i] for i in from_mask(chosen)), P)


def enumerate_tubings(P: Poset) -> list[Tubing]:
    """Every tubing of P (the empty one included), sorted by size then content."""
    out = list(iter_tubings(P))
    out.sort(key=lambda T: (len(T), T.key()))
    return out


def tubing_size_counts(P: Poset) -> list[int]:
    """``counts[t]`` = number of tubings with ``t`` tubes."""
    idx = _TubingIndex(P)
    counts = [0] * (P.n - 1)
    for chosen in idx.walk():
        counts[_popcount(chosen)] += 1
    return counts


def face_vector(P: Poset) -> FaceVector:
    counts = tubing_size_counts(P)
    dim = P.n - 2
    return f_from_tubings((t for t, c in enumerate(counts) for _ in range(c)), dim)


_H_CACHE: dict = {}


def h_polynomial(P: Poset) -> IntPolynomial:
    key = (P.n, P.covers)
    if key not in _H_CACHE:
        _H_CACHE[key] = h_from_f(face_vector(P))
    return _H_CACHE[key]


# ---------------------------------------------------------------------------
# autonomous subposets


def is_autonomous(P: Poset, S) -> bool:
    """Every outside element is above all of S, below all of S, or incomparable to all."""
    mask = to_mask(S)
    if not mask or mask & ~P.full:
        raise PosetError("S must be a nonempty subset of P")
    for p in range(P.n):
        if mask >> p & 1:
            continue
        above = P.down[p] & mask  # elements of S below p
        below = P.up[p] & mask
        if above == mask or below == mask or (not above and not below):
            continue
        return False
    return True


def induced_subposet(P: Poset, S) -> Poset:
    elems = from_mask(to_mask(S))
    pos = {x: i for i, x in enumerate(elems)}
    rel = [(pos[a], pos[b]) for a in elems for b in elems if a != b and P.leq(a, b)]
    names = [P.names[x] for x in elems] if P.names else None
    return build_poset(len(elems), rel, names)


def replace_autonomous(P: Poset, S, R: Poset) -> Poset:
    """Excise S and insert R with the outside relations S had.

    Elements outside S keep their relative order and come first; R's elements follow.
    """
    mask = to_mask(S)
    if not is_autonomous(P, mask):
        raise PosetError(f"{from_mask(mask)} is not autonomous")
    outside = [x for x in range(P.n) if not mask >> x & 1]
    pos = {x: i for i, x in enumerate(outside)}
    off = len(outside)
    rel = [(pos[a], pos[b]) for a in outside for b in outside if a != b and P.leq(a, b)]
    rel += [(off + a, off + b) for a, b in R.covers]
    for p in outside:
        if P.down[p] & mask:  # p above S
            rel += [(off + r, pos[p]) for r in range(R.n)]
        elif P.up[p] & mask:  # p below S
            rel += [(pos[p], off + r) for r in range(R.n)]
    return build_poset(off + R.n, rel)


def is_isomorphic(P: Poset, Q: Poset) -> bool:
    return P.n == Q.n and len(P.covers) == len(Q.covers) and nx.is_isomorphic(P.hasse_graph(), Q.hasse_graph())


# ---------------------------------------------------------------------------
# input formats


def poset_from_json(data: dict) -> Poset:
    names = [str(x) for x in data["elements"]]
    if len(set(names)) != len(names):
        raise PosetError("duplicate element names")
    idx = {x: i for i, x in enumerate(names)}
    try:
        rel = [(idx[str(a)], idx[str(b)]) for a, b in data.get("covers", [])]
    except KeyError as e:
        raise PosetError(f"unknown element {e.args[0]!r} in covers") from None
    return build_poset(len(names), rel, names)


def poset_from_spec(spec: str) -> Poset:
    """``chain:n``, ``antichain:k``, ``A:n,k`` or a path to a JSON poset file."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "chain" and arg:
            return chain(int(arg))
        if kind == "antichain" and arg:
            return antichain(int(arg))
        if kind == "A" and arg:
            n, k = (int(x) for x in arg.split(","))
            return make_A(n, k)
    except ValueError as e:
        raise PosetError(f"bad poset spec {spec!r}: {e}") from None
    path = Path(spec)
    if not path.exists():
        raise PosetError(f"unknown poset spec {spec!r}")
    return poset_from_json(json.loads(path.read_text()))
