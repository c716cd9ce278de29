"""Stack-sorting, decreasing binary trees and preimage enumeration.

Permutations are plain tuples in one-line notation over ``1..n``.  Unlabeled
binary-tree *shapes* are nested pairs ``(left, right)`` with ``None`` for the
empty tree; they are the currency shared with :mod:`assoclab.dyck`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .polynomial import IntPolynomial

Permutation = tuple[int, ...]
Shape = Optional[tuple]

__all__ = [
    "Permutation",
    "DecreasingBinaryTree",
    "identity",
    "is_permutation",
    "stack_sort",
    "inorder_tree",
    "inorder_read",
    "postorder_read",
    "descents",
    "peaks",
    "gen_S_nk",
    "iter_preimage",
    "preimage",
    "preimage_of_set",
    "preimage_S_nk",
    "preimage_descent_polynomial",
    "brute_force_preimage",
    "descent_polynomial",
    "BrandenReport",
    "branden_gamma_check",
    "happy_phi",
    "happy_phi_inverse",
    "shape_size",
    "shape_right_edges",
    "all_shapes",
]


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def is_permutation(w: Sequence[int]) -> bool:
    return sorted(w) == list(range(1, len(w) + 1))


def _check_perm(w: Sequence[int]) -> Permutation:
    w = tuple(w)
    if not is_permutation(w):
        raise ValueError(f"{w} is not a permutation of 1..{len(w)}")
    return w


def stack_sort(w: Sequence[int]) -> Permutation:
    """West's deterministic stack-sorting map, run as the literal stack procedure."""
    stack: list[int] = []
    out: list[int] = []
    i = 0
    while i < len(w):
        if not stack or w[i] < stack[-1]:
            stack.append(w[i])
            i += 1
        else:
            out.append(stack.pop())
    out.extend(reversed(stack))
    return tuple(out)


def descents(w: Sequence[int]) -> int:
    return sum(1 for a, b in zip(w, w[1:]) if a > b)


def peaks(w: Sequence[int]) -> int:
    """Indices 1 < i < n with w[i-1] < w[i] > w[i+1]."""
    return sum(1 for a, b, c in zip(w, w[1:], w[2:]) if a < b > c)


# ---------------------------------------------------------------------------
# binary trees


@dataclass(frozen=True)
class DecreasingBinaryTree:
    """Binary tree on distinct integer labels, each label larger than its children's.

    ``left`` and ``right`` map a node to its child; missing keys mean no child.
    """

    root: Optional[int]
    left: Mapping[int, int]
    right: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "left", dict(self.left))
        object.__setattr__(self, "right", dict(self.right))
        for side in (self.left, self.right):
            for parent, child in side.items():
                if child >= parent:
                    raise ValueError(f"node {child} is not smaller than its parent {parent}")

    def __hash__(self):
        return hash((self.root, tuple(sorted(self.left.items())), tuple(sorted(self.right.items()))))

    @classmethod
    def from_shape(cls, shape: Shape, labels: Sequence[int], order: str = "postorder") -> "DecreasingBinaryTree":
        """Label ``shape`` with ``labels`` read in the given traversal order."""
        it = iter(labels)
        left: dict[int, int] = {}
        right: dict[int, int] = {}

        def build(s) -> Optional[int]:
            if s is None:
                return None
            if order == "postorder":
                lch = build(s[0])
                rch = build(s[1])
                me = next(it)
            elif order == "inorder":
                lch = build(s[0])
                me = next(it)
                rch = build(s[1])
            else:
                raise ValueError(order)
            if lch is not None:
                left[me] = lch
            if rch is not None:
                right[me] = rch
            return me

        root = build(shape)
        return cls(root, left, right)

    def nodes(self) -> list[int]:
        return self.inorder()

    def __len__(self) -> int:
        return len(self.inorder())

    def parent_map(self) -> dict[int, int]:
        par = {c: p for p, c in self.left.items()}
        par.update({c: p for p, c in self.right.items()})
        return par

    def inorder(self) -> list[int]:
        out: list[int] = []
        stack: list[int] = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = self.left.get(node)
            node = stack.pop()
            out.append(node)
            node = self.right.get(node)
        return out

    def postorder(self) -> list[int]:
        out: list[int] = []

        def walk(v):
            if v is None:
                return
            walk(self.left.get(v))
            walk(self.right.get(v))
            out.append(v)

        walk(self.root)
        return out

    def subtree(self, v: Optional[int]) -> list[int]:
        """Nodes of the subtree rooted at ``v`` (in inorder)."""
        if v is None:
            return []
        return DecreasingBinaryTree(v, self.left, self.right).inorder()

    def shape(self) -> Shape:
        def walk(v):
            if v is None:
                return None
            return (walk(self.left.get(v)), walk(self.right.get(v)))

        return walk(self.root)

    def right_edges(self) -> int:
        return len(self.right)


def inorder_tree(w: Sequence[int]) -> DecreasingBinaryTree:
    """The unique decreasing tree whose inorder reading is ``w`` (split at the maximum)."""
    w = tuple(w)
    if len(set(w)) != len(w):
        raise ValueError(f"{w} has repeated entries")
    left: dict[int, int] = {}
    right: dict[int, int] = {}
    # Cartesian-tree construction with a monotone stack.
    stack: list[int] = []
    for x in w:
        last = None
        while stack and stack[-1] < x:
            last = stack.pop()
        if last is not None:
            left[x] = last
        if stack:
            right[stack[-1]] = x
        stack.append(x)
    root = stack[0] if stack else None
    return DecreasingBinaryTree(root, left, right)


def inorder_read(T: DecreasingBinaryTree) -> Permutation:
    return tuple(T.inorder())


def postorder_read(T: DecreasingBinaryTree) -> Permutation:
    return tuple(T.postorder())


# ---------------------------------------------------------------------------
# shapes


def shape_size(s: Shape) -> int:
    return 0 if s is None else 1 + shape_size(s[0]) + shape_size(s[1])


def shape_right_edges(s: Shape) -> int:
    if s is None:
        return 0
    return shape_right_edges(s[0]) + shape_right_edges(s[1]) + (s[1] is not None)


@lru_cache(maxsize=None)
def all_shapes(n: int) -> tuple:
    """Every binary tree shape with ``n`` nodes (Catalan-many)."""
    if n == 0:
        return (None,)
    out = []
    for a in range(n):
        for ls in all_shapes(a):
            for rs in all_shapes(n - 1 - a):
                out.append((ls, rs))
    return tuple(out)


# ---------------------------------------------------------------------------
# S_{n,k} and preimages


def gen_S_nk(n: int, k: int) -> list[Permutation]:
    """Permutations of S_{n+k} fixing every position above ``k``."""
    if n < 0 or k < 0 or n + k < 1:
        raise ValueError("need n, k >= 0 and n + k >= 1")
    tail = tuple(range(k + 1, n + k + 1))
    return [p + tail for p in permutations(range(1, k + 1))]


def iter_preimage(target: Sequence[int]) -> Iterator[Permutation]:
    """Yield every ``w`` with ``stack_sort(w) == target``.

    A decreasing tree with postorder reading ``target`` has the last entry as
    root; its left and right subtrees read a prefix and the remaining middle
    of ``target``.  Splits where a subtree's last entry is not its maximum
    admit no decreasing labeling and are pruned.
    """
    target = _check_perm(target)
    yield from _gen_segment(target)


def _gen_segment(seg: tuple) -> Iterator[tuple]:
    if not seg:
        yield ()
        return
    root = seg[-1]
    body = seg[:-1]
    if body and max(body) > root:
        return
    m = len(body)
    # left subtree reads body[:a]; its root body[a-1] must be the max of body[:a]
    best = 0
    split_ok = [True] + [False] * m
    for a in range(1, m + 1):
        if body[a - 1] > best:
            best = body[a - 1]
            split_ok[a] = True
    for a in range(m + 1):
        if not split_ok[a]:
            continue
        rseg = body[a:]
        if rseg and max(rseg) != rseg[-1]:
            continue
        lefts = list(_gen_segment(body[:a]))
        for r in _gen_segment(rseg):
            tail = (root,) + r
            for l in lefts:
                yield l + tail


def preimage(target: Sequence[int]) -> list[Permutation]:
    return sorted(iter_preimage(target))


def preimage_of_set(A: Iterable[Sequence[int]]) -> list[Permutation]:
    out: set[Permutation] = set()
    for t in A:
        out.update(iter_preimage(t))
    return sorted(out)


def preimage_S_nk(n: int, k: int) -> list[Permutation]:
    return preimage_of_set(gen_S_nk(n, k))


def brute_force_preimage(A: Iterable[Sequence[int]]) -> list[Permutation]:
    """Filter all of S_n through the stack; test oracle only."""
    A = {tuple(a) for a in A}
    if not A:
        return []
    n = len(next(iter(A)))
    return sorted(w for w in permutations(range(1, n + 1)) if stack_sort(w) in A)


def preimage_descent_polynomial(target: Sequence[int]) -> IntPolynomial:
    """Descent polynomial of ``s^{-1}(target)`` without listing the preimage.

    Same tree decomposition as :func:`iter_preimage`, folding each subtree
    into its descent distribution.  The inorder word is
    ``left + root + right`` and contributes one extra descent exactly when
    the right subtree is nonempty.
    """
    target = _check_perm(target)
    memo: dict[tuple[int, int], IntPolynomial] = {}
    x = IntPolynomial([0, 1])

    def seg(i: int, j: int) -> IntPolynomial:
        # segment target[i:j]
        if i == j:
            return IntPolynomial([1])
        key = (i, j)
        if key in memo:
            return memo[key]
        root = target[j - 1]
        acc = IntPolynomial()
        if max(target[i:j]) == root:
            for a in range(i, j):
                lp = seg(i, a)
                if lp.is_zero():
                    continue
                rp = seg(a, j - 1)
                if rp.is_zero():
                    continue
                term = lp * rp
                if a < j - 1:
                    term = term * x
                acc = acc + term
        memo[key] = acc
        return acc

    return seg(0, len(target))


def descent_polynomial(A: Iterable[Sequence[int]]) -> IntPolynomial:
    counts: dict[int, int] = {}
    for w in A:
        d = descents(w)
        counts[d] = counts.get(d, 0) + 1
    if not counts:
        return IntPolynomial()
    return IntPolynomial(counts.get(i, 0) for i in range(max(counts) + 1))


@dataclass(frozen=True)
class BrandenReport:
    holds: bool
    lhs: IntPolynomial
    rhs: IntPolynomial
    gamma: tuple  # gamma_m = (#peak m) / 2^(n-1-2m), exact
    peak_counts: tuple[int, ...]

    @property
    def gamma_integral_nonnegative(self) -> bool:
        return all(isinstance(g, int) and g >= 0 for g in self.gamma)

    def __bool__(self) -> bool:
        return self.holds


def branden_gamma_check(A: Iterable[Sequence[int]], n: int) -> BrandenReport:
    """Compare the descent polynomial of ``s^{-1}(A)`` with its peak expansion."""
    pre = preimage_of_set(A)
    for w in pre:
        if len(w) != n:
            raise ValueError(f"{w} is not in S_{n}")
    lhs = descent_polynomial(pre)
    top = (n - 1) // 2
    pc = [0] * (top + 1)
    for w in pre:
        pc[peaks(w)] += 1
    one_plus_x = IntPolynomial([1, 1])
    rhs = IntPolynomial()
    gamma = []
    for m, c in enumerate(pc):
        g = Fraction(c, 2 ** (n - 1 - 2 * m))
        g = g.numerator if g.denominator == 1 else g
        gamma.append(g)
        rhs = rhs + (one_plus_x ** (n - 1 - 2 * m)).shift(m).scale(g)
    return BrandenReport(lhs == rhs, lhs, rhs, tuple(gamma), tuple(pc))


# ---------------------------------------------------------------------------
# the happy-coincidence bijection


class _Tree:
    """Mutable scratch tree keyed by opaque node ids."""

    def __init__(self, T: DecreasingBinaryTree):
        self.root = T.root
        self.left = dict(T.left)
        self.right = dict(T.right)
        self.parent = T.parent_map()

    def side(self, v) -> str:
        p = self.parent[v]
        return "L" if self.left.get(p) == v else "R"

    def children(self, v) -> list:
        return [c for c in (self.left.get(v), self.right.get(v)) if c is not None]

    def attach(self, parent, child, side):
        (self.left if side == "L" else self.right)[parent] = child
        self.parent[child] = parent

    def remove_subtree(self, v):
        for c in self.children(v):
            self.remove_subtree(c)
        p = self.parent.pop(v, None)
        if p is not None:
            if self.left.get(p) == v:
                del self.left[p]
            elif self.right.get(p) == v:
                del self.right[p]
        self.left.pop(v, None)
        self.right.pop(v, None)

    def relabel_postorder(self, word: Sequence[int]) -> DecreasingBinaryTree:
        order: list = []

        def walk(v):
            if v is None:
                return
            walk(self.left.get(v))
            walk(self.right.get(v))
            order.append(v)

        walk(self.root)
        if len(order) != len(word):
            raise AssertionError("node count changed during surgery")
        lab = dict(zip(order, word))
        return DecreasingBinaryTree(
            lab[self.root],
            {lab[p]: lab[c] for p, c in self.left.items()},
            {lab[p]: lab[c] for p, c in self.right.items()},
        )


def _ident_213(n: int) -> Permutation:
    return (2, 1) + tuple(range(3, n + 1))


def happy_phi(T: DecreasingBinaryTree) -> DecreasingBinaryTree:
    """Map a tree reading ``12...n`` in postorder, with root not at either end of
    its inorder word, to a tree reading ``213...n`` with the same right-edge count.

    The single-child chain hanging above node 1 (below the first branching
    ancestor) is cut off and regrown above the root with its edge directions
    reversed in order; the result is relabeled to postorder ``213...n``.
    """
    w = inorder_read(T)
    n = len(w)
    if n < 3:
        raise ValueError("happy_phi needs n >= 3")
    if postorder_read(T) != identity(n):
        raise ValueError(f"inorder word {w} is not in s^-1(12...n)")
    if w[0] == n or w[-1] == n:
        raise ValueError(f"inorder word {w} has n at an end; the root has one child")
    t = _Tree(T)
    # climb from node 1 to the first ancestor with two children
    chain = [1]
    dirs: list[str] = []
    v = 1
    while True:
        dirs.append(t.side(v))
        v = t.parent[v]
        if len(t.children(v)) == 2:
            break
        chain.append(v)
    top = chain[-1]  # left child of the branching node
    if dirs[-1] != "L":
        raise AssertionError("node 1 must sit in the left subtree of its branching ancestor")
    if chain != list(range(1, len(chain) + 1)):
        raise AssertionError(f"chain below the branching node is not 1..m: {chain}")
    # dirs[i] is the side of chain[i] under its parent; the edges below `top` are dirs[:-1]
    below = dirs[:-1]
    for c in t.children(top):
        t.remove_subtree(c)
    # regrow above the root: old root is the D_{m-1} child of the first new node, ...
    fresh = ("new", 0)
    node = t.root
    for i, d in enumerate(reversed(below)):
        fresh = ("new", i)
        t.attach(fresh, node, d)
        node = fresh
    t.root = node
    t.parent.pop(node, None)
    return t.relabel_postorder(_ident_213(n))


def happy_phi_inverse(T: DecreasingBinaryTree) -> DecreasingBinaryTree:
    """Inverse of :func:`happy_phi`."""
    n = len(T)
    if n < 3:
        raise ValueError("happy_phi_inverse needs n >= 3")
    if postorder_read(T) != _ident_213(n):
        raise ValueError(f"inorder word {inorder_read(T)} is not in s^-1(213...n)")
    t = _Tree(T)
    # walk down from the root through single-child nodes
    path = [t.root]
    while len(t.children(path[-1])) == 1:
        path.append(t.children(path[-1])[0])
    v = path[-1]
    if len(t.children(v)) != 2:
        raise AssertionError("nodes 1 and 2 are incomparable, so some node branches")
    # directions of the removed edges, from v upward
    dirs = [t.side(u) for u in reversed(path[1:])]
    for u in path[:-1]:
        t.left.pop(u, None)
        t.right.pop(u, None)
        t.parent.pop(u, None)
    t.parent.pop(v, None)
    t.root = v
    # hang the chain below node 2, nearest edge first
    node = 2
    if t.children(node):
        raise AssertionError("node 2 is first in postorder and must be a leaf")
    for i, d in enumerate(dirs):
        fresh = ("new", i)
        t.attach(node, fresh, d)
        node = fresh
    return t.relabel_postorder(identity(n))
