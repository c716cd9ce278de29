"""Descent-preserving bijections onto pairs (w, D) in P_{n,k}.

``f_nk`` starts from a stack-sorting preimage of S_{n,k}; ``g_nk`` starts from a
B-tree of the labeled lollipop graph whose associahedron matches A_{n,k}.
Both land in :class:`assoclab.dyck.PairNK`, so composing one with the other's
inverse moves between the two worlds.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .dyck import DyckPath, PairNK, des_pair, dyck_to_tree, enumerate_P_nk, first_return, mark, tree_to_dyck
from .graph import BTree, enumerate_btrees, hpoly_btrees, lollipop_for_A, btree_descents
from .polynomial import IntPolynomial
from .poset import h_polynomial, make_A
from .stacksort import (
    DecreasingBinaryTree,
    Permutation,
    Shape,
    descents,
    gen_S_nk,
    inorder_tree,
    postorder_read,
    preimage_descent_polynomial,
    preimage_S_nk,
)

__all__ = [
    "Report",
    "CoreDecomposition",
    "CoreChain",
    "decompose_core",
    "f_nk",
    "f_nk_inverse",
    "decompose_chain",
    "g_nk",
    "g_nk_inverse",
    "verify_descent_preservation",
    "verify_round_trip",
    "main_theorem_check",
]


@dataclass
class Report:
    """Machine-readable outcome of a verification run."""

    claim: str
    parameters: dict
    lhs: Any
    rhs: Any
    equal: bool
    witnesses: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.equal

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, IntPolynomial):
                return v.to_json()
            if isinstance(v, dict):
                return {str(k): enc(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        out = {
            "schema": 1,
            "claim": self.claim,
            "parameters": enc(self.parameters),
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "equal": self.equal,
            "witnesses": enc(self.witnesses),
        }
        out.update({k: enc(v) for k, v in self.extra.items()})
        return out


def _check_nk(n: int, k: int) -> None:
    if n < 0 or k < 0 or n + k < 1:
        raise ValueError("need n, k >= 0 and n + k >= 1")


# ---------------------------------------------------------------------------
# shapes


def _drop_leftmost(s: Shape) -> Shape:
    if s[0] is None:
        if s[1] is not None:
            raise AssertionError("leftmost node is not a leaf")
        return None
    return (_drop_leftmost(s[0]), s[1])


def _add_leftmost(s: Shape) -> Shape:
    if s is None:
        return (None, None)
    return (_add_leftmost(s[0]), s[1])


def _segment(D: DyckPath | str) -> str:
    return "U" + str(D) + "R"


def _parse_runs(steps: str, pos: int) -> tuple[int, int]:
    """Length of the maximal run of R steps starting at ``pos``."""
    j = pos
    while j < len(steps) and steps[j] == "R":
        j += 1
    return j - pos, j


# ---------------------------------------------------------------------------
# f: stack-sorting preimages


@dataclass(frozen=True)
class CoreDecomposition:
    tree: DecreasingBinaryTree
    n: int
    k: int
    marked: tuple[int, ...]  # a_1 (highest) ... a_l = k+1
    c: tuple[int, ...]  # c_1 ... c_{l+1}, a weak composition of k
    segments: tuple[str, ...]  # D_1 ... D_l, each never touching the diagonal inside

    def to_json(self) -> dict:
        return {"marked": list(self.marked), "c": list(self.c), "segments": list(self.segments)}


def decompose_core(T: DecreasingBinaryTree | Sequence[int], n: int, k: int) -> CoreDecomposition:
    """Split the tree of a preimage of S_{n,k} into marked nodes, c(T) and segments."""
    _check_nk(n, k)
    if not isinstance(T, DecreasingBinaryTree):
        T = inorder_tree(T)
    post = postorder_read(T)
    if len(post) != n + k or post[k:] != tuple(range(k + 1, n + k + 1)) or sorted(post) != list(range(1, n + k + 1)):
        raise ValueError(f"postorder {post} is not in S_{{{n},{k}}}")
    if n == 0:
        return CoreDecomposition(T, n, k, (), (k,), ())
    parent = T.parent_map()
    a = k + 1
    marked = [a]
    v = a
    while v in parent:
        p = parent[v]
        if T.right.get(p) == v:
            marked.append(p)
        v = p
    marked.reverse()
    ell = len(marked)
    c = [len(T.subtree(T.left.get(x))) for x in marked] + [len(T.subtree(T.right.get(a)))]
    small = set()
    for x in marked:
        small.update(T.subtree(T.left.get(x)))
    small.update(T.subtree(T.right.get(a)))
    if small != set(range(1, k + 1)):
        raise AssertionError("small nodes are not exactly the marked left subtrees and right(k+1)")
    cut = set(marked[:-1])

    def core_shape(v):
        if v is None or v <= k:
            return None
        lch = T.left.get(v)
        rch = None if v in cut else T.right.get(v)
        return (core_shape(lch), core_shape(rch))

    roots = [T.root] + [T.right[x] for x in marked[:-1]]
    segments = []
    for i, r in enumerate(roots):
        s = core_shape(r)
        # marked node a_i must be the leftmost leaf of B_i
        v = r
        while T.left.get(v, 0) > k:
            v = T.left[v]
        if v != marked[i]:
            raise AssertionError(f"marked node {marked[i]} is not leftmost in its block")
        segments.append(_segment(tree_to_dyck(_drop_leftmost(s))))
    if sum(len(s) for s in segments) != 2 * n:
        raise AssertionError("segments do not account for every core node")
    return CoreDecomposition(T, n, k, tuple(marked), tuple(c), tuple(segments))


def _f_omega(dec: CoreDecomposition) -> Permutation:
    # blocks in the order their right-step runs appear in D
    T = dec.tree
    if dec.n == 0:
        return tuple(T.inorder())
    a = dec.marked[-1]
    blocks = [T.subtree(T.right.get(a))] + [T.subtree(T.left.get(x)) for x in reversed(dec.marked)]
    return tuple(x for b in blocks for x in b)


def f_nk(w: Sequence[int], n: int, k: int) -> PairNK:
    dec = decompose_core(inorder_tree(w), n, k)
    ell = len(dec.marked)
    parts = ["U" * k, "R" * dec.c[-1]] if n else ["U" * k, "R" * k]
    for i in range(ell - 1, -1, -1):
        parts.append(dec.segments[i])
        parts.append("R" * dec.c[i])
    return PairNK(_f_omega(dec), mark(DyckPath("".join(parts)), k))


def _split_f(steps: str, k: int) -> tuple[list[int], list[str]]:
    """Runs and segments after the initial U^k: run, (segment, run)*.

    Returns runs in path order (c_{l+1}, c_l, ..., c_1) and segments (D_l, ..., D_1).
    """
    runs, segs = [], []
    r, pos = _parse_runs(steps, k)
    runs.append(r)
    while pos < len(steps):
        end = first_return(steps, pos)
        segs.append(steps[pos:end])
        r, pos = _parse_runs(steps, end)
        runs.append(r)
    return runs, segs


def _require_pair(p) -> None:
    if not isinstance(p, PairNK):
        raise ValueError(f"expected a (w, D) pair, got {type(p).__name__}")
    if p.n + p.k < 1:
        raise ValueError("need n + k >= 1")


def f_nk_inverse(p: PairNK) -> Permutation:
    _require_pair(p)
    n, k = p.n, p.k
    steps = p.D.path.steps
    if n == 0:
        return tuple(p.w)
    runs, segs = _split_f(steps, k)
    ell = len(segs)
    c = runs[::-1]  # c_1 .. c_{l+1}
    D = segs[::-1]  # D_1 .. D_l
    # core shape with a sentinel marking where each a_i sits
    shape: Shape = None
    for i in range(ell - 1, -1, -1):
        inner = D[i][1:-1]
        b = _add_leftmost(dyck_to_tree(inner))
        shape = _graft_leftmost_right(b, shape) if i < ell - 1 else b
    core = DecreasingBinaryTree.from_shape(shape, range(k + 1, n + k + 1), order="postorder")
    left, right = dict(core.left), dict(core.right)
    marked = []
    v = core.root
    for _ in range(ell):
        while v in left:
            v = left[v]
        marked.append(v)
        v = right.get(v)
    if marked[-1] != k + 1:
        raise AssertionError("last marked node is not k+1")
    # omega blocks in path order: right(k+1), left(a_l), ..., left(a_1)
    w = list(p.w)
    pos = 0
    owners = [(marked[-1], "right")] + [(x, "left") for x in reversed(marked)]
    for size, (node, side) in zip(runs, owners):
        block = w[pos : pos + size]
        pos += size
        if not block:
            continue
        sub = inorder_tree(block)
        (left if side == "left" else right)[node] = sub.root
        left.update(sub.left)
        right.update(sub.right)
    T = DecreasingBinaryTree(core.root, left, right)
    return tuple(T.inorder())


def _graft_leftmost_right(s: Shape, sub: Shape) -> Shape:
    """Give the leftmost node of ``s`` the right subtree ``sub``."""
    if s[0] is None:
        return (None, sub)
    return (_graft_leftmost_right(s[0], sub), s[1])


# ---------------------------------------------------------------------------
# g: B-trees of lollipops


@dataclass(frozen=True)
class CoreChain:
    btree: BTree
    n: int
    k: int
    clique_chain: tuple[int, ...]  # w_1 (lowest) ... w_k
    a_nodes: tuple[int, ...]  # a_1 (lowest) ... a_l
    branches: tuple[frozenset, ...]  # B_0, B_1, ..., B_l as label sets
    c: tuple[int, ...]  # c_1 ... c_{l+1}

    def to_json(self) -> dict:
        return {
            "clique_chain": list(self.clique_chain),
            "a": list(self.a_nodes),
            "branches": [sorted(b) for b in self.branches],
            "c": list(self.c),
        }


def _clique(n: int, k: int) -> range:
    return range(n + 1, n + k + 1)


def decompose_chain(B: BTree, n: int, k: int) -> CoreChain:
    """Read off the clique chain, a-nodes, branches and counters, asserting the structural invariants."""
    _check_nk(n, k)
    if sorted(B.nodes()) != list(range(1, n + k + 1)):
        raise ValueError(f"B-tree nodes are not 1..{n + k}")
    clique = set(_clique(n, k))
    ch = B.children()
    desc = {v: B.descendants(v) for v in B.nodes()}
    if k == 0:
        return CoreChain(B, n, k, (), (), (frozenset(B.nodes()),), (0,))
    chain = sorted(clique, key=lambda v: len(desc[v]))
    for lo, hi in zip(chain, chain[1:]):
        if lo not in desc[hi]:
            raise AssertionError(f"clique nodes {lo} and {hi} are incomparable")
    for v in clique:
        if len(ch[v]) > 1:
            raise AssertionError(f"clique node {v} has {len(ch[v])} children")
    w1 = chain[0]
    core = [w1] + B.ancestors(w1)
    a_nodes = [v for v in core if v not in clique]
    if any(x <= y for x, y in zip(a_nodes, a_nodes[1:])):
        raise AssertionError(f"a-nodes {a_nodes} are not decreasing")
    a1 = a_nodes[0] if a_nodes else 0
    b0 = desc[w1] - {w1}
    if b0 != set(range(a1 + 1, n + 1)):
        raise AssertionError(f"descendants of w_1 are {sorted(b0)}, expected {a1 + 1}..{n}")
    branches = [frozenset(b0)]
    core_set = set(core)
    ext = a_nodes + [0]
    for i, a in enumerate(a_nodes):
        side = [c for c in ch[a] if c not in core_set]
        if len(side) > 1:
            raise AssertionError(f"a-node {a} has several secondary children")
        main = [c for c in ch[a] if c in core_set]
        if len(main) != 1 or main[0] < a:
            raise AssertionError(f"edge from {a} to its main branch is not a descent")
        sec = desc[side[0]] if side else frozenset()
        if side and side[0] > a:
            raise AssertionError(f"edge from {a} to its secondary branch is a descent")
        if sec != set(range(ext[i + 1] + 1, a)):
            raise AssertionError(f"secondary branch of {a} is {sorted(sec)}")
        branches.append(frozenset(sec))
    c = [0]
    for v in core:
        if v in clique:
            c[-1] += 1
        else:
            c.append(0)
    return CoreChain(B, n, k, tuple(chain), tuple(a_nodes), tuple(branches), tuple(c))


def _btree_shape(B: BTree, top: Optional[int], nodes: frozenset) -> Shape:
    """Binary shape of a B-tree of a path on consecutive labels (left = smaller labels)."""
    if top is None:
        return None
    ch = [c for c in B.children()[top] if c in nodes]
    lo = [c for c in ch if c < top]
    hi = [c for c in ch if c > top]
    if len(lo) > 1 or len(hi) > 1:
        raise AssertionError(f"node {top} has two children on one side")
    return (_btree_shape(B, lo[0] if lo else None, nodes), _btree_shape(B, hi[0] if hi else None, nodes))


def _branch_root(B: BTree, nodes: frozenset) -> Optional[int]:
    if not nodes:
        return None
    return next(v for v in nodes if B.parent.get(v) not in nodes)


def _branch_path(B: BTree, nodes: frozenset) -> str:
    return tree_to_dyck(_btree_shape(B, _branch_root(B, nodes), nodes)).steps


def g_nk(B: BTree, n: int, k: int) -> PairNK:
    cc = decompose_chain(B, n, k)
    parts = ["U" * k, _branch_path(B, cc.branches[0]), "R" * cc.c[0]]
    for i in range(1, len(cc.a_nodes) + 1):
        parts.append(_segment(_branch_path(B, cc.branches[i])))
        parts.append("R" * cc.c[i])
    w = tuple(v - n for v in cc.clique_chain)
    return PairNK(w, mark(DyckPath("".join(parts)), k))


def _shape_parents(shape: Shape, labels: Sequence[int], parent: dict, above: Optional[int]) -> Optional[int]:
    """Label ``shape`` in inorder, record B-tree parents, hang its root under ``above``."""
    it = iter(labels)

    def walk(s) -> Optional[int]:
        if s is None:
            return None
        # the label is only known after the left subtree has consumed its share
        lroot = walk(s[0])
        me = next(it)
        rroot = walk(s[1])
        for c in (lroot, rroot):
            if c is not None:
                parent[c] = me
        return me

    root = walk(shape)
    if root is not None and above is not None:
        parent[root] = above
    return root


def g_nk_inverse(p: PairNK) -> BTree:
    _require_pair(p)
    n, k = p.n, p.k
    steps = p.D.path.steps
    parent: dict[int, int] = {}
    if k == 0:
        root = _shape_parents(dyck_to_tree(steps), range(1, n + 1), parent, None)
        return BTree(root, parent)
    # D_0: after U^k, everything before the first step down to level k-1
    h = k
    pos = k
    while h >= k:
        h += 1 if steps[pos] == "U" else -1
        pos += 1
    d0 = steps[k : pos - 1]
    c1, pos = _parse_runs(steps, pos - 1)
    runs, segs = [c1], []
    while pos < len(steps):
        end = first_return(steps, pos)
        segs.append(steps[pos:end])
        r, pos = _parse_runs(steps, end)
        runs.append(r)
    a = [n - len(d0) // 2]
    for s in segs:
        a.append(a[-1] - len(s) // 2)
    if a[-1] != 0:
        raise ValueError("segment lengths do not fit the path labels")
    a_nodes = a[:-1]
    # core chain bottom-up
    wq = [n + x for x in p.w]
    chain: list[int] = []
    wi = iter(wq)
    for i, r in enumerate(runs):
        chain.extend(next(wi) for _ in range(r))
        if i < len(a_nodes):
            chain.append(a_nodes[i])
    for lo, hi in zip(chain, chain[1:]):
        parent[lo] = hi
    root = chain[-1]
    _shape_parents(dyck_to_tree(d0), range(a[0] + 1, n + 1), parent, wq[0])
    for i, s in enumerate(segs):
        _shape_parents(dyck_to_tree(s[1:-1]), range(a[i + 1] + 1, a[i]), parent, a[i])
    return BTree(root, parent)


# ---------------------------------------------------------------------------
# verification


def _source_domain(which: str, n: int, k: int) -> list:
    if which == "f":
        return preimage_S_nk(n, k)
    if which == "g":
        return enumerate_btrees(lollipop_for_A(n, k))
    raise ValueError(f"unknown map {which!r}")


def _apply(which: str, x, n: int, k: int) -> PairNK:
    return f_nk(x, n, k) if which == "f" else g_nk(x, n, k)


def _source_des(which: str, x) -> int:
    return descents(x) if which == "f" else btree_descents(x)


def _dist(values) -> list[int]:
    cnt = Counter(values)
    return [cnt.get(i, 0) for i in range(max(cnt, default=-1) + 1)]


def _witness(which: str, x) -> Any:
    return list(x) if which == "f" else x.to_json()


def verify_descent_preservation(which: str, n: int, k: int, max_witnesses: int = 5) -> Report:
    """des(source) == des_pair(image) for every element of the domain."""
    _check_nk(n, k)
    dom = _source_domain(which, n, k)
    src, img, bad = [], [], []
    for x in dom:
        p = _apply(which, x, n, k)
        a, b = _source_des(which, x), des_pair(p)
        src.append(a)
        img.append(b)
        if a != b and len(bad) < max_witnesses:
            bad.append({"source": _witness(which, x), "image": p.to_json(), "des_source": a, "des_image": b})
    ok = not bad and src == img
    return Report(f"{which}-descents", {"n": n, "k": k}, _dist(src), _dist(img), ok, bad, {"domain_size": len(dom)})


def verify_round_trip(which: str, n: int, k: int, max_witnesses: int = 5) -> Report:
    """The map is injective into P_{n,k}, hits all of it, inverts exactly, and keeps descents."""
    _check_nk(n, k)
    dom = _source_domain(which, n, k)
    inv = f_nk_inverse if which == "f" else g_nk_inverse
    seen: dict = {}
    bad: list = []
    des_ok = True
    for x in dom:
        p = _apply(which, x, n, k)
        back = inv(p)
        if back != (tuple(x) if which == "f" else x) and len(bad) < max_witnesses:
            bad.append({"kind": "inverse", "source": _witness(which, x), "image": p.to_json()})
        if p.key() in seen and len(bad) < max_witnesses:
            bad.append({"kind": "collision", "image": p.to_json()})
        seen[p.key()] = x
        if _source_des(which, x) != des_pair(p):
            des_ok = False
            if len(bad) < max_witnesses:
                bad.append({"kind": "descent", "source": _witness(which, x), "image": p.to_json()})
    target = {q.key() for q in enumerate_P_nk(n, k)}
    missing = target - set(seen)
    if missing and len(bad) < max_witnesses:
        w, d = sorted(missing)[0]
        bad.append({"kind": "missed", "image": {"w": list(w), "path": d}})
    ok = not bad and des_ok and set(seen) == target
    return Report(f"{which}-bijection", {"n": n, "k": k}, len(dom), len(target), ok, bad)


def main_theorem_check(n: int, k: int) -> Report:
    """h-polynomial of A_{n,k} three ways: poset tubings, B-tree descents, stack-sorting descents."""
    _check_nk(n, k)
    poset_h = h_polynomial(make_A(n, k))
    btree_h = hpoly_btrees(lollipop_for_A(n, k))
    stack_h = IntPolynomial()
    for t in gen_S_nk(n, k):
        stack_h = stack_h + preimage_descent_polynomial(t)
    equal = poset_h == btree_h == stack_h
    witnesses = [] if equal else [{"poset": poset_h.to_json(), "btree": btree_h.to_json(), "stacksort": stack_h.to_json()}]
    return Report(
        "main-theorem",
        {"n": n, "k": k},
        poset_h,
        stack_h,
        equal,
        witnesses,
        {"btree": btree_h},
    )
