"""Dyck paths, Catalan convolutions and the marked-step statistics.

Paths are strings over ``"U"`` (up) and ``"R"`` (right).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Sequence

from .stacksort import Permutation, Shape, descents

__all__ = [
    "DyckPath",
    "MarkedDyck",
    "PairNK",
    "catalan",
    "catalan_conv",
    "catalan_conv_by_sum",
    "tree_to_dyck",
    "dyck_to_tree",
    "valleys",
    "heights",
    "L",
    "mark",
    "des_c",
    "des_pair",
    "enumerate_dyck",
    "enumerate_D_nk",
    "enumerate_P_nk",
    "first_return",
]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def catalan_conv(n: int, k: int) -> int:
    """(k+1)/(n+k+1) * binom(2n+k, n)."""
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    return (k + 1) * math.comb(2 * n + k, n) // (n + k + 1)


def catalan_conv_by_sum(n: int, k: int) -> int:
    """Sum of C_{a_1} ... C_{a_{k+1}} over weak compositions of n into k+1 parts."""

    @lru_cache(maxsize=None)
    def conv(m: int, parts: int) -> int:
        if parts == 1:
            return catalan(m)
        return sum(catalan(a) * conv(m - a, parts - 1) for a in range(m + 1))

    return conv(n, k + 1)


# ---------------------------------------------------------------------------


def _check_path(steps: str) -> str:
    h = 0
    for s in steps:
        if s == "U":
            h += 1
        elif s == "R":
            h -= 1
            if h < 0:
                raise ValueError(f"{steps!r} goes below the diagonal")
        else:
            raise ValueError(f"bad step {s!r} in {steps!r}")
    if h != 0:
        raise ValueError(f"{steps!r} does not end on the diagonal")
    return steps


@dataclass(frozen=True)
class DyckPath:
    steps: str
    heights: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        steps = "".join(self.steps)
        object.__setattr__(self, "steps", _check_path(steps))
        object.__setattr__(self, "heights", heights(steps))

    @property
    def semilength(self) -> int:
        return len(self.steps) // 2

    def __str__(self) -> str:
        return self.steps

    def __len__(self) -> int:
        return len(self.steps)


def _steps(D) -> str:
    return D.steps if isinstance(D, DyckPath) else D


def heights(D) -> tuple[int, ...]:
    """Prefix heights; ``heights(D)[i]`` is #U - #R among the first i steps."""
    out = [0]
    for s in _steps(D):
        out.append(out[-1] + (1 if s == "U" else -1))
    return tuple(out)


def L(D, i: int) -> int:
    if isinstance(D, DyckPath):
        return D.heights[i]
    return heights(D)[i]


def valleys(D) -> int:
    s = _steps(D)
    return sum(1 for a, b in zip(s, s[1:]) if a == "R" and b == "U")


def first_return(steps: str, start: int) -> int:
    """Smallest j > start with the same height as position ``start``."""
    h = 0
    for j in range(start, len(steps)):
        h += 1 if steps[j] == "U" else -1
        if h == 0:
            return j + 1
        if h < 0:
            break
    raise ValueError(f"no return to height after position {start} in {steps!r}")


def tree_to_dyck(shape: Shape) -> DyckPath:
    """Preorder of the full completion: internal node -> U, leaf -> R, last leaf dropped."""
    out: list[str] = []

    def walk(s):
        if s is None:
            out.append("R")
            return
        out.append("U")
        walk(s[0])
        walk(s[1])

    walk(shape)
    return DyckPath("".join(out[:-1]))


def dyck_to_tree(D) -> Shape:
    steps = _steps(D) + "R"
    pos = 0

    def parse():
        nonlocal pos
        c = steps[pos]
        pos += 1
        if c == "R":
            return None
        left = parse()
        right = parse()
        return (left, right)

    shape = parse()
    if pos != len(steps):
        raise ValueError(f"{D} is not a Dyck path")
    return shape


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkedDyck:
    """A path in D_{n,k} with its marked right steps and composition c(D)."""

    path: DyckPath
    k: int
    marked_positions: tuple[int, ...]
    composition: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.path.semilength - self.k

    def to_json(self) -> dict:
        return {"path": self.path.steps, "k": self.k, "c": list(self.composition)}


def mark(D, k: int) -> MarkedDyck:
    """Mark the first ``k`` up steps and their matching right steps."""
    D = D if isinstance(D, DyckPath) else DyckPath(D)
    s = D.steps
    if k < 0 or s[:k] != "U" * k:
        raise ValueError(f"{s!r} does not start with {k} up steps")
    stack: list[int] = []
    marked: list[int] = []
    for i, c in enumerate(s):
        if c == "U":
            stack.append(i)
        else:
            if stack.pop() < k:
                marked.append(i)
    comp: list[int] = []
    prev = None
    for i in marked:
        if prev is not None and i == prev + 1:
            comp[-1] += 1
        else:
            comp.append(1)
        prev = i
    return MarkedDyck(D, k, tuple(marked), tuple(comp))


def des_c(w: Sequence[int], c: Sequence[int]) -> int:
    """Descents of ``w`` between two positions in the same block of ``c``.

    Zero parts are allowed (weak compositions); they just contribute empty blocks.
    """
    if sum(c) != len(w):
        raise ValueError(f"composition {tuple(c)} does not sum to {len(w)}")
    total, start = 0, 0
    for part in c:
        total += descents(w[start : start + part])
        start += part
    return total


@dataclass(frozen=True)
class PairNK:
    w: Permutation
    D: MarkedDyck

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        if sorted(self.w) != list(range(1, self.D.k + 1)):
            raise ValueError(f"{self.w} is not in S_{self.D.k}")

    @property
    def n(self) -> int:
        return self.D.n

    @property
    def k(self) -> int:
        return self.D.k

    @classmethod
    def make(cls, w: Sequence[int], path, k: int | None = None) -> "PairNK":
        k = len(w) if k is None else k
        return cls(tuple(w), mark(path, k))

    def key(self) -> tuple:
        return (self.w, self.D.path.steps)

    def to_json(self) -> dict:
        return {"w": list(self.w), **self.D.to_json()}


def des_pair(p: PairNK) -> int:
    return des_c(p.w, p.D.composition) + valleys(p.D.path)


# ---------------------------------------------------------------------------


def enumerate_dyck(n: int, prefix: str = "") -> Iterator[str]:
    """All Dyck paths of semilength ``n`` extending ``prefix`` ('U' < 'R' order)."""
    up = prefix.count("U")
    down = len(prefix) - up

    def rec(cur: list[str], u: int, r: int):
        if u == n and r == n:
            yield "".join(cur)
            return
        if u < n:
            cur.append("U")
            yield from rec(cur, u + 1, r)
            cur.pop()
        if r < u:
            cur.append("R")
            yield from rec(cur, u, r + 1)
            cur.pop()

    yield from rec(list(prefix), up, down)


def enumerate_D_nk(n: int, k: int) -> list[MarkedDyck]:
    if n < 0 or k < 0 or n + k < 1:
        raise ValueError("need n, k >= 0 and n + k >= 1")
    return [mark(DyckPath(s), k) for s in enumerate_dyck(n + k, "U" * k)]


def enumerate_P_nk(n: int, k: int) -> list[PairNK]:
    paths = enumerate_D_nk(n, k)
    return [PairNK(w, D) for w in permutations(range(1, k + 1)) for D in paths]
