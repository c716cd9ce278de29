"""Recurrences for h-polynomials under replacing an autonomous chain by antichains.

Both identities are open conjectures; a failing instance is a finding, so
the checkers report rather than raise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Optional

from .polynomial import IntPolynomial, gamma_from_h, typeB_narayana
from .poset import (
    Poset,
    PosetError,
    antichain,
    chain,
    crown,
    from_mask,
    h_polynomial,
    induced_subposet,
    is_autonomous,
    is_isomorphic,
    ordinal_sum,
    replace_autonomous,
    to_mask,
)

__all__ = [
    "ConjectureResult",
    "cycle_types",
    "check_c2",
    "check_chain_n",
    "corpus",
    "CorpusEntry",
]


@dataclass
class ConjectureResult:
    which: str
    holds: bool
    lhs: IntPolynomial
    rhs: IntPolynomial
    h: dict = field(default_factory=dict)  # name -> h-polynomial of P, P_1, ...
    gamma_holds: Optional[bool] = None
    gamma: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        ok = self.holds and self.gamma_holds is not False
        return "supported" if ok else "counterexample"

    def __bool__(self) -> bool:
        return self.status == "supported"

    def to_json(self) -> dict:
        out = {
            "conjecture": self.which,
            "conjecture_status": self.status,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "equal": self.holds,
            "h": {k: v.to_json() for k, v in self.h.items()},
        }
        if self.gamma_holds is not None:
            out["gamma_equal"] = self.gamma_holds
            out["gamma"] = {k: v.to_json() for k, v in self.gamma.items()}
        return out


def _require_chain(P: Poset, S, size: Optional[int]) -> int:
    mask = to_mask(S)
    if not is_autonomous(P, mask):
        raise PosetError(f"{from_mask(mask)} is not autonomous")
    sub = induced_subposet(P, mask)
    if size is not None and sub.n != size:
        raise PosetError(f"S has {sub.n} elements, expected {size}")
    if not is_isomorphic(sub, chain(sub.n)):
        raise PosetError(f"{from_mask(mask)} is not a chain")
    return mask


def _gamma(h: IntPolynomial, dim: int) -> IntPolynomial:
    return gamma_from_h(h, dim)


def check_c2(P: Poset, S) -> ConjectureResult:
    """h_{P2} + (1+x) h_{P1} == 2 h_P, with P1/P2 replacing the 2-chain S by a point / 2-antichain.

    Also checks the gamma form gamma_{P2} + gamma_{P1} == 2 gamma_P.
    """
    mask = _require_chain(P, S, 2)
    P1 = replace_autonomous(P, mask, antichain(1))
    P2 = replace_autonomous(P, mask, antichain(2))
    h, h1, h2 = h_polynomial(P), h_polynomial(P1), h_polynomial(P2)
    lhs = h2 + IntPolynomial([1, 1]) * h1
    rhs = h.scale(2)
    d = P.n - 2
    g, g1, g2 = _gamma(h, d), _gamma(h1, d - 1), _gamma(h2, d)
    return ConjectureResult(
        "c2",
        lhs == rhs,
        lhs,
        rhs,
        {"P": h, "P1": h1, "P2": h2},
        g2 + g1 == g.scale(2),
        {"P": g, "P1": g1, "P2": g2},
    )


def cycle_types(n: int) -> Iterator[tuple[int, ...]]:
    """Vectors (c_1..c_n) with sum i*c_i = n."""

    def rec(i: int, left: int, acc: list[int]):
        if i > n:
            if left == 0:
                yield tuple(acc)
            return
        for c in range(left // i + 1):
            acc.append(c)
            yield from rec(i + 1, left - i * c, acc)
            acc.pop()

    yield from rec(1, n, [])


def _class_size(c: tuple[int, ...]) -> int:
    n = sum((i + 1) * ci for i, ci in enumerate(c))
    den = 1
    for i, ci in enumerate(c, start=1):
        den *= i**ci * math.factorial(ci)
    return math.factorial(n) // den


def check_chain_n(P: Poset, S) -> ConjectureResult:
    """Sum over cycle types c of n of |class(c)| * prod B_i^{c_i} * h_{P_{l(c)}} == n! h_P.

    P_i replaces the autonomous n-chain S by an antichain of size i and l(c) = sum c_i.
    """
    mask = _require_chain(P, S, None)
    n = bin(mask).count("1")
    hs = {"P": h_polynomial(P)}
    for i in range(1, n + 1):
        hs[f"P{i}"] = h_polynomial(replace_autonomous(P, mask, antichain(i)))
    lhs = IntPolynomial()
    for c in cycle_types(n):
        term = IntPolynomial([_class_size(c)])
        for i, ci in enumerate(c, start=1):
            term = term * typeB_narayana(i) ** ci
        lhs = lhs + term * hs[f"P{sum(c)}"]
    rhs = hs["P"].scale(math.factorial(n))
    return ConjectureResult(f"chain-{n}", lhs == rhs, lhs, rhs, hs)


# ---------------------------------------------------------------------------
# builtin corpus


def _pieces() -> dict[str, Optional[Poset]]:
    return {
        "empty": None,
        "C1": chain(1),
        "C2": chain(2),
        "C3": chain(3),
        "A2": antichain(2),
        "A3": antichain(3),
        "V": ordinal_sum(antichain(2), chain(1)),
        "Lambda": ordinal_sum(chain(1), antichain(2)),
        "crown": crown(),
    }


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    poset: Poset
    chain_mask: int  # the middle C_m
    m: int

    def bottom_pair(self) -> int:
        els = from_mask(self.chain_mask)
        return to_mask(els[:2])


def corpus(max_size: int = 8) -> list[CorpusEntry]:
    """Q + C_m + R (ordinal sums) with Q or R nonempty, m >= 2 and size <= max_size."""
    pieces = _pieces()
    out = []
    for (qn, Q), (rn, R) in product(pieces.items(), repeat=2):
        if Q is None and R is None:
            continue
        base = (Q.n if Q else 0) + (R.n if R else 0)
        for m in range(2, max_size - base + 1):
            P = chain(m)
            off = 0
            if Q is not None:
                P = ordinal_sum(Q, P)
                off = Q.n
            if R is not None:
                P = ordinal_sum(P, R)
            out.append(CorpusEntry(f"{qn}+C{m}+{rn}", P, to_mask(range(off, off + m)), m))
    return out
