"""Exact polynomial arithmetic, face-vector transforms and real-root tools.

Polynomials are stored constant term first.  Coefficients are Python ints or
:class:`fractions.Fraction`; nothing in here touches floating point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]

__all__ = [
    "IntPolynomial",
    "FaceVector",
    "NonPolytopalWarning",
    "f_from_tubings",
    "h_from_f",
    "f_from_h",
    "gamma_from_h",
    "expand_gamma",
    "is_symmetric",
    "narayana",
    "narayana_closed_form",
    "typeB_narayana",
    "eulerian",
    "sturm_sequence",
    "count_real_roots",
    "square_free_decomposition",
    "is_real_rooted",
    "isolate_real_roots",
    "real_roots_with_multiplicity",
    "interleaves",
    "H_from_recurrence",
    "check_H_recurrence",
]


def _normalize(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class IntPolynomial:
    """Immutable univariate polynomial with exact coefficients.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_normalize(c) for c in coeffs]
        for c in cs:
            if not isinstance(c, (int, Fraction)) or isinstance(c, bool):
                raise TypeError(f"coefficients must be exact, got {c!r}")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "IntPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "IntPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Number:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def __getitem__(self, i: int) -> Number:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == IntPolynomial(other).coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == IntPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}x" if c != 1 else "x")
            else:
                terms.append(f"{c}x^{i}" if c != 1 else f"x^{i}")
        return " + ".join(terms)

    @staticmethod
    def _coerce(other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return IntPolynomial([other])
        return IntPolynomial(other)

    def __add__(self, other) -> "IntPolynomial":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "IntPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        if e < 0:
            raise ValueError("negative exponent")
        out = IntPolynomial([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, a: Number) -> "IntPolynomial":
        return IntPolynomial(a * c for c in self.coeffs)

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by ``x**k``."""
        return IntPolynomial([0] * k + list(self.coeffs)) if self.coeffs else self

    def __call__(self, x: Number) -> Number:
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return _normalize(acc) if isinstance(acc, Fraction) else acc

    def shift_eval(self, a: Number) -> "IntPolynomial":
        """Return the expansion of ``p(t + a)``."""
        # Horner in the ring: acc <- acc * (t + a) + c
        acc = IntPolynomial()
        lin = IntPolynomial([a, 1])
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def reversed_coeffs(self, degree: int | None = None) -> "IntPolynomial":
        d = self.degree if degree is None else degree
        return IntPolynomial(self[d - i] for i in range(d + 1))

    def __divmod__(self, other) -> tuple["IntPolynomial", "IntPolynomial"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(other.leading)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return IntPolynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        for i in range(dq, -1, -1):
            q = rem[i + other.degree] / lead
            quot[i] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= q * b
        return IntPolynomial(quot), IntPolynomial(rem[: other.degree] if other.degree > 0 else [])

    def __floordiv__(self, other) -> "IntPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "IntPolynomial":
        return divmod(self, other)[1]

    def monic(self) -> "IntPolynomial":
        if self.is_zero():
            return self
        return self.scale(Fraction(1) / Fraction(self.leading))

    def primitive(self) -> "IntPolynomial":
        """Integer polynomial with coprime coefficients and positive leading term."""
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        sign = 1 if ints[-1] > 0 else -1
        return IntPolynomial(sign * c // g for c in ints)

    def to_json(self) -> list:
        if not self.is_integral():
            return [str(c) for c in self.coeffs]
        return list(self.coeffs)


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Monic gcd over the rationals (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# ---------------------------------------------------------------------------
# face vectors


class NonPolytopalWarning(UserWarning):
    """An h-vector came out with a negative entry."""


@dataclass(frozen=True)
class FaceVector:
    """``counts[i]`` is the number of i-dimensional faces."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not self.counts:
            raise ValueError("empty face vector")
        if self.counts[-1] != 1:
            raise ValueError(f"top face count must be 1, got {self.counts[-1]}")
        if any(c <= 0 for c in self.counts):
            raise ValueError(f"face counts must be positive: {self.counts}")

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def polynomial(self) -> IntPolynomial:
        return IntPolynomial(self.counts)


def f_from_tubings(tubing_sizes: Iterable[int], dim: int) -> FaceVector:
    """Face vector from the multiset of tubing cardinalities.

    A tubing with ``t`` tubes is a face of dimension ``dim - t``.
    """
    counts = [0] * (dim + 1)
    for t in tubing_sizes:
        if t < 0 or t > dim:
            raise ValueError(f"tubing with {t} tubes exceeds dimension {dim}")
        counts[dim - t] += 1
    return FaceVector(tuple(counts))


def h_from_f(f: FaceVector | Sequence[int]) -> IntPolynomial:
    """h(t) = f(t - 1).  Warns with :class:`NonPolytopalWarning` on negative entries."""
    fv = f if isinstance(f, FaceVector) else FaceVector(tuple(f))
    h = fv.polynomial().shift_eval(-1)
    if any(c < 0 for c in h.coeffs):
        warnings.warn(f"h-vector {list(h.coeffs)} has negative entries", NonPolytopalWarning, stacklevel=2)
    return h


def f_from_h(h: IntPolynomial) -> FaceVector:
    return FaceVector(h.shift_eval(1).coeffs)


def is_symmetric(h: IntPolynomial, dim: int) -> bool:
    return all(h[i] == h[dim - i] for i in range(dim + 1)) and h.degree <= dim


def gamma_from_h(h: IntPolynomial, dim: int) -> IntPolynomial:
    """Expand a symmetric h in the basis ``t^i (1+t)^(dim-2i)``.

    Raises ValueError when h violates Dehn-Sommerville symmetry.
    """
    h = IntPolynomial(h)
    if not is_symmetric(h, dim):
        raise ValueError(f"h = {list(h.coeffs)} is not symmetric for dim {dim} (Dehn-Sommerville fails)")
    rest = h
    gamma = []
    one_plus_t = IntPolynomial([1, 1])
    for i in range(dim // 2 + 1):
        g = rest[i]
        gamma.append(g)
        if g:
            rest = rest - (one_plus_t ** (dim - 2 * i)).shift(i).scale(g)
    if not rest.is_zero():
        raise ArithmeticError(f"gamma peeling left remainder {rest}")
    return IntPolynomial(gamma)


def expand_gamma(gamma: IntPolynomial, dim: int) -> IntPolynomial:
    one_plus_t = IntPolynomial([1, 1])
    out = IntPolynomial()
    for i, g in enumerate(gamma.coeffs):
        out = out + (one_plus_t ** (dim - 2 * i)).shift(i).scale(g)
    return out


# ---------------------------------------------------------------------------
# polynomial families


@lru_cache(maxsize=None)
def narayana(n: int) -> IntPolynomial:
    """Descent generating polynomial of the stack-sorting preimage of ``12...n``."""
    if n < 1:
        raise ValueError("narayana(n) needs n >= 1")
    from .stacksort import identity, preimage_descent_polynomial

    return preimage_descent_polynomial(identity(n))


def narayana_closed_form(n: int) -> IntPolynomial:
    return IntPolynomial(math.comb(n, i) * math.comb(n, i + 1) // n for i in range(n))


def typeB_narayana(k: int) -> IntPolynomial:
    if k < 1:
        raise ValueError("typeB_narayana(k) needs k >= 1")
    return IntPolynomial(math.comb(k - 1, i) ** 2 for i in range(k))


def eulerian(k: int) -> IntPolynomial:
    """Descent polynomial of all of S_k, by brute force over permutations."""
    from itertools import permutations

    from .stacksort import descents

    counts: dict[int, int] = {}
    for w in permutations(range(1, k + 1)):
        d = descents(w)
        counts[d] = counts.get(d, 0) + 1
    return IntPolynomial(counts.get(i, 0) for i in range(max(counts) + 1))


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(p: IntPolynomial) -> list[IntPolynomial]:
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Iterable[int]) -> int:
    v, prev = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _var_at(seq: list[IntPolynomial], x) -> int:
    if x == math.inf:
        return _variations(_sign(q.leading) for q in seq)
    if x == -math.inf:
        return _variations(_sign(q.leading) * (-1) ** q.degree for q in seq)
    return _variations(_sign(q(x)) for q in seq)


def _square_free_part(p: IntPolynomial) -> IntPolynomial:
    # Sturm counts at a finite endpoint are only valid when p is square-free there
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    return p // g if g.degree > 0 else p


def count_real_roots(p: IntPolynomial, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``."""
    p = IntPolynomial(p)
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    seq = sturm_sequence(_square_free_part(p))
    return _var_at(seq, lo) - _var_at(seq, hi)


def square_free_decomposition(p: IntPolynomial) -> list[IntPolynomial]:
    """Yun's algorithm: returns ``[a1, a2, ...]`` with p = c * prod(a_i ** i)."""
    p = IntPolynomial(p)
    if p.is_zero():
        raise ValueError("square-free decomposition of zero")
    if p.degree == 0:
        return []
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p // a0
    c = dp // a0
    d = c - b.derivative()
    out = []
    while b.degree > 0:
        a = poly_gcd(b, d)
        out.append(a.primitive())
        b = b // a
        c = d // a
        d = c - b.derivative()
    return out


def is_real_rooted(p: IntPolynomial) -> bool:
    """True when every complex root (with multiplicity) is real."""
    p = IntPolynomial(p)
    if p.is_zero():
        raise ValueError("real-rootedness of the zero polynomial is undefined")
    total = 0
    for mult, a in enumerate(square_free_decomposition(p), start=1):
        if a.degree > 0:
            total += mult * count_real_roots(a)
    return total == p.degree


def _root_bound(p: IntPolynomial) -> Fraction:
    lead = abs(Fraction(p.leading))
    return 1 + max((abs(Fraction(c)) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals ``(lo, hi]``, one per distinct real root, in order."""
    p = _square_free_part(IntPolynomial(p))
    seq = sturm_sequence(p)
    bound = _root_bound(p)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _var_at(seq, lo) - _var_at(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


def _roots_in(p: IntPolynomial, lo, hi) -> int:
    return count_real_roots(p, lo, hi)


def real_roots_with_multiplicity(polys: Sequence[IntPolynomial]) -> tuple[list[tuple[Fraction, Fraction]], list[list[int]]]:
    """Common root isolation for several polynomials.

    Returns the isolating intervals of the distinct real roots of the product
    and, for each input polynomial, the multiplicity of each of those roots.
    """
    prod = IntPolynomial([1])
    for q in polys:
        prod = prod * q
    sf = IntPolynomial([1])
    for a in square_free_decomposition(prod):
        sf = sf * a
    intervals = isolate_real_roots(sf) if sf.degree > 0 else []
    mults = []
    for q in polys:
        parts = square_free_decomposition(q)
        row = []
        for lo, hi in intervals:
            m = 0
            for mult, a in enumerate(parts, start=1):
                if a.degree > 0 and _roots_in(a, lo, hi):
                    m = mult
                    break
            row.append(m)
        mults.append(row)
    return intervals, mults


def interleaves(f: IntPolynomial, g: IntPolynomial) -> bool:
    """Decide ``f << g``: f interlaces g (deg g = deg f + 1) or alternates left of it.

    Root comparisons are exact; coincident roots satisfy the non-strict
    inequalities.
    """
    f, g = IntPolynomial(f), IntPolynomial(g)
    if f.is_zero() or g.is_zero():
        raise ValueError("interleaving needs nonzero polynomials")
    if f.leading <= 0 or g.leading <= 0:
        raise ValueError("interleaving needs positive leading coefficients")
    gap = g.degree - f.degree
    if gap not in (0, 1):
        raise ValueError(f"degree gap {gap} not in {{0, 1}}")
    for name, q in (("f", f), ("g", g)):
        if not is_real_rooted(q):
            raise ValueError(f"{name} = {q} is not real-rooted")
    _, (mf, mg) = real_roots_with_multiplicity([f, g])
    # expand to ordered root lists of positions in the merged distinct-root order
    fr = [i for i, m in enumerate(mf) for _ in range(m)]
    gr = [i for i, m in enumerate(mg) for _ in range(m)]
    if gap == 1:
        # g1 <= f1 <= g2 <= ... <= f_{d-1} <= g_d
        chain = [x for pair in zip(gr, fr) for x in pair] + gr[len(fr):]
    else:
        # f1 <= g1 <= f2 <= ... <= f_d <= g_d
        chain = [x for pair in zip(fr, gr) for x in pair]
    return all(a <= b for a, b in zip(chain, chain[1:]))


def H_from_recurrence(n: int) -> IntPolynomial:
    """2 N_{n+2} - (1 + x) N_{n+1}."""
    return narayana(n + 2).scale(2) - IntPolynomial([1, 1]) * narayana(n + 1)


def check_H_recurrence(n: int, H_n: IntPolynomial) -> bool:
    return IntPolynomial(H_n) == H_from_recurrence(n)
