"""Markov triples, mutations, tree enumeration, companions, branch sequences.

A Markov triple is an ordered triple of positive integers with
a^2 + b^2 + c^2 = 3abc.  Mutation replaces one entry k by 3*(product of the
other two) - k.  Every Markov number p comes with a pair of companion numbers
{q, p-q} read off from any triple containing p, and with a bi-infinite branch
sequence (m_i) obtained by repeatedly mutating the co-entries while fixing p.
The quadratic irrational sigma_p = (3 + sqrt(9 - 4/p^2))/2 bounds the visible
staircase range and is handled exactly through its minimal polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Optional

from .exact_core import DomainError, Rational

__all__ = [
    "MarkovTriple",
    "TreeEntry",
    "CompanionPair",
    "BranchSequence",
    "Sigma",
    "NotFound",
    "is_markov_triple",
    "validate_triple",
    "mutate",
    "enumerate_tree",
    "tree_to_json",
    "is_markov_number",
    "companions",
    "is_companion",
    "canonical_triple",
    "branch_sequence",
    "sigma_p",
]

MarkovTriple = tuple[int, int, int]

MAX_TREE_DEPTH = 30


class NotFound(DomainError):
    """The bounded tree search was exhausted without encountering the number."""


def is_markov_triple(a: int, b: int, c: int) -> bool:
    return a >= 1 and b >= 1 and c >= 1 and a * a + b * b + c * c == 3 * a * b * c


def validate_triple(t: MarkovTriple) -> MarkovTriple:
    """Check the Markov equation plus the classical side conditions."""
    if len(t) != 3 or not is_markov_triple(*t):
        raise DomainError(f"not a Markov triple: {t}")
    a, b, c = t
    if gcd(a, b) != 1 or gcd(b, c) != 1 or gcd(a, c) != 1:
        raise DomainError(f"Markov triple with non-coprime entries: {t}")
    if a % 3 == 0 or b % 3 == 0 or c % 3 == 0:
        raise DomainError(f"Markov entry divisible by 3: {t}")
    return t


def mutate(t: MarkovTriple, index: int) -> MarkovTriple:
    """Replace entry `index` (1-based) by 3*(product of the others) - entry."""
    if index not in (1, 2, 3):
        raise DomainError(f"mutation index must be 1, 2 or 3: {index}")
    out = list(t)
    others = [x for k, x in enumerate(t, start=1) if k != index]
    out[index - 1] = 3 * others[0] * others[1] - t[index - 1]
    return tuple(out)


@dataclass(frozen=True)
class TreeEntry:
    triple: MarkovTriple  # canonical sorted representative
    parent: Optional[int]  # index into the enumeration list
    mutated: Optional[int]  # which position of the parent was mutated


def enumerate_tree(depth: int, max_depth: int = MAX_TREE_DEPTH) -> list[TreeEntry]:
    """Breadth-first mutation tree from (1,1,1) down to the given depth.

    Triples are deduplicated as unordered multisets, which suppresses the
    repeated children at the first two levels; each node is reported once as
    its sorted representative.
    """
    if depth < 0 or depth > max_depth:
        raise DomainError(f"depth {depth} outside [0, {max_depth}]")
    root = (1, 1, 1)
    entries = [TreeEntry(root, None, None)]
    seen = {root}
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for parent_idx in frontier:
            t = entries[parent_idx].triple
            for k in (1, 2, 3):
                child = tuple(sorted(mutate(t, k)))
                if child in seen:
                    continue
                seen.add(child)
                entries.append(TreeEntry(child, parent_idx, k))
                nxt.append(len(entries) - 1)
        frontier = nxt
    return entries


def tree_to_json(entries: list[TreeEntry]) -> list[dict]:
    return [
        {"triple": list(e.triple), "parent": e.parent, "mutated": e.mutated}
        for e in entries
    ]


def _search_triple_with(p: int, max_depth: Optional[int]) -> Optional[MarkovTriple]:
    """A triple containing p, found by BFS over triples with max entry < p.

    The parent chain of any triple containing p only passes through triples
    whose maximum is smaller than p, so the pruned search is exhaustive; with
    max_depth=None it terminates because there are finitely many such triples.
    """
    root = (1, 1, 1)
    if p in root:
        return root
    seen = {root}
    frontier = [root]
    level = 0
    while frontier and (max_depth is None or level < max_depth):
        level += 1
        nxt = []
        for t in frontier:
            for k in (1, 2, 3):
                child = tuple(sorted(mutate(t, k)))
                if child in seen:
                    continue
                seen.add(child)
                if p in child:
                    return child
                if child[2] < p:
                    nxt.append(child)
        frontier = nxt
    return None


def is_markov_number(p: int) -> bool:
    """Exact membership test by exhaustive pruned search (no depth cutoff)."""
    if p < 1:
        return False
    return _search_triple_with(p, None) is not None


@dataclass(frozen=True)
class CompanionPair:
    p: int
    q_plus: int
    q_minus: int

    @property
    def pair(self) -> frozenset:
        return frozenset((self.q_plus, self.q_minus))

    def __contains__(self, q: int) -> bool:
        return q == self.q_plus or q == self.q_minus


def _q_from_triple(p: int, u: int, v: int) -> int:
    """3*u*v^{-1} mod p, normalized to [1, p]."""
    if p <= 2:
        return 1
    r = (3 * u * pow(v, -1, p)) % p
    return r if r != 0 else p


def companions(p: int, search_depth: int = MAX_TREE_DEPTH) -> CompanionPair:
    """The companion pair {q, p-q} of a Markov number, from any containing triple."""
    t = _search_triple_with(p, search_depth)
    if t is None:
        raise NotFound(
            f"{p} not encountered within {search_depth} tree levels "
            "(search exhausted; this does not prove p is not a Markov number)"
        )
    if p <= 2:
        return CompanionPair(p, 1, 1)
    co = list(t)
    co.remove(p)
    q = _q_from_triple(p, min(co), max(co))
    pair = CompanionPair(p, q, p - q)
    # mutation invariance: recompute from a second triple containing p
    k = next(i for i, x in enumerate(t) if x != p)
    t2 = mutate(t, k + 1)
    co2 = list(t2)
    co2.remove(p)
    q2 = _q_from_triple(p, min(co2), max(co2))
    if {q2, p - q2} != {pair.q_plus, pair.q_minus}:
        raise AssertionError(f"companion pair not mutation-invariant for p={p}")
    return pair


def is_companion(p: int, q: int, search_depth: int = MAX_TREE_DEPTH) -> bool:
    return q in companions(p, search_depth)


def _valley_pair(p: int, x: int, y: int) -> tuple[int, int]:
    """Walk mutations fixing p downhill until both co-entries are minimal."""
    while True:
        x2 = 3 * p * y - x
        y2 = 3 * p * x - y
        if x2 < x:
            x = x2
        elif y2 < y:
            y = y2
        else:
            return x, y


def canonical_triple(p: int, q: int, search_depth: int = MAX_TREE_DEPTH) -> MarkovTriple:
    """The triple (p, a, b) with co-entries <= p, ordered so q = 3*a*b^{-1} mod p."""
    pair = companions(p, search_depth)
    if q not in pair:
        raise DomainError(f"{q} is not a companion of {p} (pair {set(pair.pair)})")
    if p <= 2:
        return (p, 1, 1)
    t = _search_triple_with(p, search_depth)
    co = list(t)
    co.remove(p)
    x, y = _valley_pair(p, co[0], co[1])
    if _q_from_triple(p, x, y) == q:
        return (p, x, y)
    if _q_from_triple(p, y, x) == q:
        return (p, y, x)
    raise AssertionError(f"valley pair {x},{y} matches neither companion of {p}")


class _Branch:
    """Lazy bi-infinite branch sequence m_i with m_{i+1} = 3p*m_i - m_{i-1}.

    Base placement: for p >= 3, m_0 = a and m_{-1} = b from the canonical
    triple (p, a, b), so q = 3*m_{i+1}*m_i^{-1} mod p holds for every
    consecutive pair.  For p in {1, 2} the companion condition is vacuous and
    the valley pair (1, 1) is centered at (m_0, m_1), which places the
    diagonal staircase box at index 0.
    """

    def __init__(self, p: int, q: int, search_depth: int = MAX_TREE_DEPTH):
        self.p = p
        self.q = q
        _, a, b = canonical_triple(p, q, search_depth)
        if p <= 2:
            self.values = {0: 1, 1: 1}
        else:
            self.values = {0: a, -1: b}
        self._lo = min(self.values)
        self._hi = max(self.values)

    def __getitem__(self, i: int) -> int:
        v = self.values
        while self._hi < i:
            v[self._hi + 1] = 3 * self.p * v[self._hi] - v[self._hi - 1]
            self._hi += 1
        while self._lo > i:
            v[self._lo - 1] = 3 * self.p * v[self._lo] - v[self._lo + 1]
            self._lo -= 1
        return v[i]


@dataclass(frozen=True)
class BranchSequence:
    p: int
    q: int
    lo: int
    values: tuple[int, ...]

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def value(self, i: int) -> int:
        if not self.lo <= i <= self.hi:
            raise IndexError(f"index {i} outside window [{self.lo}, {self.hi}]")
        return self.values[i - self.lo]

    def items(self) -> Iterator[tuple[int, int]]:
        return ((self.lo + k, v) for k, v in enumerate(self.values))


def branch_sequence(p: int, q: int, lo: int, hi: int) -> BranchSequence:
    if lo > hi:
        raise DomainError(f"empty window: lo={lo} > hi={hi}")
    br = _Branch(p, q)
    values = tuple(br[i] for i in range(lo, hi + 1))
    for m0, m1 in zip(values, values[1:]):
        if not is_markov_triple(p, m0, m1):
            raise AssertionError(f"branch pair ({m0},{m1}) not Markov with {p}")
    return BranchSequence(p, q, lo, values)


@dataclass(frozen=True)
class Sigma:
    """The larger root of x^2 - 3x + 1/p^2, handled symbolically."""

    p: int
    polynomial: tuple[Rational, Rational, Rational] = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "polynomial",
            (Fraction(1), Fraction(-3), Fraction(1, self.p * self.p)),
        )

    def compare(self, r: Rational) -> str:
        """Exact comparison of a rational with sigma_p: 'less' or 'greater'.

        'equal' is impossible: 9p^2 - 4 is never a perfect square (tested per
        p, not assumed), so sigma_p is irrational.
        """
        r = Fraction(r)
        v = r * r - 3 * r + Fraction(1, self.p * self.p)
        if v == 0:
            return "equal"  # unreachable for rational r; kept for honesty
        if v < 0:
            return "less"  # strictly between the two roots
        # outside the roots: below the smaller one or above sigma_p
        return "less" if r <= Fraction(3, 2) else "greater"

    def decimal(self, digits: int, rounded: bool = False) -> str:
        """Decimal expansion to `digits` places, truncated (or rounded)."""
        guard = 12
        k = digits + guard
        p = self.p
        n = isqrt((9 * p * p - 4) * 10 ** (2 * k))
        t = (3 * p * 10**k + n) // (2 * p)  # floor(sigma * 10^k), up to 1 ulp
        if rounded:
            t += 5 * 10 ** (guard - 1)
        t //= 10**guard
        whole, frac = divmod(t, 10**digits)
        return f"{whole}.{frac:0{digits}d}"

    def __float__(self) -> float:
        from math import sqrt

        return (3 * self.p + sqrt(9 * self.p * self.p - 4)) / (2 * self.p)


def sigma_p(p: int) -> Sigma:
    if p < 1:
        raise DomainError(f"p must be positive: {p}")
    return Sigma(p)


def compare_to_sigma(p: int, r: Rational) -> str:
    return sigma_p(p).compare(r)
