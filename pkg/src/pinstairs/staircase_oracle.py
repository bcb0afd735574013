"""Staircase embedding oracle, ball-packing feasibility, and exact certificates.

The visible embedding region of the (p, q) family inside (0, sigma_p)^2 is an
infinite union of open boxes

    box_i = (0, m_{i+1}/(p*m_i)) x (0, m_i/(p*m_{i+1}))

indexed by the branch sequence m_i.  Membership reduces to an exact walk:
alpha_sup(i) increases strictly to sigma_p, so the minimal box whose width
exceeds alpha decides the verdict, and on failure the dominated inner corner
is an exact obstruction.  The packing checks are the strict linear
inequalities cut out by the triple completing (p1, p2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact_core import DomainError, Rational, format_rational
from .intersection_theory import NoCommonTriple, two_ball_degree
from .markov import (
    _Branch,
    canonical_triple,
    companions,
    compare_to_sigma,
    is_markov_triple,
    sigma_p,
)

__all__ = [
    "StairBox",
    "EmbeddingVerdict",
    "TwoBallReport",
    "ThreeBallReport",
    "ObstructionCertificate",
    "CompanionMismatch",
    "stair_boxes",
    "embeds",
    "pin_ball_capacity",
    "two_ball_feasible",
    "three_ball_feasible",
    "obstruction_certificate",
]


class CompanionMismatch(DomainError):
    """A supplied q is not in the companion pair of its p."""


@dataclass(frozen=True)
class StairBox:
    index: int
    alpha_sup: Rational
    beta_sup: Rational

    def contains(self, alpha: Rational, beta: Rational) -> bool:
        return 0 < alpha < self.alpha_sup and 0 < beta < self.beta_sup

    def to_json(self) -> dict:
        return {
            "i": self.index,
            "alpha_sup": format_rational(self.alpha_sup),
            "beta_sup": format_rational(self.beta_sup),
        }


@dataclass(frozen=True)
class EmbeddingVerdict:
    answer: str  # "Embeds" | "DoesNotEmbed" | "OutsideVisibleRange"
    witness: Optional[StairBox] = None
    obstruction: Optional[tuple[Rational, Rational]] = None

    def to_json(self) -> dict:
        out: dict = {"answer": self.answer}
        if self.witness is not None:
            out["witness_box"] = self.witness.to_json()
        if self.obstruction is not None:
            out["obstruction"] = [format_rational(x) for x in self.obstruction]
        return out


def _box(p: int, br: _Branch, i: int) -> StairBox:
    box = StairBox(i, Fraction(br[i + 1], p * br[i]), Fraction(br[i], p * br[i + 1]))
    if box.alpha_sup * box.beta_sup != Fraction(1, p * p):
        raise AssertionError(f"outer corner of box {i} off the volume curve")
    return box


def stair_boxes(p: int, q: int, i_lo: int, i_hi: int) -> list[StairBox]:
    if i_lo > i_hi:
        raise DomainError(f"empty index window: {i_lo} > {i_hi}")
    br = _Branch(p, q)
    boxes = [_box(p, br, i) for i in range(i_lo, i_hi + 1)]
    for a, b in zip(boxes, boxes[1:]):
        if not a.alpha_sup < b.alpha_sup:
            raise AssertionError("alpha_sup not strictly increasing")
    return boxes


def embeds(p: int, q: int, alpha: Rational, beta: Rational) -> EmbeddingVerdict:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise DomainError("alpha and beta must be positive")
    if compare_to_sigma(p, alpha) != "less":
        return EmbeddingVerdict("OutsideVisibleRange")
    if compare_to_sigma(p, beta) != "less":
        return EmbeddingVerdict("OutsideVisibleRange")
    br = _Branch(p, q)
    i = 0
    if alpha >= _box(p, br, 0).alpha_sup:
        # walk up to the minimal i with alpha < alpha_sup(i)
        while alpha >= _box(p, br, i).alpha_sup:
            i += 1
    elif compare_to_sigma(p, Fraction(1, p * p) / alpha) == "less":
        # alpha above the decreasing limit of alpha_sup: the minimal box
        # exists below; walk down to it
        while alpha < _box(p, br, i - 1).alpha_sup:
            i -= 1
    else:
        # alpha at or below the limit: every box is wide enough, and since
        # beta < sigma_p some box far down is tall enough
        while beta >= _box(p, br, i).beta_sup:
            i -= 1
        return EmbeddingVerdict("Embeds", witness=_box(p, br, i))
    box = _box(p, br, i)
    if beta < box.beta_sup:
        return EmbeddingVerdict("Embeds", witness=box)
    corner = (Fraction(br[i], p * br[i - 1]), box.beta_sup)
    if not (alpha >= corner[0] and beta >= corner[1]):
        raise AssertionError("obstruction corner is not dominated")
    return EmbeddingVerdict("DoesNotEmbed", obstruction=corner)


def pin_ball_capacity(p: int, q: int) -> Rational:
    """Largest a with the round ball of width a embedding on the diagonal."""
    _, a, b = canonical_triple(p, q)
    return min(Fraction(a, p * b), Fraction(b, p * a))


@dataclass(frozen=True)
class TwoBallReport:
    answer: str  # "feasible" | "infeasible" | "unknown"
    p3: Optional[int]
    bounds: dict  # name -> Rational sup
    binding: tuple[str, ...]
    implied: Optional[str]

    @property
    def feasible(self) -> Optional[bool]:
        return None if self.answer == "unknown" else self.answer == "feasible"

    def to_json(self) -> dict:
        return {
            "answer": self.answer,
            "p3": self.p3,
            "bounds": {k: format_rational(v) for k, v in self.bounds.items()},
            "binding": list(self.binding),
            "implied": self.implied,
        }


def two_ball_feasible(p1: int, q1: int, alpha1: Rational,
                      p2: int, q2: int, alpha2: Rational) -> TwoBallReport:
    alpha1, alpha2 = Fraction(alpha1), Fraction(alpha2)
    if alpha1 <= 0 or alpha2 <= 0:
        raise DomainError("ball widths must be positive")
    if q1 not in companions(p1):
        raise CompanionMismatch(f"{q1} is not a companion of {p1}")
    if q2 not in companions(p2):
        raise CompanionMismatch(f"{q2} is not a companion of {p2}")
    try:
        p3 = two_ball_degree(p1, p2)
    except NoCommonTriple:
        if 1 in (p1, p2):
            # constraints for this case exist but lie outside the strict
            # triple framework; refuse to guess
            return TwoBallReport("unknown", None, {}, (), None)
        raise
    bounds = {
        "alpha1": Fraction(p2, p1 * p3),
        "alpha2": Fraction(p1, p2 * p3),
        "sum": Fraction(p3, p1 * p2),
    }
    values = {"alpha1": alpha1, "alpha2": alpha2, "sum": alpha1 + alpha2}
    binding = tuple(k for k in ("alpha1", "alpha2", "sum") if values[k] >= bounds[k])
    # the alpha bound on the side of the larger p follows from the sum bound
    implied = "alpha1" if p3 <= p2 else "alpha2"
    if bounds["sum"] > bounds[implied]:
        raise AssertionError("implied-bound comparison failed")
    return TwoBallReport("feasible" if not binding else "infeasible",
                         p3, bounds, binding, implied)


@dataclass(frozen=True)
class ThreeBallReport:
    answer: str
    bounds: dict  # pair (i, j) -> Rational sup on alpha_i + alpha_j
    binding: tuple[tuple[int, int], ...]

    @property
    def feasible(self) -> bool:
        return self.answer == "feasible"

    def to_json(self) -> dict:
        return {
            "answer": self.answer,
            "bounds": {f"alpha{i}+alpha{j}": format_rational(v)
                       for (i, j), v in self.bounds.items()},
            "binding": [f"alpha{i}+alpha{j}" for i, j in self.binding],
        }


def three_ball_feasible(triple, alphas, qs=None) -> ThreeBallReport:
    p1, p2, p3 = triple
    if not is_markov_triple(p1, p2, p3):
        raise DomainError(f"{triple} is not a Markov triple")
    a = [Fraction(x) for x in alphas]
    if len(a) != 3 or any(x <= 0 for x in a):
        raise DomainError("need three positive ball widths")
    if qs is not None:
        for p, q in zip(triple, qs):
            if q not in companions(p):
                raise CompanionMismatch(f"{q} is not a companion of {p}")
    bounds = {
        (1, 2): Fraction(p3, p1 * p2),
        (1, 3): Fraction(p2, p1 * p3),
        (2, 3): Fraction(p1, p2 * p3),
    }
    binding = tuple(key for key, sup in bounds.items()
                    if a[key[0] - 1] + a[key[1] - 1] >= sup)
    return ThreeBallReport("feasible" if not binding else "infeasible", bounds, binding)


@dataclass(frozen=True)
class ObstructionCertificate:
    p: int
    q: int
    index: int
    triple: tuple[int, int, int]
    p3_prime: int
    s: Rational  # self-pairing witness  -p2*p3'/p1^2
    girdle_length: Rational  # p1*p3/(p2*p3')
    displacement: Rational  # p3/p1

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "triple": list(self.triple),
            "p3_prime": self.p3_prime,
            "s": format_rational(self.s),
            "girdle_length": format_rational(self.girdle_length),
            "displacement": format_rational(self.displacement),
        }


def obstruction_certificate(p: int, q: int, i: int) -> ObstructionCertificate:
    """Exact identity s*L + D = 0 at the inner corner i of the staircase."""
    br = _Branch(p, q)
    p1, p2, p3 = p, br[i + 1], br[i]
    if not is_markov_triple(p1, p2, p3):
        raise DomainError(f"index {i} does not give a Markov triple for ({p},{q})")
    p3p = 3 * p1 * p3 - p2
    if p3p != br[i - 1]:
        raise AssertionError("mutated third entry disagrees with the branch")
    s = Fraction(-p2 * p3p, p1 * p1)
    length = Fraction(p1 * p3, p2 * p3p)
    disp = Fraction(p3, p1)
    if s * length + disp != 0:
        raise AssertionError(f"certificate identity fails at ({p},{q},{i})")
    return ObstructionCertificate(p, q, i, (p1, p2, p3), p3p, s, length, disp)
