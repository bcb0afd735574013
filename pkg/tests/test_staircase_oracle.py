"""Staircase boxes, the embedding oracle, packing reports, certificates."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pinstairs.exact_core import DomainError
from pinstairs.markov import compare_to_sigma, sigma_p
from pinstairs.staircase_oracle import (
    CompanionMismatch,
    embeds,
    obstruction_certificate,
    pin_ball_capacity,
    stair_boxes,
    three_ball_feasible,
    two_ball_feasible,
)

from .frozen import (
    BOX_CORNERS,
    CAPACITIES,
    CERTIFICATES,
    PACK_THREE_521,
    PACK_TWO_25,
)
from .oracles import box_union_verdict

GRID_PAIRS = [(1, 1), (2, 1), (5, 1), (5, 4), (29, 7)]


@pytest.mark.parametrize("pq,corners", sorted(BOX_CORNERS.items()))
def test_stair_box_corners_match_frozen(pq, corners):
    lo, hi = min(corners), max(corners)
    boxes = stair_boxes(*pq, lo, hi)
    got = {b.index: (b.alpha_sup, b.beta_sup) for b in boxes}
    assert got == corners


def test_stair_boxes_volume_identity_and_monotonicity():
    for p, q in GRID_PAIRS:
        boxes = stair_boxes(p, q, -12, 12)
        for b in boxes:
            assert b.alpha_sup * b.beta_sup == Fraction(1, p * p)
        for a, b in zip(boxes, boxes[1:]):
            assert a.alpha_sup < b.alpha_sup
            assert a.beta_sup > b.beta_sup


def test_stair_boxes_stay_below_sigma():
    for p, q in GRID_PAIRS:
        for b in stair_boxes(p, q, -30, 30):
            assert compare_to_sigma(p, b.alpha_sup) == "less"
            assert compare_to_sigma(p, b.beta_sup) == "less"


def test_embeds_strict_containment_example():
    v = embeds(2, 1, Fraction(49, 100), Fraction(49, 100))
    assert v.answer == "Embeds"
    assert v.witness.index == 0
    assert (v.witness.alpha_sup, v.witness.beta_sup) == (Fraction(1, 2), Fraction(1, 2))


def test_embeds_outer_corner_is_excluded():
    v = embeds(2, 1, Fraction(1, 2), Fraction(1, 2))
    assert v.answer == "DoesNotEmbed"
    a, b = v.obstruction
    assert Fraction(1, 2) >= a and Fraction(1, 2) >= b


def test_embeds_obstruction_corner_example():
    v = embeds(5, 1, Fraction(3, 10), Fraction(1, 5))
    assert v.answer == "DoesNotEmbed"
    assert v.obstruction == (Fraction(1, 65), Fraction(1, 10))


def test_embeds_boundary_of_one_box_can_lie_inside_another():
    # alpha equal to a sup is fine if a taller/wider box still contains it
    v = embeds(2, 1, Fraction(1, 2), Fraction(1, 100))
    assert v.answer == "Embeds" and v.witness.index == 1


def test_embeds_outside_visible_range():
    assert embeds(5, 1, Fraction(3), Fraction(1, 100)).answer == "OutsideVisibleRange"
    assert embeds(5, 1, Fraction(1, 100), Fraction(3)).answer == "OutsideVisibleRange"
    assert embeds(2, 1, Fraction(30, 10), Fraction(1, 9)).answer == "OutsideVisibleRange"


def test_embeds_rejects_nonpositive():
    with pytest.raises(DomainError):
        embeds(2, 1, Fraction(0), Fraction(1, 2))
    with pytest.raises(DomainError):
        embeds(2, 1, Fraction(1, 2), Fraction(-1))


def test_embeds_rejects_non_companion():
    with pytest.raises(DomainError):
        embeds(29, 3, Fraction(1, 10), Fraction(1, 10))


def test_embeds_deep_tail_queries_terminate():
    # far below the lower accumulation point: every box is wide enough
    v = embeds(5, 1, Fraction(1, 10**9), Fraction(1, 2))
    assert v.answer == "Embeds"
    v = embeds(29, 7, Fraction(1, 10**30), Fraction(2))
    assert v.answer == "Embeds"


def grid_points(p, n=30):
    sig = float(sigma_p(p))
    pts = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a = Fraction(i, n) * Fraction(int(sig * 1000), 1001)
            b = Fraction(j, n) * Fraction(int(sig * 1000), 1001)
            if compare_to_sigma(p, a) == "less" and compare_to_sigma(p, b) == "less":
                pts.append((a, b))
    return pts


@pytest.mark.parametrize("p,q", GRID_PAIRS)
def test_embeds_agrees_with_box_union_oracle(p, q):
    boxes = [(b.alpha_sup, b.beta_sup) for b in stair_boxes(p, q, -60, 60)]
    for a, b in grid_points(p):
        verdict = embeds(p, q, a, b)
        assert verdict.answer in ("Embeds", "DoesNotEmbed")
        assert (verdict.answer == "Embeds") == box_union_verdict(boxes, a, b)


@pytest.mark.parametrize("p,q", GRID_PAIRS)
def test_embeds_swap_symmetry(p, q):
    q_swap = 1 if p <= 2 else p - q
    for a, b in grid_points(p, n=17):
        assert embeds(p, q, a, b).answer == embeds(p, q_swap, b, a).answer


@settings(max_examples=60)
@given(
    st.sampled_from(GRID_PAIRS),
    st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(5, 2), max_denominator=1000),
    st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(5, 2), max_denominator=1000),
    st.fractions(min_value=Fraction(1, 10), max_value=Fraction(1), max_denominator=50),
    st.fractions(min_value=Fraction(1, 10), max_value=Fraction(1), max_denominator=50),
)
def test_embeds_monotone_consistency(pq, a, b, ka, kb):
    p, q = pq
    if compare_to_sigma(p, a) != "less" or compare_to_sigma(p, b) != "less":
        return
    if embeds(p, q, a, b).answer == "Embeds":
        assert embeds(p, q, a * ka, b * kb).answer == "Embeds"


def test_embeds_volume_bound():
    # every Embeds verdict satisfies p^2 * alpha * beta < 1
    for p, q in GRID_PAIRS:
        for a, b in grid_points(p, n=13):
            v = embeds(p, q, a, b)
            if v.answer == "Embeds":
                assert p * p * a * b < 1


@pytest.mark.parametrize("pq,cap", sorted(CAPACITIES.items()))
def test_pin_ball_capacity_frozen(pq, cap):
    assert pin_ball_capacity(*pq) == cap


def test_pin_ball_capacity_is_the_diagonal_sup():
    for p, q in GRID_PAIRS:
        c = pin_ball_capacity(p, q)
        eps = Fraction(1, 10**7)
        assert embeds(p, q, c - eps, c - eps).answer == "Embeds"
        assert embeds(p, q, c, c).answer == "DoesNotEmbed"
        # and a binary search on the diagonal converges to it
        lo, hi = Fraction(0), Fraction(3)
        while hi - lo > Fraction(1, 10**6):
            mid = (lo + hi) / 2
            if compare_to_sigma(p, mid) == "less" and \
                    embeds(p, q, mid, mid).answer == "Embeds":
                lo = mid
            else:
                hi = mid
        assert lo < c <= hi


def test_two_ball_frozen_bounds():
    rep = two_ball_feasible(2, 1, Fraction(1, 100), 5, 1, Fraction(1, 100))
    assert rep.answer == "feasible" and rep.p3 == 1
    a1, a2, s = PACK_TWO_25
    assert rep.bounds == {"alpha1": a1, "alpha2": a2, "sum": s}
    assert rep.implied == "alpha1"
    assert rep.feasible is True


def test_two_ball_binding_constraints():
    rep = two_ball_feasible(2, 1, Fraction(1, 100), 5, 1, Fraction(1, 10))
    assert rep.answer == "infeasible"
    assert "sum" in rep.binding
    assert rep.feasible is False


def test_two_ball_strictness_at_bound():
    rep = two_ball_feasible(2, 1, Fraction(1, 20), 5, 1, Fraction(1, 20))
    assert rep.answer == "infeasible" and rep.binding == ("sum",)


def test_two_ball_companion_validation():
    with pytest.raises(CompanionMismatch):
        two_ball_feasible(2, 1, Fraction(1), 5, 2, Fraction(1))


def test_two_ball_unknown_for_one_without_common_triple():
    rep = two_ball_feasible(1, 1, Fraction(1, 100), 194, 31, Fraction(1, 100))
    assert rep.answer == "unknown"
    assert rep.feasible is None


def test_two_ball_no_common_triple_raises_beyond_one():
    from pinstairs.intersection_theory import NoCommonTriple

    with pytest.raises(NoCommonTriple):
        two_ball_feasible(2, 1, Fraction(1, 100), 13, 2, Fraction(1, 100))


def test_three_ball_frozen_bounds():
    rep = three_ball_feasible((5, 2, 1), (Fraction(1, 100),) * 3)
    assert rep.answer == "feasible"
    assert rep.bounds == PACK_THREE_521


def test_three_ball_binding_pairs():
    rep = three_ball_feasible((5, 2, 1), (Fraction(3, 50), Fraction(3, 50), Fraction(3, 50)))
    assert rep.answer == "infeasible"
    assert (1, 2) in rep.binding  # 3/50 + 3/50 >= 1/10
    assert rep.feasible is False


@pytest.mark.parametrize("pq,expected", sorted(CERTIFICATES.items()))
def test_obstruction_certificates_match_frozen(pq, expected):
    idx, triple, p3_mut, s, length, disp = expected
    cert = obstruction_certificate(*pq, idx)
    assert cert.triple == triple
    assert cert.p3_prime == p3_mut
    assert cert.s == s
    assert cert.girdle_length == length
    assert cert.displacement == disp
    assert cert.s * cert.girdle_length + cert.displacement == 0


def test_certificate_identity_along_the_staircase():
    for p, q in [(2, 1), (5, 1), (5, 4), (29, 7)]:
        for i in range(-10, 11):
            cert = obstruction_certificate(p, q, i)
            assert cert.s * cert.girdle_length + cert.displacement == 0
            assert cert.s < 0
