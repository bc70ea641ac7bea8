"""End counting: sphere classes, stabilization verdicts, annulus conditions."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relends import (
    INFINITE,
    UNCERTIFIED,
    Estimates,
    UnstableBallError,
    check_dag,
    check_ddag,
    count_relative_ends,
    empirical_ends,
    empirical_ledger,
    parse_presentation,
    probe_class_history,
    shadow_consistency_check,
    sphere_classes,
    stabilization_verdict,
    stable_ball,
)

from conftest import sub


# --- stabilization verdicts ------------------------------------------------


@pytest.mark.parametrize(
    "history,window,verdict",
    [
        ([], 3, UNCERTIFIED),
        ([2, 2], 3, UNCERTIFIED),
        ([2, 2, 2], 3, 2),
        ([1, 2, 2, 2], 3, 2),
        ([2, 2, 3], 3, UNCERTIFIED),
        ([1, 2, 3], 3, INFINITE),
        ([4, 4, 12, 36], 3, INFINITE),
        ([3, 3, 3, 3], 4, 3),
        ([0, 0, 0], 3, 0),
    ],
)
def test_verdict_table(history, window, verdict):
    assert stabilization_verdict(history, window) == verdict


counts = st.lists(st.integers(min_value=0, max_value=9), max_size=8)


@given(counts, st.integers(min_value=1, max_value=4))
def test_verdict_is_certain_only_with_a_full_window(history, window):
    v = stabilization_verdict(history, window)
    if len(history) < window:
        assert v == UNCERTIFIED
    elif v not in (UNCERTIFIED, INFINITE):
        assert history[-window:] == [v] * window


# --- sphere classes and probe histories -------------------------------------


def test_line_has_two_sphere_classes(zline, trivial):
    ball = stable_ball(zline, trivial, 5)
    led = empirical_ledger(r0=2, inner_offset=Fraction(3), outer_radius=5)
    sc = sphere_classes(ball, led)
    assert sc.inner_radius == 0
    assert len(sc.classes) == 2
    assert sorted(sc.representatives) == [3, 4]  # one coset per side
    assert sc.ball_stable


def test_line_history_is_flat(zline, trivial):
    ball = stable_ball(zline, trivial, 5)
    led = empirical_ledger(r0=3, inner_offset=Fraction(3), outer_radius=5)
    assert probe_class_history(ball, led, [1, 2, 3]) == [2, 2, 2]


def test_tree_classes_grow_once_the_cut_moves(f2, trivial):
    ball = stable_ball(f2, trivial, 6)
    led = empirical_ledger(r0=5, inner_offset=Fraction(3), outer_radius=6)
    # probes below the offset all cut at the base and agree; beyond it the
    # inner ball starts moving and the branch count takes over
    assert probe_class_history(ball, led, [1, 2, 3, 4, 5]) == [4, 4, 4, 12, 36]


# --- empirical cross-check ---------------------------------------------------


def test_empirical_line_stabilizes_at_two(zline, trivial):
    ball = stable_ball(zline, trivial, 5)
    rep = empirical_ends(ball, [0, 1, 2])
    assert rep.counts == (2, 2, 2)
    assert rep.verdict == 2


def test_empirical_tree_diverges(f2, trivial):
    ball = stable_ball(f2, trivial, 4)
    rep = empirical_ends(ball, [0, 1, 2])
    assert rep.counts == (4, 12, 36)
    assert rep.verdict == INFINITE


def test_empirical_needs_room_and_order(f2, trivial):
    ball = stable_ball(f2, trivial, 3)
    with pytest.raises(ValueError):
        empirical_ends(ball, [1, 3])  # must stay under the ball radius
    with pytest.raises(ValueError):
        empirical_ends(ball, [2, 1])
    with pytest.raises(ValueError):
        empirical_ends(ball, [])


def test_short_histories_stay_uncertified(zline, trivial):
    ball = stable_ball(zline, trivial, 5)
    assert empirical_ends(ball, [1, 2]).verdict == UNCERTIFIED


# --- end counts end to end ---------------------------------------------------


def probes_ledger(probes, gap=1):
    return empirical_ledger(
        r0=probes[-1], inner_offset=Fraction(3), outer_radius=probes[-1] + gap
    )


def test_whole_group_has_no_ends(zline):
    rep = count_relative_ends(
        zline, sub(zline, "a"), probes_ledger([2, 3, 4, 5]), [2, 3, 4, 5]
    )
    assert rep.count == 0
    assert rep.class_history == (0, 0, 0, 0)


def test_line_has_two_ends(zline, trivial):
    rep = count_relative_ends(zline, trivial, probes_ledger([2, 3, 4, 5]), [2, 3, 4, 5])
    assert rep.count == 2
    assert rep.class_history == (2, 2, 2, 2)


def test_tree_count_never_settles(f2, trivial):
    rep = count_relative_ends(f2, trivial, probes_ledger([2, 3, 4, 5]), [2, 3, 4, 5])
    assert rep.count == INFINITE
    assert rep.class_history == (4, 4, 12, 36)


def test_finite_index_subgroup_sees_zero_ends(zline):
    rep = count_relative_ends(
        zline, sub(zline, "aa"), probes_ledger([2, 3, 4, 5]), [2, 3, 4, 5]
    )
    assert rep.count == 0


def test_surface_quotient_count_at_desk_scale(genus2):
    rep = count_relative_ends(
        genus2, sub(genus2, "a"), probes_ledger([1, 2, 3]), [1, 2, 3]
    )
    assert rep.count == 2
    assert rep.class_history == (2, 2, 2)


def test_unstable_balls_refuse_a_verdict():
    p = parse_presentation("generators: a b\nrelators: bbabbb\n")
    with pytest.raises(UnstableBallError):
        count_relative_ends(p, sub(p), probes_ledger([1, 2, 3]), [1, 2, 3], max_slack=0)


# --- annulus conditions ------------------------------------------------------


def test_double_annulus_fails_on_the_tree(f2, trivial):
    ball = stable_ball(f2, trivial, 5)
    rep = check_ddag(ball, m=2, k=1)
    assert rep.condition == "ddag(M=2,K=1)"
    assert not rep.holds_within_ball
    assert rep.witness_l is None
    assert rep.counterexample == (1, 1, 0)
    assert rep.pairs_checked == 7


def test_double_annulus_fails_on_the_line(zline, trivial):
    ball = stable_ball(zline, trivial, 6)
    rep = check_ddag(ball, m=2, k=1)
    assert not rep.holds_within_ball
    assert rep.counterexample == (1, 1, 0)


def test_double_annulus_holds_on_the_surface(genus2, trivial):
    ball = stable_ball(genus2, trivial, 4)
    rep = check_ddag(ball, m=4, k=1, delta_x=1)
    assert rep.holds_within_ball
    assert rep.witness_l == 2
    assert rep.admissible_rs == (3,)
    assert rep.pairs_checked == 1576


def test_r_cap_trims_the_admissible_range(genus2, trivial):
    ball = stable_ball(genus2, trivial, 4)
    full = check_ddag(ball, m=4, k=1, delta_x=1)
    capped = check_ddag(ball, m=4, k=1, delta_x=1, r_cap=2)
    assert full.admissible_rs == (3,)
    # nothing admissible is left, which counts as a vacuous pass
    assert capped.admissible_rs == ()
    assert capped.holds_within_ball
    assert capped.witness_l == 0


def test_quotient_annulus_is_vacuous_when_h_is_everything(zline):
    ball = stable_ball(zline, sub(zline, "a"), 4)
    rep = check_dag(ball, m=2, delta_xh=Fraction(1, 8))
    assert rep.condition == "dag(M=2)"
    assert rep.holds_within_ball
    assert rep.witness_l == 0
    assert rep.pairs_checked == 0


def test_quotient_annulus_fails_on_the_collapsed_tree(f2):
    ball = stable_ball(f2, sub(f2, "a"), 5)
    rep = check_dag(ball, m=2, delta_xh=Fraction(1, 8))
    assert not rep.holds_within_ball
    assert rep.counterexample == (3, 9, 10)


# --- shadows -----------------------------------------------------------------


def test_shadow_projection_is_consistent_on_the_surface(genus2):
    ball = stable_ball(genus2, sub(genus2, "a"), 4)
    led = empirical_ledger(
        3, Fraction(3), 4, Estimates(delta_x=Fraction(0), epsilon=0), m=2
    )
    rep = shadow_consistency_check(ball, led, trials=50, seed=0)
    assert rep.passed
    assert rep.pairs_checked == 37
    assert not rep.violations
