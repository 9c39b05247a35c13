import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from floc import hflts
from floc.hflts import (
    ALTERNATIVES,
    MEMBERSHIP,
    GrammarExpression,
    Hflts,
    Kind,
    Status,
    Term,
    TermInterval,
    aggregate_interval,
    anchors,
    decide_role,
    envelope,
    evaluate_status,
    one_cut,
    parse_expression,
    parse_matrix,
    possibility_rank,
    rank_matrix,
    reference_matrix,
    select_alternative,
    standardize,
    standardize_population,
    transform_expression,
    value_to_terms,
)
from floc.network import Role

terms = st.sampled_from(list(Term))
unit = st.floats(0, 1)


def test_term_scale():
    assert [t.label for t in Term] == ["el", "vl", "l", "m", "h", "vh", "p"]
    assert Term.M.peak == 0.5 and Term.P.peak == 1.0
    assert Term.VH.negate() is Term.VL
    assert Term.M.fold() is Term.P and Term.EL.fold() is Term.EL


@given(unit)
def test_memberships_partition_unity(v):
    total = math.fsum(m(v) for m in MEMBERSHIP.values())
    assert total == pytest.approx(1.0, abs=1e-12)
    assert set(value_to_terms(v)) <= set(anchors(v))


def test_anchors_on_and_between_peaks():
    assert anchors(0.5) == (Term.M, Term.M)
    assert anchors(0.6) == (Term.M, Term.H)
    with pytest.raises(ValueError):
        anchors(1.2)


@pytest.mark.parametrize("text,kind,first,second", [
    ("greater than h", Kind.GREATER_THAN, Term.H, None),
    ("lower than m", Kind.LOWER_THAN, Term.M, None),
    ("between v_l & h", Kind.BETWEEN, Term.VL, Term.H),
    ("Between  l and vh", Kind.BETWEEN, Term.L, Term.VH),
    ("p", Kind.SINGLE, Term.P, None),
])
def test_parse_expression(text, kind, first, second):
    assert parse_expression(text) == GrammarExpression(kind, first, second)


@given(st.sampled_from(list(Kind)), terms, terms)
def test_expression_text_round_trip(kind, a, b):
    if kind is Kind.BETWEEN:
        a, b = min(a, b), max(a, b)
        e = GrammarExpression(kind, a, b)
    else:
        e = GrammarExpression(kind, a)
    assert parse_expression(str(e)) == e


@pytest.mark.parametrize("bad", ["greater h", "between h and", "very high", ""])
def test_parse_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_expression(bad)


def test_between_must_be_ordered():
    with pytest.raises(ValueError):
        GrammarExpression(Kind.BETWEEN, Term.H, Term.L)


def test_transform_excludes_comparison_anchor():
    assert str(transform_expression(parse_expression("greater than h"))) == "{vh, p}"
    assert str(transform_expression(parse_expression("lower than m"))) == "{el, vl, l}"
    with pytest.raises(ValueError):
        transform_expression(parse_expression("greater than p"))
    with pytest.raises(ValueError):
        transform_expression(parse_expression("lower than el"))


def test_hflts_must_be_consecutive():
    with pytest.raises(ValueError):
        Hflts((Term.L, Term.H))


@given(terms, terms)
def test_envelope_bounds_hflts(a, b):
    h = Hflts.span(min(a, b), max(a, b))
    env = envelope(h)
    assert env.lower == min(h.terms) and env.upper == max(h.terms)
    lo, hi = one_cut(env)
    assert 0 <= lo <= hi <= 1


def test_reference_matrix_stages():
    checks = hflts.check_reference()
    assert len(checks) == 36
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_reference_optimistic_choice():
    d = rank_matrix(reference_matrix(), "optimistic")
    assert d.intervals == ((5 / 6, 1.0), (4 / 6, 1.0), (4 / 6, 1.0))
    assert d.ranks[0] == pytest.approx(6 / 7, abs=1e-12)
    assert d.role is Role.CH
    assert d.ordering == [Role.CH, Role.CM, Role.RELAY]


def test_reference_pessimistic_choice():
    d = rank_matrix(reference_matrix(), "pessimistic")
    assert d.intervals == ((0.0, 2 / 6), (1 / 6, 4 / 6), (0.0, 2 / 6))
    assert d.ranks == pytest.approx((0.25, 4 / 9, 0.25), abs=1e-12)
    assert d.role is Role.CM


def test_rank_rejects_invalid_intervals():
    with pytest.raises(ValueError):
        possibility_rank(1.0, 0.0)
    with pytest.raises(ValueError):
        possibility_rank(-0.1, 0.5)


def test_rank_hand_values():
    assert possibility_rank(1, 1) == 1
    assert possibility_rank(0, 1) == 0.5
    assert possibility_rank(5 / 6, 1) == pytest.approx(6 / 7, abs=1e-12)


@given(unit, unit)
def test_rank_in_unit_interval_and_monotone_in_lower(a, b):
    u1, u2 = min(a, b), max(a, b)
    r = possibility_rank(u1, u2)
    assert 0 <= r <= 1
    assert possibility_rank(u1 / 2, u2) <= r + 1e-15


@given(unit, unit)
def test_rank_matches_rational_evaluation(a, b):
    u1, u2 = Fraction(min(a, b)), Fraction(max(a, b))
    exact = max(1 - max((1 - u1) / (u2 - u1 + 1), Fraction(0)), Fraction(0))
    assert possibility_rank(float(u1), float(u2)) == pytest.approx(float(exact), abs=1e-15)


def test_aggregate_modes():
    ivs = [(0.2, 0.6), (0.4, 0.5)]
    assert aggregate_interval(ivs, "optimistic") == (0.4, 0.6)
    assert aggregate_interval(ivs, "pessimistic") == (0.2, 0.5)
    with pytest.raises(ValueError):
        aggregate_interval(ivs, "neutral")
    with pytest.raises(ValueError):
        aggregate_interval([], "optimistic")


def test_select_alternative_ties():
    assert select_alternative([0.5, 0.5, 0.2]) == 0
    assert select_alternative([0.5, 0.5, 0.2], tiebreak=[0.1, 0.3, 0.9]) == 1
    assert select_alternative([0.1, 0.2, 0.3]) == 2


@pytest.mark.parametrize("gain,ew,want", [
    (2.0, 0.9, Status.OPTIMISTIC),
    (0.5, 0.2, Status.PESSIMISTIC),
    (2.0, 0.2, Status.PESSIMISTIC),
    (0.5, 0.9, Status.PESSIMISTIC),
    (1.0, 0.9, Status.PESSIMISTIC),
])
def test_status_rule(gain, ew, want):
    assert evaluate_status(gain, ew, 1.0) is want


def test_standardize_constant_column():
    pop = [(1.0, 5.0), (3.0, 5.0)]
    assert standardize((2.0, 5.0), pop) == (0.5, 0.5)
    assert standardize_population(pop) == [(0.0, 0.5), (1.0, 0.5)]


@given(st.lists(st.tuples(*[st.floats(-1e6, 1e6)] * 6), min_size=1, max_size=20))
def test_standardized_rows_in_unit_box(rows):
    for row in standardize_population(rows):
        assert all(0 <= v <= 1 for v in row)


@given(st.tuples(*[unit] * 6), st.sampled_from(list(Status)))
def test_generated_matrices_always_rank(criteria, status):
    d = decide_role(criteria, status)
    assert d.role in ALTERNATIVES
    assert all(0 <= r <= 1 for r in d.ranks)
    for row in d.cuts:
        for lo, hi in row:
            assert 0 <= lo <= hi <= 1


def test_strong_node_heads_and_weak_node_joins():
    strong = (1.0, 1.0, 0.0, 1.0, 0.0, 1.0)
    weak = (0.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    assert decide_role(strong, Status.OPTIMISTIC).role is Role.CH
    assert decide_role(weak, Status.PESSIMISTIC).role is Role.CM


def test_weighted_mode_uses_weights():
    crit = (1.0, 1.0, 0.0, 1.0, 0.0, 1.0)
    d = decide_role(crit, Status.PESSIMISTIC, weights=(1 / 6,) * 6)
    assert d.role is Role.CH
    assert d.ranks[0] == pytest.approx(1.0)


def test_decide_requires_six_unit_values():
    with pytest.raises(ValueError):
        decide_role((0.5,) * 5, Status.OPTIMISTIC)
    with pytest.raises(ValueError):
        decide_role((0.5,) * 5 + (1.5,), Status.OPTIMISTIC)


def test_parse_matrix_shape_errors():
    row = ", ".join(["m"] * 6)
    assert len(parse_matrix("\n".join([row] * 3))) == 3
    with pytest.raises(ValueError):
        parse_matrix("\n".join([row] * 2))
    with pytest.raises(ValueError):
        parse_matrix("\n".join([row, row, "m, m"]))


def test_term_interval_order():
    with pytest.raises(ValueError):
        TermInterval(Term.H, Term.L)
