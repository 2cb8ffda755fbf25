"""The label order: closure, monotone constraint addition, and enumeration of
total scope orderings."""

import random

import pytest

import fixtures as F
import oracles as O
from udrs import (
    LowerBoundViolation,
    Ord,
    UnknownLabel,
    add_constraint,
    close,
    enumerate_readings,
    linear_extensions,
    validate,
)


def test_closure_is_reflexive_and_transitive():
    o = close("abcd", [("a", "b"), ("b", "c")])
    for x in "abcd":
        assert o.le(x, x)
    assert o.le("a", "c")
    assert not o.le("c", "a")
    assert not o.le("d", "a") and not o.le("a", "d")


def test_cycles_collapse_into_one_equivalence_class():
    o = close("abc", [("a", "b"), ("b", "a")])
    assert o.sim("a", "b")
    assert o.rep("b") == "a"
    assert ("a", "b") in [tuple(c) for c in o.classes()]


def test_join_finds_least_upper_bounds():
    #   a   b
    #    \ /
    #     c    (diamond turned upside down: a,b ≤ c)
    o = close("abc", [("a", "c"), ("b", "c")])
    assert o.join("a", "b") == "c"
    o2 = close("ab", [])
    assert o2.join("a", "b") is None


def test_unknown_labels_are_rejected_by_the_order():
    o = close("ab", [("a", "b")])
    with pytest.raises(UnknownLabel):
        o.le("a", "zz")


def test_fixture_orders_put_everything_below_the_top():
    for name, obj in F.all_sentence_fixtures():
        for u in (obj.all_udrs() if hasattr(obj, "all_udrs") else (obj,)):
            for lbl in u.labels:
                assert u.order.le(lbl, u.top), (name, lbl)


def test_add_constraint_is_idempotent_on_implied_facts():
    u = F.negated_universal()
    # the verb already sits below the universal's scope
    assert add_constraint(u, ("l0", "l12")) is u


def test_add_constraint_grows_information_monotonically():
    u = F.negated_universal()
    u2 = add_constraint(u, ("l2", "l12"))
    old = set(u.order.pairs())
    new = set(u2.order.pairs())
    assert old <= new
    assert ("l2", "l12") in new


def test_add_constraint_rejects_unknown_labels():
    with pytest.raises(UnknownLabel):
        add_constraint(F.negated_universal(), ("l2", "zz"))


def test_trapping_a_variable_raises_without_enumeration():
    # A relative clause hangs off the universal's restrictor; pushing the
    # numeral's box under the universal's scope would leave the relative
    # clause's verb needing a variable from both branches at once.
    u = F.professor_with_partner()
    u2 = add_constraint(u, ("k1", "l22"))
    with pytest.raises(LowerBoundViolation):
        add_constraint(u2, ("l2", "l12"))


def test_refinement_narrows_the_reading_set():
    u = F.negated_universal()
    before = {r.describe() for r in enumerate_readings(u)}
    after = {r.describe() for r in enumerate_readings(add_constraint(u, ("l2", "l12")))}
    assert after < before
    assert len(after) == 1


def test_linear_extensions_match_brute_permutation_filter_on_fixtures():
    cases = [
        (F.negated_universal(), "top"),
        (F.professor_with_partner(), "l"),
        (F.professor_with_partner(), "k"),
        (F.lawyers_hired_secretary(), "top"),
        (F.teachers_showed_db().sentences[0], "t1"),
    ]
    for u, cl in cases:
        got = linear_extensions(u, cl)
        assert len(got) == len(set(got)), "duplicates emitted"
        assert set(got) == O.brute_linear_orderings(u, cl)


def test_linear_extensions_put_the_verb_last():
    u = F.negated_universal()
    for ext in linear_extensions(u, "top"):
        assert ext[-1] == "l0"


def test_linear_extensions_respect_added_constraints():
    u = F.negated_universal()
    assert len(linear_extensions(u, "top")) == 2
    pinned = add_constraint(u, ("l2", "l12"))
    exts = linear_extensions(pinned, "top")
    assert exts == [("l1", "l2", "l0")]


def test_linear_extensions_fuse_order_equivalent_nodes():
    u = F.negated_universal()
    # force the two quantifying nodes into one equivalence class
    fused = u.with_pairs(("l1", "l2"), ("l2", "l1"))
    exts = linear_extensions(fused, "top")
    assert exts == [("l1", "l2", "l0")]
    assert set(exts) == O.brute_linear_orderings(fused, "top")


def test_linear_extensions_are_deterministic():
    u = F.lawyers_hired_secretary()
    assert linear_extensions(u, "top") == linear_extensions(u, "top")
