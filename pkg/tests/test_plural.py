"""The plural transforms: construal pinning, cumulation, pronoun resolution,
antecedent abstraction, and dependency marking.  Each transform returns a new
structure and must only ever narrow the reading set."""

import pytest

import fixtures as F
from udrs import (
    CumDuplex,
    Database,
    Inaccessible,
    NoGroupReferent,
    NoLicensingCondition,
    NotAPronoun,
    NotLowerBound,
    NotPotentiallyScopeBearing,
    NotSameClause,
    PartialMapping,
    SharedResponsibilityUnsupported,
    TagMismatch,
    UnknownReferent,
    WrongClause,
    enumerate_readings,
    plural,
    validate,
)


def descs(obj):
    return {r.describe() for r in enumerate_readings(obj)}


def test_distribute_narrows_to_the_distributive_construals():
    u = F.lawyers_hired_secretary()
    d = plural.distribute(u, "l1")
    assert validate(d) == []
    assert descs(d) < descs(u)
    assert len(enumerate_readings(d)) == 2
    assert all(r.tag_map["l0"][0] == "d" for r in enumerate_readings(d))


def test_collectivize_narrows_to_the_collective_construal():
    u = F.lawyers_hired_secretary()
    c = plural.collectivize(u, "l1")
    assert validate(c) == []
    assert descs(c) < descs(u)
    assert [r.tag_map["l0"][0] for r in enumerate_readings(c)] == ["c"]


def test_genericize_marks_the_box_generic():
    u = F.lawyers_hired_secretary()
    g = plural.genericize(u, "l1")
    assert validate(g) == []
    assert all(r.tag_map["l0"][0] == "gen" for r in enumerate_readings(g))


def test_transforms_do_not_touch_their_input():
    u = F.lawyers_hired_secretary()
    before = descs(u)
    plural.distribute(u, "l1")
    assert descs(u) == before


def test_retagging_the_same_way_is_idempotent():
    u = plural.distribute(F.lawyers_hired_secretary(), "l1")
    again = plural.distribute(u, "l1")
    assert descs(again) == descs(u)


def test_conflicting_tags_are_rejected():
    u = plural.distribute(F.lawyers_hired_secretary(), "l1")
    with pytest.raises(TagMismatch):
        plural.collectivize(u, "l1")


def test_tagging_needs_a_potential_scope_bearer():
    with pytest.raises(NotPotentiallyScopeBearing):
        plural.distribute(F.lawyers_hired_secretary(), "l0")


def test_tagging_needs_a_group_referent():
    with pytest.raises(NoGroupReferent):
        plural.distribute(F.lawyers_hired_secretary(), "l2")


def test_cumulate_builds_one_polyadic_duplex():
    u = plural.cumulate(F.breweries_supplied_inns(), "l1", "l2")
    assert validate(u) == []
    duplexes = [c for c in u.components if isinstance(c.dist, CumDuplex)]
    assert len(duplexes) == 1
    assert duplexes[0].dist.res_pair == ("l1", "l2")
    assert len(enumerate_readings(u)) == 1


def test_cumulate_requires_one_clause():
    with pytest.raises(NotSameClause):
        plural.cumulate(F.lawyers_hired_liked(), "l1", "k1")
    with pytest.raises(NotSameClause):
        plural.cumulate(F.breweries_supplied_inns(), "l1", "l1")


def test_cumulate_requires_potential_scope_bearers():
    with pytest.raises(NotPotentiallyScopeBearing):
        plural.cumulate(F.professor_with_partner(), "l1", "l2")


def test_resolving_a_singular_pronoun_substitutes_and_pins_scope():
    u = F.student_praised_him()
    r = plural.resolve_pronoun(u, "m2", "x")
    assert validate(r) == []
    rs = enumerate_readings(r)
    assert len(rs) == 1
    # the scope skeleton is one the unresolved structure already admitted,
    # with the antecedent choice pinned instead of enumerated
    assert rs[0].spines == enumerate_readings(u)[0].spines
    assert rs[0].binds == ()


def test_resolving_a_plural_pronoun_keeps_member_group_choice_open():
    db = plural.resolve_pronoun(F.lawyers_hired_liked(), "k1", "X")
    binds = {r.bind_map["k1"] for r in enumerate_readings(db)}
    assert binds == {"X", "x"}


def test_resolution_needs_a_pronoun_equation():
    with pytest.raises(NotAPronoun):
        plural.resolve_pronoun(F.student_praised_him(), "m1", "x")


def test_resolution_needs_a_declared_antecedent():
    with pytest.raises(UnknownReferent):
        plural.resolve_pronoun(F.student_praised_him(), "m2", "q")


def test_number_agreement_is_enforced():
    with pytest.raises(Inaccessible):
        plural.resolve_pronoun(F.lawyers_hired_liked(), "k1", "y")
    two_sentence = F.teachers_showed_db()
    with pytest.raises(Inaccessible):
        plural.resolve_pronoun(two_sentence, "n1", "Z")


def test_abstraction_strictly_prunes_readings():
    db = F.teachers_showed_db()
    before = len(enumerate_readings(db))
    after = plural.abstract_antecedent(db, "n1", "z", "l1")
    assert validate(after) == []
    n_after = len(enumerate_readings(after))
    assert n_after < before
    assert n_after > 0


def test_abstraction_needs_a_licensing_duplex():
    with pytest.raises(NoLicensingCondition):
        plural.abstract_antecedent(F.teachers_showed_db(), "n1", "z", "l2")


def test_abstraction_needs_the_dependent_referent_nearby():
    with pytest.raises(UnknownReferent):
        plural.abstract_antecedent(F.teachers_showed_db(), "n1", "nope", "l1")


def test_abstracted_referent_must_come_from_the_licensing_clause():
    from udrs import Atom, Clause, Component, Eq, Referent, Udrs, Unresolved

    pronoun_sentence = Udrs(
        clauses=(Clause("n", nodes=("n0", "n1"), boxes=("n0", "n1")),),
        components=(
            Component("n0", conds=(Atom("bored", (Referent("zeta"),)),)),
            Component(
                "n1",
                universe=(Referent("zeta"),),
                conds=(Eq(Referent("zeta"), Unresolved()),),
            ),
        ),
    )
    db = Database((F.professor_with_partner(), pronoun_sentence))
    # y is declared inside the relative clause, not in the quantifier's own
    with pytest.raises(WrongClause):
        plural.abstract_antecedent(db, "n1", "y", "l1")


def test_dependency_marking_records_the_mapping():
    db = plural.mark_dependent(
        F.bought_then_checkout_db(), "b0", "a0", F.checkout_dependency_map()
    )
    comp = db.find("b0").component("b0")
    assert comp.dep is not None
    assert comp.dep.on == "a0"
    assert validate(db) == []


def test_dependency_marking_rejects_non_verb_boxes():
    with pytest.raises(NotLowerBound):
        plural.mark_dependent(
            F.bought_then_checkout_db(), "b1", "a0", F.checkout_dependency_map()
        )


def test_dependency_marking_must_point_backwards_across_sentences():
    db = F.bought_then_checkout_db()
    pi = F.checkout_dependency_map()
    with pytest.raises(WrongClause):
        plural.mark_dependent(db, "a0", "b0", {v: k for k, v in pi.items()})
    one = Database((db.sentences[0],))
    with pytest.raises(WrongClause):
        plural.mark_dependent(one, "a0", "a0", {})


def test_dependency_marking_requires_a_total_mapping():
    pi = F.checkout_dependency_map()
    partial = dict(list(pi.items())[:1])
    with pytest.raises(PartialMapping):
        plural.mark_dependent(F.bought_then_checkout_db(), "b0", "a0", partial)


def test_one_referent_cannot_fill_two_slots():
    from udrs import Atom, Clause, Component, Referent, Slot, Udrs

    u = Udrs(
        clauses=(Clause("t", nodes=("a0", "a1"), boxes=("a0", "a1")),),
        components=(
            Component(
                "a0",
                conds=(
                    Atom(
                        "introduce",
                        (Slot("alpha", Referent("X")), Slot("beta", Referent("X"))),
                    ),
                ),
            ),
            Component("a1", universe=(Referent("X"),)),
        ),
    )
    with pytest.raises(SharedResponsibilityUnsupported):
        enumerate_readings(u)
