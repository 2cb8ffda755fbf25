"""Bounded consequence with co-indexed ambiguity: whenever the data can be
read true, the goal must be readable as true on the same embedding, for every
admissible joint reading family."""

import pytest

import fixtures as F
from udrs import (
    Atom,
    Clause,
    CoindexViolation,
    Component,
    Database,
    Impl,
    NoIsomorphism,
    Referent,
    Udrs,
    UdrsError,
    UnknownLabel,
    clause_isomorphism,
    coindex,
    entails,
    enumerate_readings,
    tautology,
)

R = Referent


def test_isomorphic_clauses_are_recognized():
    db = F.sleep_self_entailment_db()
    iso = clause_isomorphism(db, "pc", "qc")
    assert iso is not None
    assert iso.node_map["p1"] == "q1"
    assert iso.ref_map[R("u")] == R("v")


def test_structurally_different_clauses_are_not_isomorphic():
    db = Database((F.sleep_sentence("p", "u"),), goal=F.everybody_was_awake())
    assert clause_isomorphism(db, "pc", "n") is None
    with pytest.raises(NoIsomorphism):
        coindex(db, "pc", "n", "i")


def test_coindexing_is_recorded_and_cannot_be_contradicted():
    db = F.sleep_self_entailment_db()
    co = coindex(db, "pc", "qc", "same")
    assert co.sentences[0].clause("pc").index == "same"
    assert co.goal.clause("qc").index == "same"
    assert coindex(co, "pc", "qc", "same")  # same index again is fine
    with pytest.raises(CoindexViolation):
        coindex(co, "pc", "qc", "other")
    with pytest.raises(UnknownLabel):
        coindex(db, "pc", "nowhere", "i")


def test_an_ambiguous_sentence_entails_itself_only_when_coindexed():
    db = F.sleep_self_entailment_db()
    assert not entails(db)
    assert entails(coindex(db, "pc", "qc", "same"))


def test_coindexed_self_entailment_holds_across_fixtures():
    for prefix in ("p",):
        data = F.sleep_sentence(prefix, "u")
        goal = F.sleep_sentence("q", "v")
        db = coindex(Database((data,), goal=goal), prefix + "c", "qc", "shared")
        assert entails(db)


def test_excluded_middle_fails_without_coindexing():
    # each disjunct is independently ambiguous, so one family reads the two
    # occurrences apart and falsifies the whole
    report = tautology(F.slept_or_didnt_goal())
    assert not report
    assert report.countermodel is not None


def test_non_consequence_comes_with_a_countermodel():
    data = Database((F.sleep_sentence("p", "u"),))
    report = entails(data, F.everybody_was_awake())
    assert not report
    assert report.countermodel is not None
    assert report.counterreading is not None
    text = str(report)
    assert "countermodel" in text
    # the countermodel itself reads the data true and the goal false: there
    # is a person, and the goal demands every person be awake
    assert report.countermodel.extensions.get("person")
    assert not report.countermodel.extensions.get("awake", frozenset())


def test_conditional_discourse_entails_its_instance_only_under_coindexing():
    db = F.students_conditional_db()
    assert not entails(db)
    co = db
    for l, k, idx in F.STUDENTS_COINDEXES:
        co = coindex(co, l, k, idx)
    assert entails(co)


def test_coindexing_never_grows_the_family_set():
    db = F.students_conditional_db()
    co = db
    for l, k, idx in F.STUDENTS_COINDEXES:
        co = coindex(co, l, k, idx)
    plain = Database(db.sentences + (db.goal,))
    indexed = Database(co.sentences + (co.goal,))
    assert len(enumerate_readings(indexed)) <= len(enumerate_readings(plain))


def test_entailment_is_stable_under_extra_premises():
    db = coindex(F.sleep_self_entailment_db(), "pc", "qc", "same")
    extra = F.everybody_was_awake()
    bigger = Database((db.sentences[0], extra), goal=db.goal)
    assert entails(bigger)


def test_valid_goal_is_a_tautology():
    # "every sleeper sleeps"
    goal = Udrs(
        clauses=(Clause("t", nodes=("g0", "g1"), boxes=("g0", "g1", "g11", "g12")),),
        components=(
            Component("g0"),
            Component("g1", dist=Impl("g11", "g12")),
            Component("g11", universe=(R("x"),), conds=(Atom("sleep", (R("x"),)),)),
            Component("g12", conds=(Atom("sleep", (R("x"),)),)),
        ),
    )
    report = tautology(goal)
    assert report
    assert str(report).startswith("entailed")
    assert report.models_checked > 0


def test_goal_must_come_from_somewhere():
    with pytest.raises(UdrsError):
        entails(Database((F.sleep_sentence("p", "u"),)))


def test_report_truthiness_matches_the_verdict():
    db = F.sleep_self_entailment_db()
    assert bool(entails(coindex(db, "pc", "qc", "same"))) is True
    assert bool(entails(db)) is False
