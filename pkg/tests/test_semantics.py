"""Truth in finite models: plain boxes, duplexes, cumulation, sums, bounded
consistency, and the composition route that never builds the full box."""

import pytest

import fixtures as F
import oracles as O
from udrs import (
    ConsistentWitness,
    DAtom,
    DCum,
    DIn,
    DQuant,
    DSum,
    Drs,
    EmptyAbstraction,
    Model,
    NoModelUpTo,
    QUANTIFIER_REGISTRY,
    Referent,
    SyntacticClash,
    UdrsError,
    UnboundReferent,
    box_drs,
    check_consistency,
    drs_true,
    entity,
    enumerate_readings,
    mark_dependent,
    dependent_sense_verdicts,
    parse_drs,
    plural,
    restrict_dependent,
    sweep_models,
    truth,
    verify_cumulative,
    verify_drs,
    verify_sum,
)

R = Referent


def M(**ext) -> Model:
    atoms = sorted({a for rows in ext.values() for row in rows for e in row for a in e})
    return Model(atoms, ext)


def test_atoms_and_universes_are_existential():
    m = M(dog=[(entity("d"),)], bark=[(entity("d"),)])
    assert drs_true(m, parse_drs("[x | dog(x), bark(x)]"))
    assert not drs_true(m, parse_drs("[x | dog(x), not [ | bark(x)]]"))


def test_equality_and_membership():
    m = Model(("a", "b"), {})
    assert drs_true(m, parse_drs("[x, y | x = y]"))
    d = Drs((R("x"), R("X")), (DIn(R("x"), R("X")),))
    assert drs_true(m, d)
    # membership requires a singleton on the left
    both = entity("a", "b")
    assert not verify_drs(m, {R("x"): both, R("X"): both}, Drs((), (DIn(R("x"), R("X")),)))


def test_negation_and_implication():
    m = M(dog=[(entity("d"),)], cat=[(entity("c"),)], purr=[(entity("c"),)])
    assert drs_true(m, parse_drs("[ | [x | cat(x)] => [ | purr(x)]]"))
    assert drs_true(m, parse_drs("[ | not [x | dog(x), purr(x)]]"))
    assert not drs_true(m, parse_drs("[ | [x | cat(x)] => [ | dog(x)]]"))


def test_counting_and_proportional_quantifiers():
    sheep = [(entity(f"s{i}"),) for i in range(1, 4)]
    m = Model([f"s{i}" for i in range(1, 4)], {"sheep": sheep, "shorn": sheep[:2]})
    assert drs_true(m, parse_drs("[ | [x | sheep(x)] <geq(2) x> [ | shorn(x)]]"))
    assert not drs_true(m, parse_drs("[ | [x | sheep(x)] <geq(3) x> [ | shorn(x)]]"))
    assert drs_true(m, parse_drs("[ | [x | sheep(x)] <most x> [ | shorn(x)]]"))
    assert drs_true(m, parse_drs("[ | [x | shorn(x)] <every x> [ | sheep(x)]]"))


def test_unknown_quantifier_meaning_raises():
    m = Model(("a",), {})
    with pytest.raises(UdrsError):
        drs_true(m, Drs((), (DQuant("sixish", R("x"), Drs((R("x"),)), Drs()),)))


def test_generic_meaning_is_pluggable():
    sheep = [(entity(f"s{i}"),) for i in range(1, 4)]
    m = Model([f"s{i}" for i in range(1, 4)], {"sheep": sheep, "shorn": sheep[:2]})
    d = parse_drs("[ | [x | sheep(x)] <gen x> [ | shorn(x)]]")
    assert drs_true(m, d)  # default: strict majority
    old = QUANTIFIER_REGISTRY["gen"]
    try:
        QUANTIFIER_REGISTRY["gen"] = lambda total, good: good == total
        assert not drs_true(m, d)
    finally:
        QUANTIFIER_REGISTRY["gen"] = old


def test_verify_drs_extends_partial_embeddings():
    m = M(dog=[(entity("d1"),), (entity("d2"),)], bark=[(entity("d2"),)])
    d = parse_drs("[x | dog(x), bark(x)]")
    assert verify_drs(m, {}, d)
    assert not verify_drs(m, {R("y"): entity("d1")}, parse_drs("[ | bark(y)]"))
    assert verify_drs(m, {R("y"): entity("d1")}, parse_drs("[ | dog(y)]"))


def test_cumulative_check_agrees_with_double_coverage_on_all_512_relations():
    left, right = ("b1", "b2", "b3"), ("i1", "i2", "i3")
    X, Y, x, y = R("X"), R("Y"), R("x"), R("y")
    cd = DCum(Drs((X,), ()), Drs((Y,), ()), x, y, Drs((), (DAtom("supply", (x, y)),)))
    f = {X: entity(*left), Y: entity(*right)}
    for rel in O.all_relations(left, right):
        m = Model(
            left + right,
            {"supply": {(frozenset((a,)), frozenset((b,))) for a, b in rel}},
        )
        assert verify_cumulative(m, f, cd) == O.double_coverage(rel, left, right)


def test_cumulative_check_on_the_brewery_models():
    X, Y, x, y = R("X"), R("Y"), R("x"), R("y")
    cd = DCum(
        Drs((X,), (DAtom("brewery", (X,)),)),
        Drs((Y,), (DAtom("inn", (Y,)),)),
        x,
        y,
        Drs((), (DAtom("supply", (x, y)),)),
    )
    f = {X: entity("b1", "b2", "b3"), Y: entity("i1", "i2", "i3", "i4", "i5")}
    assert verify_cumulative(F.brewery_link_model(), f, cd)
    assert not verify_cumulative(F.brewery_gap_model(), f, cd)


def test_cumulative_check_singleton_groups():
    X, Y, x, y = R("X"), R("Y"), R("x"), R("y")
    cd = DCum(Drs((X,), ()), Drs((Y,), ()), x, y, Drs((), (DAtom("supply", (x, y)),)))
    m = Model(("b", "i"), {"supply": [(entity("b"), entity("i"))]})
    assert verify_cumulative(m, {X: entity("b"), Y: entity("i")}, cd)


def test_cumulative_check_requires_assigned_groups():
    X, Y, x, y = R("X"), R("Y"), R("x"), R("y")
    cd = DCum(Drs((X,), ()), Drs((Y,), ()), x, y, Drs())
    with pytest.raises(UnboundReferent):
        verify_cumulative(Model(("a",), {}), {X: entity("a")}, cd)


def _classroom_sum() -> DSum:
    # the sum of children shown the picture, one per teacher
    return DSum(
        R("zeta"),
        R("z"),
        parse_drs("[x | teacher(x)]"),
        parse_drs("[z | child(z), show(x, y, z)]"),
    )


def test_sum_condition_collects_every_witness():
    s = _classroom_sum()
    f = {R("y"): entity("p"), R("zeta"): entity("c1", "c2")}
    assert verify_sum(F.classroom_model(), f, s)
    f_wrong = {R("y"): entity("p"), R("zeta"): entity("c1")}
    assert not verify_sum(F.classroom_model(), f_wrong, s)


def test_sum_condition_requires_some_witness():
    s = _classroom_sum()
    empty = Model(("a",), {})
    with pytest.raises(EmptyAbstraction):
        verify_sum(empty, {R("y"): entity("a"), R("zeta"): entity("a")}, s)


def test_consistency_witness_carries_a_model_and_assignment():
    v = check_consistency(parse_drs("[x | thing(x)]"))
    assert isinstance(v, ConsistentWitness)
    assert v.consistent
    assert v.model.extensions["thing"]
    assert dict(v.assignment)[ "x" ] == entity("a1")


def test_consistency_detects_syntactic_clash_without_models():
    v = check_consistency(parse_drs("[x | rain(x), not [ | rain(x)]]"))
    assert isinstance(v, SyntacticClash)
    assert not v.consistent


def test_consistency_reports_exhausted_bound():
    v = check_consistency(parse_drs("[ | [x | thing(x)] <geq(4) x> [ | thing(x)]]"))
    assert isinstance(v, NoModelUpTo)
    assert v.bound == 3
    grown = check_consistency(
        parse_drs("[ | [x | thing(x)] <geq(4) x> [ | thing(x)]]"), bound=4
    )
    assert grown.consistent


def test_model_sweep_is_deterministic_and_covers_the_signature():
    d = parse_drs("[x | dog(x), not [ | bark(x)]]")
    a = [m.extensions for m in sweep_models((d,), 2)]
    b = [m.extensions for m in sweep_models((d,), 2)]
    assert a == b
    assert any(drs_true(m, d) for m in sweep_models((d,), 2))


def test_cross_sentence_truth_threads_embeddings():
    db = plural.abstract_antecedent(F.teachers_showed_db(), "n1", "z", "l1")
    assert truth(db, F.classroom_model())
    assert not truth(db, F.classroom_model_wrong_sum())


def test_dependent_senses_get_independent_verdicts():
    db = mark_dependent(
        F.bought_then_checkout_db(), "b0", "a0", F.checkout_dependency_map()
    )
    verdicts = dependent_sense_verdicts(db, "b0")
    assert set(verdicts) == {"borrow", "lend_out"}
    assert isinstance(verdicts["borrow"], SyntacticClash)
    assert isinstance(verdicts["lend_out"], ConsistentWitness)


def test_dependency_restriction_builds_one_joint_box():
    db = mark_dependent(
        F.bought_then_checkout_db(), "b0", "a0", F.checkout_dependency_map()
    )
    u2 = db.find("b0")
    comp = u2.component("b0")
    dk = box_drs(u2, "b0", sense="borrow")
    dl = box_drs(db.find("a0"), "a0")
    merged = restrict_dependent(dk, dl, dict(comp.dep.pi))
    # the joint box holds conditions from both verbs, rewritten to shared terms
    preds = {c.pred for c in merged.conds if isinstance(c, DAtom)}
    assert "buy" in preds and "checkout" in preds


def test_dependent_verdicts_require_a_marking():
    with pytest.raises(UdrsError):
        dependent_sense_verdicts(F.bought_then_checkout_db(), "b0")
