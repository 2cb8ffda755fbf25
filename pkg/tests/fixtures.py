"""Shared structures for the test suite.

Every builder reconstructs one English sentence or short discourse by hand
and returns a fresh structure.  Names say what the structure exercises, and
a comment gives the sentence itself.
"""

from __future__ import annotations

from udrs import (
    Atom,
    Clause,
    ClauseRef,
    Component,
    Database,
    Eq,
    Impl,
    Model,
    Neg,
    Not,
    Quant,
    Referent,
    Sense,
    Slot,
    SumEq,
    Udrs,
    Unresolved,
    entity,
)

R = Referent


# --- scope ambiguity between a universal and a negation ---------------------------
# "Everybody didn't pay attention."  Universal subject, sentential negation,
# relative scope open.  Two readings.


def negated_universal(
    prefix: str = "l",
    clause: str = "top",
    person: str = "human",
    verb: str = "pay_attention",
    ref: str = "x",
) -> Udrs:
    L = lambda s: prefix + s
    return Udrs(
        clauses=(
            Clause(
                clause,
                nodes=(L("0"), L("1"), L("2")),
                boxes=(L("0"), L("1"), L("11"), L("12"), L("2"), L("21")),
            ),
        ),
        components=(
            Component(L("0"), conds=(Atom(verb, (R(ref),)),)),
            Component(L("1"), dist=Impl(L("11"), L("12"))),
            Component(L("11"), universe=(R(ref),), conds=(Atom(person, (R(ref),)),)),
            Component(L("12")),
            Component(L("2"), dist=Neg(L("21"))),
            Component(L("21")),
        ),
    )


# the two hand-written target boxes for the ambiguous sentence
UNIVERSAL_WIDE = "[ | [x | human(x)] => [ | not [ | pay_attention(x)]]]"
NEGATION_WIDE = "[ | not [ | [x | human(x)] => [ | pay_attention(x)]]]"


# --- a relative clause under two interacting quantifiers --------------------------
# "Every professor who works with an industrial partner has at least two
# secretaries."  The indefinite inside the relative clause may not escape
# between the restrictor and scope of the subject quantifier.


def professor_with_partner() -> Udrs:
    return Udrs(
        clauses=(
            Clause(
                "l",
                nodes=("l0", "l1", "l2"),
                boxes=("l0", "l1", "l11", "l12", "l2", "l21", "l22"),
            ),
            Clause("k", nodes=("k0", "k1"), boxes=("k0", "k1")),
        ),
        components=(
            Component("l0", conds=(Atom("has", (R("x"), R("z"))),)),
            Component("l1", dist=Quant("every", R("x"), "l11", "l12")),
            Component(
                "l11",
                universe=(R("x"),),
                conds=(Atom("professor", (R("x"),)), ClauseRef("k")),
            ),
            Component("l12"),
            Component("l2", dist=Quant("geq(2)", R("z"), "l21", "l22")),
            Component("l21", universe=(R("z"),), conds=(Atom("secretary", (R("z"),)),)),
            Component("l22"),
            Component("k0", conds=(Atom("work_with", (R("x"), R("y"))),)),
            Component("k1", universe=(R("y"),), conds=(Atom("partner", (R("y"),)),)),
        ),
    )


# --- plural construal choices ------------------------------------------------------
# "The lawyers hired a secretary."  Plural subject with no construal fixed,
# indefinite object: collective, or distributive with the indefinite on
# either side of the distribution.


def lawyers_hired_secretary() -> Udrs:
    return Udrs(
        clauses=(Clause("top", nodes=("l0", "l1", "l2"), boxes=("l0", "l1", "l2")),),
        components=(
            Component("l0", conds=(Atom("hire", (Slot("alpha", R("X")), R("y"))),)),
            Component("l1", universe=(R("X"),), conds=(Atom("lawyer", (R("X"),)),)),
            Component("l2", universe=(R("y"),), conds=(Atom("secretary", (R("y"),)),)),
        ),
    )


# "The breweries supplied the inns."  Two plural arguments; cumulation turns
# them into one polyadic duplex.


def breweries_supplied_inns() -> Udrs:
    return Udrs(
        clauses=(Clause("top", nodes=("l0", "l1", "l2"), boxes=("l0", "l1", "l2")),),
        components=(
            Component(
                "l0",
                conds=(Atom("supply", (Slot("alpha", R("X")), Slot("beta", R("Y")))),),
            ),
            Component("l1", universe=(R("X"),), conds=(Atom("brewery", (R("X"),)),)),
            Component("l2", universe=(R("Y"),), conds=(Atom("inn", (R("Y"),)),)),
        ),
    )


def brewery_link_model() -> Model:
    """Three breweries, five inns, the supply relation covering both sides."""
    b1, b2, b3 = entity("b1"), entity("b2"), entity("b3")
    i1, i2, i3, i4, i5 = (entity(f"i{n}") for n in range(1, 6))
    return Model(
        ("b1", "b2", "b3", "i1", "i2", "i3", "i4", "i5"),
        {
            "brewery": [(b1,), (b2,), (b3,), (entity("b1", "b2", "b3"),)],
            "inn": [(i1,), (i2,), (i3,), (i4,), (i5,), (entity("i1", "i2", "i3", "i4", "i5"),)],
            "supply": [(b1, i1), (b2, i2), (b3, i3), (b3, i4), (b1, i5)],
        },
        name="brewery-link",
    )


def brewery_gap_model() -> Model:
    """As above but the fifth inn gets nothing — coverage fails on the right."""
    m = brewery_link_model()
    exts = dict(m.extensions)
    exts["supply"] = frozenset(
        row for row in exts["supply"] if row[1] != entity("i5")
    )
    return Model(m.atoms, exts, name="brewery-gap")


# --- a plural pronoun bound by a plural NP ------------------------------------------
# "The lawyers hired a secretary they liked."  After the pronoun is resolved
# to the lawyers, exactly five construals remain.


def lawyers_hired_liked() -> Udrs:
    return Udrs(
        clauses=(
            Clause("top", nodes=("l0", "l1", "l2"), boxes=("l0", "l1", "l2")),
            Clause("k", nodes=("k0", "k1"), boxes=("k0", "k1")),
        ),
        components=(
            Component("l0", conds=(Atom("hire", (Slot("alpha", R("X")), R("y"))),)),
            Component("l1", universe=(R("X"),), conds=(Atom("lawyer", (R("X"),)),)),
            Component(
                "l2",
                universe=(R("y"),),
                conds=(Atom("secretary", (R("y"),)), ClauseRef("k")),
            ),
            Component("k0", conds=(Atom("like", (Slot("beta", R("zeta")), R("y"))),)),
            Component(
                "k1", universe=(R("zeta"),), conds=(Eq(R("zeta"), Slot("gamma", None)),)
            ),
        ),
    )


# "Every student praised him."  A singular pronoun and a universal: binding
# the pronoun to the bound variable forces the pronoun under the scope.


def student_praised_him() -> Udrs:
    return Udrs(
        clauses=(
            Clause(
                "t", nodes=("m0", "m1", "m2"), boxes=("m0", "m1", "m11", "m12", "m2")
            ),
        ),
        components=(
            Component("m0", conds=(Atom("praise", (R("x"), R("w"))),)),
            Component("m1", dist=Impl("m11", "m12")),
            Component("m11", universe=(R("x"),), conds=(Atom("student", (R("x"),)),)),
            Component("m12"),
            Component("m2", universe=(R("w"),), conds=(Eq(R("w"), Unresolved()),)),
        ),
    )


# --- the consequence suite ---------------------------------------------------------
# "Everybody didn't sleep."  Same shape as the pay-attention sentence; built
# with a label prefix so several copies can live in one database.


def sleep_clause(prefix: str, ref: str) -> tuple[Clause, tuple[Component, ...]]:
    L = lambda s: prefix + s
    comps = (
        Component(L("0"), conds=(Atom("sleep", (R(ref),)),)),
        Component(L("1"), dist=Impl(L("11"), L("12"))),
        Component(L("11"), universe=(R(ref),), conds=(Atom("person", (R(ref),)),)),
        Component(L("12")),
        Component(L("2"), dist=Neg(L("21"))),
        Component(L("21")),
    )
    cl = Clause(
        L("c"),
        nodes=(L("0"), L("1"), L("2")),
        boxes=(L("0"), L("1"), L("11"), L("12"), L("2"), L("21")),
    )
    return cl, comps


def sleep_sentence(prefix: str, ref: str) -> Udrs:
    cl, comps = sleep_clause(prefix, ref)
    return Udrs(clauses=(cl,), components=comps)


def sleep_self_entailment_db() -> Database:
    """'Everybody didn't sleep' as both data and goal — two isomorphic copies."""
    return Database((sleep_sentence("p", "u"),), goal=sleep_sentence("q", "v"))


def everybody_was_awake() -> Udrs:
    # "Everybody was awake."
    return Udrs(
        clauses=(
            Clause("n", nodes=("n0", "n1"), boxes=("n0", "n1", "n11", "n12")),
        ),
        components=(
            Component("n0", conds=(Atom("awake", (R("w"),)),)),
            Component("n1", dist=Impl("n11", "n12")),
            Component("n11", universe=(R("w"),), conds=(Atom("person", (R("w"),)),)),
            Component("n12"),
        ),
    )


def slept_or_didnt_goal() -> Udrs:
    """'Everybody slept or everybody didn't sleep', rendered as the conditional
    'if not everybody slept then everybody didn't sleep'.  The antecedent's
    negation is pinned wide; the consequent keeps both scopings."""
    na, na_comps = sleep_clause("na", "u")
    nb, nb_comps = sleep_clause("nb", "v")
    return Udrs(
        clauses=(
            Clause("t", nodes=("t0", "t1"), boxes=("t0", "t1", "r", "s")),
            na,
            nb,
        ),
        components=(
            Component("t0"),
            Component("t1", dist=Impl("r", "s")),
            Component("r", conds=(ClauseRef("nac"),)),
            Component("s", conds=(ClauseRef("nbc"),)),
        )
        + na_comps
        + nb_comps,
        order_pairs=(("na1", "na21"),),
    )


# "If the students get 100 pounds they buy books.  The students get 100
# pounds.  |= They buy books."  The discourse-initial conditional embeds two
# clauses; the later sentences repeat them, so coindexing can mirror their
# construals.


def students_conditional_db() -> Database:
    s1 = Udrs(
        clauses=(
            Clause("l", nodes=("l0", "l1"), boxes=("l0", "l1", "l11", "l12")),
            Clause("ka", nodes=("ka0", "ka1"), boxes=("ka0", "ka1")),
            Clause("kc", nodes=("kc0", "kc1"), boxes=("kc0", "kc1")),
        ),
        components=(
            Component("l0"),
            Component("l1", dist=Impl("l11", "l12")),
            Component("l11", conds=(ClauseRef("ka"),)),
            Component("l12", conds=(ClauseRef("kc"),)),
            Component("ka0", conds=(Atom("get_hundred", (Slot("a", R("X")),)),)),
            Component("ka1", universe=(R("X"),), conds=(Atom("student", (R("X"),)),)),
            Component("kc0", conds=(Atom("buy_books", (Slot("b", R("P")),)),)),
            Component(
                "kc1", universe=(R("P"),), conds=(Eq(R("P"), Slot("g", R("X"))),)
            ),
        ),
    )
    s2 = Udrs(
        clauses=(Clause("m", nodes=("m0", "m1"), boxes=("m0", "m1")),),
        components=(
            Component("m0", conds=(Atom("get_hundred", (Slot("a2", R("Y")),)),)),
            Component("m1", universe=(R("Y"),), conds=(Atom("student", (R("Y"),)),)),
        ),
    )
    goal = Udrs(
        clauses=(Clause("n", nodes=("n0", "n1"), boxes=("n0", "n1")),),
        components=(
            Component("n0", conds=(Atom("buy_books", (Slot("b2", R("Q")),)),)),
            Component(
                "n1", universe=(R("Q"),), conds=(Eq(R("Q"), Slot("g2", R("Y"))),)
            ),
        ),
    )
    return Database((s1, s2), goal=goal)


# intended coindexing: the conditional's antecedent with the repeated
# sentence, and its consequent with the goal
STUDENTS_COINDEXES = (("ka", "m", "got"), ("kc", "n", "buy"))


# --- abstraction over a dependent referent -------------------------------------------
# "Every teacher showed a picture to a child.  They were bored."  The plural
# pronoun's antecedent is the collection of children, one per teacher.


def teachers_showed_db() -> Database:
    s1 = Udrs(
        clauses=(
            Clause(
                "t1",
                nodes=("l0", "l1", "l2", "l3"),
                boxes=("l0", "l1", "l11", "l12", "l2", "l3"),
            ),
        ),
        components=(
            Component("l0", conds=(Atom("show", (R("x"), R("y"), R("z"))),)),
            Component("l1", dist=Quant("every", R("x"), "l11", "l12")),
            Component("l11", universe=(R("x"),), conds=(Atom("teacher", (R("x"),)),)),
            Component("l12"),
            Component("l2", universe=(R("y"),), conds=(Atom("picture", (R("y"),)),)),
            Component("l3", universe=(R("z"),), conds=(Atom("child", (R("z"),)),)),
        ),
    )
    s2 = Udrs(
        clauses=(Clause("t2", nodes=("n0", "n1"), boxes=("n0", "n1")),),
        components=(
            Component("n0", conds=(Atom("bored", (R("zeta"),)),)),
            Component("n1", universe=(R("zeta"),), conds=(Eq(R("zeta"), Unresolved()),)),
        ),
    )
    return Database((s1, s2))


def classroom_model() -> Model:
    """Two teachers each show the picture to their own child; the two children
    together are bored."""
    return Model(
        ("t1", "t2", "p", "c1", "c2"),
        {
            "teacher": [(entity("t1"),), (entity("t2"),)],
            "picture": [(entity("p"),)],
            "child": [(entity("c1"),), (entity("c2"),)],
            "show": [
                (entity("t1"), entity("p"), entity("c1")),
                (entity("t2"), entity("p"), entity("c2")),
            ],
            "bored": [(entity("c1", "c2"),)],
        },
        name="classroom",
    )


def classroom_model_wrong_sum() -> Model:
    """Only the first child is bored — the abstracted total no longer matches."""
    m = classroom_model()
    exts = dict(m.extensions)
    exts["bored"] = frozenset({(entity("c1"),)})
    return Model(m.atoms, exts, name="classroom-wrong-sum")


# --- dependent verb boxes -------------------------------------------------------------
# "A man bought a book.  He checked it out."  The checkout verb is ambiguous
# between borrowing (requires not having it before) and lending out (requires
# having it); its pre-state is equated with the post-state of the buying.


def bought_then_checkout_db() -> Database:
    e1, s_r, e2, s_p = R("e1"), R("s_r"), R("e2"), R("s_p")
    X, Y, Xi, Zeta = R("X"), R("Y"), R("Xi"), R("Zeta")
    aX, bY = Slot("alpha", X), Slot("beta", Y)
    nXi, mZ = Slot("nu", Xi), Slot("mu", Zeta)
    s1 = Udrs(
        clauses=(Clause("t1", nodes=("a0", "a1", "a2"), boxes=("a0", "a1", "a2")),),
        components=(
            Component(
                "a0",
                universe=(e1, s_r),
                conds=(
                    Atom("buy", (aX, bY)),
                    Atom("have", (s_r, bY)),
                    Atom("abuts", (e1, s_r)),
                ),
            ),
            Component("a1", universe=(X,), conds=(Atom("man", (X,)),)),
            Component("a2", universe=(Y,), conds=(Atom("book", (Y,)),)),
        ),
    )
    s2 = Udrs(
        clauses=(Clause("t2", nodes=("b0", "b1", "b2"), boxes=("b0", "b1", "b2")),),
        components=(
            Component(
                "b0",
                universe=(e2, s_p),
                conds=(
                    Atom(
                        "checkout",
                        (nXi, mZ),
                        senses=(
                            Sense("borrow", (Not((Atom("have", (s_p, mZ)),)),)),
                            Sense("lend_out", (Atom("have", (s_p, mZ)),)),
                        ),
                    ),
                    Atom("abuts", (s_p, e2)),
                    Eq(s_p, s_r),
                ),
            ),
            Component("b1", universe=(Xi,), conds=(Atom("man", (Xi,)),)),
            Component("b2", universe=(Zeta,), conds=(Atom("book", (Zeta,)),)),
        ),
    )
    return Database((s1, s2))


def checkout_dependency_map() -> dict:
    return {
        Slot("nu", R("Xi")): Slot("alpha", R("X")),
        Slot("mu", R("Zeta")): Slot("beta", R("Y")),
        R("s_r"): R("s_r"),
    }


# --- one roster of sentence fixtures for blanket property tests ---------------------


def all_sentence_fixtures() -> list[tuple[str, Udrs | Database]]:
    from udrs import plural

    return [
        ("negated-universal", negated_universal()),
        ("professor-with-partner", professor_with_partner()),
        ("lawyers-hired-secretary", lawyers_hired_secretary()),
        ("breweries-cumulated", plural.cumulate(breweries_supplied_inns(), "l1", "l2")),
        ("lawyers-hired-liked", plural.resolve_pronoun(lawyers_hired_liked(), "k1", "X")),
        ("student-praised-him", plural.resolve_pronoun(student_praised_him(), "m2", "x")),
        ("sleep-disjunction-goal", slept_or_didnt_goal()),
        ("students-conditional", students_conditional_db()),
        ("teachers-showed-abstracted", plural.abstract_antecedent(teachers_showed_db(), "n1", "z", "l1")),
        ("bought-then-checkout", bought_then_checkout_db()),
    ]
