"""Transforms that narrow how plural noun phrases and pronouns are read.

Every operator here is monotone: it returns a new structure whose reading set
is a subset of the input's, and it refuses (with a typed error) rather than
weaken or rearrange what is already there.
"""

from __future__ import annotations

from dataclasses import replace

from . import structure
from .errors import (
    ConstraintError,
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
    UnknownLabel,
    UnknownReferent,
    WrongClause,
)
from .order import add_constraint
from .structure import (
    Atom,
    Component,
    CumDuplex,
    Database,
    Dependency,
    Eq,
    GROUP,
    Impl,
    Label,
    NEUTRAL,
    Not,
    Quant,
    Referent,
    Slot,
    SumEq,
    Term,
    Udrs,
    Unresolved,
    as_database,
    condition_terms,
    referent_sort,
    validate,
)

Obj = Udrs | Database


def _rebuild(obj: Obj, old: Udrs, new: Udrs) -> Obj:
    """Swap one sentence for its transformed version, preserving input type."""
    if isinstance(obj, Udrs):
        return new
    sents = tuple(new if s is old else s for s in obj.sentences)
    goal = new if obj.goal is old else obj.goal
    return Database(sents, goal)


def _sentence_of(obj: Obj, label: Label) -> Udrs:
    if isinstance(obj, Udrs):
        if label not in obj.labels:
            raise UnknownLabel(f"{label!r} does not occur in this structure")
        return obj
    return obj.find(label)


def _check_transform(old: Obj, new: Obj) -> Obj:
    """Reject a transform that introduces fresh well-formedness violations."""
    before = {(v.code, v.label) for v in validate(old)}
    fresh = [v for v in validate(new) if (v.code, v.label) not in before]
    if fresh:
        raise ConstraintError(str(fresh[0]))
    return new


def _replace_component(u: Udrs, comp: Component) -> Udrs:
    return replace(
        u, components=tuple(comp if c.label == comp.label else c for c in u.components)
    )


# --- pinning how a plural argument distributes -----------------------------------


def _set_tag(obj: Obj, label: Label, tag: str) -> Obj:
    u = _sentence_of(obj, label)
    comp = u.component(label)
    if not u.potentially_scope_bearing(label):
        raise NotPotentiallyScopeBearing(
            f"{label!r} already carries scoping structure or is not an argument box"
        )
    if comp.group_referent() is None:
        raise NoGroupReferent(f"{label!r} introduces no group-valued referent")
    if comp.tag is not None and comp.tag != tag:
        raise TagMismatch(f"{label!r} is already pinned to {comp.tag!r}")
    new = _check_transform(u, _replace_component(u, replace(comp, tag=tag)))
    return _rebuild(obj, u, new)


def distribute(obj: Obj, label: Label) -> Obj:
    """Pin a plural argument box to its member-by-member construal."""
    return _set_tag(obj, label, "d")


def collectivize(obj: Obj, label: Label) -> Obj:
    """Pin a plural argument box to its group-as-a-whole construal."""
    return _set_tag(obj, label, "c")


def genericize(obj: Obj, label: Label) -> Obj:
    """Pin a plural argument box to a generic (typical-member) construal."""
    return _set_tag(obj, label, "gen")


# --- cumulative linking of two plural arguments -----------------------------------


def _slot_for(verb: Component, group: Referent) -> Slot:
    found = [
        t
        for cond in verb.conds
        if isinstance(cond, Atom)
        for t in cond.args
        if isinstance(t, Slot) and t.of == group
    ]
    if not found:
        raise NoGroupReferent(
            f"verb box {verb.label!r} has no argument slot over {group.name!r}"
        )
    if len({t.func for t in found}) > 1:
        raise SharedResponsibilityUnsupported(
            f"{group.name!r} fills more than one argument slot of {verb.label!r}"
        )
    return found[0]


def _fresh_member(u: Udrs, group: Referent, taken: set[str]) -> Referent:
    used = {r.name for r in u.referents_mentioned()} | taken
    base = group.name.lower() if group.name[:1].isupper() else group.name + "_i"
    name = base
    k = 2
    while name in used:
        name = f"{base}{k}"
        k += 1
    return Referent(name)


def cumulate(obj: Obj, subj: Label, objlabel: Label) -> Obj:
    """Replace two plural argument boxes of one verb with a cumulative duplex:
    each member of either group takes part in the relation with some member of
    the other, and nothing is said about who pairs with whom."""
    u = _sentence_of(obj, subj)
    cs, co = u.component(subj), u.component(objlabel)
    for lbl, c in ((subj, cs), (objlabel, co)):
        if not u.potentially_scope_bearing(lbl):
            raise NotPotentiallyScopeBearing(f"{lbl!r} cannot head a cumulative reading")
        if c.group_referent() is None:
            raise NoGroupReferent(f"{lbl!r} introduces no group-valued referent")
        if c.tag is not None:
            raise TagMismatch(f"{lbl!r} is already pinned to {c.tag!r}")
    cl = u.clause_of(subj)
    if u.clause_of(objlabel).label != cl.label:
        raise NotSameClause(
            f"{subj!r} and {objlabel!r} are arguments of different clauses"
        )
    if subj == objlabel:
        raise NotSameClause("cumulation needs two distinct argument boxes")

    gs = cs.group_referent()
    go = co.group_referent()
    assert gs is not None and go is not None
    verb = u.component(cl.lower_bound)
    slot_s = _slot_for(verb, gs)
    slot_o = _slot_for(verb, go)

    vs = _fresh_member(u, gs, set())
    vo = _fresh_member(u, go, {vs.name})
    cum_label = u.fresh_label(f"{cl.label}cum")
    cum = Component(
        label=cum_label,
        dist=CumDuplex(res_pair=(subj, objlabel), vars=(vs, vo), scope=cl.lower_bound),
    )
    verb2 = replace(verb, conds=verb.conds + (Eq(slot_s, vs), Eq(slot_o, vo)))

    nodes = [n for n in cl.nodes if n not in (subj, objlabel)]
    nodes.insert(cl.nodes.index(subj), cum_label)
    cl2 = replace(cl, nodes=tuple(nodes), boxes=cl.boxes + (cum_label,))

    new = replace(
        u,
        clauses=tuple(cl2 if c.label == cl.label else c for c in u.clauses),
        components=tuple(
            verb2 if c.label == verb.label else c for c in u.components
        )
        + (cum,),
    )
    return _rebuild(obj, u, _check_transform(u, new))


# --- pronoun resolution ------------------------------------------------------------


def _pronoun_eq(comp: Component) -> tuple[int, Eq, bool]:
    """Locate a box's unresolved pronoun equation; True means plural form."""
    for i, cond in enumerate(comp.conds):
        if isinstance(cond, Eq) and isinstance(cond.lhs, Referent):
            if isinstance(cond.rhs, Unresolved):
                return i, cond, False
            if isinstance(cond.rhs, Slot) and cond.rhs.of is None:
                return i, cond, True
    raise NotAPronoun(f"{comp.label!r} holds no unresolved pronoun equation")


def _declaring_box(u: Udrs, name: str) -> Label | None:
    for c in u.components:
        if any(r.name == name for r in c.universe):
            return c.label
    return None


def _sentence_index(db: Database, u: Udrs) -> int:
    for i, s in enumerate(db.all_udrs()):
        if s is u:
            return i
    raise AssertionError("sentence not part of its own database")


def _anchor(u: Udrs, pron: Label, below: Label) -> Label:
    """The box that must sit under the antecedent.  A pronoun inside a relative
    clause moves with the noun phrase hosting that clause, so the ordering fact
    is hoisted out to the host until pronoun and antecedent share a clause."""
    anchor = pron
    target_clause = u.clause_of(below).label
    while u.clause_of(anchor).label != target_clause:
        host = u.host_box_of_clause.get(u.clause_of(anchor).label)
        if host is None:
            break
        anchor = host
    return anchor


def resolve_pronoun(obj: Obj, pron: Label, target: str) -> Obj:
    """Bind a pronoun box's unresolved equation to a declared referent.  Within
    a sentence this also pins the pronoun's box below the antecedent's box —
    under an antecedent declared in a restrictor, below that quantifier's scope,
    which is what lets the pronoun covary."""
    db = as_database(obj)
    u = _sentence_of(obj, pron)
    comp = u.component(pron)
    idx, eq, plural_form = _pronoun_eq(comp)

    target_sort = referent_sort(target)
    if plural_form and target_sort not in (GROUP, NEUTRAL):
        raise Inaccessible(
            f"plural pronoun in {pron!r} cannot take singular {target!r} as antecedent"
        )
    if not plural_form and target_sort == GROUP:
        raise Inaccessible(
            f"singular pronoun in {pron!r} cannot take group {target!r} as antecedent"
        )

    rhs: Term = (
        Slot(eq.rhs.func, Referent(target)) if plural_form else Referent(target)
    )
    conds = list(comp.conds)
    conds[idx] = Eq(eq.lhs, rhs)
    new = _replace_component(u, replace(comp, conds=tuple(conds)))

    decl = _declaring_box(u, target)
    if decl is None:
        # antecedent must come from an earlier sentence
        for s in db.all_udrs():
            if s is u:
                break
            if _declaring_box(s, target) is not None:
                return _rebuild(obj, u, _check_transform(u, new))
        raise UnknownReferent(f"{target!r} is not declared anywhere before {pron!r}")

    owner = new.inner_boxes.get(decl)
    if owner is not None:
        holder = new.component(owner)
        if holder.res == decl and isinstance(holder.dist, (Impl, Quant)):
            below: Label | None = holder.dist.scope
        else:
            below = decl
    elif new.is_lower_bound(decl):
        below = None
    else:
        below = decl
    if below is not None and below != pron:
        anchor = _anchor(new, pron, below)
        if anchor != below:
            try:
                new = add_constraint(new, (anchor, below))
            except ConstraintError as e:
                raise Inaccessible(
                    f"{target!r} is not accessible from {pron!r}: {e}"
                ) from e
    return _rebuild(obj, u, _check_transform(u, new))


# --- summation: abstracting an antecedent out of a quantified context ---------------


def abstract_antecedent(obj: Obj, pron: Label, dep_ref: str, licensing: Label) -> Obj:
    """Resolve a pronoun to the summed-up witnesses a quantified condition
    leaves behind: the pronoun denotes the fusion of everything that plays
    `dep_ref`'s role across that quantifier.  The referent's own box is pinned
    inside the quantifier's scope, where the witnesses live."""
    db = as_database(obj)
    up = _sentence_of(obj, pron)
    comp = up.component(pron)
    idx, eq, _plural = _pronoun_eq(comp)

    ul = _sentence_of(obj, licensing)
    lic = ul.component(licensing)
    if not isinstance(lic.dist, (Impl, Quant)):
        raise NoLicensingCondition(
            f"{licensing!r} is not a conditional or quantified box"
        )
    if _sentence_index(db, ul) > _sentence_index(db, up):
        raise WrongClause(f"{licensing!r} does not precede the pronoun {pron!r}")

    decl = _declaring_box(ul, dep_ref)
    if decl is None:
        raise UnknownReferent(f"{dep_ref!r} is not declared in {licensing!r}'s sentence")
    lic_clause = ul.clause_of(licensing)
    if ul.clause_of(decl).label != lic_clause.label:
        raise WrongClause(
            f"{dep_ref!r} lives in a different clause than {licensing!r}"
        )

    scope = lic.dist.scope
    newl = ul
    if decl not in (scope, licensing) and decl not in ul.inner_boxes:
        try:
            newl = add_constraint(newl, (decl, scope))
            newl = add_constraint(newl, (scope, decl))
        except ConstraintError as e:
            raise Inaccessible(
                f"{dep_ref!r} cannot be confined to the scope of {licensing!r}: {e}"
            ) from e

    conds = list(comp.conds)
    conds[idx] = SumEq(eq.lhs, Referent(dep_ref), licensing)
    if up is ul:
        comp2 = replace(newl.component(pron), conds=tuple(conds))
        obj2 = _rebuild(obj, ul, _replace_component(newl, comp2))
    else:
        obj2 = _rebuild(obj, ul, newl)
        up2 = _sentence_of(obj2, pron)
        comp2 = replace(up2.component(pron), conds=tuple(conds))
        obj2 = _rebuild(obj2, up2, _replace_component(up2, comp2))
    _check_transform(obj, obj2)
    return obj2


# --- dependent verbs ------------------------------------------------------------------


def _atom_arg_terms(comp: Component) -> list[Term]:
    """Slot and referent terms a verb box predicates over, sense bodies included."""
    out: list[Term] = []

    def walk(conds) -> None:
        for cond in conds:
            if isinstance(cond, Atom):
                out.extend(cond.args)
                for s in cond.senses:
                    walk(s.conds)
            elif isinstance(cond, Not):
                walk(cond.conds)

    walk(comp.conds)
    seen: set[Term] = set()
    uniq = []
    for t in out:
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return uniq


def mark_dependent(db: Database, k0: Label, l0: Label, pi: dict[Term, Term]) -> Database:
    """Record that one verb box describes the same underlying happenings as an
    earlier sentence's verb box, argument for argument.  The mapping must cover
    every argument term of the dependent box."""
    if not isinstance(db, Database):
        raise WrongClause("dependent marking relates two sentences of a database")
    uk, ul = db.find(k0), db.find(l0)
    if uk is ul:
        raise WrongClause(f"{k0!r} and {l0!r} belong to the same sentence")
    if _sentence_index(db, uk) < _sentence_index(db, ul):
        raise WrongClause(f"{l0!r} comes after {k0!r}; dependency points backwards")
    for u, lbl in ((uk, k0), (ul, l0)):
        if not u.is_lower_bound(lbl):
            raise NotLowerBound(f"{lbl!r} is not a clause's verb box")

    ck, cl_ = uk.component(k0), ul.component(l0)
    mapped = dict(pi)
    own_slots = [t for t in _atom_arg_terms(ck) if isinstance(t, Slot)]
    missing = [t for t in own_slots if t not in mapped]
    if missing:
        raise PartialMapping(
            f"mapping leaves {', '.join(str(t) for t in missing)} of {k0!r} uncovered"
        )
    target_terms = set(_atom_arg_terms(cl_))
    for r in cl_.universe:
        target_terms.add(r)
    for src, dst in mapped.items():
        if src not in set(_atom_arg_terms(ck)) | set(ck.universe) and not any(
            src == t for cond in ck.conds for t in condition_terms(cond)
        ):
            raise PartialMapping(f"{src} does not occur in {k0!r}")
        if dst not in target_terms and not any(
            dst == t for cond in cl_.conds for t in condition_terms(cond)
        ):
            raise WrongClause(f"{dst} does not occur in {l0!r}")

    kc, lc = uk.clause_of(k0), ul.clause_of(l0)
    k_cum = any(isinstance(uk.component(n).dist, CumDuplex) for n in kc.nodes)
    l_cum = any(isinstance(ul.component(n).dist, CumDuplex) for n in lc.nodes)
    if k_cum != l_cum:
        raise TagMismatch(
            "one verb reads cumulatively and the other cannot mirror it"
        )

    dep = Dependency(on=l0, pi=tuple(sorted(mapped.items(), key=lambda p: str(p[0]))))
    db2 = _rebuild(db, uk, _replace_component(uk, replace(ck, dep=dep)))
    _check_transform(db, db2)
    return db2  # type: ignore[return-value]
