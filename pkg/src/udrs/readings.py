"""Enumerating readings and turning them into fully specified boxes.

A reading fixes, for every clause, a total order of its scoping elements
(the spine), an attachment level for every non-scoping box (its gap along
that spine), a collective/distributive/generic tag for every plural box
that feeds an argument slot, an antecedent for every unresolved pronoun,
and a sense for every ambiguous word.

Distributive and generic plurals take a spine position of their own: the
member quantification they introduce is scoping material.  Collective
plurals, definites and indefinites stay at a gap; boxes sharing a gap merge,
so their relative order never multiplies readings.

Whether a candidate respects the ordering facts is decided by addressing:
every box is assigned the coordinate of the spot where it would materialize,
and each stored fact ``a <= b`` must place a's spot inside the region b
covers.  Pronoun antecedents are checked for visibility on the same
coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .drs import (
    DAtom,
    DCum,
    DEq,
    DImpl,
    DIn,
    DNeg,
    DQuant,
    DSum,
    Drs,
    EMPTY_DRS,
)
from .errors import (
    CoindexViolation,
    NoLicensingCondition,
    ReadingMismatch,
    SharedResponsibilityUnsupported,
    UnboundReferent,
)
from .structure import (
    Atom,
    ClauseRef,
    Clause,
    Component,
    CumDuplex,
    Database,
    Eq,
    GROUP,
    Impl,
    INDIVIDUAL,
    Label,
    Neg,
    NEUTRAL,
    Not,
    Quant,
    Referent,
    Slot,
    SumEq,
    Udrs,
    Unresolved,
    as_database,
)

Addr = tuple[tuple[str, object], ...]  # steps: (clause, level) or (node, "res"/"res2")


@dataclass(frozen=True)
class Reading:
    """One complete disambiguation of a database."""

    spines: tuple[tuple[Label, tuple[Label, ...]], ...]
    gaps: tuple[tuple[Label, int], ...]
    tags: tuple[tuple[Label, tuple[str, ...]], ...]
    binds: tuple[tuple[Label, str], ...] = ()
    senses: tuple[tuple[tuple[Label, int], str], ...] = ()

    @cached_property
    def spine_map(self) -> dict[Label, tuple[Label, ...]]:
        return dict(self.spines)

    @cached_property
    def gap_map(self) -> dict[Label, int]:
        return dict(self.gaps)

    @cached_property
    def tag_map(self) -> dict[Label, tuple[str, ...]]:
        return dict(self.tags)

    @cached_property
    def bind_map(self) -> dict[Label, str]:
        return dict(self.binds)

    @cached_property
    def sense_map(self) -> dict[tuple[Label, int], str]:
        return dict(self.senses)

    def spine(self, clause: Label) -> tuple[Label, ...]:
        return self.spine_map.get(clause, ())

    def describe(self) -> str:
        bits = []
        for cl, sp in self.spines:
            if sp:
                bits.append(f"{cl}: {' > '.join(sp)}")
        for n, g in self.gaps:
            bits.append(f"{n}@{g}")
        for l0, t in self.tags:
            bits.append(f"{l0}={','.join(t)}")
        for p, r in self.binds:
            bits.append(f"{p}->{r}")
        for (lbl, i), s in self.senses:
            bits.append(f"{lbl}[{i}]~{s}")
        return "; ".join(bits) if bits else "(only reading)"


# --- per-sentence anatomy --------------------------------------------------------


@dataclass
class _Shape:
    """Everything about a sentence that choice generation needs."""

    u: Udrs
    decl_node: dict[Referent, Label]
    slot_refs: set[Referent]
    choice_nodes: list[Label]            # plural boxes whose tag is open or pinned
    # (box, referent, plural form, pinned antecedent name or None)
    pronouns: list[tuple[Label, Referent, bool, str | None]]
    ambiguous: list[tuple[Label, int, tuple[str, ...]]]


def _slot_terms_of(comp: Component) -> list[Slot]:
    out: list[Slot] = []
    for cond in comp.conds:
        if isinstance(cond, Atom):
            for a in cond.args:
                if isinstance(a, Slot) and a not in out:
                    out.append(a)
    return out


def _shape(u: Udrs) -> _Shape:
    decl_node: dict[Referent, Label] = {}
    for c in u.components:
        for r in c.universe:
            decl_node.setdefault(r, c.label)
    slot_refs: set[Referent] = set()
    for c in u.components:
        for cond in c.conds:
            for t in _cond_slots(cond):
                if t.of is not None:
                    slot_refs.add(t.of)
    choice_nodes = []
    for cl in u.clauses:
        for n in cl.nodes[1:]:
            comp = u.component(n)
            if not u.potentially_scope_bearing(n):
                continue
            g = comp.group_referent()
            if g is not None and g in slot_refs:
                choice_nodes.append(n)
    pronouns: list[tuple[Label, Referent, bool, str | None]] = []
    ambiguous: list[tuple[Label, int, tuple[str, ...]]] = []
    for c in u.components:
        for i, cond in enumerate(c.conds):
            if isinstance(cond, Eq) and isinstance(cond.lhs, Referent):
                if isinstance(cond.rhs, Slot):
                    of = cond.rhs.of
                    pronouns.append((c.label, cond.lhs, True, of.name if of else None))
                elif isinstance(cond.rhs, Unresolved):
                    pronouns.append((c.label, cond.lhs, False, None))
            if isinstance(cond, Atom) and cond.ambiguous:
                ambiguous.append((c.label, i, cond.sense_names()))
    return _Shape(u, decl_node, slot_refs, choice_nodes, pronouns, ambiguous)


def _cond_slots(cond) -> list[Slot]:
    out = []
    if isinstance(cond, Atom):
        out.extend(a for a in cond.args if isinstance(a, Slot))
        for s in cond.senses:
            for c in s.conds:
                out.extend(_cond_slots(c))
    elif isinstance(cond, Eq):
        out.extend(a for a in (cond.lhs, cond.rhs) if isinstance(a, Slot))
    elif isinstance(cond, Not):
        for c in cond.conds:
            out.extend(_cond_slots(c))
    return out


# --- candidate plans -------------------------------------------------------------


@dataclass
class _Plan:
    node_tag: dict[Label, str]
    spine: dict[Label, tuple[Label, ...]]
    gap: dict[Label, int]
    bind: dict[Label, str]
    sense: dict[tuple[Label, int], str]
    membervar: dict[Label, Referent]


def _member_vars(u: Udrs, shape: _Shape, node_tag: dict[Label, str]) -> dict[Label, Referent]:
    used = {r.name for r in u.referents_mentioned()}
    out: dict[Label, Referent] = {}
    for n in shape.choice_nodes:
        if node_tag.get(n) not in ("d", "gen"):
            continue
        g = u.component(n).group_referent()
        assert g is not None
        base = g.name.lower() if g.name[:1].isupper() else g.name + "_i"
        name = base
        k = 2
        while name in used:
            name = f"{base}{k}"
            k += 1
        used.add(name)
        out[n] = Referent(name)
    return out


def _sentence_plans(db: Database, si: int, shapes: list[_Shape]) -> list[_Plan]:
    shape = shapes[si]
    u = shape.u
    tag_options = []
    for n in shape.choice_nodes:
        fixed = u.component(n).tag
        tag_options.append([fixed] if fixed else ["c", "d"])
    plans: list[_Plan] = []
    for tag_combo in itertools.product(*tag_options):
        node_tag = dict(zip(shape.choice_nodes, tag_combo))
        membervar = _member_vars(u, shape, node_tag)
        per_clause: list[list[tuple[Label, tuple[Label, ...], dict[Label, int]]]] = []
        for cl in u.clauses:
            variants: list[tuple[Label, tuple[Label, ...], dict[Label, int]]] = []
            spine_set = [
                n
                for n in cl.nodes[1:]
                if u.component(n).scope_bearing or node_tag.get(n) in ("d", "gen")
            ]
            frees = [n for n in cl.nodes[1:] if n not in spine_set]
            for perm in itertools.permutations(sorted(spine_set)):
                for gaps in itertools.product(range(len(perm) + 1), repeat=len(frees)):
                    variants.append((cl.label, perm, dict(zip(frees, gaps))))
            per_clause.append(variants)
        for combo in itertools.product(*per_clause):
            spine = {cl: perm for cl, perm, _ in combo}
            gap: dict[Label, int] = {}
            for _, _, g in combo:
                gap.update(g)
            bind_options = [
                _bind_candidates(db, si, shapes, p, r, plural, fixed, membervar)
                for (p, r, plural, fixed) in shape.pronouns
            ]
            sense_options = [list(names) for (_, _, names) in shape.ambiguous]
            for binds in itertools.product(*bind_options):
                for senses in itertools.product(*sense_options):
                    plans.append(
                        _Plan(
                            node_tag=dict(node_tag),
                            spine=dict(spine),
                            gap=dict(gap),
                            bind={
                                p: b for (p, _, _, _), b in zip(shape.pronouns, binds)
                            },
                            sense={
                                (lbl, i): s
                                for (lbl, i, _), s in zip(shape.ambiguous, senses)
                            },
                            membervar=dict(membervar),
                        )
                    )
    return plans


def _bind_candidates(
    db: Database,
    si: int,
    shapes: list[_Shape],
    pron_label: Label,
    pron_ref: Referent,
    plural: bool,
    fixed: str | None,
    membervar: dict[Label, Referent],
) -> list[str]:
    """Possible antecedents by number; visibility is checked later on
    materialized coordinates.  A pinned antecedent narrows the candidates to
    the antecedent itself or — under a member-by-member construal of its noun
    phrase — the running member."""
    out: list[str] = []

    def fits(r: Referent) -> bool:
        if plural:
            return r.sort in (GROUP, NEUTRAL)
        return r.sort in (INDIVIDUAL, NEUTRAL)

    own = shapes[si].u
    for comp in own.components:
        for r in comp.universe:
            if r == pron_ref or comp.label == pron_label:
                continue
            if fits(r) and r.name not in out:
                out.append(r.name)
    for mv in membervar.values():
        if mv.name not in out:
            out.append(mv.name)
    for sj in range(si):
        for comp in shapes[sj].u.components:
            for r in comp.universe:
                if fits(r) and r.name not in out:
                    out.append(r.name)
    if fixed is not None:
        allowed = {fixed}
        node = shapes[si].decl_node.get(Referent(fixed))
        if node is not None and node in membervar:
            allowed.add(membervar[node].name)
        out = [n for n in out if n in allowed]
    return out


# --- addressing ------------------------------------------------------------------


@dataclass
class _Placement:
    pt: dict[object, Addr]           # box/clause labels and ("member", node)
    spine_pos: dict[Label, tuple[Label, int]]  # spine node -> (clause, position)
    spine_len: dict[Label, int]


def _addresses(u: Udrs, plan: _Plan) -> _Placement:
    pt: dict[object, Addr] = {}
    spine_pos: dict[Label, tuple[Label, int]] = {}
    spine_len: dict[Label, int] = {}

    def place(cl: Clause, host: Addr) -> None:
        pt[cl.label] = host
        spine = plan.spine.get(cl.label, ())
        spine_len[cl.label] = len(spine)

        def B(j: int) -> Addr:
            return host + ((cl.label, j),)

        for node in cl.nodes[1:]:
            if node not in spine:
                pt[node] = B(plan.gap.get(node, 0))
        for i, s in enumerate(spine, 1):
            pt[s] = B(i - 1)
            spine_pos[s] = (cl.label, i)
            d = u.component(s).dist
            if isinstance(d, (Impl, Quant)):
                pt[d.res] = B(i - 1) + ((s, "res"),)
                pt[d.scope] = B(i)
            elif isinstance(d, Neg):
                pt[d.inner] = B(i)
            elif isinstance(d, CumDuplex):
                pt[d.res_pair[0]] = B(i - 1) + ((s, "res"),)
                pt[d.res_pair[1]] = B(i - 1) + ((s, "res2"),)
            else:  # distributive/generic plural: fresh member restrictor
                pt[("member", s)] = B(i - 1) + ((s, "res"),)
        pt[cl.lower_bound] = B(len(spine))
        for b in cl.boxes:
            for k in u.component(b).clause_refs():
                place(u.clause(k), pt[b])

    place(u.clauses[0], ())
    return _Placement(pt, spine_pos, spine_len)


def _is_res_step(step: tuple[str, object]) -> bool:
    return isinstance(step[1], str)


def _in_subtree(addr: Addr, host: Addr, clause: Label, jmin: int) -> bool:
    if addr[: len(host)] != host or len(addr) <= len(host):
        return False
    step = addr[len(host)]
    return step[0] == clause and isinstance(step[1], int) and step[1] >= jmin


def _has_prefix(addr: Addr, base: Addr) -> bool:
    return addr[: len(base)] == base


def _region_contains(u: Udrs, plan: _Plan, pl: _Placement, b: Label, addr: Addr) -> bool:
    """Would `addr` end up inside the box `b` materializes as?"""
    if b in u.clause_map:
        host_box = u.host_box_of_clause.get(b)
        if host_box is None:  # the sentence's top clause covers everything
            return True
        return _region_contains(u, plan, pl, host_box, addr)
    comp = u.component(b)
    base = pl.pt[b]
    if b in pl.spine_pos:
        cl, i = pl.spine_pos[b]
        host = base[:-1]
        if _in_subtree(addr, host, cl, i):
            return True
        d = comp.dist
        res_boxes: tuple[Label, ...] = ()
        if isinstance(d, (Impl, Quant)):
            res_boxes = (d.res,)
        elif isinstance(d, CumDuplex):
            res_boxes = d.res_pair
        elif d is None:
            return _has_prefix(addr, base + ((b, "res"),))
        return any(_has_prefix(addr, pl.pt[rb]) for rb in res_boxes)
    if base and _is_res_step(base[-1]):
        return _has_prefix(addr, base)
    # a gap-level box (free node, scope, negation body, verb box): its extent
    # is the whole chain from its level inward
    host, (cl, j) = base[:-1], base[-1]
    assert isinstance(j, int)
    return _in_subtree(addr, host, cl, j)


def _visible_from(pl: _Placement, decl: Addr, at: Addr) -> bool:
    """Can a referent declared at `decl` be picked up at `at`?  Declarations
    cover their own subtree; restrictor declarations also cover the scope of
    their duplex.  Content at a gap-0 level merges into its host box, so the
    declaration is judged from where it actually surfaces."""
    surf = list(decl)
    while surf and isinstance(surf[-1][1], int) and surf[-1][1] == 0:
        surf.pop()
    if not surf:
        return True  # surfaces at the sentence's outermost box
    if _is_res_step(surf[-1]):
        if _has_prefix(at, tuple(surf)):
            return True
        host, (cl, j) = tuple(surf[:-2]), surf[-2]
        assert isinstance(j, int)
        return _in_subtree(at, host, cl, j + 1)
    host, (cl, j) = tuple(surf[:-1]), surf[-1]
    assert isinstance(j, int)
    return at == decl or _in_subtree(at, host, cl, j)


def _top_surfacing(addr: Addr) -> bool:
    """Whether a position ends up in the outermost box of its sentence, so a
    later sentence can pick its referents up."""
    return all(isinstance(j, int) and j == 0 for _, j in addr)


# --- validity of a full candidate -------------------------------------------------


def _declaring_boxes(u: Udrs, name: str) -> list[Label]:
    return [c.label for c in u.components if any(r.name == name for r in c.universe)]


def _check_db(db: Database, shapes: list[_Shape], plans: list[_Plan]) -> list[_Placement] | None:
    placements = [_addresses(s.u, p) for s, p in zip(shapes, plans)]
    for shape, plan, pl in zip(shapes, plans, placements):
        u = shape.u
        for a, b in set(u.structural_pairs) | set(u.order_pairs):
            if a == b:
                continue
            pa = pl.pt.get(a)
            if pa is None or not _region_contains(u, plan, pl, b, pa):
                return None
    for si, (shape, plan, pl) in enumerate(zip(shapes, plans, placements)):
        for pron_label, pron_ref, _plural, _fixed in shape.pronouns:
            name = plan.bind.get(pron_label)
            if name is None:
                return None
            at = pl.pt[pron_label]
            ok = False
            for node, mv in plan.membervar.items():
                if mv.name == name:
                    ok = _visible_from(pl, pl.pt[("member", node)], at)
                    break
            else:
                for decl in _declaring_boxes(shape.u, name):
                    if _visible_from(pl, pl.pt[decl], at):
                        ok = True
                        break
                if not ok:
                    for sj in range(si):
                        for decl in _declaring_boxes(shapes[sj].u, name):
                            if _top_surfacing(placements[sj].pt[decl]):
                                ok = True
                                break
                        if ok:
                            break
            if not ok:
                return None
            # a pronoun box read distributively must stand for a group
            if plan.node_tag.get(pron_label) in ("d", "gen"):
                bound_sort = INDIVIDUAL
                if not any(mv.name == name for mv in plan.membervar.values()):
                    bound_sort = Referent(name).sort
                if bound_sort == INDIVIDUAL:
                    return None
    if not _check_dependencies(db, shapes, plans):
        return None
    return placements


def _slot_tag(db: Database, shapes: list[_Shape], plans: list[_Plan], s: Slot, si: int) -> str:
    """The tag governing a slot term: the tag of the box declaring the group
    it points at (pronoun slots follow their antecedent's declaration)."""
    assert s.of is not None
    for sj, shape in enumerate(shapes):
        node = shape.decl_node.get(s.of)
        if node is not None:
            return plans[sj].node_tag.get(node, "c")
    return "c"


def _check_dependencies(db: Database, shapes: list[_Shape], plans: list[_Plan]) -> bool:
    for si, shape in enumerate(shapes):
        for comp in shape.u.components:
            if comp.dep is None:
                continue
            pi = dict(comp.dep.pi)
            for s in _slot_terms_of(comp):
                image = pi.get(s)
                if isinstance(image, Slot) and image.of is not None and s.of is not None:
                    if _slot_tag(db, shapes, plans, s, si) != _slot_tag(db, shapes, plans, image, si):
                        return False
    return True


def _check_coindexing(db: Database, shapes: list[_Shape], plans: list[_Plan]) -> bool:
    groups: dict[str, list[tuple[int, Clause]]] = {}
    for si, shape in enumerate(shapes):
        for cl in shape.u.clauses:
            if cl.index is not None:
                groups.setdefault(cl.index, []).append((si, cl))
    if all(len(g) < 2 for g in groups.values()):
        return True
    from . import entail  # local import: entail builds on readings

    for idx, members in groups.items():
        if len(members) < 2:
            continue
        (si, rep), rest = members[0], members[1:]
        for sj, other in rest:
            iso = entail.clause_isomorphism(db, rep.label, other.label)
            if iso is None:
                raise CoindexViolation(
                    f"clauses {rep.label!r} and {other.label!r} share index {idx!r} but are not isomorphic"
                )
            if not _mirrors(shapes, plans, si, rep, sj, other, iso):
                return False
    return True


def _mirrors(shapes, plans, si: int, a: Clause, sj: int, b: Clause, iso) -> bool:
    pa, pb = plans[si], plans[sj]
    sp_a = pa.spine.get(a.label, ())
    sp_b = pb.spine.get(b.label, ())
    if tuple(iso.node_map[n] for n in sp_a) != sp_b:
        return False
    for n in a.nodes[1:]:
        m = iso.node_map[n]
        if n not in sp_a and pa.gap.get(n, 0) != pb.gap.get(m, 0):
            return False
        if pa.node_tag.get(n, "c") != pb.node_tag.get(m, "c"):
            return False
    for box in a.boxes:
        mbox = iso.node_map.get(box, box)
        bind_a = pa.bind.get(box)
        if bind_a is not None:
            bind_b = pb.bind.get(mbox)
            expected = bind_a
            for node, mv in pa.membervar.items():
                if mv.name == bind_a and node in iso.node_map:
                    twin = iso.node_map[node]
                    if twin in pb.membervar:
                        expected = pb.membervar[twin].name
                    break
            else:
                r = Referent(bind_a)
                if r in iso.ref_map:
                    expected = iso.ref_map[r].name
            if bind_b != expected:
                return False
        for key, sense in pa.sense.items():
            if key[0] == box and pb.sense.get((mbox, key[1])) != sense:
                return False
    return True


# --- the public operations ---------------------------------------------------------


def _shared_slots_check(db: Database) -> None:
    for u in db.all_udrs():
        for cl in u.clauses:
            comp = u.component(cl.lower_bound)
            seen: set[Referent] = set()
            for s in _slot_terms_of(comp):
                if s.of is None:
                    continue
                if s.of in seen:
                    raise SharedResponsibilityUnsupported(
                        f"referent {s.of} fills two argument slots of {cl.lower_bound!r}"
                    )
                seen.add(s.of)


def enumerate_readings(obj: Udrs | Database) -> list[Reading]:
    """Every complete disambiguation of the database, deterministically ordered."""
    db = as_database(obj)
    _shared_slots_check(db)
    shapes = [_shape(u) for u in db.sentences]
    plan_lists = [_sentence_plans(db, si, shapes) for si in range(len(shapes))]
    out: list[Reading] = []
    for combo in itertools.product(*plan_lists):
        plans = list(combo)
        if _check_db(db, shapes, plans) is None:
            continue
        if not _check_coindexing(db, shapes, plans):
            continue
        out.append(_freeze(db, shapes, plans))
    out.sort(key=lambda r: (r.spines, r.gaps, r.tags, r.binds, r.senses))
    return out


def _freeze(db: Database, shapes: list[_Shape], plans: list[_Plan]) -> Reading:
    spines: list[tuple[Label, tuple[Label, ...]]] = []
    gaps: list[tuple[Label, int]] = []
    tags: list[tuple[Label, tuple[str, ...]]] = []
    binds: list[tuple[Label, str]] = []
    senses: list[tuple[tuple[Label, int], str]] = []
    for si, (shape, plan) in enumerate(zip(shapes, plans)):
        u = shape.u
        for cl in u.clauses:
            spines.append((cl.label, plan.spine.get(cl.label, ())))
            comp = u.component(cl.lower_bound)
            cum = next(
                (n for n in cl.nodes[1:] if isinstance(u.component(n).dist, CumDuplex)), None
            )
            if cum is not None:
                tags.append((cl.lower_bound, ("cum", cum)))
            else:
                slots = _slot_terms_of(comp)
                if slots:
                    tags.append(
                        (
                            cl.lower_bound,
                            tuple(_slot_tag(db, shapes, plans, s, si) for s in slots),
                        )
                    )
        gaps.extend(sorted(plan.gap.items()))
        binds.extend(sorted(plan.bind.items()))
        senses.extend(sorted(plan.sense.items()))
    return Reading(
        spines=tuple(spines),
        gaps=tuple(gaps),
        tags=tuple(tags),
        binds=tuple(binds),
        senses=tuple(senses),
    )


# --- extraction ---------------------------------------------------------------------


def reading_plan(u: Udrs, r: Reading) -> _Plan:
    """Reconstruct the per-sentence choice set a reading encodes."""
    return _plan_from_reading(u, _shape(u), r)


def slot_substitution(u: Udrs, plan: _Plan) -> dict[Slot, Referent]:
    """What every slot term stands for under a plan: the group itself for a
    collective tag, the member variable for a distributive/generic one, an
    explicit equation's value, or a pronoun's antecedent."""
    subst: dict[Slot, Referent] = {}
    explicit: dict[Slot, Referent] = {}
    pron_slots: set[Slot] = set()
    for c in u.components:
        for cond in c.conds:
            if isinstance(cond, Eq) and isinstance(cond.lhs, Slot) and isinstance(cond.rhs, Referent):
                explicit[cond.lhs] = cond.rhs
            if isinstance(cond, Eq) and isinstance(cond.lhs, Referent) and isinstance(cond.rhs, Slot):
                pron_slots.add(cond.rhs)
    shape = _shape(u)
    for c in u.components:
        for cond in c.conds:
            for s in _cond_slots(cond):
                if s in subst:
                    continue
                if s in explicit:
                    subst[s] = explicit[s]
                elif s.of is None or s in pron_slots:
                    name = plan.bind.get(c.label)
                    if name is None:
                        raise UnboundReferent(
                            f"pronoun slot {s} in {c.label!r} has no antecedent in this reading"
                        )
                    subst[s] = Referent(name)
                else:
                    node = shape.decl_node.get(s.of)
                    if node is not None and plan.node_tag.get(node) in ("d", "gen"):
                        subst[s] = plan.membervar[node]
                    else:
                        subst[s] = s.of
    return subst


def _plan_from_reading(u: Udrs, shape: _Shape, r: Reading) -> _Plan:
    node_tag: dict[Label, str] = {}
    for cl in u.clauses:
        comp = u.component(cl.lower_bound)
        tag = r.tag_map.get(cl.lower_bound)
        if tag is None or tag[0] == "cum":
            continue
        slots = _slot_terms_of(comp)
        if len(slots) != len(tag):
            raise ReadingMismatch(
                f"{cl.lower_bound!r} has {len(slots)} argument slots but the reading tags {len(tag)}"
            )
        for s, t in zip(slots, tag):
            if s.of is not None and s.of in shape.decl_node:
                node_tag[shape.decl_node[s.of]] = t
    for cl in u.clauses:
        sp = r.spine_map.get(cl.label)
        if sp is None:
            raise ReadingMismatch(f"the reading does not cover clause {cl.label!r}")
        for n in sp:
            if not u.component(n).scope_bearing and n not in node_tag:
                node_tag[n] = "d"
    gap = {n: g for n, g in r.gaps if n in u.labels}
    bind = {p: b for p, b in r.binds if p in u.labels}
    sense = {k: s for k, s in r.senses if k[0] in u.labels}
    plan = _Plan(
        node_tag=node_tag,
        spine={cl.label: r.spine_map.get(cl.label, ()) for cl in u.clauses},
        gap=gap,
        bind=bind,
        sense=sense,
        membervar={},
    )
    plan.membervar = _member_vars(u, shape, node_tag)
    return plan


class _Realizer:
    """Builds the fully specified box for one sentence under a plan.  Keeps
    the materialized restrictor/scope of every duplex so that later sum
    conditions can quantify over them."""

    def __init__(self, db: Database):
        self.db = db
        self.duplex_parts: dict[Label, tuple[Drs, Drs]] = {}

    def realize(self, u: Udrs, plan: _Plan) -> Drs:
        self.u = u
        self.plan = plan
        self.subst = slot_substitution(u, plan)
        return self._clause(u.clauses[0])

    def _clause(self, cl: Clause) -> Drs:
        u, plan = self.u, self.plan
        spine = plan.spine.get(cl.label, ())
        n = len(spine)
        frees = [x for x in cl.nodes[1:] if x not in spine]

        def level(j: int) -> Drs:
            acc = EMPTY_DRS
            for f in frees:
                if plan.gap.get(f, 0) == j:
                    acc = acc.merge(self._box(f))
            if j < n:
                s = spine[j]
                comp = u.component(s)
                d = comp.dist
                if isinstance(d, Impl):
                    res = self._box(d.res)
                    scope = self._box(d.scope).merge(level(j + 1))
                    self.duplex_parts[s] = (res, scope)
                    acc = acc.merge(Drs((), (DImpl(res, scope),)))
                elif isinstance(d, Quant):
                    res = self._box(d.res)
                    scope = self._box(d.scope).merge(level(j + 1))
                    self.duplex_parts[s] = (res, scope)
                    acc = acc.merge(Drs((), (DQuant(d.q, d.var, res, scope),)))
                elif isinstance(d, Neg):
                    inner = self._box(d.inner).merge(level(j + 1))
                    acc = acc.merge(Drs((), (DNeg(inner),)))
                elif isinstance(d, CumDuplex):
                    cd = DCum(
                        self._box(d.res_pair[0]),
                        self._box(d.res_pair[1]),
                        d.vars[0],
                        d.vars[1],
                        level(j + 1),
                    )
                    self.duplex_parts[s] = (cd.res1.merge(cd.res2), cd.scope)
                    acc = acc.merge(Drs((), (cd,)))
                else:  # distributive or generic plural box
                    acc = acc.merge(self._box(s))
                    g = u.component(s).group_referent()
                    if g is None:
                        raise ReadingMismatch(
                            f"the reading distributes over {s!r}, which has no group referent"
                        )
                    x = plan.membervar[s]
                    res = Drs((x,), (DIn(x, g),))
                    scope = level(j + 1)
                    self.duplex_parts[s] = (res, scope)
                    q = "gen" if plan.node_tag.get(s) == "gen" else "every"
                    acc = acc.merge(Drs((), (DQuant(q, x, res, scope),)))
            else:
                acc = acc.merge(self._box(cl.lower_bound))
            return acc

        return level(0)

    def _box(self, label: Label) -> Drs:
        u, plan = self.u, self.plan
        comp = u.component(label)
        conds: list = []
        out = Drs(comp.universe, ())
        for i, cond in enumerate(comp.conds):
            if isinstance(cond, ClauseRef):
                out = out.merge(self._clause(u.clause(cond.clause)))
            elif isinstance(cond, Atom):
                conds.extend(self._atom(label, i, cond))
            elif isinstance(cond, Eq):
                if isinstance(cond.lhs, Slot):
                    continue  # a slot-defining equation, consumed by substitution
                conds.append(DEq(self._term(label, cond.lhs), self._term(label, cond.rhs)))
            elif isinstance(cond, SumEq):
                parts = self.duplex_parts.get(cond.licensing)
                if parts is None:
                    raise NoLicensingCondition(
                        f"{cond.licensing!r} has no materialized duplex before {label!r}"
                    )
                conds.append(DSum(cond.target, cond.var, parts[0], parts[1]))
            elif isinstance(cond, Not):
                inner: list = []
                for k, c2 in enumerate(cond.conds):
                    if isinstance(c2, Atom):
                        inner.extend(self._atom(label, i, c2))
                    elif isinstance(c2, Eq):
                        inner.append(DEq(self._term(label, c2.lhs), self._term(label, c2.rhs)))
                conds.append(DNeg(Drs((), tuple(inner))))
        return out.merge(Drs((), tuple(conds)))

    def _atom(self, label: Label, idx: int, atom: Atom) -> list:
        args = tuple(self._term(label, a) for a in atom.args)
        if not atom.senses:
            return [DAtom(atom.pred, args)]
        if len(atom.senses) == 1:
            chosen = atom.senses[0]
        else:
            name = self.plan.sense.get((label, idx))
            if name is None:
                raise ReadingMismatch(f"no sense chosen for {atom.pred!r} in {label!r}")
            chosen = next(s for s in atom.senses if s.name == name)
        out = [DAtom(atom.pred, args, sense=chosen.name)]
        for c2 in chosen.conds:
            if isinstance(c2, Atom):
                out.extend(self._atom(label, idx, c2))
            elif isinstance(c2, Not):
                inner: list = []
                for c3 in c2.conds:
                    if isinstance(c3, Atom):
                        inner.extend(self._atom(label, idx, c3))
                    elif isinstance(c3, Eq):
                        inner.append(DEq(self._term(label, c3.lhs), self._term(label, c3.rhs)))
                out.append(DNeg(Drs((), tuple(inner))))
            elif isinstance(c2, Eq):
                out.append(DEq(self._term(label, c2.lhs), self._term(label, c2.rhs)))
        return out

    def _term(self, label: Label, t):
        if isinstance(t, Slot):
            if t in self.subst:
                return self.subst[t]
            raise UnboundReferent(f"slot {t} in {label!r} is not resolved by this reading")
        if isinstance(t, Unresolved):
            name = self.plan.bind.get(label)
            if name is None:
                raise UnboundReferent(f"pronoun in {label!r} has no antecedent in this reading")
            return Referent(name)
        return t


def apply_reading(obj: Udrs | Database, reading: Reading) -> list[Drs]:
    """Materialize every sentence of the database under one reading."""
    db = as_database(obj)
    realizer = _Realizer(db)
    out: list[Drs] = []
    for u in db.sentences:
        plan = _plan_from_reading(u, _shape(u), reading)
        out.append(realizer.realize(u, plan))
    return out


def drs_equivalent(a: Drs, b: Drs, bound: int = 3) -> bool:
    """Bounded semantic equivalence: no model within the size bound tells the
    two boxes apart."""
    from . import semantics

    for m in semantics.sweep_models((a, b), bound):
        if semantics.drs_true(m, a) != semantics.drs_true(m, b):
            return False
    return True
