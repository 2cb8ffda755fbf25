"""Core representation: labelled DRS fragments under a partial order.

A sentence is represented as a set of labelled boxes (components) plus
ordering facts between the labels.  Nesting of boxes in a fully specified
structure corresponds to ``<=`` between their labels, so leaving the order
partial leaves scope underspecified.  Each clause lists its components in
canonical argument order, the first one being the verb box (the lower
bound of the clause).

Boxes referenced from a distinguished condition (restrictors, scopes,
negation bodies) are stored as components too, but they are not clause
nodes; helper properties on :class:`Udrs` tell the two kinds apart.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterator, Union

from .errors import UnknownLabel

Label = str

INDIVIDUAL = "individual"
GROUP = "group"
NEUTRAL = "neutral"


def referent_sort(name: str) -> str:
    """Sort by naming convention: zeta*/xi* neutral, capitalised group, else individual."""
    if name.startswith("zeta") or name.startswith("xi"):
        return NEUTRAL
    if name[:1].isupper():
        return GROUP
    return INDIVIDUAL


@dataclass(frozen=True, order=True)
class Referent:
    name: str

    @property
    def sort(self) -> str:
        return referent_sort(self.name)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Slot:
    """An argument-slot term like alpha(X): which entity fills a verb slot is
    left open until an equation resolves it.  ``of`` is None while a plural
    pronoun's antecedent is still unknown (written alpha(?))."""

    func: str
    of: Referent | None = None

    def __str__(self) -> str:
        return f"{self.func}({self.of if self.of is not None else '?'})"


@dataclass(frozen=True, order=True)
class Unresolved:
    """The placeholder '?' of an unresolved singular pronoun."""

    def __str__(self) -> str:
        return "?"


Term = Union[Referent, Slot, Unresolved]


# --- conditions ---------------------------------------------------------------


@dataclass(frozen=True)
class Sense:
    """One meaning of an ambiguous word; may contribute extra conditions."""

    name: str
    conds: tuple["Condition", ...] = ()


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...]
    senses: tuple[Sense, ...] = ()

    @property
    def ambiguous(self) -> bool:
        return len(self.senses) > 1

    def sense_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.senses)


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class SumEq:
    """target = sum(var, licensing): the target denotes the join of all
    witnesses for `var` across the licensing duplex condition."""

    target: Referent
    var: Referent
    licensing: Label


@dataclass(frozen=True)
class Not:
    """A closed negative condition with no universe of its own (used for
    lexical preconditions)."""

    conds: tuple["Condition", ...]


@dataclass(frozen=True)
class ClauseRef:
    """An embedded clause occurring as a condition of the surrounding box."""

    clause: Label


Condition = Union[Atom, Eq, SumEq, Not, ClauseRef]


# --- distinguished conditions --------------------------------------------------


@dataclass(frozen=True)
class Impl:
    res: Label
    scope: Label


@dataclass(frozen=True)
class Quant:
    q: str
    var: Referent
    res: Label
    scope: Label


@dataclass(frozen=True)
class Neg:
    inner: Label


@dataclass(frozen=True)
class CumDuplex:
    """Polyadic duplex for cumulative readings: the restrictor pair holds the
    two noun boxes, vars are the member variables, scope is the verb box."""

    res_pair: tuple[Label, Label]
    vars: tuple[Referent, Referent]
    scope: Label


class _SelfScope:
    """Marker for a closed node: restrictor and scope are the node itself, so
    it no longer takes part in scoping."""

    _instance: "_SelfScope | None" = None

    def __new__(cls) -> "_SelfScope":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SELF"


SELF = _SelfScope()

Distinguished = Union[Impl, Quant, Neg, CumDuplex, _SelfScope, None]


@dataclass(frozen=True)
class Dependency:
    """Marks a verb box as dependent on another clause's verb box through a
    term mapping."""

    on: Label
    pi: tuple[tuple[Term, Term], ...]


# --- components / clauses / sentences ------------------------------------------


@dataclass(frozen=True)
class Component:
    """One labelled box.  `dist` holds its distinguished condition, if any;
    `tag` pins how a plural box is read ('c' collective, 'd' distributive,
    'gen' generic) when a transform has fixed that choice."""

    label: Label
    universe: tuple[Referent, ...] = ()
    conds: tuple[Condition, ...] = ()
    dist: Distinguished = None
    dep: Dependency | None = None
    tag: str | None = None

    @property
    def res(self) -> Label | None:
        d = self.dist
        if isinstance(d, (Impl, Quant)):
            return d.res
        if isinstance(d, Neg):
            return d.inner
        if d is SELF:
            return self.label
        return None

    @property
    def scope(self) -> Label | None:
        d = self.dist
        if isinstance(d, (Impl, Quant)):
            return d.scope
        if isinstance(d, Neg):
            return d.inner
        if isinstance(d, CumDuplex):
            return d.scope
        if d is SELF:
            return self.label
        return None

    @property
    def scope_bearing(self) -> bool:
        return isinstance(self.dist, (Impl, Quant, Neg, CumDuplex))

    @property
    def closed(self) -> bool:
        return self.dist is SELF

    def clause_refs(self) -> tuple[Label, ...]:
        return tuple(c.clause for c in self.conds if isinstance(c, ClauseRef))

    def group_referent(self) -> Referent | None:
        """The group/neutral referent a plural NP box introduces, if any."""
        for r in self.universe:
            if r.sort in (GROUP, NEUTRAL):
                return r
        return None


@dataclass(frozen=True)
class Clause:
    """A verb's clause: `nodes` lists the lower bound first, then the argument
    components in canonical order.  `boxes` additionally includes restrictor /
    scope / negation boxes written inside this clause."""

    label: Label
    nodes: tuple[Label, ...]
    boxes: tuple[Label, ...]
    index: str | None = None

    @property
    def lower_bound(self) -> Label:
        return self.nodes[0]


@dataclass(frozen=True)
class Udrs:
    """One sentence: its clauses (the first is the top clause), every box
    occurring in them, and the explicitly asserted ordering facts."""

    clauses: tuple[Clause, ...]
    components: tuple[Component, ...]
    order_pairs: tuple[tuple[Label, Label], ...] = ()

    @property
    def top(self) -> Label:
        return self.clauses[0].label

    @property
    def index(self) -> str | None:
        return self.clauses[0].index

    @cached_property
    def component_map(self) -> dict[Label, Component]:
        return {c.label: c for c in self.components}

    @cached_property
    def clause_map(self) -> dict[Label, Clause]:
        return {c.label: c for c in self.clauses}

    @cached_property
    def labels(self) -> frozenset[Label]:
        return frozenset(self.component_map) | frozenset(self.clause_map)

    def component(self, label: Label) -> Component:
        try:
            return self.component_map[label]
        except KeyError:
            raise UnknownLabel(f"no component labelled {label!r}") from None

    def clause(self, label: Label) -> Clause:
        try:
            return self.clause_map[label]
        except KeyError:
            raise UnknownLabel(f"no clause labelled {label!r}") from None

    @cached_property
    def clause_of_map(self) -> dict[Label, Label]:
        """Owning clause for every box label."""
        out: dict[Label, Label] = {}
        for cl in self.clauses:
            for b in cl.boxes:
                out[b] = cl.label
        return out

    def clause_of(self, label: Label) -> Clause:
        if label in self.clause_map:
            return self.clause_map[label]
        try:
            return self.clause_map[self.clause_of_map[label]]
        except KeyError:
            raise UnknownLabel(f"{label!r} does not occur in this structure") from None

    @cached_property
    def inner_boxes(self) -> dict[Label, Label]:
        """Boxes referenced from a distinguished condition, mapped to the node
        that owns them (restrictors, scopes, negation bodies)."""
        owned: dict[Label, Label] = {}
        for c in self.components:
            d = c.dist
            if isinstance(d, (Impl, Quant)):
                owned[d.res] = c.label
                owned[d.scope] = c.label
            elif isinstance(d, Neg):
                owned[d.inner] = c.label
            elif isinstance(d, CumDuplex):
                owned[d.res_pair[0]] = c.label
                owned[d.res_pair[1]] = c.label
        return owned

    def is_node(self, label: Label) -> bool:
        return any(label in cl.nodes for cl in self.clauses)

    @cached_property
    def host_box_of_clause(self) -> dict[Label, Label]:
        """For embedded clauses: the box whose conditions contain the clause."""
        out: dict[Label, Label] = {}
        for c in self.components:
            for k in c.clause_refs():
                out[k] = c.label
        return out

    @cached_property
    def structural_pairs(self) -> frozenset[tuple[Label, Label]]:
        """Ordering facts implicit in the structure itself."""
        pairs: set[tuple[Label, Label]] = set()
        for c in self.components:
            d = c.dist
            if isinstance(d, (Impl, Quant)):
                pairs.add((d.res, c.label))
                pairs.add((d.scope, c.label))
            elif isinstance(d, Neg):
                pairs.add((d.inner, c.label))
            elif isinstance(d, CumDuplex):
                pairs.add((d.res_pair[0], c.label))
                pairs.add((d.res_pair[1], c.label))
                pairs.add((d.scope, c.label))
            # an embedded clause is identified with the box holding it
            for k in c.clause_refs():
                pairs.add((k, c.label))
                pairs.add((c.label, k))
        for cl in self.clauses:
            l0 = cl.lower_bound
            pairs.add((l0, cl.label))
            for node_label in cl.nodes[1:]:
                node = self.component(node_label)
                if node.scope is not None:
                    pairs.add((l0, node.scope))
                else:
                    pairs.add((l0, node_label))
                if node.scope_bearing:
                    pairs.add((node_label, cl.label))
        return frozenset(pairs)

    @cached_property
    def order(self):  # -> order.Ord
        """The closed label order: structural facts, explicit facts, and the
        completion that ties stray labels to the sentence top."""
        from . import order as _order

        pairs = set(self.structural_pairs)
        pairs.update(self.order_pairs)
        o = _order.close(self.labels, pairs)
        stray = [a for a in sorted(self.labels) if not o.le(a, self.top)]
        if stray:
            pairs.update((a, self.top) for a in stray)
            o = _order.close(self.labels, pairs)
        return o

    def with_pairs(self, *extra: tuple[Label, Label]) -> "Udrs":
        return replace(self, order_pairs=self.order_pairs + tuple(extra))

    def potentially_scope_bearing(self, label: Label) -> bool:
        """A node whose restrictor/scope are still undefined."""
        c = self.component(label)
        return c.dist is None and self.is_node(label) and not self.is_lower_bound(label)

    def is_lower_bound(self, label: Label) -> bool:
        return any(cl.lower_bound == label for cl in self.clauses)

    def fresh_label(self, base: str) -> Label:
        if base not in self.labels:
            return base
        for i in itertools.count(2):
            cand = f"{base}{i}"
            if cand not in self.labels:
                return cand
        raise AssertionError("unreachable")

    def fresh_referent(self, base: str) -> Referent:
        used = {r.name for c in self.components for r in c.universe}
        used.update(r.name for r in self.referents_mentioned())
        if base not in used:
            return Referent(base)
        for i in itertools.count(2):
            cand = f"{base}{i}"
            if cand not in used:
                return Referent(cand)
        raise AssertionError("unreachable")

    def referents_mentioned(self) -> set[Referent]:
        out: set[Referent] = set()
        for c in self.components:
            out.update(c.universe)
            for cond in c.conds:
                out.update(condition_referents(cond))
        return out


@dataclass(frozen=True)
class Database:
    """An ordered sequence of sentences, optionally with a goal sentence."""

    sentences: tuple[Udrs, ...]
    goal: Udrs | None = None

    def all_udrs(self) -> tuple[Udrs, ...]:
        return self.sentences + ((self.goal,) if self.goal is not None else ())

    def find(self, label: Label) -> Udrs:
        for u in self.all_udrs():
            if label in u.labels:
                return u
        raise UnknownLabel(f"{label!r} does not occur in any sentence")


def as_database(obj: Udrs | Database) -> Database:
    if isinstance(obj, Database):
        return obj
    return Database(sentences=(obj,))


# --- term / condition traversal -------------------------------------------------


def term_referents(t: Term) -> tuple[Referent, ...]:
    if isinstance(t, Referent):
        return (t,)
    if isinstance(t, Slot) and t.of is not None:
        return (t.of,)
    return ()


def condition_terms(cond: Condition) -> Iterator[Term]:
    if isinstance(cond, Atom):
        yield from cond.args
        for s in cond.senses:
            for c in s.conds:
                yield from condition_terms(c)
    elif isinstance(cond, Eq):
        yield cond.lhs
        yield cond.rhs
    elif isinstance(cond, SumEq):
        yield cond.target
        yield cond.var
    elif isinstance(cond, Not):
        for c in cond.conds:
            yield from condition_terms(c)
    # ClauseRef carries no terms of its own


def condition_referents(cond: Condition) -> set[Referent]:
    out: set[Referent] = set()
    for t in condition_terms(cond):
        out.update(term_referents(t))
    return out


def box_referents(u: Udrs, label: Label, *, include_embedded: bool = True) -> set[Referent]:
    """Referents occurring in a box's conditions (not its universe); embedded
    clause content is included by default."""
    c = u.component(label)
    out: set[Referent] = set()
    for cond in c.conds:
        out.update(condition_referents(cond))
        if include_embedded and isinstance(cond, ClauseRef):
            out.update(clause_referents(u, cond.clause))
    return out


def clause_referents(u: Udrs, clause_label: Label) -> set[Referent]:
    """All referents occurring anywhere in a clause (universes and conditions)."""
    cl = u.clause(clause_label)
    out: set[Referent] = set()
    for b in cl.boxes:
        comp = u.component(b)
        out.update(comp.universe)
        out.update(box_referents(u, b))
    return out


def box_free_referents(u: Udrs, label: Label) -> set[Referent]:
    """Referents used but not declared by a box.  Embedded clause content
    counts, minus whatever the embedded clause declares itself."""
    c = u.component(label)
    out: set[Referent] = set()
    for cond in c.conds:
        if isinstance(cond, ClauseRef):
            cl = u.clause(cond.clause)
            declared = {r for b in cl.boxes for r in u.component(b).universe}
            out.update(clause_referents(u, cond.clause) - declared)
        else:
            out.update(condition_referents(cond))
    return out - set(c.universe)


# --- the public free-variable operation ----------------------------------------


def free_vars(u: Udrs, label: Label) -> frozenset[Referent]:
    """Referents that occur free in some box strictly below `label` without an
    accessible declaration below `label`."""
    if label not in u.labels:
        raise UnknownLabel(f"{label!r} does not occur in this structure")
    o = u.order
    below = [k for k in u.component_map if o.lt(k, label)]
    out: set[Referent] = set()
    for k in below:
        c = u.component(k)
        used: set[Referent] = set()
        for cnd in c.conds:
            used.update(condition_referents(cnd))
        for r in used:
            if r in c.universe:
                continue
            declared_accessibly = any(
                r in u.component(k2).universe
                for k2 in below
                if k2 != k and accessible(u, k, k2)
            )
            if not declared_accessibly:
                out.add(r)
    if label in u.component_map:
        out -= set(u.component(label).universe)
    return frozenset(out)


def weak_access_set(u: Udrs, frm: Label) -> frozenset[Label]:
    """Boxes visible from `frm`: everything above it, plus restrictors of
    duplexes whose scope lies above it."""
    o = u.order
    seen: set[Label] = set()
    frontier = [frm]
    scope_owners: dict[Label, list[Component]] = {}
    for c in u.components:
        if isinstance(c.dist, (Impl, Quant)):
            scope_owners.setdefault(c.dist.scope, []).append(c)
    while frontier:
        a = frontier.pop()
        if a in seen:
            continue
        seen.add(a)
        for b in u.labels:
            if b not in seen and o.le(a, b):
                frontier.append(b)
        for scope_label, owners in scope_owners.items():
            if o.le(a, scope_label):
                for owner in owners:
                    d = owner.dist
                    assert isinstance(d, (Impl, Quant))
                    if d.res not in seen:
                        frontier.append(d.res)
    return frozenset(seen)


def accessible(u: Udrs, frm: Label, to: Label, mode: str = "weak") -> bool:
    """Whether a referent declared at `to` is visible from `frm`.  Weak mode
    reads visibility off the current order; strong mode also accepts pairs
    that some consistent disambiguation would make visible."""
    for lbl in (frm, to):
        if lbl not in u.labels:
            raise UnknownLabel(f"{lbl!r} does not occur in this structure")
    if to in weak_access_set(u, frm):
        return True
    if mode == "weak":
        return False
    if mode != "strong":
        raise ValueError(f"unknown accessibility mode {mode!r}")
    from .order import add_constraint
    from .errors import ConstraintError

    try:
        add_constraint(u, (frm, to))
    except ConstraintError:
        return False
    return True


# --- validation -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    label: Label
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] at {self.label}: {self.message}"


KNOWN_QUANTIFIERS = ("every", "most", "few", "gen")


def _quantifier_known(q: str) -> bool:
    if q in KNOWN_QUANTIFIERS:
        return True
    if q.startswith("geq(") and q.endswith(")"):
        body = q[4:-1]
        return body.isdigit() and int(body) >= 1
    return False


def validate(obj: Udrs | Database) -> list[Violation]:
    """Full well-formedness report; an empty list means the structure is good."""
    db = as_database(obj)
    out: list[Violation] = []
    everywhere = frozenset().union(*(u.labels for u in db.all_udrs()))
    seen_tops: set[Label] = set()
    seen_labels: dict[Label, int] = {}
    for i, u in enumerate(db.all_udrs()):
        out.extend(_validate_udrs(u, everywhere))
        if u.top in seen_tops:
            out.append(Violation("database.top-clash", u.top, "two sentences share a top label"))
        seen_tops.add(u.top)
        for lbl in u.labels:
            if lbl in seen_labels and seen_labels[lbl] != i:
                out.append(
                    Violation("database.label-clash", lbl, "label reused across sentences")
                )
            seen_labels[lbl] = i
    return out


def _validate_udrs(u: Udrs, everywhere: frozenset[Label] | None = None) -> list[Violation]:
    out: list[Violation] = []
    known_afar = everywhere if everywhere is not None else u.labels

    # every referenced label must exist
    def check_ref(owner: Label, ref: Label, what: str, *, afar: bool = False) -> bool:
        if ref not in (known_afar if afar else u.labels):
            out.append(Violation("unknown-label", owner, f"{what} {ref!r} is not defined"))
            return False
        return True

    ok = True
    for c in u.components:
        d = c.dist
        if isinstance(d, (Impl, Quant)):
            ok &= check_ref(c.label, d.res, "restrictor")
            ok &= check_ref(c.label, d.scope, "scope")
        elif isinstance(d, Neg):
            ok &= check_ref(c.label, d.inner, "negation body")
        elif isinstance(d, CumDuplex):
            ok &= check_ref(c.label, d.res_pair[0], "restrictor")
            ok &= check_ref(c.label, d.res_pair[1], "restrictor")
            ok &= check_ref(c.label, d.scope, "scope")
        for k in c.clause_refs():
            if k not in u.clause_map:
                out.append(Violation("unknown-label", c.label, f"embedded clause {k!r} is not defined"))
                ok = False
        if c.dep is not None:
            ok &= check_ref(c.label, c.dep.on, "dependency target", afar=True)
        for cond in c.conds:
            if isinstance(cond, SumEq):
                ok &= check_ref(c.label, cond.licensing, "licensing label", afar=True)
    for cl in u.clauses:
        for b in cl.boxes:
            if b not in u.component_map:
                out.append(Violation("unknown-label", cl.label, f"box {b!r} is not defined"))
                ok = False
    if not ok:
        return out  # the remaining checks assume resolvable labels

    o = u.order

    for c in u.components:
        # one distinguished condition at most (an embedded clause in a node's
        # own box occupies that slot too)
        n_dist = (1 if c.dist not in (None, SELF) else 0) + (
            len(c.clause_refs()) if u.is_node(c.label) else 0
        )
        if n_dist > 1:
            out.append(
                Violation("distinguished.multiple", c.label, "more than one distinguished condition")
            )
        if isinstance(c.dist, (Impl, Quant)):
            res, scope = c.dist.res, c.dist.scope
            if res == scope:
                out.append(Violation("free-variable-constraint", c.label, "restrictor equals scope"))
            else:
                if o.le(res, scope) or o.le(scope, res):
                    out.append(
                        Violation(
                            "free-variable-constraint",
                            c.label,
                            "restrictor and scope must stay mutually unordered",
                        )
                    )
                lower = [
                    m
                    for m in sorted(u.labels)
                    if m not in (res, scope) and o.le(m, res) and o.le(m, scope)
                ]
                if lower:
                    out.append(
                        Violation(
                            "free-variable-constraint",
                            c.label,
                            f"{lower[0]!r} lies below both the restrictor and the scope",
                        )
                    )
        if isinstance(c.dist, Quant) and not _quantifier_known(c.dist.q):
            out.append(Violation("quant.unknown", c.label, f"unknown quantifier {c.dist.q!r}"))
        if isinstance(c.dist, CumDuplex):
            cl = u.clause_of(c.label)
            if c.dist.scope != cl.lower_bound:
                out.append(
                    Violation("cum.scope", c.label, "cumulative scope must be the clause's verb box")
                )
        if len(set(c.universe)) != len(c.universe):
            out.append(Violation("universe.duplicate", c.label, "referent declared twice"))
        for cond in c.conds:
            for t in condition_terms(cond):
                if isinstance(t, Slot) and t.of is not None and t.of.sort == INDIVIDUAL:
                    out.append(
                        Violation("slot.sort", c.label, f"slot term {t} needs a group or neutral referent")
                    )
            if isinstance(cond, Atom) and cond.senses:
                names = cond.sense_names()
                if len(set(names)) != len(names):
                    out.append(Violation("sense.duplicate", c.label, f"duplicate sense on {cond.pred}"))
        if c.tag is not None:
            if c.tag not in ("c", "d", "gen"):
                out.append(Violation("tag.unknown", c.label, f"unknown plural tag {c.tag!r}"))
            elif not u.potentially_scope_bearing(c.label):
                out.append(
                    Violation("tag.not-potential", c.label, "plural tag on a box that cannot take one")
                )
        for r in c.universe:
            if r.sort == NEUTRAL:
                bound = any(
                    (isinstance(cond, Eq) and cond.lhs == r) or (isinstance(cond, SumEq) and cond.target == r)
                    for cond in c.conds
                )
                if not bound:
                    out.append(
                        Violation(
                            "neutral.pronoun",
                            c.label,
                            f"neutral referent {r} must be introduced by a pronoun equation",
                        )
                    )

    for inner, owner in u.inner_boxes.items():
        if u.is_node(inner):
            out.append(Violation("inner-box.node", inner, "restrictor/scope box doubles as a clause node"))
        comp = u.component_map.get(inner)
        if comp is not None and comp.dist not in (None, SELF):
            out.append(
                Violation("inner-box.distinguished", inner, "restrictor/scope box carries a distinguished condition")
            )
    owners: dict[Label, int] = {}
    for c in u.components:
        d = c.dist
        refs: tuple[Label, ...] = ()
        if isinstance(d, (Impl, Quant)):
            refs = (d.res, d.scope)
        elif isinstance(d, Neg):
            refs = (d.inner,)
        elif isinstance(d, CumDuplex):
            refs = d.res_pair
        for ref in refs:
            owners[ref] = owners.get(ref, 0) + 1
    for ref, n in owners.items():
        if n > 1:
            out.append(Violation("inner-box.reused", ref, "box referenced by two distinguished conditions"))

    for cl in u.clauses:
        l0c = u.component(cl.lower_bound)
        if l0c.dist not in (None, SELF) or l0c.clause_refs():
            out.append(
                Violation("lower-bound.distinguished", cl.lower_bound, "verb box carries a distinguished condition")
            )
        strictly_below = [m for m in sorted(u.labels) if o.lt(m, cl.lower_bound)]
        if strictly_below:
            out.append(
                Violation(
                    "lower-bound.not-minimal",
                    cl.lower_bound,
                    f"{strictly_below[0]!r} lies strictly below the verb box",
                )
            )
        for node_label in cl.nodes[1:]:
            node = u.component(node_label)
            if node.scope_bearing and o.le(cl.label, node_label):
                out.append(
                    Violation("clause-escape", node_label, "quantifier outscopes the top of its clause")
                )
    for c in u.components:
        if c.dep is not None:
            if not u.is_lower_bound(c.label) or not _dep_target_ok(u, c):
                out.append(
                    Violation("dep.target", c.label, "dependency must link verb boxes of different clauses")
                )

    sl = u.order.semilattice_defect(u.top)
    if sl is not None:
        out.append(Violation("semilattice", sl[0], f"labels {sl[0]!r} and {sl[1]!r} have no least upper bound"))
    return out


def _dep_target_ok(u: Udrs, c: Component) -> bool:
    # the target may live in a different sentence; only check what is local
    if c.dep is None:
        return True
    if c.dep.on in u.labels:
        return u.is_lower_bound(c.dep.on) and u.clause_of(c.dep.on) is not u.clause_of(c.label)
    return True
