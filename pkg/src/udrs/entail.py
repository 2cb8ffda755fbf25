"""Clause isomorphism, co-indexing, and bounded consequence over databases.

Consequence here is relative to how the hearer resolves ambiguity: the goal
follows only if every way of reading the whole database that makes the data
true makes the goal true too.  Co-indexed clauses are forced to be read the
same way, which is what licenses arguments that repeat a sentence's shape.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import readings as _readings
from . import semantics as _semantics
from .drs import Drs
from .errors import CoindexViolation, NoIsomorphism, NotAClause, UdrsError
from .structure import (
    Atom,
    Clause,
    ClauseRef,
    Component,
    CumDuplex,
    Database,
    Eq,
    Impl,
    Label,
    Neg,
    Not,
    Quant,
    Referent,
    Slot,
    SumEq,
    Udrs,
    Unresolved,
    as_database,
)


class _NoIso(Exception):
    pass


@dataclass(frozen=True)
class ClauseIso:
    """A structure-preserving correspondence between two clauses."""

    node_map: dict[Label, Label]
    ref_map: dict[Referent, Referent]
    func_map: dict[str, str]


def clause_isomorphism(obj: Udrs | Database, l: Label, k: Label) -> ClauseIso | None:
    """Match two clauses box for box, condition for condition.  Names may
    differ; everything else must line up.  Returns None when they don't."""
    db = as_database(obj)
    ul, uk = db.find(l), db.find(k)
    if l not in ul.clause_map:
        raise NotAClause(f"{l!r} is not a clause label")
    if k not in uk.clause_map:
        raise NotAClause(f"{k!r} is not a clause label")
    state = _IsoState(ul, uk)
    try:
        state.clause(ul.clause_map[l], uk.clause_map[k])
    except _NoIso:
        return None
    return ClauseIso(dict(state.node_map), dict(state.ref_map), dict(state.func_map))


class _IsoState:
    def __init__(self, ua: Udrs, ub: Udrs):
        self.ua, self.ub = ua, ub
        self.node_map: dict[Label, Label] = {}
        self.ref_map: dict[Referent, Referent] = {}
        self.ref_rev: dict[Referent, Referent] = {}
        self.func_map: dict[str, str] = {}

    def fail(self) -> None:
        raise _NoIso

    def labels(self, a: Label, b: Label) -> None:
        if self.node_map.setdefault(a, b) != b:
            self.fail()

    def refs(self, a: Referent, b: Referent) -> None:
        if a.sort != b.sort:
            self.fail()
        if self.ref_map.setdefault(a, b) != b or self.ref_rev.setdefault(b, a) != a:
            self.fail()

    def funcs(self, a: str, b: str) -> None:
        if self.func_map.setdefault(a, b) != b:
            self.fail()

    def clause(self, ca: Clause, cb: Clause) -> None:
        if len(ca.nodes) != len(cb.nodes):
            self.fail()
        self.labels(ca.label, cb.label)
        for na, nb in zip(ca.nodes, cb.nodes):
            self.box(na, nb)

    def box(self, la: Label, lb: Label) -> None:
        self.labels(la, lb)
        a, b = self.ua.component(la), self.ub.component(lb)
        if len(a.universe) != len(b.universe) or a.tag != b.tag:
            self.fail()
        for ra, rb in zip(a.universe, b.universe):
            self.refs(ra, rb)
        self.dist(a, b)
        if len(a.conds) != len(b.conds):
            self.fail()
        for ca, cb in zip(a.conds, b.conds):
            self.cond(ca, cb)

    def dist(self, a: Component, b: Component) -> None:
        da, db_ = a.dist, b.dist
        if type(da) is not type(db_):
            self.fail()
        if isinstance(da, Impl):
            self.box(da.res, db_.res)
            self.box(da.scope, db_.scope)
        elif isinstance(da, Quant):
            if da.q != db_.q:
                self.fail()
            self.refs(da.var, db_.var)
            self.box(da.res, db_.res)
            self.box(da.scope, db_.scope)
        elif isinstance(da, Neg):
            self.box(da.inner, db_.inner)
        elif isinstance(da, CumDuplex):
            self.box(da.res_pair[0], db_.res_pair[0])
            self.box(da.res_pair[1], db_.res_pair[1])
            self.refs(da.vars[0], db_.vars[0])
            self.refs(da.vars[1], db_.vars[1])
            self.labels(da.scope, db_.scope)

    def cond(self, ca, cb) -> None:
        if type(ca) is not type(cb):
            self.fail()
        if isinstance(ca, Atom):
            if ca.pred != cb.pred or len(ca.args) != len(cb.args):
                self.fail()
            if ca.sense_names() != cb.sense_names():
                self.fail()
            for ta, tb in zip(ca.args, cb.args):
                self.term(ta, tb)
            for sa, sb in zip(ca.senses, cb.senses):
                if len(sa.conds) != len(sb.conds):
                    self.fail()
                for ia, ib in zip(sa.conds, sb.conds):
                    self.cond(ia, ib)
        elif isinstance(ca, Eq):
            self.term(ca.lhs, cb.lhs)
            self.term(ca.rhs, cb.rhs)
        elif isinstance(ca, SumEq):
            self.refs(ca.target, cb.target)
            # the abstracted variable and licensing box may live in another
            # sentence; require the same names there
            if ca.var != cb.var or ca.licensing != cb.licensing:
                self.fail()
        elif isinstance(ca, Not):
            if len(ca.conds) != len(cb.conds):
                self.fail()
            for ia, ib in zip(ca.conds, cb.conds):
                self.cond(ia, ib)
        elif isinstance(ca, ClauseRef):
            ka = self.ua.clause_map.get(ca.clause)
            kb = self.ub.clause_map.get(cb.clause)
            if ka is None or kb is None:
                self.fail()
            self.clause(ka, kb)
        else:
            self.fail()

    def term(self, ta, tb) -> None:
        if type(ta) is not type(tb):
            self.fail()
        if isinstance(ta, Referent):
            self.refs(ta, tb)
        elif isinstance(ta, Slot):
            self.funcs(ta.func, tb.func)
            if (ta.of is None) != (tb.of is None):
                self.fail()
            if ta.of is not None:
                self.refs(ta.of, tb.of)
        elif isinstance(ta, Unresolved):
            pass
        else:
            self.fail()


def coindex(obj: Udrs | Database, l: Label, k: Label, index: str) -> Database:
    """Force two isomorphic clauses to be disambiguated the same way."""
    db = as_database(obj)
    if l == k:
        raise CoindexViolation("a clause cannot be co-indexed with itself")
    iso = clause_isomorphism(db, l, k)
    if iso is None:
        raise NoIsomorphism(f"{l!r} and {k!r} do not share their structure")

    def mark(u: Udrs, label: Label) -> Udrs:
        if label not in u.clause_map:
            return u
        cl = u.clause_map[label]
        if cl.index is not None and cl.index != index:
            raise CoindexViolation(
                f"{label!r} already carries index {cl.index!r}"
            )
        return replace(
            u,
            clauses=tuple(
                replace(c, index=index) if c.label == label else c for c in u.clauses
            ),
        )

    sentences = tuple(mark(mark(u, l), k) for u in db.sentences)
    goal = mark(mark(db.goal, l), k) if db.goal is not None else None
    return Database(sentences, goal)


# --- bounded consequence ---------------------------------------------------------------


@dataclass
class EntailmentReport:
    holds: bool
    bound: int
    models_checked: int
    families: int
    countermodel: _semantics.Model | None = None
    counterreading: "_readings.Reading | None" = None

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        if self.holds:
            return (
                f"entailed: every reading family survives all {self.models_checked} "
                f"models with up to {self.bound} atoms ({self.families} families)"
            )
        lines = ["not entailed; countermodel:"]
        if self.counterreading is not None:
            lines.append(f"reading: {self.counterreading.describe()}")
        if self.countermodel is not None:
            lines.append(str(self.countermodel))
        return "\n".join(lines)


def entails(
    obj: Udrs | Database, goal: Udrs | None = None, bound: int = 3
) -> EntailmentReport:
    """Does the data force the goal?  Quantifies over every model within the
    atom bound and every way of reading data and goal together (co-indexed
    clauses mirrored): wherever the data can be read true, the goal must be
    readable as true on the same embedding.

    The goal may be passed separately or carried by the database itself,
    which is how a co-indexed goal arrives."""
    db = as_database(obj)
    if goal is None:
        goal = db.goal
    if goal is None:
        raise UdrsError("nothing to prove: no goal sentence given")
    combined = Database(db.sentences + (goal,))
    families = _readings.enumerate_readings(combined)
    if not families:
        raise UdrsError("the database admits no readings at all")
    realized: list[tuple[_readings.Reading, list[Drs]]] = []
    for fam in families:
        realized.append((fam, _readings.apply_reading(combined, fam)))
    n_data = len(db.sentences)
    every_box = [d for _, ds in realized for d in ds]
    checked = 0
    for m in _semantics.sweep_models(every_box, bound):
        checked += 1
        for fam, ds in realized:
            embs: list[dict] = [{}]
            for d in ds[:n_data]:
                embs = [h for f in embs for h in _semantics.verify_embeddings(m, f, d)]
                if not embs:
                    break
            if not embs:
                continue  # this family cannot read the data true here
            if not any(_semantics.verify_drs(m, f, ds[-1]) for f in embs):
                return EntailmentReport(
                    holds=False,
                    bound=bound,
                    models_checked=checked,
                    families=len(realized),
                    countermodel=m,
                    counterreading=fam,
                )
    return EntailmentReport(
        holds=True, bound=bound, models_checked=checked, families=len(realized)
    )


def tautology(goal: Udrs, bound: int = 3) -> EntailmentReport:
    """A goal no data could fail to support: entailment from nothing."""
    return entails(Database(()), goal, bound)
