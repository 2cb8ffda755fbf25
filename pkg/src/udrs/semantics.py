"""Finite models and everything evaluated against them: static truth of a
fully specified box, composition-driven truth of an underspecified structure
under one reading, bounded model sweeps, consistency verdicts, and the
restricted-box construction for dependent verb boxes.

Entities are nonempty sets of atoms; the join of two entities is their union,
so groups and their members live in one domain.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from . import readings as _readings
from .drs import (
    DAtom,
    DCum,
    DEq,
    DImpl,
    DIn,
    DNeg,
    DQuant,
    DSum,
    DTerm,
    Drs,
    DrsCond,
    atom_signature,
    free_drs_referents,
    slot_terms,
)
from .errors import (
    ConstraintError,
    EmptyAbstraction,
    NoLicensingCondition,
    UdrsError,
    UnboundReferent,
)
from .structure import (
    Atom,
    Clause,
    ClauseRef,
    CumDuplex,
    Database,
    Eq,
    GROUP,
    Impl,
    INDIVIDUAL,
    Label,
    Neg,
    Not,
    Quant,
    Referent,
    Slot,
    SumEq,
    Udrs,
    as_database,
)

Entity = frozenset[str]


def join(a: Entity, b: Entity) -> Entity:
    """The semilattice sum of two entities."""
    return a | b


def entity(*atoms: str) -> Entity:
    return frozenset(atoms)


def _entity_str(e: Entity) -> str:
    return "+".join(sorted(e))


class Model:
    """A finite model: atoms, the entities built from them, and extensions
    keyed by predicate (or predicate.sense for disambiguated atoms)."""

    def __init__(
        self,
        atoms: Iterable[str],
        extensions: Mapping[str, Iterable[tuple[Entity, ...]]] | None = None,
        name: str = "",
    ):
        self.atoms = tuple(atoms)
        self.name = name
        self.extensions: dict[str, frozenset[tuple[Entity, ...]]] = {}
        for key, rows in (extensions or {}).items():
            self.extensions[key] = frozenset(tuple(row) for row in rows)
        self._entities: list[Entity] | None = None

    @property
    def entities(self) -> list[Entity]:
        if self._entities is None:
            out = []
            for r in range(1, len(self.atoms) + 1):
                for combo in itertools.combinations(sorted(self.atoms), r):
                    out.append(frozenset(combo))
            self._entities = out
        return self._entities

    @property
    def singletons(self) -> list[Entity]:
        return [frozenset((a,)) for a in sorted(self.atoms)]

    def holds(self, key: str, args: tuple[Entity, ...]) -> bool:
        return args in self.extensions.get(key, frozenset())

    def __str__(self) -> str:
        lines = [f"atoms: {' '.join(self.atoms)}"]
        for key in sorted(self.extensions):
            rows = sorted(
                self.extensions[key],
                key=lambda row: tuple(_entity_str(e) for e in row),
            )
            body = ", ".join("(" + ", ".join(_entity_str(e) for e in row) + ")" for row in rows)
            lines.append(f"{key}: {{{body}}}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        label = self.name or f"{len(self.atoms)} atoms"
        return f"<Model {label}>"


# --- quantifier meanings -----------------------------------------------------------

QUANTIFIER_REGISTRY: dict[str, Callable[[int, int], bool]] = {
    "every": lambda total, good: good == total,
    "most": lambda total, good: 2 * good > total,
    "few": lambda total, good: 2 * good < total,
    # a generic claim defaults to a majority-of-cases reading
    "gen": lambda total, good: 2 * good > total,
}

_GEQ = re.compile(r"geq\((\d+)\)\Z")


def quantifier_test(q: str) -> Callable[[int, int], bool]:
    if q in QUANTIFIER_REGISTRY:
        return QUANTIFIER_REGISTRY[q]
    m = _GEQ.match(q)
    if m:
        n = int(m.group(1))
        return lambda total, good: good >= n
    raise UdrsError(f"no meaning registered for quantifier {q!r}")


# --- static verification of fully specified boxes ----------------------------------


def _pool(m: Model, sort: str) -> list[Entity]:
    if sort == INDIVIDUAL:
        return m.singletons
    return m.entities


def _term_pool(m: Model, t: DTerm) -> list[Entity]:
    if isinstance(t, Referent):
        return _pool(m, t.sort)
    return m.entities  # an unresolved slot may stand for anything


def _extensions(
    m: Model, f: Mapping[DTerm, Entity], need: list[DTerm]
) -> Iterator[dict[DTerm, Entity]]:
    pools = [_term_pool(m, t) for t in need]
    for combo in itertools.product(*pools):
        h = dict(f)
        h.update(zip(need, combo))
        yield h


def _value(f: Mapping[DTerm, Entity], t: DTerm) -> Entity:
    try:
        return f[t]
    except KeyError:
        raise UnboundReferent(f"{t} has no value in this embedding") from None


def verify_drs(m: Model, f: Mapping[DTerm, Entity], k: Drs, *, close_free: bool = False) -> bool:
    """Is there an extension of `f` over the box's universe satisfying all its
    conditions?  With `close_free`, free referents and unresolved slots are
    existentially closed too."""
    need: list[DTerm] = list(k.universe)
    if close_free:
        frees = sorted(free_drs_referents(k) - set(k.universe), key=lambda r: r.name)
        need += [r for r in frees if r not in f]
        need += [s for s in sorted(slot_terms(k), key=str) if s not in f]
    for h in _extensions(m, f, need):
        if all(_cond(m, h, c) for c in k.conds):
            return True
    return False


def verify_embeddings(m: Model, f: Mapping[DTerm, Entity], k: Drs) -> list[dict[DTerm, Entity]]:
    """All verifying extensions of `f` over the box's universe and its free
    variables — the embeddings a later sentence can pick up."""
    frees = sorted(free_drs_referents(k) - set(k.universe), key=lambda r: r.name)
    need: list[DTerm] = list(k.universe)
    need += [r for r in frees if r not in f]
    need += [s for s in sorted(slot_terms(k), key=str) if s not in f]
    return [h for h in _extensions(m, f, need) if all(_cond(m, h, c) for c in k.conds)]


def _cond(m: Model, f: Mapping[DTerm, Entity], c: DrsCond) -> bool:
    if isinstance(c, DAtom):
        return m.holds(c.key, tuple(_value(f, a) for a in c.args))
    if isinstance(c, DEq):
        return _value(f, c.lhs) == _value(f, c.rhs)
    if isinstance(c, DIn):
        mem, grp = _value(f, c.member), _value(f, c.group)
        return len(mem) == 1 and mem <= grp
    if isinstance(c, DNeg):
        return not verify_drs(m, f, c.inner)
    if isinstance(c, DImpl):
        return all(
            verify_drs(m, h, c.scope)
            for h in _extensions(m, f, list(c.res.universe))
            if all(_cond(m, h, rc) for rc in c.res.conds)
        )
    if isinstance(c, DQuant):
        test = quantifier_test(c.q)
        total = good = 0
        for h in _extensions(m, f, list(c.res.universe)):
            if not all(_cond(m, h, rc) for rc in c.res.conds):
                continue
            total += 1
            if verify_drs(m, h, c.scope):
                good += 1
        return test(total, good)
    if isinstance(c, DCum):
        for h in _extensions(m, f, list(c.res1.universe) + list(c.res2.universe)):
            if not all(_cond(m, h, rc) for rc in c.res1.conds + c.res2.conds):
                continue
            if verify_cumulative(m, h, c):
                return True
        return False
    if isinstance(c, DSum):
        try:
            return verify_sum(m, f, c)
        except EmptyAbstraction:
            return False
    raise UdrsError(f"cannot evaluate condition {c!r}")


def verify_cumulative(m: Model, f: Mapping[DTerm, Entity], cd: DCum) -> bool:
    """Double coverage: every member of either group takes part in the scope
    with some member of the other group.  `f` must already assign the groups."""
    g1 = _group_of(f, cd.res1, cd.var1)
    g2 = _group_of(f, cd.res2, cd.var2)
    m1 = [frozenset((a,)) for a in sorted(g1)]
    m2 = [frozenset((b,)) for b in sorted(g2)]

    def pair_ok(a: Entity, b: Entity) -> bool:
        h = dict(f)
        h[cd.var1] = a
        h[cd.var2] = b
        return verify_drs(m, h, cd.scope)

    return all(any(pair_ok(a, b) for b in m2) for a in m1) and all(
        any(pair_ok(a, b) for a in m1) for b in m2
    )


def _group_of(f: Mapping[DTerm, Entity], res: Drs, var: Referent) -> Entity:
    for r in res.universe:
        if r != var and r in f:
            return f[r]
    raise UnboundReferent(f"no group value for the restrictor of {var}")


def verify_sum(m: Model, f: Mapping[DTerm, Entity], s: DSum) -> bool:
    """Does the target equal the join of every witness the duplex admits for
    the abstracted variable?  Raises when there is no witness at all."""
    witnesses: list[Entity] = []
    res_rest = [r for r in s.res.universe if r != s.var]
    scope2 = Drs(tuple(r for r in s.scope.universe if r != s.var), s.scope.conds)
    for b in _pool(m, s.var.sort):
        pinned = dict(f)
        pinned[s.var] = b
        found = False
        for h in _extensions(m, pinned, res_rest):
            if all(_cond(m, h, rc) for rc in s.res.conds) and verify_drs(m, h, scope2):
                found = True
                break
        if found:
            witnesses.append(b)
    if not witnesses:
        raise EmptyAbstraction(f"nothing witnesses {s.var} in {s.res} => {s.scope}")
    total = witnesses[0]
    for w in witnesses[1:]:
        total = join(total, w)
    return _value(f, s.target) == total


def drs_true(m: Model, d: Drs) -> bool:
    """Truth with free variables and unresolved slots closed existentially."""
    return verify_drs(m, {}, d, close_free=True)


# --- bounded model sweeps ------------------------------------------------------------


def _cond_kinds(d: Drs) -> set[type]:
    kinds: set[type] = set()

    def walk(box: Drs) -> None:
        for c in box.conds:
            kinds.add(type(c))
            for sub in _subboxes(c):
                walk(sub)

    walk(d)
    return kinds


def _subboxes(c: DrsCond) -> tuple[Drs, ...]:
    if isinstance(c, DNeg):
        return (c.inner,)
    if isinstance(c, (DImpl, DQuant)):
        return (c.res, c.scope)
    if isinstance(c, DCum):
        return (c.res1, c.res2, c.scope)
    if isinstance(c, DSum):
        return (c.res, c.scope)
    return ()


def _needs_groups(drss: Iterable[Drs]) -> bool:
    from .drs import drs_referents

    for d in drss:
        if slot_terms(d):
            return True
        if any(r.sort != INDIVIDUAL for r in drs_referents(d)):
            return True
        if _cond_kinds(d) & {DIn, DCum, DSum}:
            return True
    return False


def sweep_models(
    drss: Iterable[Drs],
    bound: int,
    *,
    limit: int = 200_000,
    samples: int = 4000,
    seed: int = 0xC0FFEE,
) -> Iterator[Model]:
    """Models over 1..bound atoms whose extensions cover the predicates the
    given boxes mention.  Exhaustive while the space stays small, otherwise a
    seeded sample — deterministic either way."""
    drss = list(drss)
    sig: dict[str, int] = {}
    for d in drss:
        sig.update(atom_signature(d))
    keys = sorted(sig)
    grouped = _needs_groups(drss)
    for n in range(1, bound + 1):
        atoms = tuple(f"a{i}" for i in range(1, n + 1))
        probe = Model(atoms)
        pool = probe.singletons if not grouped else probe.entities
        spaces = {k: list(itertools.product(pool, repeat=sig[k])) for k in keys}
        sizes = [len(spaces[k]) for k in keys]
        total = math.prod(1 << s for s in sizes) if all(s <= 24 for s in sizes) else None
        if total is not None and total <= limit:
            for masks in itertools.product(*(range(1 << s) for s in sizes)):
                ext = {
                    k: [row for j, row in enumerate(spaces[k]) if mask >> j & 1]
                    for k, mask in zip(keys, masks)
                }
                yield Model(atoms, ext, name=f"n{n}")
        else:
            rng = random.Random(seed * 31 + n)
            for i in range(samples):
                ext = {}
                for k in keys:
                    space = spaces[k]
                    bits = rng.getrandbits(len(space)) if space else 0
                    ext[k] = [row for j, row in enumerate(space) if bits >> j & 1]
                yield Model(atoms, ext, name=f"n{n}s{i}")


# --- consistency ---------------------------------------------------------------------


@dataclass(frozen=True)
class ConsistentWitness:
    model: Model
    assignment: tuple[tuple[str, Entity], ...] = ()

    @property
    def consistent(self) -> bool:
        return True

    def __str__(self) -> str:
        lines = ["consistent; witness:"]
        lines.append(str(self.model))
        if self.assignment:
            lines.append(
                "under "
                + ", ".join(f"{v} = {_entity_str(e)}" for v, e in self.assignment)
            )
        return "\n".join(lines)


@dataclass(frozen=True)
class NoModelUpTo:
    bound: int

    @property
    def consistent(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"no model with up to {self.bound} atoms satisfies the box"


@dataclass(frozen=True)
class SyntacticClash:
    detail: str

    @property
    def consistent(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"inconsistent without model search: {self.detail}"


Verdict = ConsistentWitness | NoModelUpTo | SyntacticClash


def _term_key(t: DTerm) -> tuple:
    if isinstance(t, Referent):
        return ("r", t.name)
    return ("s", t.func, t.of.name if t.of else "?")


def _congruence_clash(d: Drs) -> str | None:
    """Equalities at the top level propagate into atom arguments; a positive
    and a negative occurrence of the same (up to equality) atom is a clash no
    model can repair."""
    parent: dict[tuple, tuple] = {}

    def find(x: tuple) -> tuple:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: tuple, b: tuple) -> None:
        parent[find(a)] = find(b)

    pos: list[DAtom] = []
    neg: list[DAtom] = []
    diseq: list[tuple[DTerm, DTerm]] = []
    for c in d.conds:
        if isinstance(c, DEq):
            union(_term_key(c.lhs), _term_key(c.rhs))
        elif isinstance(c, DAtom):
            pos.append(c)
        elif isinstance(c, DNeg) and not c.inner.universe:
            for ic in c.inner.conds:
                if isinstance(ic, DAtom):
                    neg.append(ic)
                elif isinstance(ic, DEq):
                    diseq.append((ic.lhs, ic.rhs))

    def canon(a: DAtom) -> tuple:
        return (a.key, tuple(find(_term_key(t)) for t in a.args))

    positive = {canon(a): a for a in pos}
    for a in neg:
        if canon(a) in positive:
            return f"{positive[canon(a)]} is asserted but {a} is denied"
    for lhs, rhs in diseq:
        if find(_term_key(lhs)) == find(_term_key(rhs)):
            return f"{lhs} and {rhs} are identified yet required to differ"
    return None


def _is_flat(d: Drs) -> bool:
    for c in d.conds:
        if isinstance(c, (DAtom, DEq, DIn)):
            continue
        if isinstance(c, DNeg):
            if c.inner.universe or not all(
                isinstance(ic, (DAtom, DEq, DIn)) for ic in c.inner.conds
            ):
                return False
            continue
        return False
    return True


def _flat_witness(d: Drs, bound: int) -> ConsistentWitness | None:
    """Exhaustive assignment search for boxes without embedded quantification:
    pick entity values for every variable, read the positive atoms off as the
    model, and check nothing denied sneaks in."""
    vars_: list[DTerm] = list(d.universe)
    vars_ += sorted(free_drs_referents(d) - set(d.universe), key=lambda r: r.name)
    vars_ += sorted(slot_terms(d), key=str)
    for n in range(1, bound + 1):
        m0 = Model(tuple(f"a{i}" for i in range(1, n + 1)))
        pools = [_term_pool(m0, t) for t in vars_]
        for combo in itertools.product(*pools):
            env = dict(zip(vars_, combo))
            ext: dict[str, set[tuple[Entity, ...]]] = {}
            ok = True
            for c in d.conds:
                if isinstance(c, DAtom):
                    ext.setdefault(c.key, set()).add(tuple(env[t] for t in c.args))
                elif isinstance(c, DEq):
                    ok &= env[c.lhs] == env[c.rhs]
                elif isinstance(c, DIn):
                    ok &= len(env[c.member]) == 1 and env[c.member] <= env[c.group]
                if not ok:
                    break
            if not ok:
                continue
            for c in d.conds:
                if not isinstance(c, DNeg):
                    continue
                for ic in c.inner.conds:
                    if isinstance(ic, DAtom):
                        row = tuple(env[t] for t in ic.args)
                        ok &= row not in ext.get(ic.key, set())
                    elif isinstance(ic, DEq):
                        ok &= env[ic.lhs] != env[ic.rhs]
                    elif isinstance(ic, DIn):
                        ok &= not (
                            len(env[ic.member]) == 1 and env[ic.member] <= env[ic.group]
                        )
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                model = Model(m0.atoms, {k: list(v) for k, v in ext.items()}, name=f"n{n}")
                assignment = tuple((str(t), env[t]) for t in vars_)
                return ConsistentWitness(model, assignment)
    return None


def check_consistency(d: Drs, bound: int = 3) -> Verdict:
    """Three staged routes: a syntactic clash needs no models at all; a flat
    box gets an exact assignment search; anything else falls back to a bounded
    sweep."""
    clash = _congruence_clash(d)
    if clash is not None:
        return SyntacticClash(clash)
    if _is_flat(d):
        w = _flat_witness(d, bound)
        return w if w is not None else NoModelUpTo(bound)
    for m in sweep_models((d,), bound):
        if drs_true(m, d):
            return ConsistentWitness(m)
    return NoModelUpTo(bound)


# --- composition-driven evaluation of a structure under one reading ------------------


class Denoter:
    """Evaluates sentences by walking the underspecified structure directly:
    each clause is a chain of levels (a spine), every level filters the
    embeddings coming from outside, and embedded clauses compose into the box
    that carries them.  This never builds the fully specified box."""

    def __init__(self, obj: Udrs | Database, reading: "_readings.Reading", m: Model):
        self.db = as_database(obj)
        self.m = m
        self.reading = reading
        self.ctx: dict[Label, tuple] = {}
        for u in self.db.all_udrs():
            plan = _readings.reading_plan(u, reading)
            self.ctx[u.top] = (u, plan, _readings.slot_substitution(u, plan))
        # licensing label -> how to re-run its duplex for sum conditions
        self.duplex: dict[Label, tuple] = {}

    def _of(self, u: Udrs) -> tuple:
        return self.ctx[u.top]

    def sentence(self, u: Udrs, f: Mapping[DTerm, Entity]) -> list[dict[DTerm, Entity]]:
        return self.stage(u, u.clauses[0], 0, dict(f))

    # one level of one clause: the free boxes parked here, then the spine node
    def stage(self, u: Udrs, cl: Clause, j: int, f: dict[DTerm, Entity]) -> list[dict]:
        _, plan, _ = self._of(u)
        spine = plan.spine.get(cl.label, ())
        n = len(spine)
        frees = [
            b
            for b in cl.nodes[1:]
            if b not in spine and plan.gap.get(b, 0) == j
        ]
        boxes = list(frees) + ([cl.lower_bound] if j == n else [])
        embs = self.boxes(u, boxes, f)
        if j == n:
            return embs
        s = spine[j]
        comp = u.component(s)
        d = comp.dist
        out: list[dict] = []
        for g in embs:
            if isinstance(d, Impl):
                self.duplex[s] = ("box", u, cl, j, d.res, d.scope)
                if all(
                    self._scope_sat(u, cl, j, d.scope, h)
                    for h in self.boxes(u, [d.res], g)
                ):
                    out.append(g)
            elif isinstance(d, Quant):
                self.duplex[s] = ("box", u, cl, j, d.res, d.scope)
                test = quantifier_test(d.q)
                resembs = self.boxes(u, [d.res], g)
                good = sum(
                    1 for h in resembs if self._scope_sat(u, cl, j, d.scope, h)
                )
                if test(len(resembs), good):
                    out.append(g)
            elif isinstance(d, Neg):
                if not self._scope_sat(u, cl, j, d.inner, g):
                    out.append(g)
            elif isinstance(d, CumDuplex):
                for h in self.boxes(u, list(d.res_pair), g):
                    if self._cum_ok(u, cl, j, d, h):
                        out.append(h)
                        break
            else:  # a plural box read member by member
                grp = comp.group_referent()
                assert grp is not None
                mv = plan.membervar[s]
                self.duplex[s] = ("member", u, cl, j, grp, mv)
                test = quantifier_test(
                    "gen" if plan.node_tag.get(s) == "gen" else "every"
                )
                for h in self.boxes(u, [s], g):
                    members = [frozenset((a,)) for a in sorted(h[grp])]
                    good = sum(
                        1
                        for a in members
                        if self.stage(u, cl, j + 1, {**h, mv: a})
                    )
                    if test(len(members), good):
                        out.append(h)
        return out

    def _scope_sat(self, u: Udrs, cl: Clause, j: int, scope_box: Label, h: dict) -> bool:
        for h2 in self.boxes(u, [scope_box], h):
            if self.stage(u, cl, j + 1, h2):
                return True
        return False

    def _cum_ok(self, u: Udrs, cl: Clause, j: int, d: CumDuplex, h: dict) -> bool:
        g1 = u.component(d.res_pair[0]).group_referent()
        g2 = u.component(d.res_pair[1]).group_referent()
        assert g1 is not None and g2 is not None
        m1 = [frozenset((a,)) for a in sorted(h[g1])]
        m2 = [frozenset((b,)) for b in sorted(h[g2])]
        v1, v2 = d.vars

        def pair_ok(a: Entity, b: Entity) -> bool:
            return bool(self.stage(u, cl, j + 1, {**h, v1: a, v2: b}))

        return all(any(pair_ok(a, b) for b in m2) for a in m1) and all(
            any(pair_ok(a, b) for a in m1) for b in m2
        )

    # the joint content of some boxes at one level: universes rebind, frees
    # extend, conditions filter, embedded clauses compose
    def boxes(self, u: Udrs, labels: list[Label], f: Mapping[DTerm, Entity]) -> list[dict]:
        _, plan, subst = self._of(u)
        universe: list[Referent] = []
        conds: list[tuple[Label, int, object]] = []
        splices: list[Label] = []
        for b in labels:
            comp = u.component(b)
            universe.extend(comp.universe)
            for i, cond in enumerate(comp.conds):
                if isinstance(cond, ClauseRef):
                    splices.append(cond.clause)
                else:
                    conds.append((b, i, cond))
        mentioned: set[Referent] = set()
        for b, i, cond in conds:
            mentioned.update(self._cond_refs(u, cond))
        need: list[DTerm] = list(universe)
        need += sorted(
            (r for r in mentioned if r not in universe and r not in f),
            key=lambda r: r.name,
        )
        out: list[dict] = []
        for h in _extensions(self.m, f, need):
            if all(self._cond_u(u, b, i, cond, h) for b, i, cond in conds):
                out.append(h)
        for k in splices:
            kcl = u.clause_map[k]
            out = [h2 for h in out for h2 in self.stage(u, kcl, 0, h)]
        return out

    def _cond_refs(self, u: Udrs, cond) -> set[Referent]:
        _, _, subst = self._of(u)
        out: set[Referent] = set()
        if isinstance(cond, Atom):
            for a in cond.args:
                out.update(self._term_refs(subst, a))
            for s in cond.senses:
                for c in s.conds:
                    out.update(self._cond_refs(u, c))
        elif isinstance(cond, Eq):
            if not isinstance(cond.lhs, Slot):
                out.update(self._term_refs(subst, cond.lhs))
                out.update(self._term_refs(subst, cond.rhs))
        elif isinstance(cond, SumEq):
            out.add(cond.target)
        elif isinstance(cond, Not):
            for c in cond.conds:
                out.update(self._cond_refs(u, c))
        return out

    @staticmethod
    def _term_refs(subst: Mapping[Slot, Referent], t) -> set[Referent]:
        if isinstance(t, Slot):
            t = subst.get(t, t)
        return {t} if isinstance(t, Referent) else set()

    def _val(self, u: Udrs, h: Mapping[DTerm, Entity], t) -> Entity:
        _, _, subst = self._of(u)
        if isinstance(t, Slot):
            t = subst.get(t, t)
        if isinstance(t, Slot):
            raise UnboundReferent(f"slot {t} has no value under this reading")
        return _value(h, t)

    def _cond_u(self, u: Udrs, b: Label, i: int, cond, h: Mapping[DTerm, Entity]) -> bool:
        _, plan, _ = self._of(u)
        if isinstance(cond, Atom):
            if not cond.senses:
                return self.m.holds(cond.pred, tuple(self._val(u, h, a) for a in cond.args))
            if len(cond.senses) == 1:
                chosen = cond.senses[0]
            else:
                name = plan.sense.get((b, i))
                match = [s for s in cond.senses if s.name == name]
                if not match:
                    raise UnboundReferent(
                        f"ambiguous atom in {b!r} has no sense chosen by this reading"
                    )
                chosen = match[0]
            if not self.m.holds(
                f"{cond.pred}.{chosen.name}", tuple(self._val(u, h, a) for a in cond.args)
            ):
                return False
            return all(self._cond_u(u, b, i, c, h) for c in chosen.conds)
        if isinstance(cond, Eq):
            if isinstance(cond.lhs, Slot):
                return True  # a responsibility equation is consumed by substitution
            return self._val(u, h, cond.lhs) == self._val(u, h, cond.rhs)
        if isinstance(cond, Not):
            return not all(self._cond_u(u, b, i, c, h) for c in cond.conds)
        if isinstance(cond, SumEq):
            return self._sum_holds(u, cond, h)
        raise UdrsError(f"cannot evaluate condition {cond!r}")

    def _sum_holds(self, u: Udrs, cond: SumEq, h: Mapping[DTerm, Entity]) -> bool:
        spec = self.duplex.get(cond.licensing)
        if spec is None:
            raise NoLicensingCondition(
                f"{cond.licensing!r} has not been evaluated before the sum over it"
            )
        zvar = cond.var
        witnesses: set[Entity] = set()
        if spec[0] == "box":
            _, ul, cl, j, resbox, scopebox = spec
            for h1 in self.boxes(ul, [resbox], h):
                for h2 in self.boxes(ul, [scopebox], h1):
                    for h3 in self.stage(ul, cl, j + 1, h2):
                        if zvar in h3:
                            witnesses.add(h3[zvar])
        else:
            _, ul, cl, j, grp, mv = spec
            grp_val = h.get(grp)
            if grp_val is None:
                raise UnboundReferent(f"group {grp} has no value for the sum")
            for a in sorted(grp_val):
                for h3 in self.stage(ul, cl, j + 1, {**dict(h), mv: frozenset((a,))}):
                    if zvar in h3:
                        witnesses.add(h3[zvar])
        if not witnesses:
            return False
        total = None
        for w in sorted(witnesses, key=_entity_str):
            total = w if total is None else join(total, w)
        return self._val(u, h, cond.target) == total


def denote(
    obj: Udrs | Database,
    label: Label,
    f: Mapping[DTerm, Entity],
    m: Model,
    reading: "_readings.Reading",
) -> list[dict[DTerm, Entity]]:
    """The embeddings a label's materialized subtree admits under a reading,
    starting from `f`.  For a clause label this covers the whole clause; for a
    spine node, everything from its level inward; for any other box, just that
    box's content."""
    db = as_database(obj)
    den = Denoter(db, reading, m)
    u = db.find(label)
    # evaluate every earlier sentence first so cross-sentence material is bound
    fcur: list[dict] = [dict(f)]
    for s in db.all_udrs():
        if s is u:
            break
        fcur = [h for g in fcur for h in den.sentence(s, g)]
    out: list[dict] = []
    for g in fcur:
        if label in u.clause_map:
            out.extend(den.stage(u, u.clause_map[label], 0, g))
            continue
        _, plan, _ = den._of(u)
        cl = u.clause_of(label)
        spine = plan.spine.get(cl.label, ())
        if label in spine:
            out.extend(den.stage(u, cl, spine.index(label), g))
        else:
            out.extend(den.boxes(u, [label], g))
    return out


def truth(
    obj: Udrs | Database,
    m: Model,
    coindexes: Iterable[tuple[Label, Label, str]] = (),
) -> bool:
    """Is some reading of the whole database true in the model?  Sentences
    share their embeddings, so what one sentence introduces the next can see."""
    db = as_database(obj)
    if coindexes:
        from . import entail as _entail

        for l1, l2, idx in coindexes:
            db = _entail.coindex(db, l1, l2, idx)
    for r in _readings.enumerate_readings(db):
        den = Denoter(db, r, m)
        embs: list[dict] = [{}]
        for u in db.all_udrs():
            embs = [h for f in embs for h in den.sentence(u, f)]
            if not embs:
                break
        if embs:
            return True
    return False


# --- dependent verb boxes --------------------------------------------------------------


def box_drs(u: Udrs, label: Label, sense: str | None = None) -> Drs:
    """One box's own content as a standalone DRS, slots left unresolved.  This
    is the raw material the dependency machinery compares — no reading is
    involved."""
    comp = u.component(label)
    conds: list[DrsCond] = []
    for cond in comp.conds:
        conds.extend(_cond_drs(cond, sense))
    return Drs(tuple(comp.universe), tuple(conds))


def _cond_drs(cond, sense: str | None) -> list[DrsCond]:
    if isinstance(cond, Atom):
        if not cond.senses:
            return [DAtom(cond.pred, cond.args)]
        if len(cond.senses) == 1:
            chosen = cond.senses[0]
        else:
            match = [s for s in cond.senses if s.name == sense]
            if not match:
                raise UdrsError(
                    f"atom {cond.pred!r} needs one of its senses picked: "
                    + ", ".join(cond.sense_names())
                )
            chosen = match[0]
        out: list[DrsCond] = [DAtom(cond.pred, cond.args, sense=chosen.name)]
        for c in chosen.conds:
            out.extend(_cond_drs(c, None))
        return out
    if isinstance(cond, Eq):
        return [DEq(cond.lhs, cond.rhs)]
    if isinstance(cond, Not):
        inner: list[DrsCond] = []
        for c in cond.conds:
            inner.extend(_cond_drs(c, None))
        return [DNeg(Drs((), tuple(inner)))]
    raise UdrsError(f"{type(cond).__name__} conditions have no place in a verb box")


def restrict_dependent(dk: Drs, dl: Drs, pi: Mapping[DTerm, DTerm]) -> Drs:
    """The merged box a dependent verb box must keep consistent: its own
    content plus the box it depends on, with the mapped terms pulled over to
    the dependent side and everything else freshly renamed."""
    rev = {dst: src for src, dst in pi.items()}
    taken = {r.name for r in dk.universe + dl.universe}
    taken.update(r.name for r in free_drs_referents(dk) | free_drs_referents(dl))
    fresh: dict[Referent, Referent] = {}

    def rename_ref(r: Referent) -> Referent:
        if r in rev and isinstance(rev[r], Referent):
            return rev[r]  # type: ignore[return-value]
        if r in dl.universe:
            if r not in fresh:
                base = r.name + "_dep"
                name, k = base, 2
                while name in taken:
                    name = f"{base}{k}"
                    k += 1
                taken.add(name)
                fresh[r] = Referent(name)
            return fresh[r]
        return r

    def rename_term(t: DTerm) -> DTerm:
        if t in rev:
            return rev[t]
        if isinstance(t, Referent):
            return rename_ref(t)
        return Slot(t.func, rename_ref(t.of) if t.of else None)

    def rename_cond(c: DrsCond) -> DrsCond:
        if isinstance(c, DAtom):
            return DAtom(c.pred, tuple(rename_term(a) for a in c.args), c.sense)
        if isinstance(c, DEq):
            return DEq(rename_term(c.lhs), rename_term(c.rhs))
        if isinstance(c, DIn):
            return DIn(rename_term(c.member), rename_term(c.group))
        if isinstance(c, DNeg):
            return DNeg(rename_box(c.inner))
        raise UdrsError(f"{type(c).__name__} conditions cannot be carried across a dependency")

    def rename_box(box: Drs) -> Drs:
        return Drs(
            tuple(rename_ref(r) for r in box.universe),
            tuple(rename_cond(c) for c in box.conds),
        )

    carried = rename_box(dl)
    universe = list(dk.universe)
    for r in carried.universe:
        if r not in universe:
            universe.append(r)
    return Drs(tuple(universe), dk.conds + carried.conds)


def dependent_sense_verdicts(
    db: Database, k0: Label, bound: int = 3
) -> dict[str | None, Verdict]:
    """For every sense a dependent verb box offers: is the box consistent with
    the verb it depends on?  Works directly on the two boxes — no reading of
    the database is ever enumerated."""
    u = db.find(k0)
    comp = u.component(k0)
    if comp.dep is None:
        raise ConstraintError(f"{k0!r} carries no dependency marking")
    ul = db.find(comp.dep.on)
    dl = box_drs(ul, comp.dep.on)
    names: list[str | None] = [None]
    for cond in comp.conds:
        if isinstance(cond, Atom) and cond.ambiguous:
            names = list(cond.sense_names())
            break
    out: dict[str | None, Verdict] = {}
    for name in names:
        dk = box_drs(u, k0, sense=name)
        merged = restrict_dependent(dk, dl, dict(comp.dep.pi))
        out[name] = check_consistency(merged, bound)
    return out
