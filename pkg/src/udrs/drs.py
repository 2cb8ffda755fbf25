"""Fully specified DRSs: the structures a reading turns a sentence into.

These are plain boxes again — no labels, no order.  Conditions may nest.
Argument positions hold referents, or (only in boxes produced by the
dependency machinery, where no reading has resolved them yet) slot terms,
which consistency checking treats as extra variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .structure import Referent, Slot

DTerm = Union[Referent, Slot]


@dataclass(frozen=True)
class DAtom:
    pred: str
    args: tuple[DTerm, ...]
    sense: str | None = None

    @property
    def key(self) -> str:
        return f"{self.pred}.{self.sense}" if self.sense else self.pred

    def __str__(self) -> str:
        return f"{self.key}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class DEq:
    lhs: DTerm
    rhs: DTerm

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class DIn:
    """Membership of an individual in a group."""

    member: DTerm
    group: DTerm

    def __str__(self) -> str:
        return f"{self.member} in {self.group}"


@dataclass(frozen=True)
class DNeg:
    inner: "Drs"

    def __str__(self) -> str:
        return f"not {self.inner}"


@dataclass(frozen=True)
class DImpl:
    res: "Drs"
    scope: "Drs"

    def __str__(self) -> str:
        return f"{self.res} => {self.scope}"


@dataclass(frozen=True)
class DQuant:
    q: str
    var: Referent
    res: "Drs"
    scope: "Drs"

    def __str__(self) -> str:
        return f"{self.res} <{self.q} {self.var}> {self.scope}"


@dataclass(frozen=True)
class DCum:
    """Polyadic duplex: the two restrictors each bind a group, and the scope
    must cover both groups member-wise in both directions."""

    res1: "Drs"
    res2: "Drs"
    var1: Referent
    var2: Referent
    scope: "Drs"

    def __str__(self) -> str:
        return f"{self.res1} {self.res2} <cum {self.var1},{self.var2}> {self.scope}"


@dataclass(frozen=True)
class DSum:
    """target = the join of every witness for `var` across a duplex."""

    target: Referent
    var: Referent
    res: "Drs"
    scope: "Drs"

    def __str__(self) -> str:
        return f"{self.target} = sum({self.var} : {self.res} => {self.scope})"


DrsCond = Union[DAtom, DEq, DIn, DNeg, DImpl, DQuant, DCum, DSum]


@dataclass(frozen=True)
class Drs:
    universe: tuple[Referent, ...] = ()
    conds: tuple[DrsCond, ...] = ()

    def __str__(self) -> str:
        u = ", ".join(str(r) for r in self.universe)
        c = ", ".join(str(c) for c in self.conds)
        return f"[{u} | {c}]"

    def merge(self, other: "Drs") -> "Drs":
        uni = list(self.universe)
        for r in other.universe:
            if r not in uni:
                uni.append(r)
        return Drs(tuple(uni), self.conds + other.conds)

    def is_empty(self) -> bool:
        return not self.universe and not self.conds


EMPTY_DRS = Drs()


def drs_referents(d: Drs) -> set[Referent]:
    out: set[Referent] = set(d.universe)
    for c in d.conds:
        out.update(cond_referents(c))
    return out


def cond_referents(c: DrsCond) -> set[Referent]:
    out: set[Referent] = set()
    if isinstance(c, DAtom):
        for a in c.args:
            out.update(_term_refs(a))
    elif isinstance(c, (DEq, DIn)):
        pair = (c.lhs, c.rhs) if isinstance(c, DEq) else (c.member, c.group)
        for a in pair:
            out.update(_term_refs(a))
    elif isinstance(c, DNeg):
        out.update(drs_referents(c.inner))
    elif isinstance(c, (DImpl, DQuant)):
        out.update(drs_referents(c.res))
        out.update(drs_referents(c.scope))
        if isinstance(c, DQuant):
            out.add(c.var)
    elif isinstance(c, DCum):
        out.update(drs_referents(c.res1))
        out.update(drs_referents(c.res2))
        out.update(drs_referents(c.scope))
        out.update((c.var1, c.var2))
    elif isinstance(c, DSum):
        out.add(c.target)
        out.add(c.var)
        out.update(drs_referents(c.res))
        out.update(drs_referents(c.scope))
    return out


def _term_refs(t: DTerm) -> set[Referent]:
    if isinstance(t, Referent):
        return {t}
    if isinstance(t, Slot) and t.of is not None:
        return {t.of}
    return set()


def free_drs_referents(d: Drs, bound: frozenset[Referent] = frozenset()) -> set[Referent]:
    """Referents used in `d` without a binding universe around them."""
    bound = bound | frozenset(d.universe)
    out: set[Referent] = set()
    for c in d.conds:
        out.update(_free_cond(c, bound))
    return out


def _free_cond(c: DrsCond, bound: frozenset[Referent]) -> set[Referent]:
    if isinstance(c, DNeg):
        return free_drs_referents(c.inner, bound)
    if isinstance(c, DImpl):
        res_bound = bound | frozenset(c.res.universe)
        return free_drs_referents(c.res, bound) | free_drs_referents(c.scope, res_bound)
    if isinstance(c, DQuant):
        inner = bound | {c.var}
        res_bound = inner | frozenset(c.res.universe)
        return free_drs_referents(c.res, inner) | free_drs_referents(c.scope, res_bound)
    if isinstance(c, DCum):
        inner = bound | {c.var1, c.var2}
        both = inner | frozenset(c.res1.universe) | frozenset(c.res2.universe)
        return (
            free_drs_referents(c.res1, inner)
            | free_drs_referents(c.res2, inner)
            | free_drs_referents(c.scope, both)
        )
    if isinstance(c, DSum):
        inner = bound | {c.var}
        res_bound = inner | frozenset(c.res.universe)
        out = free_drs_referents(c.res, inner) | free_drs_referents(c.scope, res_bound)
        if c.target not in bound:
            out.add(c.target)
        return out
    return cond_referents(c) - bound


def slot_terms(d: Drs) -> set[Slot]:
    """Every slot term occurring anywhere in the box."""
    out: set[Slot] = set()

    def walk_cond(c: DrsCond) -> None:
        if isinstance(c, DAtom):
            out.update(a for a in c.args if isinstance(a, Slot))
        elif isinstance(c, DEq):
            out.update(a for a in (c.lhs, c.rhs) if isinstance(a, Slot))
        elif isinstance(c, DIn):
            out.update(a for a in (c.member, c.group) if isinstance(a, Slot))
        elif isinstance(c, DNeg):
            walk(c.inner)
        elif isinstance(c, (DImpl, DQuant)):
            walk(c.res)
            walk(c.scope)
        elif isinstance(c, DCum):
            walk(c.res1)
            walk(c.res2)
            walk(c.scope)
        elif isinstance(c, DSum):
            walk(c.res)
            walk(c.scope)

    def walk(dd: Drs) -> None:
        for c in dd.conds:
            walk_cond(c)

    walk(d)
    return out


def atom_signature(d: Drs) -> dict[str, int]:
    """Predicate keys (with sense suffix where resolved) mapped to arity."""
    out: dict[str, int] = {}

    def walk(dd: Drs) -> None:
        for c in dd.conds:
            if isinstance(c, DAtom):
                out[c.key] = len(c.args)
            elif isinstance(c, DNeg):
                walk(c.inner)
            elif isinstance(c, (DImpl, DQuant)):
                walk(c.res)
                walk(c.scope)
            elif isinstance(c, DCum):
                walk(c.res1)
                walk(c.res2)
                walk(c.scope)
            elif isinstance(c, DSum):
                walk(c.res)
                walk(c.scope)

    walk(d)
    return out
