"""The label order: closure, well-formedness of the order itself, monotone
constraint addition, and enumeration of total disambiguations of a clause."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    ClauseEscape,
    ConstraintError,
    LowerBoundViolation,
    SemilatticeViolation,
    UnknownLabel,
)
from . import structure
from .structure import Clause, Label, Udrs


class Ord:
    """A reflexively/transitively closed ordering over a finite label set,
    kept as per-label bitmasks."""

    __slots__ = ("_labels", "_index", "_up")

    def __init__(self, labels: Sequence[Label], up: list[int]):
        self._labels = tuple(labels)
        self._index = {l: i for i, l in enumerate(self._labels)}
        self._up = up

    @property
    def labels(self) -> tuple[Label, ...]:
        return self._labels

    def _i(self, a: Label) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise UnknownLabel(f"{a!r} is not part of this order") from None

    def le(self, a: Label, b: Label) -> bool:
        return bool(self._up[self._i(a)] >> self._i(b) & 1)

    def lt(self, a: Label, b: Label) -> bool:
        return self.le(a, b) and not self.le(b, a)

    def sim(self, a: Label, b: Label) -> bool:
        return self.le(a, b) and self.le(b, a)

    def pairs(self) -> Iterable[tuple[Label, Label]]:
        for a in self._labels:
            for b in self._labels:
                if a != b and self.le(a, b):
                    yield (a, b)

    def cls(self, a: Label) -> tuple[Label, ...]:
        return tuple(b for b in self._labels if self.sim(a, b))

    def rep(self, a: Label) -> Label:
        """Lexicographically least member of a's equivalence class."""
        return min(self.cls(a))

    def classes(self) -> list[tuple[Label, ...]]:
        seen: set[Label] = set()
        out: list[tuple[Label, ...]] = []
        for a in self._labels:
            if a in seen:
                continue
            c = self.cls(a)
            seen.update(c)
            out.append(c)
        return out

    def join(self, a: Label, b: Label) -> Label | None:
        """Least upper bound (as a class representative), if one exists."""
        common = self._up[self._i(a)] & self._up[self._i(b)]
        for m, lbl in enumerate(self._labels):
            if common >> m & 1 and self._up[m] & common == common:
                return self.rep(lbl)
        return None

    def semilattice_defect(self, top: Label) -> tuple[Label, Label] | None:
        """A witness breaking the single-top shape, or None if the order is
        fine.  Pairs without a least upper bound are tolerated: a box sitting
        below two mutually unordered labels merely prunes the readings that
        would tear those labels apart."""
        for a in self._labels:
            if not self.le(a, top):
                return (a, top)
        return None


def close(labels: Iterable[Label], pairs: Iterable[tuple[Label, Label]]) -> Ord:
    """Reflexive-transitive closure of the given facts."""
    lbls = sorted(set(labels))
    index = {l: i for i, l in enumerate(lbls)}
    up = [1 << i for i in range(len(lbls))]
    for a, b in pairs:
        if a not in index or b not in index:
            missing = a if a not in index else b
            raise UnknownLabel(f"{missing!r} occurs in an ordering fact but is not defined")
        up[index[a]] |= 1 << index[b]
    changed = True
    while changed:
        changed = False
        for i in range(len(lbls)):
            acc = up[i]
            m = acc
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return Ord(lbls, up)


def add_constraint(u: Udrs, c: tuple[Label, Label]) -> Udrs:
    """Add one ordering fact.  Returns a new structure; raises when the fact
    would break well-formedness.  Information only ever grows: facts already
    implied are accepted silently."""
    a, b = c
    for lbl in (a, b):
        if lbl not in u.labels:
            raise UnknownLabel(f"{lbl!r} does not occur in this structure")
    if u.order.le(a, b):
        return u
    u2 = u.with_pairs((a, b))
    before = {(v.code, v.label) for v in structure.validate(u)}
    fresh = [v for v in structure.validate(u2) if (v.code, v.label) not in before]
    if not fresh:
        return u2
    for v in fresh:
        if v.code in ("free-variable-constraint", "lower-bound.not-minimal"):
            raise LowerBoundViolation(str(v))
    for v in fresh:
        if v.code == "clause-escape":
            raise ClauseEscape(str(v))
    for v in fresh:
        if v.code == "semilattice":
            raise SemilatticeViolation(str(v))
    raise ConstraintError(str(fresh[0]))


def linear_extensions(u: Udrs, clause: Label | Clause) -> list[tuple[Label, ...]]:
    """All total disambiguations of one clause's nodes, widest scope first,
    with the verb box appended last.  Nodes forced equivalent by the order
    move as one unit.  Output is deterministic (lexicographic)."""
    cl = u.clause(clause) if isinstance(clause, str) else clause
    o = u.order
    rest = list(cl.nodes[1:])
    units: list[tuple[Label, ...]] = []
    seen: set[Label] = set()
    for n in sorted(rest):
        if n in seen:
            continue
        unit = tuple(sorted(m for m in rest if o.sim(n, m)))
        seen.update(unit)
        units.append(unit)

    out: list[tuple[Label, ...]] = []
    chosen: list[tuple[Label, ...]] = []

    def emit() -> None:
        flat: list[Label] = []
        for unit in chosen:
            flat.extend(unit)
        flat.append(cl.lower_bound)
        out.append(tuple(flat))

    def step(remaining: list[tuple[Label, ...]]) -> None:
        if not remaining:
            emit()
            return
        for unit in remaining:
            # a unit may be placed next only if nothing remaining sits above it
            if any(o.lt(unit[0], other[0]) for other in remaining if other is not unit):
                continue
            chosen.append(unit)
            step([x for x in remaining if x is not unit])
            chosen.pop()

    step(units)
    return out
