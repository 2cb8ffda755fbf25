"""Reading and writing the package's text formats.

Three concrete syntaxes live here:

* **sentence files** — labelled clause/box declarations plus explicit
  ordering facts.  A file is either one bare sentence body or a sequence of
  ``udrs { ... }`` blocks, optionally closed by a ``goal { ... }`` block for
  consequence problems.  ``#`` starts a comment that runs to end of line.
* **model files** — exactly the shape ``str(Model)`` produces: an
  ``atoms:`` line followed by one extension line per predicate key.
* **printed boxes** — ``str(Drs)`` re-parsed, mainly so expected output can
  be stated in the readable form inside tests.

A sentence body is a sequence of statements:

    clause LABEL [index NAME] = NODE...
    box LABEL [ '[' ref, ... ']' ] [DIST] [tag c|d|gen] [DEP] [ '{' cond, ... '}' ]
    ord A <= B
    boxes LABEL = BOX...

where DIST is one of ``impl res L scope L``, ``quant Q VAR res L scope L``,
``neg L``, ``cum res L L vars V V scope L``, or ``closed``; DEP is
``dep on LABEL map term -> term, ...``; and A/B in an ``ord`` line may use
the sugar ``res(L)`` / ``scope(L)`` for the restrictor or scope box of L's
duplex.  Conditions are ``pred(term, ...)`` (optionally followed by
``senses { name { cond, ... } ... }``), ``term = term``,
``REF = sum REF : LABEL``, ``not { cond, ... }``, or ``clause LABEL``.
Terms are referents (``X``), slot applications (``alpha(X)``, ``gamma(?)``)
or the bare placeholder ``?``.

The statement keywords ``clause``, ``box``, ``ord``, ``boxes``, ``udrs`` and
``goal`` are reserved and cannot be used as labels.

A clause's box list normally need not be written: it is completed from the
nodes by following restrictor/scope links.  A ``boxes`` statement overrides
that, and the printer emits one exactly when the stored tuple differs from
the completion — so ``parse_database(print_database(db)) == db`` holds
field-for-field, including tuple order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NoReturn

from .drs import (
    DAtom,
    DCum,
    DEq,
    DIn,
    DImpl,
    DNeg,
    DQuant,
    DSum,
    Drs,
    DrsCond,
    DTerm,
)
from .errors import DuplicateLabel, ParseError, SourceSpan, UnresolvedLabel
from .readings import Reading
from .semantics import Model
from .structure import (
    Atom,
    Clause,
    ClauseRef,
    Component,
    Condition,
    CumDuplex,
    Database,
    Dependency,
    Eq,
    Impl,
    Label,
    Neg,
    Not,
    Quant,
    Referent,
    SELF,
    Sense,
    Slot,
    SumEq,
    Term,
    Udrs,
    Unresolved,
)

__all__ = [
    "parse_udrs",
    "parse_database",
    "parse_model",
    "parse_drs",
    "parse_term",
    "print_udrs",
    "print_database",
    "print_model",
    "print_drs",
    "reading_to_dict",
    "model_to_dict",
]


# --- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>\#[^\n]*)
    | (?P<name>[A-Za-z_][A-Za-z0-9_.']*)
    | (?P<num>[0-9]+)
    | (?P<punct>=>|<=|->|[{}\[\](),:=?|+<>])
    """,
    re.VERBOSE,
)

_STATEMENTS = ("clause", "box", "ord", "boxes")
_RESERVED = frozenset(_STATEMENTS) | {"udrs", "goal"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "num" | "punct" | "eof"
    text: str
    span: SourceSpan


def _scan(text: str) -> list[_Token]:
    out: list[_Token] = []
    pos = 0
    line = 1
    bol = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, pos - bol + 1, pos, pos + 1)
            raise ParseError(f"stray character {text[pos]!r}", span)
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("ws", "comment"):
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                bol = m.start() + chunk.rfind("\n") + 1
        else:
            assert kind is not None
            span = SourceSpan(line, m.start() - bol + 1, m.start(), m.end())
            out.append(_Token(kind, chunk, span))
        pos = m.end()
    out.append(_Token("eof", "", SourceSpan(line, pos - bol + 1, pos, pos)))
    return out


def _show(t: _Token) -> str:
    if t.kind == "eof":
        return "end of input"
    return f"{t.text!r}"


class _Parser:
    def __init__(self, text: str):
        self.toks = _scan(text)
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.toks[self.i]

    def peek(self, ahead: int = 1) -> _Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def advance(self) -> _Token:
        t = self.cur
        if t.kind != "eof":
            self.i += 1
        return t

    def fail(self, message: str, expected: tuple[str, ...] = ()) -> NoReturn:
        raise ParseError(message, self.cur.span, expected)

    def at_punct(self, text: str) -> bool:
        return self.cur.kind == "punct" and self.cur.text == text

    def at_name(self, text: str | None = None) -> bool:
        if self.cur.kind != "name":
            return False
        return text is None or self.cur.text == text

    def expect_punct(self, text: str) -> _Token:
        if not self.at_punct(text):
            self.fail(f"found {_show(self.cur)}", expected=(text,))
        return self.advance()

    def expect_name(self, what: str) -> str:
        if self.cur.kind != "name":
            self.fail(f"expected {what}, found {_show(self.cur)}")
        return self.advance().text

    def expect_keyword(self, word: str) -> None:
        if not self.at_name(word):
            self.fail(f"found {_show(self.cur)}", expected=(word,))
        self.advance()

    def expect_num(self) -> int:
        if self.cur.kind != "num":
            self.fail(f"expected a number, found {_show(self.cur)}")
        return int(self.advance().text)

    def expect_eof(self) -> None:
        if self.cur.kind != "eof":
            self.fail(f"unexpected {_show(self.cur)}", expected=("end of input",))


# --- shared small grammars ----------------------------------------------------


def _parse_qname(p: _Parser) -> str:
    """A quantifier name, possibly parameterised like geq(2)."""
    name = p.expect_name("a quantifier")
    if p.at_punct("("):
        p.advance()
        num = p.expect_num()
        p.expect_punct(")")
        return f"{name}({num})"
    return name


def _parse_term(p: _Parser) -> Term:
    if p.at_punct("?"):
        p.advance()
        return Unresolved()
    name = p.expect_name("a term")
    if p.at_punct("("):
        p.advance()
        if p.at_punct(")"):
            p.advance()
            return Slot(name, None)
        if p.at_punct("?"):
            p.advance()
            p.expect_punct(")")
            return Slot(name, None)
        inner = p.expect_name("a referent inside the slot")
        p.expect_punct(")")
        return Slot(name, Referent(inner))
    return Referent(name)


def parse_term(text: str) -> Term:
    """One standalone term: a referent, ``func(X)``, ``func(?)`` or ``?``."""
    p = _Parser(text)
    t = _parse_term(p)
    p.expect_eof()
    return t


def _slot_from_args(p: _Parser, func: str, args: list[Term]) -> Slot:
    """Reinterpret an already-parsed call as a slot term (for equation sides)."""
    if not args:
        return Slot(func, None)
    if len(args) == 1 and isinstance(args[0], Referent):
        return Slot(func, args[0])
    if len(args) == 1 and isinstance(args[0], Unresolved):
        return Slot(func, None)
    p.fail(f"{func}(...) on an equation side must hold one referent or '?'")


# --- sentence files: parsing ---------------------------------------------------


@dataclass
class _OrdRef:
    kind: str  # "label" | "res" | "scope"
    name: str
    span: SourceSpan


@dataclass
class _Body:
    clauses: list[tuple[str, str | None, tuple[str, ...], SourceSpan]] = field(
        default_factory=list
    )
    components: list[Component] = field(default_factory=list)
    comp_spans: dict[str, SourceSpan] = field(default_factory=dict)
    declared: dict[str, SourceSpan] = field(default_factory=dict)
    explicit_boxes: dict[str, tuple[tuple[str, ...], SourceSpan]] = field(
        default_factory=dict
    )
    ords: list[tuple[_OrdRef, _OrdRef]] = field(default_factory=list)


def _declare(st: _Body, label: str, span: SourceSpan) -> None:
    if label in st.declared:
        raise DuplicateLabel(f"label {label!r} declared twice", span)
    st.declared[label] = span


def _parse_cond_list(p: _Parser) -> list[Condition]:
    conds: list[Condition] = []
    if p.at_punct("}"):
        return conds
    conds.append(_parse_cond(p))
    while p.at_punct(","):
        p.advance()
        conds.append(_parse_cond(p))
    return conds


def _parse_cond(p: _Parser) -> Condition:
    if p.at_name("clause"):
        p.advance()
        return ClauseRef(p.expect_name("a clause label"))
    if p.at_name("not") and p.peek().text == "{":
        p.advance()
        p.expect_punct("{")
        conds = _parse_cond_list(p)
        p.expect_punct("}")
        return Not(tuple(conds))
    name = p.expect_name("a condition")
    if p.at_punct("("):
        p.advance()
        args: list[Term] = []
        if not p.at_punct(")"):
            args.append(_parse_term(p))
            while p.at_punct(","):
                p.advance()
                args.append(_parse_term(p))
        p.expect_punct(")")
        if p.at_punct("="):
            lhs = _slot_from_args(p, name, args)
            p.advance()
            return Eq(lhs, _parse_term(p))
        if p.at_name("senses"):
            p.advance()
            p.expect_punct("{")
            senses: list[Sense] = []
            while not p.at_punct("}"):
                sense_name = p.expect_name("a sense name")
                p.expect_punct("{")
                sense_conds = _parse_cond_list(p)
                p.expect_punct("}")
                senses.append(Sense(sense_name, tuple(sense_conds)))
            p.expect_punct("}")
            if not senses:
                p.fail("a senses block needs at least one sense")
            return Atom(name, tuple(args), tuple(senses))
        return Atom(name, tuple(args))
    if p.at_punct("="):
        p.advance()
        if (
            p.at_name("sum")
            and p.peek().kind == "name"
            and p.peek(2).kind == "punct"
            and p.peek(2).text == ":"
        ):
            p.advance()
            var = p.expect_name("the summed variable")
            p.expect_punct(":")
            licensing = p.expect_name("the licensing duplex label")
            return SumEq(Referent(name), Referent(var), licensing)
        return Eq(Referent(name), _parse_term(p))
    p.fail(
        f"cannot read a condition starting at {name!r}",
        expected=("(", "="),
    )


def _parse_clause_stmt(p: _Parser, st: _Body) -> None:
    span = p.cur.span
    label = p.expect_name("a clause label")
    _declare(st, label, span)
    index = None
    if p.at_name("index"):
        p.advance()
        index = p.expect_name("an index name")
    p.expect_punct("=")
    nodes: list[str] = []
    while p.cur.kind == "name" and p.cur.text not in _RESERVED:
        nodes.append(p.advance().text)
    if not nodes:
        p.fail(f"clause {label!r} needs at least one node box")
    st.clauses.append((label, index, tuple(nodes), span))


def _parse_box_stmt(p: _Parser, st: _Body) -> None:
    span = p.cur.span
    label = p.expect_name("a box label")
    _declare(st, label, span)
    st.comp_spans[label] = span

    universe: list[Referent] = []
    if p.at_punct("["):
        p.advance()
        if not p.at_punct("]"):
            universe.append(Referent(p.expect_name("a discourse referent")))
            while p.at_punct(","):
                p.advance()
                universe.append(Referent(p.expect_name("a discourse referent")))
        p.expect_punct("]")

    dist = None
    if p.at_name("impl"):
        p.advance()
        p.expect_keyword("res")
        res = p.expect_name("the restrictor label")
        p.expect_keyword("scope")
        scope = p.expect_name("the scope label")
        dist = Impl(res, scope)
    elif p.at_name("quant"):
        p.advance()
        q = _parse_qname(p)
        var = Referent(p.expect_name("the bound variable"))
        p.expect_keyword("res")
        res = p.expect_name("the restrictor label")
        p.expect_keyword("scope")
        scope = p.expect_name("the scope label")
        dist = Quant(q, var, res, scope)
    elif p.at_name("neg"):
        p.advance()
        dist = Neg(p.expect_name("the negated box label"))
    elif p.at_name("cum"):
        p.advance()
        p.expect_keyword("res")
        r1 = p.expect_name("the first restrictor label")
        r2 = p.expect_name("the second restrictor label")
        p.expect_keyword("vars")
        v1 = Referent(p.expect_name("the first member variable"))
        v2 = Referent(p.expect_name("the second member variable"))
        p.expect_keyword("scope")
        scope = p.expect_name("the scope label")
        dist = CumDuplex((r1, r2), (v1, v2), scope)
    elif p.at_name("closed"):
        p.advance()
        dist = SELF

    tag = None
    if p.at_name("tag"):
        p.advance()
        tag = p.expect_name("a tag")
        if tag not in ("c", "d", "gen"):
            raise ParseError(
                f"unknown tag {tag!r}", p.toks[p.i - 1].span, expected=("c", "d", "gen")
            )

    dep = None
    if p.at_name("dep"):
        p.advance()
        p.expect_keyword("on")
        on = p.expect_name("the governing verb box label")
        p.expect_keyword("map")
        pairs: list[tuple[Term, Term]] = []
        a = _parse_term(p)
        p.expect_punct("->")
        pairs.append((a, _parse_term(p)))
        while p.at_punct(","):
            p.advance()
            a = _parse_term(p)
            p.expect_punct("->")
            pairs.append((a, _parse_term(p)))
        dep = Dependency(on, tuple(pairs))

    conds: tuple[Condition, ...] = ()
    if p.at_punct("{"):
        p.advance()
        conds = tuple(_parse_cond_list(p))
        p.expect_punct("}")

    st.components.append(
        Component(label, tuple(universe), conds, dist, dep, tag)
    )


def _parse_ord_ref(p: _Parser) -> _OrdRef:
    span = p.cur.span
    name = p.expect_name("a label")
    if name in ("res", "scope") and p.at_punct("("):
        p.advance()
        target = p.expect_name("a box label")
        p.expect_punct(")")
        return _OrdRef(name, target, span)
    return _OrdRef("label", name, span)


def _parse_ord_stmt(p: _Parser, st: _Body) -> None:
    a = _parse_ord_ref(p)
    p.expect_punct("<=")
    b = _parse_ord_ref(p)
    st.ords.append((a, b))


def _parse_boxes_stmt(p: _Parser, st: _Body) -> None:
    span = p.cur.span
    label = p.expect_name("a clause label")
    if label in st.explicit_boxes:
        raise DuplicateLabel(f"boxes for clause {label!r} given twice", span)
    p.expect_punct("=")
    boxes: list[str] = []
    while p.cur.kind == "name" and p.cur.text not in _RESERVED:
        boxes.append(p.advance().text)
    if not boxes:
        p.fail(f"the boxes list for {label!r} is empty")
    st.explicit_boxes[label] = (tuple(boxes), span)


def _dist_targets(c: Component) -> tuple[Label, ...]:
    d = c.dist
    if isinstance(d, (Impl, Quant)):
        return (d.res, d.scope)
    if isinstance(d, Neg):
        return (d.inner,)
    if isinstance(d, CumDuplex):
        return (d.res_pair[0], d.res_pair[1], d.scope)
    return ()


def _closure_boxes(nodes: tuple[str, ...], comp_map: dict[str, Component]) -> tuple[str, ...]:
    """Complete a clause's node list with every restrictor/scope box reachable
    through distinguished conditions (embedded clauses keep their own boxes)."""
    seen = list(nodes)
    have = set(seen)
    i = 0
    while i < len(seen):
        c = comp_map.get(seen[i])
        i += 1
        if c is None:
            continue
        for t in _dist_targets(c):
            if t not in have:
                have.add(t)
                seen.append(t)
    return tuple(seen)


def _assemble(p: _Parser, st: _Body) -> Udrs:
    comp_map = {c.label: c for c in st.components}
    clause_labels = {label for label, _, _, _ in st.clauses}

    for label, _, nodes, span in st.clauses:
        for n in nodes:
            if n not in comp_map:
                raise UnresolvedLabel(
                    f"clause {label!r} uses undeclared box {n!r}", span
                )
    for c in st.components:
        for t in _dist_targets(c):
            if t not in comp_map:
                raise UnresolvedLabel(
                    f"box {c.label!r} points at undeclared box {t!r}",
                    st.comp_spans[c.label],
                )
    for label, (boxes, span) in st.explicit_boxes.items():
        if label not in clause_labels:
            raise UnresolvedLabel(
                f"boxes statement for undeclared clause {label!r}", span
            )
        for b in boxes:
            if b not in comp_map:
                raise UnresolvedLabel(
                    f"boxes list for {label!r} mentions undeclared box {b!r}", span
                )

    def resolve(ref: _OrdRef) -> str:
        if ref.kind == "label":
            if ref.name not in comp_map and ref.name not in clause_labels:
                raise UnresolvedLabel(
                    f"ord statement mentions undeclared label {ref.name!r}", ref.span
                )
            return ref.name
        comp = comp_map.get(ref.name)
        if comp is None:
            raise UnresolvedLabel(
                f"{ref.kind}({ref.name}): no box labelled {ref.name!r}", ref.span
            )
        target = comp.res if ref.kind == "res" else comp.scope
        if target is None:
            raise UnresolvedLabel(
                f"{ref.kind}({ref.name}): box {ref.name!r} has no duplex yet", ref.span
            )
        return target

    pairs = tuple((resolve(a), resolve(b)) for a, b in st.ords)
    clauses = []
    for label, index, nodes, _ in st.clauses:
        if label in st.explicit_boxes:
            boxes = st.explicit_boxes[label][0]
        else:
            boxes = _closure_boxes(nodes, comp_map)
        clauses.append(Clause(label, nodes, boxes, index))
    return Udrs(tuple(clauses), tuple(st.components), pairs)


def _parse_body(p: _Parser, in_block: bool) -> Udrs:
    st = _Body()
    while True:
        t = p.cur
        if t.kind == "eof" or (t.kind == "punct" and t.text == "}"):
            break
        if in_block is False and t.kind == "name" and t.text in ("udrs", "goal"):
            break
        if t.kind != "name" or t.text not in _STATEMENTS:
            p.fail(f"expected a statement, found {_show(t)}", expected=_STATEMENTS)
        kw = p.advance().text
        if kw == "clause":
            _parse_clause_stmt(p, st)
        elif kw == "box":
            _parse_box_stmt(p, st)
        elif kw == "ord":
            _parse_ord_stmt(p, st)
        else:
            _parse_boxes_stmt(p, st)
    if not st.clauses:
        p.fail("a sentence needs at least one clause")
    return _assemble(p, st)


def _at_block(p: _Parser, word: str) -> bool:
    return p.at_name(word) and p.peek().kind == "punct" and p.peek().text == "{"


def parse_udrs(text: str) -> Udrs:
    """Parse a single sentence (a bare body or one ``udrs { ... }`` block)."""
    p = _Parser(text)
    if _at_block(p, "udrs"):
        p.advance()
        p.expect_punct("{")
        u = _parse_body(p, in_block=True)
        p.expect_punct("}")
        if p.at_name("udrs") or p.at_name("goal"):
            p.fail("several blocks found — parse this file with parse_database")
        p.expect_eof()
        return u
    if _at_block(p, "goal"):
        p.fail("a goal block only makes sense in a database file")
    u = _parse_body(p, in_block=False)
    p.expect_eof()
    return u


def parse_database(text: str) -> Database:
    """Parse a database file: ``udrs`` blocks in order, then an optional
    ``goal`` block.  A file without block markers reads as one sentence."""
    p = _Parser(text)
    if p.cur.kind == "eof":
        return Database(())
    if not (_at_block(p, "udrs") or _at_block(p, "goal")):
        u = _parse_body(p, in_block=False)
        p.expect_eof()
        return Database((u,))
    sentences: list[Udrs] = []
    goal = None
    while _at_block(p, "udrs"):
        p.advance()
        p.expect_punct("{")
        sentences.append(_parse_body(p, in_block=True))
        p.expect_punct("}")
    if _at_block(p, "goal"):
        p.advance()
        p.expect_punct("{")
        goal = _parse_body(p, in_block=True)
        p.expect_punct("}")
    p.expect_eof()
    return Database(tuple(sentences), goal)


# --- sentence files: printing ---------------------------------------------------


def _print_term(t: Term | DTerm) -> str:
    return str(t)


def _print_cond(c: Condition) -> str:
    if isinstance(c, Atom):
        s = f"{c.pred}({', '.join(_print_term(a) for a in c.args)})"
        if c.senses:
            blocks = " ".join(
                f"{sn.name} {{ {', '.join(_print_cond(x) for x in sn.conds)} }}"
                if sn.conds
                else f"{sn.name} {{ }}"
                for sn in c.senses
            )
            s += f" senses {{ {blocks} }}"
        return s
    if isinstance(c, Eq):
        return f"{_print_term(c.lhs)} = {_print_term(c.rhs)}"
    if isinstance(c, SumEq):
        return f"{c.target.name} = sum {c.var.name} : {c.licensing}"
    if isinstance(c, Not):
        if not c.conds:
            return "not { }"
        return f"not {{ {', '.join(_print_cond(x) for x in c.conds)} }}"
    if isinstance(c, ClauseRef):
        return f"clause {c.clause}"
    raise TypeError(f"cannot print condition {c!r}")


def _print_component(c: Component) -> str:
    parts = [f"box {c.label}"]
    if c.universe:
        parts.append("[" + ", ".join(r.name for r in c.universe) + "]")
    d = c.dist
    if isinstance(d, Impl):
        parts.append(f"impl res {d.res} scope {d.scope}")
    elif isinstance(d, Quant):
        parts.append(f"quant {d.q} {d.var.name} res {d.res} scope {d.scope}")
    elif isinstance(d, Neg):
        parts.append(f"neg {d.inner}")
    elif isinstance(d, CumDuplex):
        parts.append(
            f"cum res {d.res_pair[0]} {d.res_pair[1]} "
            f"vars {d.vars[0].name} {d.vars[1].name} scope {d.scope}"
        )
    elif d is SELF:
        parts.append("closed")
    if c.tag is not None:
        parts.append(f"tag {c.tag}")
    if c.dep is not None:
        mapping = ", ".join(
            f"{_print_term(a)} -> {_print_term(b)}" for a, b in c.dep.pi
        )
        parts.append(f"dep on {c.dep.on} map {mapping}")
    if c.conds:
        parts.append("{ " + ", ".join(_print_cond(x) for x in c.conds) + " }")
    return " ".join(parts)


def print_udrs(u: Udrs) -> str:
    """One sentence as a bare statement body; parse_udrs reads it back."""
    comp_map = {c.label: c for c in u.components}
    lines: list[str] = []
    for cl in u.clauses:
        head = f"clause {cl.label}"
        if cl.index is not None:
            head += f" index {cl.index}"
        lines.append(f"{head} = {' '.join(cl.nodes)}")
        if cl.boxes != _closure_boxes(cl.nodes, comp_map):
            lines.append(f"boxes {cl.label} = {' '.join(cl.boxes)}")
    for c in u.components:
        lines.append(_print_component(c))
    for a, b in u.order_pairs:
        lines.append(f"ord {a} <= {b}")
    return "\n".join(lines)


def _indent(text: str) -> str:
    return "\n".join("  " + line for line in text.split("\n"))


def print_database(db: Database) -> str:
    chunks = [f"udrs {{\n{_indent(print_udrs(u))}\n}}" for u in db.sentences]
    if db.goal is not None:
        chunks.append(f"goal {{\n{_indent(print_udrs(db.goal))}\n}}")
    return "\n\n".join(chunks) + ("\n" if chunks else "")


# --- model files -----------------------------------------------------------------


def parse_model(text: str, name: str = "") -> Model:
    p = _Parser(text)
    p.expect_keyword("atoms")
    p.expect_punct(":")
    atoms: list[str] = []
    while p.cur.kind == "name" and not (
        p.peek().kind == "punct" and p.peek().text == ":"
    ):
        atoms.append(p.advance().text)
    extensions: dict[str, list[tuple[frozenset[str], ...]]] = {}
    while p.cur.kind == "name":
        span = p.cur.span
        key = p.advance().text
        if key in extensions:
            raise DuplicateLabel(f"extension for {key!r} given twice", span)
        p.expect_punct(":")
        p.expect_punct("{")
        rows: list[tuple[frozenset[str], ...]] = []
        if not p.at_punct("}"):
            rows.append(_parse_model_row(p))
            while p.at_punct(","):
                p.advance()
                rows.append(_parse_model_row(p))
        p.expect_punct("}")
        extensions[key] = rows
    p.expect_eof()
    return Model(atoms, extensions, name=name)


def _parse_model_row(p: _Parser) -> tuple[frozenset[str], ...]:
    p.expect_punct("(")
    row: list[frozenset[str]] = []
    if not p.at_punct(")"):
        row.append(_parse_entity(p))
        while p.at_punct(","):
            p.advance()
            row.append(_parse_entity(p))
    p.expect_punct(")")
    return tuple(row)


def _parse_entity(p: _Parser) -> frozenset[str]:
    parts = [p.expect_name("an atom")]
    while p.at_punct("+"):
        p.advance()
        parts.append(p.expect_name("an atom"))
    return frozenset(parts)


def print_model(m: Model) -> str:
    return str(m)


def model_to_dict(m: Model) -> dict:
    return {
        "atoms": list(m.atoms),
        "extensions": {
            key: sorted(
                ["+".join(sorted(e)) for e in row] for row in rows
            )
            for key, rows in sorted(m.extensions.items())
        },
    }


# --- fully specified boxes ---------------------------------------------------------


def parse_drs(text: str) -> Drs:
    p = _Parser(text)
    d = _parse_drs_node(p)
    p.expect_eof()
    return d


def _parse_drs_node(p: _Parser) -> Drs:
    p.expect_punct("[")
    universe: list[Referent] = []
    if not p.at_punct("|"):
        universe.append(Referent(p.expect_name("a discourse referent")))
        while p.at_punct(","):
            p.advance()
            universe.append(Referent(p.expect_name("a discourse referent")))
    p.expect_punct("|")
    conds: list[DrsCond] = []
    if not p.at_punct("]"):
        conds.append(_parse_dcond(p))
        while p.at_punct(","):
            p.advance()
            conds.append(_parse_dcond(p))
    p.expect_punct("]")
    return Drs(tuple(universe), tuple(conds))


def _parse_dterm(p: _Parser) -> DTerm:
    name = p.expect_name("a term")
    if p.at_punct("("):
        p.advance()
        if p.at_punct("?"):
            p.advance()
            p.expect_punct(")")
            return Slot(name, None)
        inner = p.expect_name("a referent inside the slot")
        p.expect_punct(")")
        return Slot(name, Referent(inner))
    return Referent(name)


def _split_key(key: str) -> tuple[str, str | None]:
    if "." in key:
        pred, sense = key.split(".", 1)
        return pred, sense
    return key, None


def _parse_dcond(p: _Parser) -> DrsCond:
    if p.at_name("not") and p.peek().text == "[":
        p.advance()
        return DNeg(_parse_drs_node(p))
    if p.at_punct("["):
        first = _parse_drs_node(p)
        if p.at_punct("=>"):
            p.advance()
            return DImpl(first, _parse_drs_node(p))
        if p.at_punct("["):
            second = _parse_drs_node(p)
            p.expect_punct("<")
            p.expect_keyword("cum")
            v1 = Referent(p.expect_name("the first member variable"))
            p.expect_punct(",")
            v2 = Referent(p.expect_name("the second member variable"))
            p.expect_punct(">")
            return DCum(first, second, v1, v2, _parse_drs_node(p))
        if p.at_punct("<"):
            p.advance()
            q = _parse_qname(p)
            var = Referent(p.expect_name("the bound variable"))
            p.expect_punct(">")
            return DQuant(q, var, first, _parse_drs_node(p))
        p.fail(f"found {_show(p.cur)} after a box", expected=("=>", "<", "["))
    name = p.expect_name("a condition")
    if p.at_punct("("):
        p.advance()
        args: list[DTerm] = []
        if not p.at_punct(")"):
            args.append(_parse_dterm_or_placeholder(p))
            while p.at_punct(","):
                p.advance()
                args.append(_parse_dterm_or_placeholder(p))
        p.expect_punct(")")
        if p.at_punct("="):
            lhs = _dslot_from_args(p, name, args)
            p.advance()
            return DEq(lhs, _parse_dterm(p))
        if p.at_name("in"):
            lhs = _dslot_from_args(p, name, args)
            p.advance()
            return DIn(lhs, _parse_dterm(p))
        pred, sense = _split_key(name)
        return DAtom(pred, tuple(args), sense)
    if p.at_punct("="):
        p.advance()
        if (
            p.at_name("sum")
            and p.peek().kind == "punct"
            and p.peek().text == "("
            and p.peek(3).kind == "punct"
            and p.peek(3).text == ":"
        ):
            p.advance()
            p.expect_punct("(")
            var = Referent(p.expect_name("the summed variable"))
            p.expect_punct(":")
            res = _parse_drs_node(p)
            p.expect_punct("=>")
            scope = _parse_drs_node(p)
            p.expect_punct(")")
            return DSum(Referent(name), var, res, scope)
        return DEq(Referent(name), _parse_dterm(p))
    if p.at_name("in"):
        p.advance()
        return DIn(Referent(name), _parse_dterm(p))
    p.fail(
        f"cannot read a condition starting at {name!r}",
        expected=("(", "=", "in"),
    )


def _parse_dterm_or_placeholder(p: _Parser) -> DTerm:
    """Inside an argument list a bare '?' marks an empty slot application that
    lost its function name; it is not valid here, so give a pointed error."""
    if p.at_punct("?"):
        p.fail("a bare '?' cannot appear as an argument of a resolved box")
    return _parse_dterm(p)


def _dslot_from_args(p: _Parser, func: str, args: list[DTerm]) -> Slot:
    if len(args) == 1 and isinstance(args[0], Referent):
        return Slot(func, args[0])
    if not args:
        return Slot(func, None)
    p.fail(f"{func}(...) on an equation side must hold one referent")


def print_drs(d: Drs) -> str:
    return str(d)


# --- machine-readable renderings ------------------------------------------------


def reading_to_dict(r: Reading) -> dict:
    return {
        "spines": {cl: list(sp) for cl, sp in r.spines},
        "gaps": {node: gap for node, gap in r.gaps},
        "tags": {verb: list(t) for verb, t in r.tags},
        "binds": {pronoun: ref for pronoun, ref in r.binds},
        "senses": [
            {"box": label, "condition": i, "sense": s}
            for (label, i), s in r.senses
        ],
        "description": r.describe(),
    }
