"""GR(1) specifications as ordered lists of typed units.

File format::

    # comment
    var a;
    var b;
    env init !a;
    env inv G (a -> next(b));
    r1: sys fair GF b;          # optional label before the side keyword

Only conjunctions of units are measured; which units take part is chosen
with :func:`select`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ParseError, VarTableMismatch
from .expr import (BoolExpr, ExprParser, TokenStream, VarTable, conjoin_all,
                   eval_pair, eval_single, to_text, tokenize)


class Kind(enum.Enum):
    INIT = "init"
    INV = "inv"
    FAIR = "fair"


class Side(enum.Enum):
    ENV = "env"
    SYS = "sys"
    ALL = "all"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"side must be one of env, sys, all; got {value!r}") from None


@dataclass(frozen=True)
class Gr1Unit:
    kind: Kind
    side: Side
    expr: BoolExpr
    label: str | None = None

    def __post_init__(self):
        if self.side is Side.ALL:
            raise ValueError("a unit belongs to either env or sys")
        if self.kind is not Kind.INV and self.expr.uses_next:
            raise ValueError(f"{self.kind.value} unit may not use next(): {self.expr}")

    def to_text(self) -> str:
        marker = {Kind.INIT: "", Kind.INV: "G ", Kind.FAIR: "GF "}[self.kind]
        prefix = f"{self.label}: " if self.label else ""
        return f"{prefix}{self.side.value} {self.kind.value} {marker}{to_text(self.expr)};"


@dataclass(frozen=True)
class Gr1Spec:
    vars: VarTable
    units: tuple[Gr1Unit, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        for unit in self.units:
            unknown = unit.expr.variables() - set(self.vars.names)
            if unknown:
                raise VarTableMismatch(
                    f"unit uses undeclared variable(s): {', '.join(sorted(unknown))}")

    def of_kind(self, kind: Kind):
        return [u for u in self.units if u.kind is kind]

    @property
    def fairness(self) -> list[BoolExpr]:
        return [u.expr for u in self.units if u.kind is Kind.FAIR]

    def to_text(self) -> str:
        lines = [f"var {n};" for n in self.vars.names]
        lines += [u.to_text() for u in self.units]
        return "\n".join(lines) + "\n"


def parse_spec(text: str) -> Gr1Spec:
    tokens = tokenize(text)
    vars = VarTable(_declared_vars(tokens))
    ts = TokenStream(tokens)
    units = []
    while ts.peek().kind != "eof":
        tok = ts.peek()
        if tok.kind == "ident" and tok.text == "var":
            ts.advance()
            ts.expect_ident("variable name")
            ts.expect(";")
            continue
        units.append(_parse_unit(ts, vars))
    return Gr1Spec(vars, tuple(units))


def _declared_vars(tokens) -> list[str]:
    names = []
    start_of_statement = True
    for i, tok in enumerate(tokens):
        if start_of_statement and tok.kind == "ident" and tok.text == "var":
            name = tokens[i + 1]
            if name.kind != "ident":
                raise ParseError("expected variable name after 'var'",
                                 name.line, name.column)
            if name.text in names:
                raise ParseError(f"duplicate variable '{name.text}'",
                                 name.line, name.column)
            try:
                VarTable((name.text,))
            except ValueError as exc:
                raise ParseError(str(exc), name.line, name.column) from None
            names.append(name.text)
        start_of_statement = tok.kind == "op" and tok.text == ";"
    return names


def _parse_unit(ts: TokenStream, vars: VarTable) -> Gr1Unit:
    label = None
    first = ts.peek()
    if first.kind == "ident" and ts.tokens[ts.pos + 1].text == ":":
        label = ts.advance().text
        ts.advance()
    side_tok = ts.expect_ident("'env', 'sys' or 'var'")
    if side_tok.text not in ("env", "sys"):
        raise ParseError(f"expected 'env', 'sys' or 'var', found {side_tok.text!r}",
                         side_tok.line, side_tok.column)
    kind_tok = ts.expect_ident("'init', 'inv' or 'fair'")
    if kind_tok.text not in ("init", "inv", "fair"):
        raise ParseError(f"expected 'init', 'inv' or 'fair', found {kind_tok.text!r}",
                         kind_tok.line, kind_tok.column)
    kind = Kind(kind_tok.text)
    if kind is Kind.INV:
        ts.expect("G")
    elif kind is Kind.FAIR:
        ts.expect("GF")
    body_start = ts.peek()
    expr = ExprParser(ts, vars).parse()
    ts.expect(";")
    if kind is not Kind.INV and expr.uses_next:
        raise ParseError(f"next() is not allowed in {kind.value} units",
                         body_start.line, body_start.column)
    return Gr1Unit(kind, Side(side_tok.text), expr, label)


def select(spec: Gr1Spec, side) -> Gr1Spec:
    side = Side.parse(side)
    if side is Side.ALL:
        return spec
    return Gr1Spec(spec.vars, tuple(u for u in spec.units if u.side is side))


def conjoin(base: Gr1Spec, refinement) -> Gr1Spec:
    """Append the units of ``refinement`` (a spec or an iterable of units)."""
    if isinstance(refinement, Gr1Spec):
        if refinement.vars != base.vars:
            raise VarTableMismatch(
                f"variable tables differ: {list(base.vars.names)} vs "
                f"{list(refinement.vars.names)}")
        extra = refinement.units
    else:
        extra = tuple(refinement)
    if not extra:
        return base
    return Gr1Spec(base.vars, base.units + tuple(extra))


@dataclass(frozen=True)
class Normalized:
    init: BoolExpr
    inv: BoolExpr
    fairs: tuple[BoolExpr, ...]


def normalize(spec: Gr1Spec) -> Normalized:
    return Normalized(
        conjoin_all(u.expr for u in spec.of_kind(Kind.INIT)),
        conjoin_all(u.expr for u in spec.of_kind(Kind.INV)),
        tuple(u.expr for u in spec.of_kind(Kind.FAIR)),
    )


@dataclass(frozen=True)
class Lasso:
    """The ultimately periodic word ``stem · loop^ω``."""

    stem: tuple[int, ...]
    loop: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def __getitem__(self, i: int) -> int:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def format(self, vars: VarTable) -> str:
        stem = " ".join(vars.format_symbol(s) for s in self.stem)
        loop = " ".join(vars.format_symbol(s) for s in self.loop)
        return f"{stem} ({loop})^w".strip()


def satisfies(spec: Gr1Spec, word: Lasso) -> bool:
    """Direct semantic check of a lasso against every unit of ``spec``."""
    vars = spec.vars
    horizon = len(word.stem) + len(word.loop)
    for unit in spec.units:
        if unit.kind is Kind.INIT:
            if not eval_single(unit.expr, vars, word[0]):
                return False
        elif unit.kind is Kind.INV:
            # positions past the first loop iteration repeat earlier pairs
            for i in range(horizon):
                if not eval_pair(unit.expr, vars, word[i], word[i + 1]):
                    return False
        else:
            if not any(eval_single(unit.expr, vars, s) for s in word.loop):
                return False
    return True
