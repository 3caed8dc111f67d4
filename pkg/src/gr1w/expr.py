"""Boolean expressions over a variable set and its next-step copies.

Symbols (valuations of the variable set) are plain integers: bit ``i`` holds
the value of the ``i``-th declared variable.  Expressions are immutable ASTs
evaluated by walking the tree, either on a single pair of symbols or on numpy
arrays of symbols at once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import ParseError, PreconditionError, UndeclaredVariable

DEFAULT_MAX_VARS = 16
RESERVED = frozenset({"true", "false", "next"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class VarTable:
    names: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise ValueError(f"invalid variable name {name!r}")
            if name in RESERVED:
                raise ValueError(f"'{name}' is a reserved word")
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate variable '{dup}'")
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.index

    @property
    def alphabet_size(self) -> int:
        return 1 << len(self.names)

    def symbol(self, true_vars=()) -> int:
        """Symbol in which exactly ``true_vars`` hold."""
        sym = 0
        for name in true_vars:
            if name not in self.index:
                raise UndeclaredVariable(name)
            sym |= 1 << self.index[name]
        return sym

    def true_vars(self, sym: int) -> tuple[str, ...]:
        return tuple(n for i, n in enumerate(self.names) if sym >> i & 1)

    def format_symbol(self, sym: int) -> str:
        return "{" + ",".join(self.true_vars(sym)) + "}"

    def check_cap(self, cap=DEFAULT_MAX_VARS):
        from .errors import CapExceeded
        if len(self.names) > cap:
            raise CapExceeded(len(self.names), cap)


# -- AST -------------------------------------------------------------------

class BoolExpr:
    """Base class of expression nodes."""

    __slots__ = ()

    @property
    def uses_next(self) -> bool:
        return any(isinstance(n, NextVar) for n in self.walk())

    def walk(self):
        yield self

    def variables(self) -> set[str]:
        return {n.name for n in self.walk() if isinstance(n, (Var, NextVar))}

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(BoolExpr):
    value: bool


@dataclass(frozen=True)
class Var(BoolExpr):
    name: str


@dataclass(frozen=True)
class NextVar(BoolExpr):
    name: str


@dataclass(frozen=True)
class Not(BoolExpr):
    operand: BoolExpr

    def walk(self):
        yield self
        yield from self.operand.walk()


@dataclass(frozen=True)
class _Binary(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def walk(self):
        yield self
        yield from self.left.walk()
        yield from self.right.walk()


@dataclass(frozen=True)
class And(_Binary):
    pass


@dataclass(frozen=True)
class Or(_Binary):
    pass


@dataclass(frozen=True)
class Implies(_Binary):
    pass


@dataclass(frozen=True)
class Iff(_Binary):
    pass


TRUE = Const(True)
FALSE = Const(False)


def negate(e: BoolExpr) -> BoolExpr:
    if isinstance(e, Const):
        return Const(not e.value)
    return Not(e)


def conjoin_all(exprs) -> BoolExpr:
    exprs = list(exprs)
    if not exprs:
        return TRUE
    return reduce(And, exprs)


def disjoin_all(exprs) -> BoolExpr:
    exprs = list(exprs)
    if not exprs:
        return FALSE
    return reduce(Or, exprs)


# -- lexing and parsing ----------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str       # 'ident', 'op' or 'eof'
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|[!&|();:,])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "op"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text) -> bool:
        tok = self.peek()
        return tok.kind != "eof" and tok.text == text

    def expect(self, text) -> Token:
        tok = self.peek()
        if tok.kind == "eof" or tok.text != text:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected '{text}', found {found}",
                             tok.line, tok.column)
        return self.advance()

    def expect_ident(self, what="identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected {what}, found {found}",
                             tok.line, tok.column)
        return self.advance()


class ExprParser:
    """Recursive-descent parser.

    Precedence, tightest first: ``!``, ``&``, ``|``, ``->`` (right
    associative), ``<->`` (left associative).
    """

    def __init__(self, stream: TokenStream, vars: VarTable):
        self.ts = stream
        self.vars = vars

    def parse(self) -> BoolExpr:
        return self._iff()

    def _iff(self):
        left = self._implies()
        while self.ts.at("<->"):
            self.ts.advance()
            left = Iff(left, self._implies())
        return left

    def _implies(self):
        left = self._or()
        if self.ts.at("->"):
            self.ts.advance()
            return Implies(left, self._implies())
        return left

    def _or(self):
        left = self._and()
        while self.ts.at("|"):
            self.ts.advance()
            left = Or(left, self._and())
        return left

    def _and(self):
        left = self._unary()
        while self.ts.at("&"):
            self.ts.advance()
            left = And(left, self._unary())
        return left

    def _unary(self):
        if self.ts.at("!"):
            self.ts.advance()
            return Not(self._unary())
        return self._atom()

    def _atom(self):
        tok = self.ts.peek()
        if tok.kind == "op" and tok.text == "(":
            self.ts.advance()
            inner = self._iff()
            self.ts.expect(")")
            return inner
        if tok.kind != "ident":
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected an expression, found {found}",
                             tok.line, tok.column)
        self.ts.advance()
        if tok.text == "true":
            return TRUE
        if tok.text == "false":
            return FALSE
        if tok.text == "next":
            self.ts.expect("(")
            arg = self.ts.peek()
            if arg.kind == "ident" and arg.text == "next":
                raise ParseError("nested next() is not allowed",
                                 arg.line, arg.column)
            arg = self.ts.expect_ident("variable inside next()")
            self._check_declared(arg)
            self.ts.expect(")")
            return NextVar(arg.text)
        self._check_declared(tok)
        return Var(tok.text)

    def _check_declared(self, tok):
        if tok.text in RESERVED or tok.text not in self.vars:
            raise UndeclaredVariable(tok.text, tok.line, tok.column)


def parse_expr(text: str, vars: VarTable) -> BoolExpr:
    if not text or not text.strip():
        raise ParseError("empty expression")
    ts = TokenStream(tokenize(text))
    expr = ExprParser(ts, vars).parse()
    tok = ts.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {tok.text!r} after expression",
                         tok.line, tok.column)
    return expr


# -- printing --------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def to_text(e: BoolExpr) -> str:
    if isinstance(e, Const):
        return "true" if e.value else "false"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, NextVar):
        return f"next({e.name})"
    if isinstance(e, Not):
        inner = to_text(e.operand)
        if isinstance(e.operand, _Binary):
            inner = f"({inner})"
        return "!" + inner
    prec = _PREC[type(e)]
    left, right = to_text(e.left), to_text(e.right)
    # Parenthesise anything that would re-associate differently.
    lp = _PREC.get(type(e.left), 9)
    rp = _PREC.get(type(e.right), 9)
    right_assoc = isinstance(e, Implies)
    if lp < prec or (lp == prec and right_assoc):
        left = f"({left})"
    if rp < prec or (rp == prec and not right_assoc):
        right = f"({right})"
    return f"{left} {_OPS[type(e)]} {right}"


# -- evaluation ------------------------------------------------------------

def _eval(e, vars, cur, nxt):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return bool(cur >> vars.index[e.name] & 1)
    if isinstance(e, NextVar):
        return bool(nxt >> vars.index[e.name] & 1)
    if isinstance(e, Not):
        return not _eval(e.operand, vars, cur, nxt)
    left = _eval(e.left, vars, cur, nxt)
    if isinstance(e, And):
        return left and _eval(e.right, vars, cur, nxt)
    if isinstance(e, Or):
        return left or _eval(e.right, vars, cur, nxt)
    if isinstance(e, Implies):
        return (not left) or _eval(e.right, vars, cur, nxt)
    if isinstance(e, Iff):
        return left == _eval(e.right, vars, cur, nxt)
    raise TypeError(f"not an expression node: {e!r}")


def eval_pair(e: BoolExpr, vars: VarTable, cur: int, nxt: int) -> bool:
    """Truth of ``e`` with variables read from ``cur`` and next(...) from ``nxt``."""
    return _eval(e, vars, cur, nxt)


def eval_single(e: BoolExpr, vars: VarTable, cur: int) -> bool:
    if e.uses_next:
        raise PreconditionError(f"expression uses next(): {e}")
    return _eval(e, vars, cur, 0)


def eval_array(e: BoolExpr, vars: VarTable, cur, nxt=None) -> np.ndarray:
    """Vectorised evaluation; ``cur`` and ``nxt`` broadcast against each other."""
    cur = np.asarray(cur)
    if nxt is None:
        if e.uses_next:
            raise PreconditionError(f"expression uses next(): {e}")
        nxt = cur
    nxt = np.asarray(nxt)
    shape = np.broadcast_shapes(cur.shape, nxt.shape)

    def walk(node):
        if isinstance(node, Const):
            return np.full(shape, node.value, dtype=bool)
        if isinstance(node, Var):
            return np.broadcast_to((cur >> vars.index[node.name]) & 1, shape).astype(bool)
        if isinstance(node, NextVar):
            return np.broadcast_to((nxt >> vars.index[node.name]) & 1, shape).astype(bool)
        if isinstance(node, Not):
            return ~walk(node.operand)
        left, right = walk(node.left), walk(node.right)
        if isinstance(node, And):
            return left & right
        if isinstance(node, Or):
            return left | right
        if isinstance(node, Implies):
            return ~left | right
        if isinstance(node, Iff):
            return left == right
        raise TypeError(f"not an expression node: {node!r}")

    return walk(e)


def count_sat_single(e: BoolExpr, vars: VarTable) -> int:
    """Number of symbols satisfying a next-free expression (exhaustive)."""
    if e.uses_next:
        raise PreconditionError(f"expression uses next(): {e}")
    symbols = np.arange(vars.alphabet_size, dtype=np.int64)
    return int(np.count_nonzero(eval_array(e, vars, symbols)))
