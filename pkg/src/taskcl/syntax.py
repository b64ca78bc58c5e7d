"""Lexer and recursive-descent parser for agent programs, queries, witness
terms, and scripted move files.

Programs are UTF-8 ``.taskcl`` files: declarations ``name: Formula.``
terminated by periods, ``//`` comments. Uppercase-initial identifiers that
are not explicitly bound are implicitly quantified: closed under ``forall``
at the front of a declaration, and under ``exists`` (answer variables) at
the front of a query.

Move scripts are JSON: ``{"moves": [{"pick": <int>} | {"term": "<text>"},
...]}`` with an optional ``"expected_site"`` per entry.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from .formulas import (
    AgentDecl,
    Atom,
    Bang,
    CAll,
    CAnd,
    CEx,
    COr,
    Formula,
    Impl,
    PAnd,
    POr,
)
from .terms import App, Bound, Const, Int, IntRangeError, Lam, Term, Var


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int,
                 expected: tuple[str, ...] = ()):
        loc = f"line {line}, column {col}"
        exp = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at {loc}{exp}")
        self.line = line
        self.col = col
        self.expected = expected


@dataclass(frozen=True, slots=True)
class PickEntry:
    index: int
    expected_site: str | None = None


@dataclass(frozen=True, slots=True)
class TermEntry:
    text: str
    expected_site: str | None = None


MoveEntry = Union[PickEntry, TermEntry]


@dataclass(frozen=True, slots=True)
class MoveScript:
    entries: tuple[MoveEntry, ...]


_KEYWORDS = {"forall", "exists"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>->|>=|<=|==|!=|[.,:()\\!&+|*\-<>])
""", re.VERBOSE)

_ATOM_START = ("int", "ident", "\\")


class _Lexer:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str, int, int]] = []
        line, col = 1, 1
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup
            value = m.group()
            if kind == "ws":
                pass
            elif kind == "ident" and value in _KEYWORDS:
                self.tokens.append((value, value, line, col))
            elif kind == "punct":
                self.tokens.append((value, value, line, col))
            else:
                self.tokens.append((kind, value, line, col))
            nl = value.count("\n")
            if nl:
                line += nl
                col = len(value) - value.rfind("\n")
            else:
                col += len(value)
            pos = m.end()
        self.tokens.append(("eof", "", line, col))
        self.i = 0

    def peek(self) -> tuple[str, str, int, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int, int]:
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], tok[3],
                             expected=(kind,))
        return self.next()

    def at(self, kind: str) -> bool:
        return self.peek()[0] == kind


_CMP = {">=": "geq", ">": "gt", "<=": "leq", "<": "lt", "==": "eq",
        "!=": "neq"}


class _Parser:
    """One parse of a program or query; tracks binder scopes."""

    def __init__(self, text: str, query_mode: bool):
        self.lx = _Lexer(text)
        self.query_mode = query_mode
        self.lambdas: list[str] = []     # innermost last
        self.fbound: list[str] = []      # formula-level binders in scope
        self.free: list[str] = []        # free uppercase, first occurrence

    # -- formulas ----------------------------------------------------------

    def formula(self) -> Formula:
        left = self.choice()
        if self.lx.at("->"):
            self.lx.next()
            return Impl(left, self.formula())
        return left

    def choice(self) -> Formula:
        left = self.por()
        op = None
        while self.lx.at("&") or self.lx.at("+"):
            tok = self.lx.next()
            if op is not None and tok[0] != op:
                raise ParseError("mixing '&' and '+' requires parentheses",
                                 tok[2], tok[3])
            op = tok[0]
            right = self.por()
            left = CAnd(left, right) if op == "&" else COr(left, right)
        return left

    def por(self) -> Formula:
        left = self.pand()
        while self.lx.at("|"):
            self.lx.next()
            left = POr(left, self.pand())
        return left

    def pand(self) -> Formula:
        left = self.unary()
        while self.lx.at("*"):
            self.lx.next()
            left = PAnd(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.lx.at("!"):
            self.lx.next()
            return Bang(self.unary())
        if self.lx.at("forall") or self.lx.at("exists"):
            kw = self.lx.next()[0]
            name = self.lx.expect("ident")[1]
            self.lx.expect(".")
            self.fbound.append(name)
            try:
                body = self.formula()
            finally:
                self.fbound.pop()
            if kw == "forall":
                return CAll(name, body)
            return CEx(name, body, answer=self.query_mode)
        if self.lx.at("("):
            self.lx.next()
            f = self.formula()
            self.lx.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        t = self.application()
        tok = self.lx.peek()
        if tok[0] in _CMP:
            self.lx.next()
            rhs = self.application()
            return Atom(App(App(Const(_CMP[tok[0]]), t), rhs))
        return Atom(t)

    # -- terms -------------------------------------------------------------

    def _resolve(self, name: str, line: int, col: int) -> Term:
        if name in self.lambdas:
            return Bound(self.lambdas[::-1].index(name))
        if name in self.fbound:
            return Var(name)
        if name[0].isupper():
            if name not in self.free:
                self.free.append(name)
            return Var(name)
        return Const(name)

    def application(self) -> Term:
        """Juxtaposed operands in atom position; arithmetic only inside
        parenthesized argument groups."""
        head = self.operand()
        args: list[Term] = []
        while True:
            tok = self.lx.peek()
            if tok[0] in ("int", "ident", "\\"):
                args.append(self.operand())
            elif tok[0] == "(":
                self.lx.next()
                args.append(self.term())
                while self.lx.at(","):
                    self.lx.next()
                    args.append(self.term())
                self.lx.expect(")")
            else:
                break
        for a in args:
            head = App(head, a)
        return head

    def operand(self) -> Term:
        tok = self.lx.peek()
        if tok[0] == "int":
            self.lx.next()
            try:
                return Int(int(tok[1]))
            except IntRangeError as e:
                raise ParseError(str(e), tok[2], tok[3]) from None
        if tok[0] == "ident":
            self.lx.next()
            return self._resolve(tok[1], tok[2], tok[3])
        if tok[0] == "\\":
            self.lx.next()
            name = self.lx.expect("ident")[1]
            self.lx.expect(".")
            self.lambdas.append(name)
            try:
                body = self.term()
            finally:
                self.lambdas.pop()
            return Lam(name, body)
        raise ParseError(f"unexpected {tok[1]!r}", tok[2], tok[3],
                         expected=("term",))

    def term(self) -> Term:
        """Full term grammar, with infix arithmetic (argument positions)."""
        left = self.mult()
        while self.lx.at("+") or self.lx.at("-"):
            op = self.lx.next()[0]
            left = App(App(Const(op), left), self.mult())
        return left

    def mult(self) -> Term:
        left = self.tapp()
        while self.lx.at("*"):
            self.lx.next()
            left = App(App(Const("*"), left), self.tapp())
        return left

    def tapp(self) -> Term:
        head = self.tprim()
        while True:
            tok = self.lx.peek()
            if tok[0] in ("int", "ident", "\\"):
                head = App(head, self.tprim())
            elif tok[0] == "(":
                self.lx.next()
                head = App(head, self.term())
                while self.lx.at(","):
                    self.lx.next()
                    head = App(head, self.term())
                self.lx.expect(")")
            else:
                return head

    def tprim(self) -> Term:
        tok = self.lx.peek()
        if tok[0] == "(":
            self.lx.next()
            t = self.term()
            self.lx.expect(")")
            return t
        return self.operand()

    # -- entry points ------------------------------------------------------

    def close_free(self, f: Formula) -> Formula:
        for name in reversed(self.free):
            if self.query_mode:
                f = CEx(name, f, answer=True)
            else:
                f = CAll(name, f)
        return f


def parse_program(text: str) -> list[AgentDecl]:
    p = _Parser(text, query_mode=False)
    decls: list[AgentDecl] = []
    while not p.lx.at("eof"):
        name = p.lx.expect("ident")[1]
        p.lx.expect(":")
        p.free = []
        f = p.formula()
        p.lx.expect(".")
        decls.append(AgentDecl(name, p.close_free(f)))
    return decls


def parse_query(text: str) -> Formula:
    p = _Parser(text, query_mode=True)
    f = p.formula()
    p.lx.expect("eof")
    return p.close_free(f)


def parse_term_text(text: str) -> Term:
    """A standalone term, as supplied for an environment witness."""
    p = _Parser(text, query_mode=False)
    t = p.term()
    p.lx.expect("eof")
    return t


def parse_moves(text: str) -> MoveScript:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(data, dict) or not isinstance(data.get("moves"), list):
        raise ParseError('move script must be {"moves": [...]}', 1, 1)
    entries: list[MoveEntry] = []
    for i, raw in enumerate(data["moves"]):
        if not isinstance(raw, dict):
            raise ParseError(f"move {i} must be an object", 1, 1)
        site = raw.get("expected_site")
        if site is not None and not isinstance(site, str):
            raise ParseError(f"move {i}: expected_site must be a string", 1, 1)
        if "pick" in raw:
            if not isinstance(raw["pick"], int) or isinstance(raw["pick"], bool):
                raise ParseError(f"move {i}: pick must be an integer", 1, 1)
            entries.append(PickEntry(raw["pick"], site))
        elif "term" in raw:
            if not isinstance(raw["term"], str):
                raise ParseError(f"move {i}: term must be a string", 1, 1)
            entries.append(TermEntry(raw["term"], site))
        else:
            raise ParseError(f"move {i} needs 'pick' or 'term'", 1, 1)
    return MoveScript(tuple(entries))
