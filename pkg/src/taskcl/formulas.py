"""Formula AST over atoms built from terms, plus the pretty-printer.

Surface tokens (one per operator): ``->`` reduction, ``*`` parallel
conjunction, ``|`` parallel disjunction, ``&`` choice conjunction, ``+``
choice disjunction, ``forall x.`` / ``exists x.`` the choice quantifiers,
prefix ``!`` replication. ``pretty`` is a right inverse of the parser:
``parse_query(pretty(f))`` is alpha-equal to ``f`` for closed formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .builtins import ARITH_OPS, COMPARISONS
from .terms import (
    App,
    Bound,
    Const,
    Int,
    Lam,
    Meta,
    Term,
    Var,
    spine,
    subst_var,
)


@dataclass(frozen=True, slots=True)
class Atom:
    head: Term


@dataclass(frozen=True, slots=True)
class Impl:
    body: "Formula"
    head: "Formula"


@dataclass(frozen=True, slots=True)
class PAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class POr:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class CAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class COr:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class CAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class CEx:
    var: str
    body: "Formula"
    # set for query-level existentials, whose bindings are reported
    answer: bool = field(default=False, compare=False)


@dataclass(frozen=True, slots=True)
class Bang:
    body: "Formula"


Formula = Union[Atom, Impl, PAnd, POr, CAnd, COr, CAll, CEx, Bang]


@dataclass(frozen=True, slots=True)
class AgentDecl:
    name: str
    formula: "Formula"


def formula_tag(f: Formula) -> str:
    return {
        Atom: "atom", Impl: "imp", PAnd: "pand", POr: "por",
        CAnd: "cand", COr: "cor", CAll: "call", CEx: "cex", Bang: "bang",
    }[type(f)]


def subst_formula(f: Formula, name: str, t: Term) -> Formula:
    """Replace the formula-bound variable ``name`` by a closed term."""
    if isinstance(f, Atom):
        return Atom(subst_var(f.head, name, t))
    if isinstance(f, Impl):
        return Impl(subst_formula(f.body, name, t), subst_formula(f.head, name, t))
    if isinstance(f, (PAnd, POr, CAnd, COr)):
        return type(f)(subst_formula(f.left, name, t),
                       subst_formula(f.right, name, t))
    if isinstance(f, CAll):
        if f.var == name:
            return f
        return CAll(f.var, subst_formula(f.body, name, t))
    if isinstance(f, CEx):
        if f.var == name:
            return f
        return CEx(f.var, subst_formula(f.body, name, t), f.answer)
    return Bang(subst_formula(f.body, name, t))


def free_formula_vars(f: Formula, bound: frozenset[str] = frozenset(),
                      acc: list[str] | None = None) -> list[str]:
    """Free object variables in first-occurrence order."""
    out = acc if acc is not None else []
    if isinstance(f, Atom):
        _term_vars(f.head, bound, out)
    elif isinstance(f, Impl):
        free_formula_vars(f.body, bound, out)
        free_formula_vars(f.head, bound, out)
    elif isinstance(f, (PAnd, POr, CAnd, COr)):
        free_formula_vars(f.left, bound, out)
        free_formula_vars(f.right, bound, out)
    elif isinstance(f, (CAll, CEx)):
        free_formula_vars(f.body, bound | {f.var}, out)
    else:
        free_formula_vars(f.body, bound, out)
    return out


def _term_vars(t: Term, bound: frozenset[str], out: list[str]) -> None:
    if isinstance(t, Var):
        if t.name not in bound and t.name not in out:
            out.append(t.name)
    elif isinstance(t, App):
        _term_vars(t.fn, bound, out)
        _term_vars(t.arg, bound, out)
    elif isinstance(t, Lam):
        _term_vars(t.body, bound, out)


# ---------------------------------------------------------------------------
# pretty-printing

_CMP_TOKENS = {"geq": ">=", "gt": ">", "leq": "<=", "lt": "<", "eq": "==",
               "neq": "!="}


def _fresh_name(hint: str, taken: set[str]) -> str:
    name = hint if hint else "x"
    while name in taken:
        name += "'"
    return name


def pretty_term(t: Term, names: list[str] | None = None,
                atomic: bool = False) -> str:
    """Render a term; ``atomic`` requests parentheses around compounds."""
    if names is None:
        names = []
    if isinstance(t, (Const, Int, Var)):
        return str(t)
    if isinstance(t, Meta):
        return str(t)
    if isinstance(t, Bound):
        if t.index < len(names):
            return names[-1 - t.index]
        return str(t)
    if isinstance(t, Lam):
        name = _fresh_name(t.hint, set(names))
        body = pretty_term(t.body, names + [name])
        return f"(\\{name}. {body})"
    head, args = spine(t)
    if isinstance(head, Const) and head.name in ARITH_OPS and len(args) == 2:
        a = pretty_term(args[0], names, atomic=True)
        b = pretty_term(args[1], names, atomic=True)
        s = f"{a} {head.name} {b}"
        return f"({s})" if atomic else s
    parts = [pretty_term(head, names, atomic=True)]
    parts += [pretty_term(a, names, atomic=True) for a in args]
    s = " ".join(parts)
    return f"({s})" if atomic else s


def _pretty_atom(t: Term) -> str:
    head, args = spine(t)
    if isinstance(head, Const) and head.name in COMPARISONS and len(args) == 2:
        a = pretty_term(args[0], atomic=True)
        b = pretty_term(args[1], atomic=True)
        return f"{a} {_CMP_TOKENS[head.name]} {b}"
    return pretty_term(t)


# precedence levels: -> 0, &/+ 1, | 2, * 3, ! 4, atom 5; quantifiers
# scope maximally to the right, so they print at the loosest level and
# get parenthesized anywhere that could continue the formula
_PREC = {Impl: 0, CAnd: 1, COr: 1, POr: 2, PAnd: 3, Bang: 4, CAll: 0,
         CEx: 0, Atom: 5}


def pretty(f: Formula) -> str:
    return _pp(f, 0)


def _pp(f: Formula, ctx: int) -> str:
    prec = _PREC[type(f)]
    if isinstance(f, Atom):
        s = _pretty_atom(f.head)
    elif isinstance(f, Impl):
        s = f"{_pp(f.body, prec + 1)} -> {_pp(f.head, prec)}"
    elif isinstance(f, CAnd):
        s = f"{_pp(f.left, prec)} & {_pp(f.right, prec + 1)}"
    elif isinstance(f, COr):
        s = f"{_pp(f.left, prec)} + {_pp(f.right, prec + 1)}"
    elif isinstance(f, POr):
        s = f"{_pp(f.left, prec)} | {_pp(f.right, prec + 1)}"
    elif isinstance(f, PAnd):
        s = f"{_pp(f.left, prec)} * {_pp(f.right, prec + 1)}"
    elif isinstance(f, Bang):
        s = f"!{_pp(f.body, prec)}"
    elif isinstance(f, CAll):
        s = f"forall {f.var}. ({_pp(f.body, 0)})"
    else:
        s = f"exists {f.var}. ({_pp(f.body, 0)})"
    # mixed & / + chains need explicit parentheses
    if isinstance(f, (CAnd, COr)):
        left = f.left
        if isinstance(left, (CAnd, COr)) and type(left) is not type(f):
            s = f"({_pp(left, 0)}) {'&' if isinstance(f, CAnd) else '+'} " \
                f"{_pp(f.right, prec + 1)}"
    if prec < ctx:
        return f"({s})"
    return s
