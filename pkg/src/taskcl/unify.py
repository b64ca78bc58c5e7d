"""Unification: first-order plus the decidable higher-order pattern fragment.

A flexible term is a meta-variable applied to arguments. When those
arguments are distinct bound variables the problem has a most general
solution (abstract the bound variables out of the other side); anything
flexible beyond that raises NonPattern rather than guessing.

As an extension for clause heads that compute, an arithmetic application
with exactly one undetermined operand unifies against an integer by
inverting the operation (so ``X + 1`` unifies with ``5`` binding X to 4).
"""

from __future__ import annotations

from .builtins import ARITH_OPS, fold_arith
from .terms import (
    App,
    Bound,
    Const,
    Int,
    Lam,
    Meta,
    Substitution,
    Term,
    Var,
    beta_normalize,
    free_metas,
    spine,
)


class NonPattern(Exception):
    """A flexible subterm falls outside the pattern fragment."""

    def __init__(self, t1: Term, t2: Term):
        super().__init__(f"non-pattern unification problem: {t1} =?= {t2}")
        self.t1 = t1
        self.t2 = t2


def _norm(sigma: Substitution, t: Term) -> Term:
    return fold_arith(sigma.apply(t))


def _is_flex(t: Term) -> bool:
    head, _ = spine(t)
    return isinstance(head, Meta)


def _pattern_args(args: list[Term]) -> list[int] | None:
    """Indices of the arguments when they are distinct bound variables."""
    idxs: list[int] = []
    for a in args:
        if not isinstance(a, Bound) or a.index in idxs:
            return None
        idxs.append(a.index)
    return idxs


def _abstract(t: Term, mapping: dict[int, int], n_args: int, uid: int,
              inner: int = 0) -> Term | None:
    """Rewrite ``t`` so it can live under ``n_args`` new lambdas.

    ``mapping`` sends outer de Bruijn indices (arguments of the flex head)
    to their parameter positions. Returns None when the term mentions the
    meta being solved (occurs) or an outer binder not among the arguments
    (scope violation).
    """
    if isinstance(t, Bound):
        if t.index < inner:
            return t
        rel = t.index - inner
        if rel in mapping:
            return Bound(n_args - 1 - mapping[rel] + inner)
        return None
    if isinstance(t, Meta):
        return None if t.uid == uid else t
    if isinstance(t, App):
        fn = _abstract(t.fn, mapping, n_args, uid, inner)
        arg = _abstract(t.arg, mapping, n_args, uid, inner)
        return None if fn is None or arg is None else App(fn, arg)
    if isinstance(t, Lam):
        body = _abstract(t.body, mapping, n_args, uid, inner + 1)
        return None if body is None else Lam(t.hint, body)
    return t


def _solve_flex(m: Meta, args: list[Term], t: Term,
                sigma: Substitution) -> Substitution | None:
    idxs = _pattern_args(args)
    if idxs is None:
        raise NonPattern(App(m, args[0]) if args else m, t)
    mapping = {idx: pos for pos, idx in enumerate(idxs)}
    body = _abstract(t, mapping, len(args), m.uid)
    if body is None:
        return None
    for pos in range(len(args) - 1, -1, -1):
        body = Lam(f"x{pos}", body)
    return sigma.bind(m, body)


def _invert_arith(op: str, a: Term, b: Term, n: int,
                  sigma: Substitution) -> Substitution | None:
    """Solve ``a op b = n`` when exactly one operand is ground."""
    ga = isinstance(a, Int)
    gb = isinstance(b, Int)
    if ga == gb:
        return None
    if op == "+":
        target = n - a.value if ga else n - b.value
        other = b if ga else a
    elif op == "-":
        target = a.value - n if ga else n + b.value
        other = b if ga else a
    else:  # "*"
        known = a.value if ga else b.value
        if known == 0 or n % known != 0:
            return None
        target = n // known
        other = b if ga else a
    try:
        lit = Int(target)
    except Exception:
        return None
    return _unify(other, lit, sigma, 0)


def _unify(t1: Term, t2: Term, sigma: Substitution,
           depth: int) -> Substitution | None:
    t1 = _norm(sigma, t1)
    t2 = _norm(sigma, t2)
    if t1 == t2:
        return sigma

    if isinstance(t1, Lam) or isinstance(t2, Lam):
        if isinstance(t1, Lam) and isinstance(t2, Lam):
            return _unify(t1.body, t2.body, sigma, depth + 1)
        flex, rigid = (t1, t2) if _is_flex(t1) else (t2, t1)
        if _is_flex(flex):
            h, a = spine(flex)
            return _solve_flex(h, a, rigid, sigma)
        return None  # beta only, no eta

    h1, a1 = spine(t1)
    h2, a2 = spine(t2)

    flex1 = isinstance(h1, Meta)
    flex2 = isinstance(h2, Meta)
    if flex1 and flex2:
        if h1 == h2 and len(a1) == len(a2):
            out = sigma
            for x, y in zip(a1, a2):
                out_ = _unify(x, y, out, depth)
                if out_ is None:
                    return None
                out = out_
            return out
        # distinct metas: solve whichever side is a pattern
        if _pattern_args(a1) is not None:
            return _solve_flex(h1, a1, t2, sigma)
        if _pattern_args(a2) is not None:
            return _solve_flex(h2, a2, t1, sigma)
        raise NonPattern(t1, t2)
    if flex1:
        return _solve_flex(h1, a1, t2, sigma)
    if flex2:
        return _solve_flex(h2, a2, t1, sigma)

    # arithmetic inversion: X + 1 against 5
    if isinstance(t2, Int) and isinstance(h1, Const) and h1.name in ARITH_OPS \
            and len(a1) == 2:
        return _invert_arith(h1.name, a1[0], a1[1], t2.value, sigma)
    if isinstance(t1, Int) and isinstance(h2, Const) and h2.name in ARITH_OPS \
            and len(a2) == 2:
        return _invert_arith(h2.name, a2[0], a2[1], t1.value, sigma)

    if h1 != h2 or len(a1) != len(a2):
        return None
    out = sigma
    for x, y in zip(a1, a2):
        out_ = _unify(x, y, out, depth)
        if out_ is None:
            return None
        out = out_
    return out


def unify(t1: Term, t2: Term, sigma: Substitution) -> Substitution | None:
    """Most general unifier within the supported fragment.

    Returns the extended substitution, None when there is no unifier
    (symbol clash or occurs check), and raises NonPattern for flexible
    problems outside the pattern fragment.
    """
    return _unify(t1, t2, sigma, 0)
