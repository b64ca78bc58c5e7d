"""Ground arithmetic and the comparison / atom-guard predicates.

Arithmetic surface forms parse to the function symbols ``+``, ``-`` and
``*`` applied to two arguments. ``eval_arith`` folds a fully ground tree to
a single integer; ``fold_arith`` is the partial variant used by the engine
before unification, which also applies unit/absorber simplifications so
that e.g. ``0 * Y + Y`` exposes ``Y``.
"""

from __future__ import annotations

from .terms import (
    INT_MAX,
    INT_MIN,
    App,
    Const,
    Int,
    Lam,
    Meta,
    Term,
    TermError,
    Var,
    alpha_eq,
    spine,
)

ARITH_OPS = {"+", "-", "*"}
COMPARISONS = {"geq", "gt", "leq", "lt", "eq", "neq"}
BUILTIN_PREDS = COMPARISONS | {"atom"}

# object-level connectives of the Horn-clause corpus; `atom t` is false
# when t's head is one of these
OBJECT_CONNECTIVES = {"and", "imp", "all", "some"}


class NotGround(TermError):
    """Evaluation hit a meta-variable; retry after instantiation."""


class ArithError(TermError):
    """Arithmetic overflowed the signed 64-bit range."""


class UnknownBuiltin(TermError):
    pass


def _check_range(v: int) -> int:
    if not (INT_MIN <= v <= INT_MAX):
        raise ArithError(f"64-bit overflow: {v}")
    return v


def _apply_op(op: str, a: int, b: int) -> int:
    if op == "+":
        return _check_range(a + b)
    if op == "-":
        return _check_range(a - b)
    return _check_range(a * b)


def eval_arith(t: Term) -> Int:
    """Fold a ground arithmetic term to an integer leaf.

    Raises NotGround if a meta-variable occurs anywhere in the tree, and
    ArithError on overflow.
    """
    if isinstance(t, Int):
        return t
    if isinstance(t, Meta):
        raise NotGround(f"meta-variable in arithmetic: {t}")
    head, args = spine(t)
    if isinstance(head, Const) and head.name in ARITH_OPS and len(args) == 2:
        a = eval_arith(args[0])
        b = eval_arith(args[1])
        return Int(_apply_op(head.name, a.value, b.value))
    raise ArithError(f"not an arithmetic term: {t!r}")


def fold_arith(t: Term) -> Term:
    """Fold ground arithmetic subterms bottom-up, leaving the rest intact.

    Applies the simplifications 0+t, t+0, t-0, 0*t, t*0, 1*t, t*1 so partial
    instantiations reduce as far as possible.
    """
    if isinstance(t, Lam):
        body = fold_arith(t.body)
        return t if body is t.body else Lam(t.hint, body)
    if not isinstance(t, App):
        return t
    head, args = spine(t)
    if isinstance(head, Const) and head.name in ARITH_OPS and len(args) == 2:
        a = fold_arith(args[0])
        b = fold_arith(args[1])
        if isinstance(a, Int) and isinstance(b, Int):
            return Int(_apply_op(head.name, a.value, b.value))
        if head.name == "+":
            if isinstance(a, Int) and a.value == 0:
                return b
            if isinstance(b, Int) and b.value == 0:
                return a
        elif head.name == "-":
            if isinstance(b, Int) and b.value == 0:
                return a
        else:  # "*"
            if isinstance(a, Int) and a.value == 0 or \
               isinstance(b, Int) and b.value == 0:
                return Int(0)
            if isinstance(a, Int) and a.value == 1:
                return b
            if isinstance(b, Int) and b.value == 1:
                return a
        return App(App(head, a), b)
    fn = fold_arith(t.fn)
    arg = fold_arith(t.arg)
    return t if fn is t.fn and arg is t.arg else App(fn, arg)


def _has_meta(t: Term) -> bool:
    if isinstance(t, Meta):
        return True
    if isinstance(t, App):
        return _has_meta(t.fn) or _has_meta(t.arg)
    if isinstance(t, Lam):
        return _has_meta(t.body)
    return False


def _compare(name: str, a: Term, b: Term) -> bool:
    if name == "eq":
        return alpha_eq(a, b)
    if name == "neq":
        return not alpha_eq(a, b)
    if not (isinstance(a, Int) and isinstance(b, Int)):
        return False
    x, y = a.value, b.value
    return {"geq": x >= y, "gt": x > y, "leq": x <= y, "lt": x < y}[name]


def is_object_atom(t: Term) -> bool:
    """True iff t is headed by a constant that is not an object connective."""
    head, _ = spine(t)
    if isinstance(head, (Const, Int, Var)):
        return not (isinstance(head, Const) and head.name in OBJECT_CONNECTIVES)
    if isinstance(head, Meta):
        raise NotGround(f"flexible atom guard: {t}")
    return False


def eval_pred(name: str, args: list[Term]) -> bool:
    """Decide a builtin predicate on (normalized) arguments.

    Raises NotGround when a comparison argument still contains a meta, and
    UnknownBuiltin for names outside the builtin set.
    """
    if name == "atom":
        if len(args) != 1:
            raise UnknownBuiltin("atom expects one argument")
        return is_object_atom(args[0])
    if name in COMPARISONS:
        if len(args) != 2:
            raise UnknownBuiltin(f"{name} expects two arguments")
        a, b = args
        if name not in ("eq", "neq") and (_has_meta(a) or _has_meta(b)):
            raise NotGround(f"{name} on non-ground arguments")
        return _compare(name, a, b)
    raise UnknownBuiltin(name)
