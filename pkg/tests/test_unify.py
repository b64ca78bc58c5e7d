import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taskcl.builtins import fold_arith
from taskcl.terms import (
    EMPTY_SUBST,
    App,
    Bound,
    Const,
    FuelExhausted,
    Int,
    Lam,
    Meta,
    alpha_eq,
    app,
    beta_normalize,
)
from taskcl.unify import NonPattern, unify

from .strategies import closed_terms


def M(n, uid):
    return Meta(n, uid)


def test_first_order_basics():
    f, a, b = Const("f"), Const("a"), Const("b")
    x = M("X", 1)
    s = unify(app(f, x, b), app(f, a, b), EMPTY_SUBST)
    assert s is not None and s.apply(x) == a
    assert unify(app(f, a), app(f, b), EMPTY_SUBST) is None
    assert unify(a, app(f, a), EMPTY_SUBST) is None  # arity/shape clash


def test_occurs_check():
    x = M("X", 1)
    assert unify(x, App(Const("f"), x), EMPTY_SUBST) is None


def test_flex_flex_distinct_metas():
    x, y = M("X", 1), M("Y", 2)
    s = unify(x, y, EMPTY_SUBST)
    assert s is not None
    assert s.apply(x) == s.apply(y)


def test_flex_against_lambda():
    g = M("G", 1)
    lam = Lam("x", App(Const("p"), Bound(0)))
    s = unify(g, lam, EMPTY_SUBST)
    assert s is not None and alpha_eq(s.apply(g), lam)


def test_pattern_solution_under_binder():
    # \x. ?F x  =?=  \x. p x a   solves F := \x. p x a
    f = M("F", 1)
    lhs = Lam("x", App(f, Bound(0)))
    rhs = Lam("x", app(Const("p"), Bound(0), Const("a")))
    s = unify(lhs, rhs, EMPTY_SUBST)
    assert s is not None
    assert alpha_eq(s.apply(f), Lam("x0", app(Const("p"), Bound(0), Const("a"))))


def test_scope_violation_fails():
    # \x. \y. ?F y  =?=  \x. \y. p x : F cannot mention x
    f = M("F", 1)
    lhs = Lam("x", Lam("y", App(f, Bound(0))))
    rhs = Lam("x", Lam("y", App(Const("p"), Bound(1))))
    assert unify(lhs, rhs, EMPTY_SUBST) is None


def test_non_pattern_raises():
    f = M("F", 1)
    with pytest.raises(NonPattern):
        unify(App(f, Const("a")), Const("b"), EMPTY_SUBST)


# arithmetic inversion; expected values computed with plain ints
@pytest.mark.parametrize("op,known,result,expected", [
    ("+", 1, 5, 5 - 1),
    ("+", 17, 40, 40 - 17),
    ("*", 3, 12, 12 // 3),
    ("-", 2, 4, 4 + 2),      # X - 2 = 4
])
def test_arith_inversion(op, known, result, expected):
    x = M("X", 1)
    s = unify(app(Const(op), x, Int(known)), Int(result), EMPTY_SUBST)
    assert s is not None and s.apply(x) == Int(expected)


def test_arith_inversion_left_operand():
    x = M("X", 1)
    # 10 - X = 4  ->  X = 6
    s = unify(app(Const("-"), Int(10), x), Int(4), EMPTY_SUBST)
    assert s is not None and s.apply(x) == Int(10 - 4)


def test_arith_inversion_divisibility():
    x = M("X", 1)
    assert unify(app(Const("*"), x, Int(2)), Int(5), EMPTY_SUBST) is None
    assert unify(app(Const("*"), x, Int(0)), Int(5), EMPTY_SUBST) is None


def test_unifier_respects_existing_bindings():
    x, y = M("X", 1), M("Y", 2)
    s = unify(x, Int(3), EMPTY_SUBST)
    s = unify(app(Const("f"), x), app(Const("f"), y), s)
    assert s is not None and s.apply(y) == Int(3)


@settings(max_examples=500, deadline=None)
@given(closed_terms, st.integers(min_value=1, max_value=3))
def test_soundness_and_idempotence_against_self(t, uid):
    """Unifying ?X{uid} with a closed term must produce a substitution
    under which both sides normalize identically, applied once or twice."""
    x = Meta("X", 100 + uid)
    try:
        t = beta_normalize(t, fuel=5000)  # engine unifies normal terms
        s = unify(x, t, EMPTY_SUBST)
    except (FuelExhausted, NonPattern):
        return
    if s is None:
        return
    try:
        left = fold_arith(s.apply(x))
        right = fold_arith(s.apply(t))
    except FuelExhausted:
        return  # divergent random term; nothing to check
    assert alpha_eq(left, right)
    assert alpha_eq(s.apply(left), left)


@settings(max_examples=500, deadline=None)
@given(closed_terms, closed_terms)
def test_soundness_on_random_pairs(t1, t2):
    try:
        t1 = beta_normalize(t1, fuel=5000)
        t2 = beta_normalize(t2, fuel=5000)
        s = unify(t1, t2, EMPTY_SUBST)
    except (FuelExhausted, NonPattern):
        return
    if s is None:
        return
    try:
        n1 = fold_arith(s.apply(t1))
        n2 = fold_arith(s.apply(t2))
    except FuelExhausted:
        return
    assert alpha_eq(n1, n2)
