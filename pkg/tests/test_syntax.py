import glob
import os

import pytest
from hypothesis import given, settings

from taskcl.formulas import (
    Atom,
    Bang,
    CAll,
    CAnd,
    CEx,
    COr,
    Impl,
    PAnd,
    POr,
    pretty,
    pretty_term,
)
from taskcl.syntax import (
    ParseError,
    PickEntry,
    TermEntry,
    parse_moves,
    parse_program,
    parse_query,
    parse_term_text,
)
from taskcl.terms import App, Bound, Const, Int, Lam, Var, app

from .strategies import formulas

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def atom(name, *args):
    return Atom(app(Const(name), *args))


# -- structure ---------------------------------------------------------------

def test_precedence_reduction_loosest():
    f = parse_query("p -> q * r")
    assert f == Impl(atom("p"), PAnd(atom("q"), atom("r")))


def test_precedence_choice_over_reduction():
    f = parse_query("p & q -> r")
    assert f == Impl(CAnd(atom("p"), atom("q")), atom("r"))


def test_reduction_right_associative():
    f = parse_query("p -> q -> r")
    assert f == Impl(atom("p"), Impl(atom("q"), atom("r")))


def test_parallel_binds_tighter_than_choice():
    f = parse_query("p * q + r * s")
    assert f == COr(PAnd(atom("p"), atom("q")), PAnd(atom("r"), atom("s")))


def test_por_between():
    f = parse_query("p * q | r")
    assert f == POr(PAnd(atom("p"), atom("q")), atom("r"))


def test_mixed_choice_needs_parens():
    with pytest.raises(ParseError):
        parse_query("p & q + r")
    f = parse_query("(p & q) + r")
    assert f == COr(CAnd(atom("p"), atom("q")), atom("r"))


def test_bang_and_quantifier_scope():
    f = parse_program("c: !(forall X. (p(X) -> q(X))).")[0].formula
    assert isinstance(f, Bang)
    assert isinstance(f.body, CAll)
    # quantifier scope extends maximally to the right
    g = parse_query("exists X. p(X) * q(X)")
    assert g == CEx("X", PAnd(atom("p", Var("X")), atom("q", Var("X"))),
                    answer=True)


def test_comparison_tokens():
    f = parse_query("X >= 3")
    assert f == CEx("X", Atom(app(Const("geq"), Var("X"), Int(3))),
                    answer=True)
    # arithmetic operands need the functional form: bare `+` at formula
    # level is the choice disjunction
    g = parse_query("geq(X + 1, 3)")
    assert g == CEx("X", Atom(app(Const("geq"),
                                  app(Const("+"), Var("X"), Int(1)),
                                  Int(3))), answer=True)


def test_implicit_quantification_program_vs_query():
    decl = parse_program("c: p(X, Y).")[0]
    assert decl.formula == CAll("X", CAll("Y", atom("p", Var("X"), Var("Y"))))
    q = parse_query("p(X, a)")
    assert q == CEx("X", atom("p", Var("X"), Const("a")), answer=True)
    assert q.answer


def test_lambda_terms_use_de_bruijn():
    t = parse_term_text("\\x. \\y. f x y")
    assert t == Lam("x", Lam("y", app(Const("f"), Bound(1), Bound(0))))


def test_juxtaposition_and_argument_groups():
    f1 = parse_query("p (f a) b")
    f2 = parse_query("p(f a, b)")
    assert f1 == f2 == atom("p", app(Const("f"), Const("a")), Const("b"))


def test_arith_in_argument_groups():
    f = parse_query("p(X - 3)")
    assert f == CEx("X", atom("p", app(Const("-"), Var("X"), Int(3))),
                    answer=True)


def test_comments_and_layout():
    decls = parse_program("// header\nc: p. // trailing\nd: q.\n")
    assert [d.name for d in decls] == ["c", "d"]


# -- errors ------------------------------------------------------------------

def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_program("c: p @ q.")
    assert e.value.line == 1 and e.value.col == 6


def test_missing_period():
    with pytest.raises(ParseError):
        parse_program("c: p")


def test_unbalanced_parens():
    with pytest.raises(ParseError):
        parse_query("(p * q")


def test_int_literal_out_of_range():
    with pytest.raises(ParseError):
        parse_query(f"p({2**63})")


# -- move scripts ------------------------------------------------------------

def test_parse_moves():
    s = parse_moves('{"moves": [{"pick": 1}, '
                    '{"term": "5", "expected_site": "goal/call"}]}')
    assert s.entries == (PickEntry(1, None), TermEntry("5", "goal/call"))


@pytest.mark.parametrize("text", [
    "not json",
    "[]",
    '{"moves": [42]}',
    '{"moves": [{"pick": true}]}',
    '{"moves": [{"term": 5}]}',
    '{"moves": [{}]}',
])
def test_parse_moves_rejects(text):
    with pytest.raises(ParseError):
        parse_moves(text)


# -- round trips -------------------------------------------------------------

def test_corpus_round_trips():
    files = glob.glob(os.path.join(CORPUS, "*.taskcl"))
    assert files, "corpus programs missing"
    for path in files:
        for decl in parse_program(open(path).read()):
            text = pretty(decl.formula)
            reparsed = parse_program(f"x: {text}.")[0].formula
            assert reparsed == decl.formula, path


@settings(max_examples=500, deadline=None)
@given(formulas)
def test_generated_formulas_round_trip(f):
    text = pretty(f)
    # parse in program mode: no implicit existential closure, and the
    # generator produces closed formulas only
    reparsed = parse_program(f"x: {text}.")[0].formula
    assert reparsed == f, text


def test_term_round_trip_examples():
    for text in ["f a b", "f(a, b)", "(\\x. f x) a", "X + 1 * Y",
                 "f (g a) (\\x. \\y. x)"]:
        t = parse_term_text(text)
        assert parse_term_text(pretty_term(t)) == t
