import io
import os

import pytest

from taskcl.cli import (
    EXIT_BAD_INPUT,
    EXIT_BUDGET,
    EXIT_ENV_NEEDED,
    EXIT_FAILURE,
    EXIT_SUCCESS,
    main,
)

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def corpus(*parts):
    return os.path.join(CORPUS, *parts)


@pytest.fixture()
def no_tty(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))


def test_run_success_prints_bindings(capsys, no_tty):
    code = main(["run", corpus("factorial.taskcl"),
                 "-q", "exists Z. (forall Y. fact(Y, Z))",
                 "--moves", corpus("moves", "y5.json")])
    out = capsys.readouterr().out
    assert code == EXIT_SUCCESS
    assert "success" in out
    assert "Z = 120" in out


def test_run_trace_shows_moves(capsys, no_tty):
    code = main(["run", corpus("lottery.taskcl"), "-q", "exists X. t(X)",
                 "--moves", corpus("moves", "pick1.json"), "--trace"])
    out = capsys.readouterr().out
    assert code == EXIT_SUCCESS
    assert "1. env @ res[0]/cor: pick 1" in out
    assert "X = 1000000" in out


def test_run_failure_exit_code(capsys, no_tty, tmp_path):
    moves = tmp_path / "m.json"
    moves.write_text('{"moves": [{"term": "2"}]}')
    code = main(["run", corpus("fastfood.taskcl"),
                 "-q", "forall X. ((geq(X, 3) -> m(ham) * m(coke) * m(X - 3))"
                       " -> m(ham) * m(coke) * m(X - 3))",
                 "--moves", str(moves)])
    assert code == EXIT_FAILURE
    assert "failure" in capsys.readouterr().out


def test_run_budget_exit_code(capsys, no_tty):
    code = main(["run", corpus("factorial_literal.taskcl"),
                 "-q", "exists Z. (forall Y. fact(Y, Z))",
                 "--moves", corpus("moves", "y5.json"), "--max-steps", "500"])
    assert code == EXIT_BUDGET
    assert "budget exhausted" in capsys.readouterr().out


def test_run_parse_error_exit_code(capsys, no_tty, tmp_path):
    bad = tmp_path / "bad.taskcl"
    bad.write_text("c: p | q.")          # polarity error
    assert main(["run", str(bad), "-q", "p"]) == EXIT_BAD_INPUT
    bad.write_text("c: p")               # missing period
    assert main(["run", str(bad), "-q", "p"]) == EXIT_BAD_INPUT
    err = capsys.readouterr().err
    assert "error:" in err


def test_run_env_needed_exit_code(capsys, no_tty):
    code = main(["run", corpus("factorial.taskcl"),
                 "-q", "exists Z. (forall Y. fact(Y, Z))"])
    assert code == EXIT_ENV_NEEDED
    assert "error:" in capsys.readouterr().err


def test_verify_winnable_exit_codes(capsys, no_tty):
    code = main(["verify", corpus("lottery.taskcl"), "-q", "exists X. t(X)"])
    assert code == EXIT_SUCCESS
    assert "winnable (2 plays)" in capsys.readouterr().out

    code = main(["verify", corpus("factorial.taskcl"),
                 "-q", "exists Z. (forall Y. fact(Y, Z))",
                 "--domains", corpus("moves", "factorial_domains.json")])
    assert code == EXIT_SUCCESS

    code = main(["verify", corpus("factorial.taskcl"),
                 "-q", "exists Z. (forall Y. fact(Y, Z))"])
    assert code == EXIT_BAD_INPUT  # no domain for the term choice


def test_verify_not_winnable(capsys, no_tty, tmp_path):
    prog = tmp_path / "p.taskcl"
    prog.write_text("c: p.")
    code = main(["verify", str(prog), "-q", "p & q"])
    out = capsys.readouterr().out
    assert code == EXIT_FAILURE
    assert "not winnable" in out and "counterexample" in out


def test_repl_runs_queries(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("p\nnosuch\n:quit\n"))
    code = main(["repl", corpus("horn_interp.taskcl")])
    assert code == EXIT_SUCCESS
    out = capsys.readouterr().out
    assert "failure" in out  # p and nosuch both fail against the rules
