"""Command line front end: batch runs, winnability checks, a terminal REPL
where the human plays the environment, and the protocol server.

Exit codes for ``run``: 0 success, 1 failure, 2 budget exhausted,
3 parse/polarity error, 4 environment move required but no script entry
left.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import (
    BadTerm,
    BudgetExhausted,
    DomainMissing,
    EnvExhausted,
    EnvPick,
    EnvRequest,
    EnvWitness,
    Limits,
    OutOfRange,
    PolarityError,
    ScriptedEnv,
    SiteMismatch,
    Success,
    Transcript,
    solve,
    verify_winnable,
)
from .formulas import pretty_term
from .syntax import MoveScript, ParseError, parse_moves, parse_program, parse_query

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_BUDGET = 2
EXIT_BAD_INPUT = 3
EXIT_ENV_NEEDED = 4


class InteractiveEnv:
    """Reads environment moves from the terminal."""

    def __init__(self, out=None, inp=None):
        self.out = out if out is not None else sys.stdout
        self.inp = inp if inp is not None else sys.stdin

    def respond(self, request: EnvRequest):
        print(f"environment move needed at {request.site}", file=self.out)
        if request.kind == "choose_branch":
            for i, opt in enumerate(request.options or ()):
                print(f"  [{i}] {opt}", file=self.out)
            while True:
                self.out.write("pick> ")
                self.out.flush()
                line = self.inp.readline()
                if not line:
                    raise EnvExhausted(request)
                try:
                    return EnvPick(int(line.strip()))
                except ValueError:
                    print("enter a branch number", file=self.out)
        print(f"  choose a term for {request.binder}", file=self.out)
        self.out.write("term> ")
        self.out.flush()
        line = self.inp.readline()
        if not line:
            raise EnvExhausted(request)
        return EnvWitness(line.strip())


def _print_result(tr: Transcript, trace: bool, out=None) -> int:
    out = out if out is not None else sys.stdout
    if trace:
        for line in tr.lines():
            print(line, file=out)
    if isinstance(tr.outcome, Success):
        print("success", file=out)
        for name, term in tr.outcome.bindings.items():
            print(f"{name} = {pretty_term(term)}", file=out)
        return EXIT_SUCCESS
    if isinstance(tr.outcome, BudgetExhausted):
        print("budget exhausted", file=out)
        return EXIT_BUDGET
    print("failure", file=out)
    return EXIT_FAILURE


def cmd_run(args) -> int:
    try:
        program = parse_program(_read(args.program))
        query = parse_query(args.query)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.moves:
        try:
            script = parse_moves(_read(args.moves))
        except ParseError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_BAD_INPUT
        env = ScriptedEnv(script)
    elif sys.stdin.isatty():
        env = InteractiveEnv()
    else:
        env = ScriptedEnv(MoveScript(()))
    limits = Limits(max_steps=args.max_steps)
    try:
        tr = solve(program, query, env, limits)
    except PolarityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except EnvExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ENV_NEEDED
    except (OutOfRange, BadTerm, SiteMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    return _print_result(tr, args.trace)


def cmd_verify(args) -> int:
    try:
        program = parse_program(_read(args.program))
        query = parse_query(args.query)
        domains = {}
        if args.domains:
            raw = json.loads(_read(args.domains))
            domains = {site: [str(t) for t in terms]
                       for site, terms in raw.items()}
    except (ParseError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    limits = Limits(max_steps=args.max_steps)
    try:
        report = verify_winnable(program, query, domains, limits)
    except (PolarityError, DomainMissing) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if report.winnable:
        print(f"winnable ({report.plays} plays)")
        return EXIT_SUCCESS
    print(f"not winnable ({report.plays} plays explored)")
    if report.losing_play is not None:
        print("counterexample play:")
        for line in report.losing_play.lines():
            print(f"  {line}")
    return EXIT_FAILURE


def cmd_repl(args) -> int:
    try:
        program = parse_program(_read(args.program))
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    trace = False
    print("taskcl repl; :trace on|off toggles traces, :quit leaves")
    while True:
        try:
            sys.stdout.write("?- ")
            sys.stdout.flush()
            line = sys.stdin.readline()
        except KeyboardInterrupt:
            return EXIT_SUCCESS
        if not line:
            return EXIT_SUCCESS
        line = line.strip()
        if not line:
            continue
        if line == ":quit":
            return EXIT_SUCCESS
        if line.startswith(":trace"):
            trace = line.endswith("on")
            print(f"trace {'on' if trace else 'off'}")
            continue
        try:
            query = parse_query(line)
        except ParseError as e:
            print(f"error: {e}")
            continue
        try:
            tr = solve(program, query, InteractiveEnv(),
                       Limits(max_steps=args.max_steps))
        except (PolarityError, EnvExhausted, OutOfRange, BadTerm) as e:
            print(f"error: {e}")
            continue
        _print_result(tr, trace)


def cmd_serve(args) -> int:
    import uvicorn

    from .session import SessionManager, create_app

    app = create_app(SessionManager(), static_dir=args.static)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as e:
        return int(e.code or 0)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taskcl")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve a query against a program")
    run.add_argument("program")
    run.add_argument("-q", "--query", required=True)
    run.add_argument("--moves", help="JSON move script for the environment")
    run.add_argument("--trace", action="store_true")
    run.add_argument("--max-steps", type=int, default=100_000)
    run.set_defaults(fn=cmd_run)

    verify = sub.add_parser("verify", help="exhaustive winnability check")
    verify.add_argument("program")
    verify.add_argument("-q", "--query", required=True)
    verify.add_argument("--domains", help="JSON map from term-choice site "
                                          "to candidate terms")
    verify.add_argument("--max-steps", type=int, default=100_000)
    verify.set_defaults(fn=cmd_verify)

    repl = sub.add_parser("repl", help="interactive query loop")
    repl.add_argument("program")
    repl.add_argument("--max-steps", type=int, default=100_000)
    repl.set_defaults(fn=cmd_repl)

    serve = sub.add_parser("serve", help="run the session protocol server")
    serve.add_argument("--port", type=int, default=7117)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--static", help="directory of web console assets")
    serve.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
