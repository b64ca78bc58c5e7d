"""Proof search as a two-player game.

The machine backtracks over its own choices (clause selection, choice
disjunctions in the goal, choice conjunctions in resources); the
environment strategy is consulted at the dual choice points and its moves
are irrevocable: once the environment has moved, earlier machine choice
points are frozen, and a machine stuck behind that barrier loses the play
instead of re-asking.

Resources are affine: the linear multiset is threaded through parallel
conjunctions input/output style (no context splitting), banked (``!``)
entries are copied on use, and every consumption is recorded in the
transcript so linearity is checkable after the fact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Protocol, Union

from .builtins import BUILTIN_PREDS, NotGround, eval_pred, fold_arith
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
    formula_tag,
    pretty,
    pretty_term,
    subst_formula,
)
from .syntax import MoveScript, ParseError, PickEntry, TermEntry, parse_term_text
from .terms import (
    EMPTY_SUBST,
    Const,
    FuelExhausted,
    Meta,
    Substitution,
    Term,
    beta_normalize,
    free_bounds,
    free_metas,
    free_vars,
    spine,
)
from .unify import NonPattern, unify


class EngineError(Exception):
    pass


class PolarityError(EngineError):
    """A connective in a position the rule tables do not admit."""


class EnvExhausted(EngineError):
    """A scripted environment ran out of moves while one was required."""

    def __init__(self, request: "EnvRequest"):
        super().__init__(f"no scripted move left for {request.site}")
        self.request = request


class OutOfRange(EngineError):
    pass


class BadTerm(EngineError):
    pass


class SiteMismatch(EngineError):
    pass


class DomainMissing(EngineError):
    def __init__(self, site: str):
        super().__init__(f"no environment domain for term choice at {site}")
        self.site = site


@dataclass(frozen=True, slots=True)
class Limits:
    max_steps: int = 100_000
    term_fuel: int = 100_000

    def __post_init__(self) -> None:
        if self.max_steps < 1 or self.term_fuel < 1:
            raise ValueError("limits must be >= 1")


@dataclass(frozen=True, slots=True)
class Move:
    chooser: str              # "machine" | "env"
    site: str
    kind: str                 # "pick" | "witness" | "copy" | "consume"
    pick: int | None = None
    term: Term | None = None

    def describe(self, sigma: Substitution | None = None) -> str:
        if self.kind == "pick":
            return f"pick {self.pick}"
        if self.kind == "witness":
            t = self.term
            if sigma is not None and t is not None:
                t = fold_arith(sigma.apply(t))
            return f"witness {pretty_term(t)}"
        return self.kind


@dataclass(frozen=True, slots=True)
class Success:
    bindings: dict[str, Term]


@dataclass(frozen=True, slots=True)
class Failure:
    pass


@dataclass(frozen=True, slots=True)
class BudgetExhausted:
    pass


Outcome = Union[Success, Failure, BudgetExhausted]


@dataclass(frozen=True, slots=True)
class Transcript:
    moves: tuple[Move, ...]
    outcome: Outcome
    sigma: Substitution = EMPTY_SUBST

    def lines(self) -> list[str]:
        out = []
        for i, m in enumerate(self.moves, 1):
            out.append(f"{i}. {m.chooser} @ {m.site}: {m.describe(self.sigma)}")
        return out


@dataclass(frozen=True, slots=True)
class EnvRequest:
    site: str
    kind: str                         # "choose_branch" | "choose_term"
    arity: int | None = None
    options: tuple[str, ...] | None = None
    binder: str | None = None
    transcript: tuple[Move, ...] = ()


@dataclass(frozen=True, slots=True)
class EnvPick:
    index: int


@dataclass(frozen=True, slots=True)
class EnvWitness:
    term: Union[str, Term]


class EnvStrategy(Protocol):
    def respond(self, request: EnvRequest) -> EnvPick | EnvWitness: ...


class _Suspend(Exception):
    def __init__(self, request: EnvRequest):
        self.request = request


class PlaySuspended(Exception):
    """Raised (via a suspending environment) when a play needs an
    environment move that is not available yet; carries the pending request
    and the transcript so far."""

    def __init__(self, request: EnvRequest, moves: tuple[Move, ...]):
        super().__init__(f"awaiting environment move at {request.site}")
        self.request = request
        self.moves = moves


class ScriptedEnv:
    """Replays a move script; optionally suspends instead of erroring when
    the script runs out."""

    def __init__(self, script: MoveScript, suspend_on_exhausted: bool = False):
        self.entries = list(script.entries)
        self.pos = 0
        self.suspend = suspend_on_exhausted

    def respond(self, request: EnvRequest) -> EnvPick | EnvWitness:
        if self.pos >= len(self.entries):
            if self.suspend:
                raise _Suspend(request)
            raise EnvExhausted(request)
        entry = self.entries[self.pos]
        self.pos += 1
        if entry.expected_site is not None and entry.expected_site != request.site:
            raise SiteMismatch(
                f"script expected site {entry.expected_site!r}, "
                f"play is at {request.site!r}")
        if isinstance(entry, PickEntry):
            return EnvPick(entry.index)
        return EnvWitness(entry.text)


class NeverEnv:
    """Errors on any consultation; for plays that must be environment-free."""

    def respond(self, request: EnvRequest) -> EnvPick | EnvWitness:
        raise AssertionError(f"environment consulted at {request.site}")


# ---------------------------------------------------------------------------
# polarity

def check_polarity(f: Formula, goal: bool, where: str = "goal") -> None:
    if isinstance(f, Atom):
        return
    if isinstance(f, Impl):
        check_polarity(f.body, not goal, where + "/0")
        check_polarity(f.head, goal, where + "/1")
        return
    if isinstance(f, POr):
        if not goal:
            raise PolarityError(f"parallel disjunction in resource position "
                                f"at {where}")
        check_polarity(f.left, goal, where + "/0")
        check_polarity(f.right, goal, where + "/1")
        return
    if isinstance(f, Bang):
        if goal:
            raise PolarityError(f"replication in goal position at {where}")
        check_polarity(f.body, goal, where + "/0")
        return
    if isinstance(f, (PAnd, CAnd, COr)):
        check_polarity(f.left, goal, where + "/0")
        check_polarity(f.right, goal, where + "/1")
        return
    check_polarity(f.body, goal, where + "/0")


# ---------------------------------------------------------------------------
# search state

@dataclass(frozen=True, slots=True)
class Ctx:
    sigma: Substitution
    avail: frozenset[int]
    bank: tuple[int, ...]


class _Budget(Exception):
    pass


class _Barrier(Exception):
    pass


class _Play:
    def __init__(self, env: EnvStrategy, limits: Limits):
        self.env = env
        self.limits = limits
        self.steps = limits.max_steps
        self.fuel = limits.term_fuel
        self.transcript: list[Move] = []
        self.env_epoch = 0
        self.meta_count = 0
        self.resdefs: dict[int, Formula] = {}
        self.next_res = 0
        self.answers: dict[str, Meta] = {}
        self.bindings: dict[str, Term] = {}
        self.final_sigma: Substitution = EMPTY_SUBST

    # -- bookkeeping -------------------------------------------------------

    def spend(self) -> None:
        self.steps -= 1
        if self.steps < 0:
            raise _Budget()

    def fresh(self, name: str) -> Meta:
        self.meta_count += 1
        return Meta(name, self.meta_count)

    def alloc(self, f: Formula) -> int:
        rid = self.next_res
        self.next_res += 1
        self.resdefs[rid] = f
        return rid

    def norm(self, sigma: Substitution, t: Term) -> Term:
        return fold_arith(beta_normalize(sigma.apply(t, self.fuel), self.fuel))

    def record(self, move: Move) -> None:
        self.transcript.append(move)

    def alternatives(self, thunks: list[Callable[[], bool]]) -> bool:
        """Machine backtracking over thunks, honoring the environment
        barrier: after an environment move inside a failed branch there is
        no retry, the play is lost."""
        epoch = self.env_epoch
        mark = len(self.transcript)
        saved_answers = dict(self.answers)
        for i, thunk in enumerate(thunks):
            if i > 0 and self.env_epoch != epoch:
                raise _Barrier()
            del self.transcript[mark:]
            self.answers = dict(saved_answers)
            if thunk():
                return True
        if self.env_epoch != epoch:
            raise _Barrier()
        del self.transcript[mark:]
        self.answers = dict(saved_answers)
        return False

    # -- environment interaction -------------------------------------------

    def env_pick(self, site: str, options: tuple[str, ...]) -> int:
        req = EnvRequest(site=site, kind="choose_branch", arity=len(options),
                         options=options, transcript=tuple(self.transcript))
        resp = self.env.respond(req)
        if not isinstance(resp, EnvPick):
            raise BadTerm(f"branch choice at {site} needs a pick, got a term")
        if not (0 <= resp.index < len(options)):
            raise OutOfRange(f"pick {resp.index} out of range at {site} "
                             f"(arity {len(options)})")
        self.record(Move("env", site, "pick", pick=resp.index))
        self.env_epoch += 1
        return resp.index

    def env_witness(self, site: str, binder: str) -> Term:
        req = EnvRequest(site=site, kind="choose_term", binder=binder,
                         transcript=tuple(self.transcript))
        resp = self.env.respond(req)
        if not isinstance(resp, EnvWitness):
            raise BadTerm(f"term choice at {site} needs a term, got a pick")
        t = resp.term
        if isinstance(t, str):
            try:
                t = parse_term_text(t)
            except ParseError as e:
                raise BadTerm(f"unparsable witness at {site}: {e}") from None
        if free_vars(t) or free_metas(t) or free_bounds(t):
            raise BadTerm(f"witness at {site} must be closed: {pretty_term(t)}")
        t = fold_arith(beta_normalize(t, self.fuel))
        self.record(Move("env", site, "witness", term=t))
        self.env_epoch += 1
        return t

    # -- resource context --------------------------------------------------

    def add_resource(self, f: Formula, ctx: Ctx, eager: bool) -> Ctx:
        if isinstance(f, Bang):
            rid = self.alloc(f.body)
            return replace(ctx, bank=ctx.bank + (rid,))
        if isinstance(f, PAnd):
            ctx = self.add_resource(f.left, ctx, eager)
            return self.add_resource(f.right, ctx, eager)
        if eager and isinstance(f, COr):
            rid = self.alloc(f)
            i = self.env_pick(f"res[{rid}]/cor",
                              (pretty(f.left), pretty(f.right)))
            return self.add_resource(f.left if i == 0 else f.right, ctx, eager)
        if eager and isinstance(f, CEx):
            rid = self.alloc(f)
            t = self.env_witness(f"res[{rid}]/cex", f.var)
            return self.add_resource(subst_formula(f.body, f.var, t), ctx, eager)
        rid = self.alloc(f)
        return replace(ctx, avail=ctx.avail | {rid})

    # -- right rules (goal position) ---------------------------------------

    def prove(self, goal: Formula, ctx: Ctx, site: str,
              sk: Callable[[Ctx], bool]) -> bool:
        self.spend()
        if isinstance(goal, Atom):
            return self.prove_atom(goal.head, ctx, site, sk)
        if isinstance(goal, PAnd):
            return self.prove(
                goal.left, ctx, site + "/0",
                lambda c: self.prove(goal.right, c, site + "/1", sk))
        if isinstance(goal, POr):
            return self.alternatives([
                lambda: self.prove(goal.left, ctx, site + "/0", sk),
                lambda: self.prove(goal.right, ctx, site + "/1", sk),
            ])
        if isinstance(goal, COr):
            def pick(i: int, g: Formula) -> Callable[[], bool]:
                def run() -> bool:
                    self.record(Move("machine", site + "/cor", "pick", pick=i))
                    return self.prove(g, ctx, f"{site}/{i}", sk)
                return run
            return self.alternatives([pick(0, goal.left), pick(1, goal.right)])
        if isinstance(goal, CAnd):
            i = self.env_pick(site + "/cand", (pretty(goal.left),
                                               pretty(goal.right)))
            chosen = goal.left if i == 0 else goal.right
            return self.prove(chosen, ctx, f"{site}/{i}", sk)
        if isinstance(goal, CAll):
            t = self.env_witness(site + "/call", goal.var)
            return self.prove(subst_formula(goal.body, goal.var, t), ctx,
                              site + "/0", sk)
        if isinstance(goal, CEx):
            m = self.fresh(goal.var)
            if goal.answer:
                self.answers.setdefault(goal.var, m)
            self.record(Move("machine", site + "/cex", "witness", term=m))
            return self.prove(subst_formula(goal.body, goal.var, m), ctx,
                              site + "/0", sk)
        if isinstance(goal, Impl):
            nctx = self.add_resource(goal.body, ctx, eager=True)
            return self.prove(goal.head, nctx, site + "/1", sk)
        raise PolarityError(f"replication in goal position at {site}")

    def prove_atom(self, head: Term, ctx: Ctx, site: str,
                   sk: Callable[[Ctx], bool]) -> bool:
        t = self.norm(ctx.sigma, head)
        h, args = spine(t)
        if isinstance(h, Const) and h.name in BUILTIN_PREDS:
            try:
                ok = eval_pred(h.name, args)
            except NotGround:
                # guard not ground yet; no residuation, the branch fails
                return False
            return sk(ctx) if ok else False
        return self.backchain(t, ctx, site, sk)

    # -- left rules (resource position) ------------------------------------

    def backchain(self, atom: Term, ctx: Ctx, site: str,
                  sk: Callable[[Ctx], bool]) -> bool:
        self.spend()
        thunks: list[Callable[[], bool]] = []
        for rid in sorted(ctx.avail):
            def use(rid: int = rid) -> bool:
                self.record(Move("machine", f"res[{rid}]", "consume"))
                nctx = replace(ctx, avail=ctx.avail - {rid})
                return self.focus(self.resdefs[rid], atom, nctx,
                                  f"res[{rid}]", sk)
            thunks.append(use)
        for rid in ctx.bank:
            def copy(rid: int = rid) -> bool:
                self.record(Move("machine", f"res[{rid}]", "copy"))
                return self.focus(self.resdefs[rid], atom, ctx,
                                  f"res[{rid}]", sk)
            thunks.append(copy)
        return self.alternatives(thunks)

    def focus(self, f: Formula, atom: Term, ctx: Ctx, site: str,
              sk: Callable[[Ctx], bool]) -> bool:
        self.spend()
        if isinstance(f, Atom):
            h = self.norm(ctx.sigma, f.head)
            try:
                sigma = unify(atom, h, ctx.sigma)
            except NonPattern:
                return False
            if sigma is None:
                return False
            return sk(replace(ctx, sigma=sigma))
        if isinstance(f, Impl):
            return self.focus(
                f.head, atom, ctx, site + "/1",
                lambda c: self.prove(f.body, c, site + "/0", sk))
        if isinstance(f, PAnd):
            def side(chosen: Formula, leftover: Formula,
                     child: str) -> Callable[[], bool]:
                def run() -> bool:
                    nctx = self.add_resource(leftover, ctx, eager=False)
                    return self.focus(chosen, atom, nctx, site + child, sk)
                return run
            return self.alternatives([side(f.left, f.right, "/0"),
                                      side(f.right, f.left, "/1")])
        if isinstance(f, CAnd):
            def pick(i: int, g: Formula) -> Callable[[], bool]:
                def run() -> bool:
                    self.record(Move("machine", site + "/cand", "pick", pick=i))
                    return self.focus(g, atom, ctx, f"{site}/{i}", sk)
                return run
            return self.alternatives([pick(0, f.left), pick(1, f.right)])
        if isinstance(f, CAll):
            m = self.fresh(f.var)
            self.record(Move("machine", site + "/call", "witness", term=m))
            return self.focus(subst_formula(f.body, f.var, m), atom, ctx,
                              site + "/0", sk)
        if isinstance(f, COr):
            i = self.env_pick(site + "/cor", (pretty(f.left), pretty(f.right)))
            return self.focus(f.left if i == 0 else f.right, atom, ctx,
                              f"{site}/{i}", sk)
        if isinstance(f, CEx):
            t = self.env_witness(site + "/cex", f.var)
            return self.focus(subst_formula(f.body, f.var, t), atom, ctx,
                              site + "/0", sk)
        if isinstance(f, Bang):
            rid = self.alloc(f.body)
            nctx = replace(ctx, bank=ctx.bank + (rid,))
            return self.focus(f.body, atom, nctx, site + "/0", sk)
        raise PolarityError(f"parallel disjunction in resource position at {site}")


def solve(program: list[AgentDecl], query: Formula, env: EnvStrategy,
          limits: Limits = Limits()) -> Transcript:
    """Play the machine role for ``query`` against the agent resources.

    The outcome is Success (with answer bindings for the query's
    existential variables) iff the machine wins the play determined by the
    environment strategy within the limits.
    """
    for decl in program:
        check_polarity(decl.formula, goal=False, where=decl.name)
    check_polarity(query, goal=True)
    play = _Play(env, limits)
    try:
        ctx = Ctx(EMPTY_SUBST, frozenset(), ())
        for decl in program:
            ctx = play.add_resource(decl.formula, ctx, eager=True)

        def final(c: Ctx) -> bool:
            play.final_sigma = c.sigma
            for name, m in play.answers.items():
                play.bindings[name] = fold_arith(c.sigma.apply(m))
            return True

        won = play.prove(query, ctx, "goal", final)
        outcome: Outcome = Success(play.bindings) if won else Failure()
    except _Barrier:
        outcome = Failure()
    except (_Budget, FuelExhausted, RecursionError):
        # runaway term growth and stack depth count as spent budget
        outcome = BudgetExhausted()
    except _Suspend as s:
        raise PlaySuspended(s.request, tuple(play.transcript)) from None
    return Transcript(tuple(play.transcript), outcome, play.final_sigma)


# ---------------------------------------------------------------------------
# exhaustive winnability

@dataclass(frozen=True, slots=True)
class WinReport:
    winnable: bool
    plays: int
    losing_play: Transcript | None = None


def verify_winnable(program: list[AgentDecl], query: Formula,
                    env_domains: dict[str, list[str]] | None = None,
                    limits: Limits = Limits()) -> WinReport:
    """Enumerate every environment behavior (branch picks crossed with the
    given per-site term domains) and check the machine wins them all."""
    env_domains = env_domains or {}
    queue: list[tuple] = [()]
    plays = 0
    while queue:
        entries = queue.pop(0)
        env = ScriptedEnv(MoveScript(entries), suspend_on_exhausted=True)
        try:
            tr = solve(program, query, env, limits)
        except PlaySuspended as s:
            req = s.request
            if req.kind == "choose_branch":
                assert req.arity is not None
                for i in range(req.arity):
                    queue.append(entries + (PickEntry(i),))
            else:
                dom = env_domains.get(req.site)
                if dom is None:
                    raise DomainMissing(req.site) from None
                for text in dom:
                    queue.append(entries + (TermEntry(text),))
            continue
        plays += 1
        if not isinstance(tr.outcome, Success):
            return WinReport(False, plays, tr)
    return WinReport(True, plays, None)
