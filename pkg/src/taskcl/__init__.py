"""taskcl: an interpreter for agent programs written in a game-semantic
logic fragment, where proof search is a play between a machine (the
prover) and an environment that resolves the dual choice points.
"""

from .builtins import ArithError, NotGround, UnknownBuiltin, eval_arith, eval_pred, fold_arith
from .engine import (
    BadTerm,
    BudgetExhausted,
    DomainMissing,
    EngineError,
    EnvExhausted,
    EnvPick,
    EnvRequest,
    EnvWitness,
    Failure,
    Limits,
    Move,
    NeverEnv,
    OutOfRange,
    PlaySuspended,
    PolarityError,
    ScriptedEnv,
    SiteMismatch,
    Success,
    Transcript,
    WinReport,
    check_polarity,
    solve,
    verify_winnable,
)
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
    pretty,
    pretty_term,
)
from .session import IllegalState, Session, SessionManager, UnknownSession, create_app
from .syntax import (
    MoveScript,
    ParseError,
    PickEntry,
    TermEntry,
    parse_moves,
    parse_program,
    parse_query,
    parse_term_text,
)
from .terms import (
    App,
    Bound,
    Const,
    FuelExhausted,
    Int,
    IntRangeError,
    Lam,
    Meta,
    Substitution,
    Term,
    TermError,
    Var,
    alpha_eq,
    beta_normalize,
)
from .unify import NonPattern, unify

__version__ = "0.1.0"
