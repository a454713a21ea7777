"""Terms of the calculus: AST, value alphabet, parser, printer and static checks."""

from .analysis import check_guarded, free_channels, free_names, fsn, is_closed, literals
from .parser import (
    ParseError, parse_process, parse_program, parse_term, tokenize,
)
from .printer import pretty
from .terms import (
    PROCESS_TYPES, ActiveRecv, Alphabet, BoolExpr, Compose, Delay, Eq, EvalError,
    Exposed, Expr, Fix, FreePVar, FreeVar, Lit, Match, Nil, Par, Process, PVar,
    Recv, Restrict, Send, Sum, Tau, Term, Var, bound_channel, delay, evaluate,
    instantiate, is_process, par, par_components, shift_data, shift_proc,
    substitute_value, unfold,
)

__all__ = [
    "ActiveRecv", "Alphabet", "BoolExpr", "Compose", "Delay", "Eq", "EvalError",
    "Exposed", "Expr", "Fix", "FreePVar", "FreeVar", "Lit", "Match", "Nil", "Par",
    "ParseError", "Process", "PROCESS_TYPES", "PVar", "Recv", "Restrict", "Send",
    "Sum", "Tau", "Term", "Var", "bound_channel", "check_guarded", "delay",
    "evaluate", "free_channels", "free_names", "fsn", "instantiate", "is_closed",
    "is_process", "literals", "par", "par_components", "parse_process",
    "parse_program", "parse_term", "pretty", "shift_data",
    "shift_proc", "substitute_value", "tokenize", "unfold",
]
