"""Workbench for a timed broadcast process calculus with collisions."""

from .bisim import Verdict, bisimilar, check_witness, naive_bisimilar
from .channelenv import STABLE, ChannelEnv, Configuration, parse_env, upd
from .extensional import ExtLTS, build_lts, weak_closure
from .harness import congruence_probe, detect, make_test
from .intensional import Semantics
from .reduction import Tristate, reductions, weak_barb, well_formed
from .syntax import Alphabet, parse_program, parse_term, pretty

__all__ = [
    "STABLE", "Alphabet", "ChannelEnv", "Configuration", "ExtLTS", "Semantics",
    "Tristate", "Verdict", "bisimilar", "build_lts", "check_witness",
    "congruence_probe", "detect", "make_test", "naive_bisimilar", "parse_env",
    "parse_program", "parse_term", "pretty", "reductions", "upd", "weak_barb",
    "weak_closure", "well_formed",
]
