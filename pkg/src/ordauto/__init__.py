"""Automata and ordinal Turing machines over transfinite words."""
from .ordinal import Ordinal, ordinal, parse_ordinal, format_ordinal, OMEGA, ZERO, ONE
from .word import BlockWord, word, parse_word, format_word, EPSILON
from .automaton import (
    LimitPresentation, TransitionOracle, check_coherence, determinize, lambda_eliminate,
    parse_automaton,
)
from .otm import OTMProgram, parse_program, run_accelerated
from .compiler import compile_program, cross_validate

__all__ = [
    "Ordinal", "ordinal", "parse_ordinal", "format_ordinal", "OMEGA", "ZERO", "ONE",
    "BlockWord", "word", "parse_word", "format_word", "EPSILON",
    "LimitPresentation", "TransitionOracle", "check_coherence", "determinize", "lambda_eliminate",
    "parse_automaton", "OTMProgram", "parse_program", "run_accelerated",
    "compile_program", "cross_validate",
]

__version__ = "0.1.0"
