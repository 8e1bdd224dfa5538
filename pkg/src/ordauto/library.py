"""Bundled automata and a deliberately incoherent transition oracle."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .automaton import LimitPresentation, TransitionOracle, parse_automaton
from .otm import OTMProgram, parse_program

__all__ = [
    "AUTOMATA", "DOA_NAMES", "NOA_NAMES", "LAMBDA_NAMES", "load_automaton",
    "automaton_text", "broken_oracle", "PROGRAMS", "HALTING_PROGRAMS",
    "LOOPING_PROGRAMS", "load_program", "program_text",
]

DOA_NAMES = ("a0", "allones", "parity", "cycle3", "limitflag", "alternation")
NOA_NAMES = ("guess", "guess3")
LAMBDA_NAMES = ("lambda_initial", "lambda_loop", "lambda_switch")
AUTOMATA = DOA_NAMES + NOA_NAMES + LAMBDA_NAMES


def automaton_text(name: str) -> str:
    return resources.files("ordauto").joinpath("data", f"{name}.aut").read_text()


@lru_cache(maxsize=None)
def load_automaton(name: str) -> LimitPresentation:
    if name not in AUTOMATA:
        raise KeyError(f"unknown bundled automaton {name!r}; choose from {', '.join(AUTOMATA)}")
    return parse_automaton(automaton_text(name))


def broken_oracle() -> TransitionOracle:
    """An oracle whose answer depends on how often it has been queried.

    Every second call flips the state instead of keeping it, so splitting a
    word into two queries changes the outcome.
    """
    calls = [0]

    def D(q, w):
        calls[0] += 1
        if calls[0] % 2:
            return q
        return "odd" if q == "even" else "even"

    return TransitionOracle("even", {"even"}, D, states=("even", "odd"), name="broken")


#: programs that halt on every input
HALTING_PROGRAMS = (
    "sweep", "only_ones", "pingpong", "escape", "parity", "first_one", "last_symbol",
    "zigzag", "zigzag_marks", "toggle", "scratch_walk", "two_pass", "count_mod3",
    "limit_cell", "three_pass",
)
#: programs that run forever on every input
LOOPING_PROGRAMS = ("stay", "reset_loop", "loop_at_rh", "oscillate", "loop_after_limit")
#: programs whose runs may also end stuck or over budget
OTHER_PROGRAMS = ("compare", "stuck", "breach")
PROGRAMS = HALTING_PROGRAMS + LOOPING_PROGRAMS + OTHER_PROGRAMS


def program_text(name: str) -> str:
    return resources.files("ordauto").joinpath("data", f"{name}.otm").read_text()


def load_program(name: str) -> OTMProgram:
    if name not in PROGRAMS:
        raise KeyError(f"unknown bundled program {name!r}; choose from {', '.join(PROGRAMS)}")
    return parse_program(program_text(name))
