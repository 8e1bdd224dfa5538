
import pytest
from hypothesis import given, settings, strategies as st

from ordauto.automaton import check_coherence
from ordauto.compiler import (
    EMPTY, BoundTooSmall, CrossingSequence, HandleError, Outcome, Snippet, compile_from_handle,
    compile_program, control_count, cross_validate, default_bound, initial_snippet,
    local_successor, make_handle, parse_handle,
)
from ordauto.library import HALTING_PROGRAMS, LOOPING_PROGRAMS, load_automaton, load_program
from ordauto.otm import normalize_halting, parse_program
from ordauto.samples import block_boundaries, random_words
from ordauto.word import BlockWord, parse_word as W, prefix

from strategies import block_words

LEFT_AT_ONCE = parse_program("""
name: LEFT
alphabet: 0 1
states: s acc:accept
gamma: 1
rules:
  s, *, * -> s, 0, L, S
  s, rh, * -> acc, 0, S, S
""")


def _start(P):
    return initial_snippet(normalize_halting(P), (0, 0, 0))


# -- local successor ----------------------------------------------------------

def test_sweep_exits_right_of_an_omega_run():
    P = normalize_halting(load_program("sweep"))
    q = Snippet((0, 0, 0), 0, ())            # at a limit position
    out = local_successor(P, q, W("1^(w)"))
    assert out == Snippet((0, 0, 0), 0, ())
    q0 = initial_snippet(P, (0, 0, 0))
    assert q0 == Snippet((0, 0, 0), 1, ("lh",))
    assert local_successor(P, q0, W("0 1")) == Snippet((0, 0, 0), 3, ("lh", "0", "1"))
    assert local_successor(P, q0, W("0^(w+2)")) == Snippet((0, 0, 0), 2, ("0", "0"))


def test_left_move_at_block_start_gives_empty():
    P = normalize_halting(LEFT_AT_ONCE)
    assert local_successor(P, Snippet((0, 0, 0), 0, ()), W("0^3")) == EMPTY
    assert str(EMPTY) == "∅"


def test_stay_program_diverges_locally():
    P = normalize_halting(load_program("stay"))
    out = local_successor(P, Snippet((0, 0, 0), 0, ()), W("0^(w)"))
    assert isinstance(out, Outcome) and out.kind == "diverges"


def test_reset_matching_a_guess_keeps_its_control():
    P = normalize_halting(load_program("two_pass"))
    q = initial_snippet(P, (0, 0, 0))
    plain = local_successor(P, q, W("0^(w)"))
    assert isinstance(plain, Snippet)
    back = local_successor(P, Snippet((1, 0, 0), 2, ("0", "0")), W("0"))
    assert back == EMPTY
    guessed = local_successor(P, Snippet((1, 0, 0), 2, ("0", "0")), W("0"), z=[(0, 0, 0), (1, 0, 0)])
    assert isinstance(guessed, Outcome) and guessed.kind == "reset" and guessed.control == (1, 0, 0)


def test_snippet_invariant():
    with pytest.raises(ValueError):
        Snippet((0, 0, 0), 2, ("0",))


# -- crossing sequences and bounds ----------------------------------------------

def test_crossing_sequence_respects_bound():
    CrossingSequence(((0, 0, 0),) * 3, 3)
    with pytest.raises(BoundTooSmall):
        CrossingSequence(((0, 0, 0),) * 4, 3)
    with pytest.raises(ValueError):
        CrossingSequence((), 3)


def test_default_bound_covers_every_control():
    for name in HALTING_PROGRAMS:
        P = load_program(name)
        assert default_bound(P) >= control_count(normalize_halting(P))


# -- compiled languages -----------------------------------------------------------

def test_sweep_compiles_to_everything():
    P = load_program("sweep")
    A = compile_program(P, bound=4)
    for w in random_words(11, 200, ["0", "1"]) + [BlockWord()]:
        assert A.accepts(w)


def test_only_ones_matches_allones_doa():
    P = load_program("only_ones")
    A = compile_program(P)
    D = load_automaton("allones")
    for w in random_words(12, 500, ["0", "1"]):
        assert A.accepts(w) == D.accepts(w), str(w)


def test_stay_compiles_to_nothing():
    A = compile_program(load_program("stay"))
    for w in random_words(13, 100, ["0", "1"]):
        assert not A.accepts(w)


@pytest.mark.parametrize("name", ["sweep", "only_ones", "two_pass", "three_pass", "last_symbol"])
def test_guessing_agrees_with_exhaustive_enumeration(name):
    A = compile_program(load_program(name))
    top = 3 if name == "three_pass" else 2
    for w in random_words(14, 12, ["0", "1"]):
        assert A.accepts(w) == A.accepts_exhaustive(w, max_len=top), str(w)


def test_start_only_has_lambda_moves():
    A = compile_program(load_program("sweep"), bound=2)
    assert A.transition(A.START, W("0")) is None
    assert A.transition(A.START, BlockWord()) == A.START
    starts = list(A.lambda_successors())
    assert len(starts) == 1 + control_count(A.program)


@settings(max_examples=50, deadline=None)
@given(w=block_words(), cut=st.integers(0, 5))
def test_components_are_single_valued_and_coherent(w, cut):
    A = compile_program(load_program("three_pass"))
    z = A.guess(w) or CrossingSequence(((0, 0, 0),), A.bound)
    comp = A.component(z)
    points = block_boundaries(w)
    alpha = points[cut % len(points)]
    report = check_coherence(comp, [(comp.start, w, alpha)])
    assert report.ok, report.failures
    nxt = comp.transition(comp.start, prefix(w, alpha))
    assert nxt is None or isinstance(nxt, tuple)


# -- cross validation -------------------------------------------------------------

@pytest.mark.parametrize("name", HALTING_PROGRAMS + LOOPING_PROGRAMS)
def test_cross_validation_is_exact(name):
    P = load_program(name)
    A = compile_program(P)
    rep = cross_validate(P, A, random_words(21, 60, sorted(P.alphabet)))
    assert rep.agreement == 1.0 and not rep.mismatches
    assert rep.max_crossing <= control_count(A.program) <= A.bound
    assert rep.summary().startswith("agreement=1.0000 mismatches=0 maxcs=")


def test_only_ones_rejects_words_with_a_zero_on_both_sides():
    P = load_program("only_ones")
    A = compile_program(P)
    ws = [w for w in random_words(22, 200, ["0", "1"]) if "0" in w.symbols()]
    rep = cross_validate(P, A, ws)
    assert all(r["direct"] is False and r["compiled"] is False for r in rep.rows)


def test_unknown_runs_are_flagged_and_excluded():
    P = load_program("sweep")
    A = compile_program(P)
    rep = cross_validate(P, A, [W("0^(w^2)"), W("0 1")], fuel=3)
    assert rep.flagged and rep.flagged[0]["compiled"] is None
    assert len(rep.decided) + len(rep.flagged) == 2
    assert any("flagged" in line for line in rep.lines())


def test_small_bound_is_reported():
    P = load_program("three_pass")
    A = compile_program(P, bound=2)
    rep = cross_validate(P, A, [W("0^(w) 1")])
    assert rep.bound_too_small and not rep.ok
    assert rep.mismatches            # three passes needed, two allowed


# -- handles ---------------------------------------------------------------------

def test_handle_roundtrip():
    P = load_program("sweep")
    A = compile_program(P, bound=5)
    h = make_handle("sweep", A)
    assert parse_handle(h)[:2] == ("sweep", 5)
    B = compile_from_handle(P, h)
    assert B.bound == 5
    with pytest.raises(HandleError):
        compile_from_handle(load_program("parity"), h)
    with pytest.raises(HandleError):
        parse_handle("nonsense")
