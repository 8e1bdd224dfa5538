import random

import pytest
from hypothesis import given, settings, strategies as st

from ordauto.library import HALTING_PROGRAMS, LOOPING_PROGRAMS, PROGRAMS, load_program
from ordauto.ordinal import OMEGA, ONE, ZERO, add, multiply, omega_power, ordinal, parse_ordinal
from ordauto.otm import (
    Configuration, OTMError, ProgramParseError, Tape, format_program, initial_configuration,
    limit_config, normalize_halting, parse_program, run_accelerated, run_naive, space_profile, step,
)
from ordauto.word import BlockWord, parse_word

from oracles import segment_unrolled_run

W = parse_word
SMALL_RUNS = (ordinal(1), ordinal(2), ordinal(3), OMEGA, add(OMEGA, ONE), multiply(OMEGA, ordinal(2)))


def finite_words(alphabet=("0", "1"), max_len=6):
    return st.lists(st.sampled_from(alphabet), max_size=max_len).map(
        lambda xs: BlockWord([(s, 1) for s in xs]))


def short_words(alphabet=("0", "1")):
    block = st.tuples(st.sampled_from(alphabet), st.sampled_from(SMALL_RUNS))
    return st.lists(block, max_size=4).map(BlockWord)


# -- single steps and limits --------------------------------------------------

def test_sweep_first_steps():
    P = load_program("sweep")
    w = W("0^(w) 1^(w)")
    c = initial_configuration()
    c1 = step(P, c, w)
    assert c1 == Configuration(0, ONE, 0, 0)
    c2 = step(P, c1, w)
    assert c2.head == ordinal(2)


def test_left_move_from_limit_position_resets():
    P = parse_program("""
name: BACK
alphabet: 0
states: s t h:accept
gamma: 1
rules:
  s, *, * -> s, 0, R, S
  s, 0, * -> t, 0, L, S
  t, *, * -> h, 0, S, S
""")
    at_omega = Configuration(0, OMEGA, 0, 0)
    assert step(P, at_omega, W("0^(w*2)")) == Configuration(1, ZERO, 0, 0)
    at_three = Configuration(0, ordinal(3), 0, 0)
    assert step(P, at_three, W("0^(w*2)")).head == ordinal(2)


def test_step_from_halting_state_is_an_error():
    P = load_program("sweep")
    with pytest.raises(OTMError):
        step(P, Configuration(1, ZERO, 0, 0), W("0"))


def test_limit_config_componentwise_liminf():
    cs = [Configuration(2, ordinal(5), 0b11, 1), Configuration(1, ordinal(7), 0b01, 2)]
    assert limit_config(cs) == Configuration(1, ordinal(5), 0b01, 1)
    assert limit_config(cs, drift=OMEGA).head == OMEGA
    with pytest.raises(OTMError):
        limit_config([])


# -- concrete runs --------------------------------------------------------------

def test_sweep_halts_after_two_omega_blocks():
    r = run_accelerated(load_program("sweep"), W("0^(w) 1^(w)"))
    assert r.verdict == "halted" and r.accept
    assert r.time == parse_ordinal("w*2+1")
    assert r.space_used == 0


@pytest.mark.parametrize("name", LOOPING_PROGRAMS)
def test_looping_programs_diverge(name):
    P = load_program(name)
    for w in (W("0 1"), W("0^(w) 1^(w)"), W("1^(w^2+w) 0")):
        if not set(s for s, _ in w.blocks) <= set(P.alphabet):
            continue
        assert run_accelerated(P, w).verdict == "diverges"


@pytest.mark.parametrize("name", HALTING_PROGRAMS)
def test_halting_programs_halt_on_samples(name):
    P = load_program(name)
    sym = sorted(P.alphabet)[0]
    for w in (BlockWord(), BlockWord([(sym, 3)]), BlockWord([(sym, OMEGA)]),
              BlockWord([(sym, omega_power(2))])):
        assert run_accelerated(P, w).verdict == "halted", str(w)


def test_stuck_and_budget_verdicts():
    assert run_accelerated(load_program("stuck"), W("0 1")).verdict == "stuck"
    r = run_accelerated(load_program("breach"), W("0^5"))
    assert r.verdict == "budget"
    assert r.space_used == load_program("breach").gamma + 1


def test_diverges_witness_is_a_genuine_repeat():
    P = load_program("reset_loop")
    r = run_accelerated(P, W("0^(w) 1^(w)"))
    assert r.verdict == "diverges"
    cfg, t0, t1 = r.witness
    assert t0 < t1
    assert cfg == r.config


# -- agreement with independent references ----------------------------------

@pytest.mark.parametrize("name", PROGRAMS)
@settings(max_examples=30, deadline=None)
@given(w=finite_words())
def test_naive_agrees_on_finite_words(name, w):
    P = load_program(name)
    if not {s for s, _ in w.blocks} <= set(P.alphabet):
        return
    a = run_accelerated(P, w, fuel=1000)
    b = run_naive(P, w, fuel=1000)
    if "unknown" in (a.verdict, b.verdict):
        return
    assert a.key() == b.key()


def test_segment_unrolled_reference_agrees():
    rng = random.Random(7)
    decided = 0
    for name in PROGRAMS:
        P = load_program(name)
        syms = sorted(P.alphabet)
        for _ in range(20):
            w = BlockWord([(rng.choice(syms), rng.choice(SMALL_RUNS)) for _ in range(rng.randint(0, 4))])
            ref = segment_unrolled_run(P, w)
            if ref is None:
                continue
            decided += 1
            r = run_accelerated(P, w)
            if ref[0] == "diverges":
                assert r.verdict == "diverges", (name, str(w))
            else:
                assert (r.verdict, r.accept, r.time, r.space_used) == ref, (name, str(w))
    assert decided >= 0.9 * 20 * len(PROGRAMS)


def test_acceleration_off_matches_on_short_words():
    P = load_program("parity")
    for w in (W("0 1 1"), W("1^5"), W("eps")):
        assert run_accelerated(P, w, accelerate=False).key() == run_accelerated(P, w).key()


# -- splitting a run at a position -------------------------------------------

@settings(max_examples=40, deadline=None)
@given(w=short_words(), name=st.sampled_from(["sweep", "parity", "first_one", "last_symbol"]))
def test_run_resumes_from_arrival(name, w):
    P = load_program(name)
    whole = run_accelerated(P, w)
    tape = Tape.for_input(w)
    for stop in (ordinal(2), OMEGA):
        part = run_accelerated(P, tape=tape, stop_at=stop)
        if part.verdict != "arrived":
            assert part.key() == whole.key()
            continue
        rest = run_accelerated(P, tape=tape, start=part.config, time=part.time)
        assert rest.verdict == whole.verdict
        assert rest.time == whole.time
        assert rest.accept == whole.accept


# -- space ----------------------------------------------------------------------

def test_compare_space_grows_with_finite_input():
    P = load_program("compare")
    rows = space_profile(P, [BlockWord([("0", n), ("1", n)]) for n in (1, 2, 5, 20, 31)])
    for row, n in zip(rows, (1, 2, 5, 20, 31)):
        assert row["verdict"] == "halted"
        assert row["space_used"] >= n
    big = space_profile(P, [W("0^(w) 1^(w)")])[0]
    assert big["verdict"] == "budget"
    assert big["space_used"] == P.gamma + 1


def test_sweep_space_constant_on_long_inputs():
    P = load_program("sweep")
    rows = space_profile(P, [W("0^(w)"), W("0^(w*2)"), W("0^(w^2)"), W("1^(w^3) 0^(w)")])
    assert all(r["space_used"] <= 1 and not r["flagged"] for r in rows)
    assert all(not r["card_length"].is_finite for r in rows)


# -- normal form for halting ---------------------------------------------------

@pytest.mark.parametrize("name", PROGRAMS)
def test_normalize_halting_preserves_outcome(name):
    P = load_program(name)
    N = normalize_halting(P)
    syms = sorted(P.alphabet)
    for w in (BlockWord(), BlockWord([(syms[0], 2)]), BlockWord([(syms[-1], OMEGA), (syms[0], 1)])):
        a, b = run_accelerated(P, w), run_accelerated(N, w)
        assert a.verdict == b.verdict
        if a.verdict == "halted":
            assert a.accept == b.accept
            assert b.config.head == Tape.for_input(w).last()


# -- parsing ---------------------------------------------------------------------

@pytest.mark.parametrize("name", PROGRAMS)
def test_format_parse_roundtrip(name):
    P = load_program(name)
    Q = parse_program(format_program(P))
    assert Q.table == P.table and Q.halting == P.halting and Q.gamma == P.gamma


@pytest.mark.parametrize("text,line", [
    ("name: X\nalphabet: 0\nstates: a\ngamma: 1\nrules:\n  a, 0, 0 -> zz, 0, R, S\n", 6),
    ("name: X\nalphabet: 0\nstates: a\ngamma: -1\nrules:\n", 4),
    ("name: X\nalphabet: 0\nstates: a\ngamma: 1\nrules:\n  a, 0, 0 -> a, 0, Q, S\n", 6),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(ProgramParseError) as info:
        parse_program(text)
    assert info.value.line == line


@st.composite
def random_programs(draw):
    n = draw(st.integers(1, 4))
    names = [f"q{i}" for i in range(n)] + ["yes:accept", "no:reject"]
    lines = ["name: RANDOM", "alphabet: 0 1", "states: " + " ".join(names), "gamma: 2", "rules:"]
    targets = [f"q{i}" for i in range(n)] + ["yes", "no"]
    for i in range(n):
        for tok in ("lh", "0", "1", "rh"):
            for bit in ("0", "1"):
                t = draw(st.sampled_from(targets))
                wr = draw(st.sampled_from("01"))
                im = draw(st.sampled_from("LRS"))
                sm = draw(st.sampled_from("LRS"))
                lines.append(f"  q{i}, {tok}, {bit} -> {t}, {wr}, {im}, {sm}")
    return parse_program("\n".join(lines) + "\n")


@settings(max_examples=60, deadline=None)
@given(P=random_programs(), w=short_words())
def test_random_programs_agree_with_reference(P, w):
    assert parse_program(format_program(P)).table == P.table
    ref = segment_unrolled_run(P, w)
    r = run_accelerated(P, w)
    if ref is None:
        return
    if ref[0] == "diverges":
        assert r.verdict == "diverges"
    elif r.verdict != "unknown":
        assert (r.verdict, r.accept, r.time, r.space_used) == ref
