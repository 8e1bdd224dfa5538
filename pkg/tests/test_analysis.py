import random

import pytest
from hypothesis import given

from ordauto.analysis import (
    Inconsistent, NoRepeat, NotClosed, OutOfModel, PreconditionError, counting_word, find_pump,
    fooling_certify, membership, nerode_partition, ordinal_sqrt, quotient_doa, verify_pump,
)
from ordauto.automaton import check_coherence, complete
from ordauto.library import DOA_NAMES, load_automaton
from ordauto.ordinal import multiply, omega_power, parse_ordinal
from ordauto.samples import block_boundaries, random_split, random_words
from ordauto.word import EPSILON, BlockWord, concat, parse_word

from strategies import nested_ordinals

W = parse_word
o = parse_ordinal


def ones(n):
    return BlockWord([("1", n)])


class TestMembership:
    def test_examples(self):
        assert membership("L1_equal", W("0^(w) 1^(w)"))
        assert not membership("L2_omega_powers", W("1^(w*2)"))
        assert membership("L_count", W("1 0 1 0^2 1"))

    def test_l0_needs_a_one(self):
        assert membership("L0", W("0^(w) 1"))
        assert not membership("L0", W("0^(w)"))
        assert not membership("L0", EPSILON)
        assert not membership("L0", W("1 0"))

    def test_l2_and_l3(self):
        assert membership("L2_omega_powers", ones(o("w^w")))
        assert membership("L2_omega_powers", ones(1))
        assert membership("L3_squares", ones(o("w^2+w+1")))
        assert not membership("L3_squares", ones(o("w^3")))
        assert not membership("L3_squares", W("0"))

    def test_count_on_infinite_word(self):
        with pytest.raises(OutOfModel):
            membership("L_count", W("1 0^(w)"))

    def test_counting_words(self):
        assert counting_word(3) == W("1 0 1 0^2 1")
        assert all(membership("L_count", counting_word(n)) for n in range(12))
        assert not membership("L_count", W("1 0^2 1"))

    def test_projection_languages(self):
        assert membership("L_otp_equal", W("0^(w) 1^(w)"))
        assert not membership("L_otp_equal", W("0^(w) 1^(w+1)"))
        assert membership("L_card_equal", W("0^(w) 1^(w+1)"))
        assert not membership("L_card_equal", W("0^3 1^(w)"))

    @given(nested_ordinals())
    def test_sqrt_inverts_squaring(self, a):
        assert ordinal_sqrt(multiply(a, a)) == a

    def test_doubled_limit_square_is_a_square(self):
        # 2*g = g for limit g, hence (g*2)^2 = g*g*2
        for a in (o("w"), o("w^2+w"), o("w^w")):
            sq = multiply(a, a)
            assert ordinal_sqrt(sq + sq) == a + a

    def test_doubled_square_with_finite_part(self):
        sq = multiply(o("w^2+3"), o("w^2+3"))
        assert ordinal_sqrt(sq + sq) is None

    def test_non_squares(self):
        for t in ("w", "w^3", "w^2+w", "w^(w+1)", "7"):
            assert ordinal_sqrt(o(t)) is None


class TestFooling:
    @pytest.mark.parametrize("n", [4, 8])
    def test_l1(self, n):
        pre = [BlockWord([("0", o(f"w*{i}"))]) for i in range(1, n + 1)]
        ext = [BlockWord([("1", o(f"w*{i}"))]) for i in range(1, n + 1)]
        cert = fooling_certify("L1_equal", pre, ext)
        assert cert.size == n and cert.verify()

    def test_l2(self):
        pre = [ones(omega_power(k)) for k in range(1, 7)]
        cert = fooling_certify("L2_omega_powers", pre, pre)
        assert cert.size == 6 and cert.verify()

    def test_l_count(self):
        pre = [counting_word(n) for n in range(1, 11)]
        ext = [W(f"0^{n} 1") for n in range(1, 11)]
        cert = fooling_certify("L_count", pre, ext)
        assert cert.size == 10 and cert.verify()

    def test_failure_lists_pairs(self):
        cert = fooling_certify("L0", [W("0"), W("0^(w)")], [EPSILON, W("1")])
        assert not cert.certified and cert.unseparated == [(0, 1)] and cert.size == 0


L0_PREFIXES = [EPSILON, W("0^(w)"), W("0^(w) 1"), W("0^(w) 1^(w)"), W("0^(w) 1^(w) 0")]
L0_EXT = [EPSILON, W("0"), W("1")]


class TestNerode:
    def test_l0_classes(self):
        classes = nerode_partition("L0", L0_PREFIXES, L0_EXT)
        assert classes == [L0_PREFIXES[:2], L0_PREFIXES[2:4], L0_PREFIXES[4:]]

    def test_degenerate(self):
        assert nerode_partition("L0", [W("0")], L0_EXT) == [[W("0")]]
        assert len(nerode_partition("L0", L0_PREFIXES, [])) == 1


class TestQuotient:
    GENS = [W("0"), W("1"), W("0^(w)"), W("1^(w)")]

    def test_l0_quotient_matches_a0(self):
        classes = nerode_partition("L0", L0_PREFIXES, L0_EXT)
        Q = quotient_doa("L0", classes, self.GENS, extensions=L0_EXT)
        assert len(Q.states) == 3
        ref = complete(load_automaton("a0"))
        words = random_words(21, 400, "01")
        for w in words:
            assert Q.accepts(w) == ref.accepts(w) == membership("L0", w)
        rng = random.Random(3)
        samples = [(rng.choice(Q.states), w, random_split(rng, w)) for w in words]
        assert check_coherence(Q, samples).ok

    def test_not_closed(self):
        with pytest.raises(NotClosed):
            quotient_doa("L0", [EPSILON], self.GENS, extensions=L0_EXT)

    def test_inconsistent(self):
        with pytest.raises(Inconsistent):
            quotient_doa("L0", [[W("1"), W("0")]], self.GENS)


class TestPumping:
    def test_a0_example(self):
        A = load_automaton("a0")
        w = W("0^(w) 1^(w)")
        p = find_pump(A, w, [0, 1, 2, 3])
        assert (p.alpha, p.beta) == (0, 1)
        assert verify_pump(A, p)
        assert len({A.run(p.pumped(i)).end for i in range(5)}) == 1

    def test_too_few_checkpoints(self):
        with pytest.raises(PreconditionError):
            find_pump(load_automaton("a0"), W("0^(w) 1^(w)"), [0, 1])

    def test_undefined_runs_can_prevent_repeats(self):
        with pytest.raises(NoRepeat):
            find_pump(load_automaton("allones"), W("1 0"), [0, 2])

    @pytest.mark.parametrize("name", DOA_NAMES)
    def test_bundled(self, name):
        # pigeonhole needs defined runs, so partial automata are completed first
        A = load_automaton(name)
        A = A if A.is_complete() else complete(A)
        for w in random_words(22, 100, "01"):
            pts = sorted(set(block_boundaries(w)) | {p for p in (o("1"), o("2"), o("w")) if p <= w.length})
            if len(pts) <= len(A.states):
                continue
            assert verify_pump(A, find_pump(A, w, pts))


def test_equal_states_not_separated():
    """Words reaching the same state of a complete DOA agree on every extension."""
    A = complete(load_automaton("a0"))
    words = random_words(23, 60, "01")
    ext = random_words(24, 20, "01")
    by_state = {}
    for w in words:
        by_state.setdefault(A.run(w).end, []).append(w)
    for group in by_state.values():
        sigs = {tuple(membership("L0", concat(w, e)) for e in ext) for w in group}
        assert len(sigs) == 1
