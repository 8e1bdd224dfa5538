import pytest
from hypothesis import given, settings

from ordauto.ordinal import (
    ALEPH0, OMEGA, ONE, ZERO, Cardinality, DepthExceeded, OrdinalParseError, Underflow,
    add, cardinality, compare, depth_budget, format_ordinal, left_subtract, multiply,
    normalize, omega_power, parse_ordinal,
)

from strategies import nested_ordinals, ordinals_below_omega_omega as ords

w = OMEGA


def o(text):
    return parse_ordinal(text)


class TestNormalize:
    def test_coefficients_merge(self):
        assert normalize([(0, 3), (0, 2)]) == 5

    def test_lower_term_absorbed(self):
        assert normalize([(1, 1), (2, 1)]) == o("w^2")

    def test_empty_is_zero(self):
        assert normalize([]) == ZERO

    def test_zero_coefficients_dropped(self):
        assert normalize([(3, 0), (1, 2)]) == o("w*2")

    @given(ords())
    def test_idempotent(self, a):
        assert normalize(a.terms) == a


class TestCompare:
    def test_examples(self):
        assert compare(w, w) == 0
        assert compare(o("w*2"), o("w^2")) < 0
        assert compare(o("w+1"), w) > 0

    def test_nested_exponents(self):
        assert o("w^w") > o("w^100*7")
        assert o("w^(w+1)") > o("w^w*9")


class TestAdd:
    def test_absorption_of_lower_powers(self):
        assert add(w, o("w^2")) == o("w^2")

    def test_finite_absorbed_by_omega(self):
        assert add(o("w+1"), w) == o("w*2")

    def test_no_rightward_absorption(self):
        assert add(o("w^2"), w) == o("w^2+w")

    def test_not_commutative(self):
        assert add(1, w) == w != add(w, 1)


class TestLeftSubtract:
    def test_examples(self):
        assert left_subtract(w, o("w*2")) == w
        assert left_subtract(3, w) == w

    def test_underflow(self):
        with pytest.raises(Underflow):
            left_subtract(o("w*2"), w)


class TestMultiply:
    def test_examples(self):
        assert multiply(2, w) == w
        assert multiply(w, 2) == add(w, w)
        assert multiply(o("w+1"), o("w+1")) == o("w^2+w+1")

    def test_square_of_limit(self):
        assert multiply(o("w^2+w"), o("w^2+w")) == o("w^4+w^3")


class TestOmegaPower:
    def test_examples(self):
        assert omega_power(0) == ONE
        assert omega_power(2) == o("w^2")
        assert omega_power(w) == o("w^w")

    def test_depth_budget(self):
        tower = ZERO
        with pytest.raises(DepthExceeded):
            for _ in range(20):
                tower = omega_power(tower)

    def test_budget_is_configurable(self):
        with depth_budget(2):
            with pytest.raises(DepthExceeded):
                omega_power(omega_power(w))
        omega_power(omega_power(w))


class TestCardinality:
    def test_examples(self):
        assert cardinality(5) == Cardinality(5)
        assert cardinality(o("w^w")) == ALEPH0
        assert cardinality(0) == Cardinality(0)

    def test_order(self):
        assert Cardinality(3) < ALEPH0
        assert not ALEPH0 < Cardinality(3)


class TestLiterals:
    @pytest.mark.parametrize("text", ["0", "7", "w", "w^2*3+w+5", "w^w", "w^(w+1)*2+w^w+3"])
    def test_round_trip(self, text):
        assert format_ordinal(parse_ordinal(text)) == text

    def test_products_and_sums_evaluate(self):
        assert format_ordinal(o("w+w^2")) == "w^2"
        assert format_ordinal(o("(w+1)*(w+1)")) == "w^2+w+1"
        assert format_ordinal(o("ω*2")) == "w*2"

    @pytest.mark.parametrize("bad", ["", "w^", "2^w", "w+", "(w", "x"])
    def test_errors_carry_column(self, bad):
        with pytest.raises(OrdinalParseError) as info:
            parse_ordinal(bad)
        assert info.value.column >= 0


class TestLaws:
    @settings(max_examples=300)
    @given(ords(), ords(), ords())
    def test_associativity(self, a, b, c):
        assert add(add(a, b), c) == add(a, add(b, c))
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))

    @settings(max_examples=300)
    @given(ords(), ords(), ords())
    def test_left_distributivity(self, a, b, c):
        assert multiply(a, add(b, c)) == add(multiply(a, b), multiply(a, c))

    @given(nested_ordinals(), nested_ordinals())
    def test_subtract_round_trip(self, a, b):
        lo, hi = sorted((a, b))
        assert add(lo, left_subtract(lo, hi)) == hi

    @given(nested_ordinals(), nested_ordinals(), nested_ordinals())
    def test_right_monotone(self, a, b, c):
        if b < c:
            assert add(a, b) < add(a, c)

    @given(nested_ordinals())
    def test_literal_round_trip(self, a):
        assert parse_ordinal(format_ordinal(a)) == a

    @given(nested_ordinals(), nested_ordinals(), nested_ordinals())
    def test_total_order(self, a, b, c):
        assert (compare(a, b) == 0) == (a == b)
        assert compare(a, b) == -compare(b, a)
        if a <= b <= c:
            assert a <= c
