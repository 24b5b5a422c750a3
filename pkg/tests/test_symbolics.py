from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from artifact.symbolics import HALF, MINUS, ONE, PLUS, Q, HalfInt, QLaurent, UnitSign, qlaurent_mul

from conftest import Q_SYM, to_sympy

half_ints = st.integers(-40, 40).map(HalfInt)
laurents = st.dictionaries(st.integers(-12, 12).map(HalfInt), st.integers(-5, 5), max_size=5).map(QLaurent)


class TestHalfInt:
    def test_parsing(self):
        assert HalfInt.of("3/2") == HalfInt(3)
        assert HalfInt.of(2) == HalfInt(4)
        assert HalfInt.of(Fraction(-1, 2)) == HalfInt(-1)

    @pytest.mark.parametrize("bad", ["1/3", Fraction(1, 4), "0.5x"])
    def test_rejects_non_half_integers(self, bad):
        with pytest.raises(ValueError):
            HalfInt.of(bad)

    def test_rejects_floats_and_bools(self):
        with pytest.raises(TypeError):
            HalfInt.of(0.5)
        with pytest.raises(TypeError):
            HalfInt.of(True)

    def test_str_and_json(self):
        assert str(HalfInt(3)) == "3/2"
        assert HalfInt(4).to_json() == 2
        assert HalfInt(-1).to_json() == "-1/2"

    @given(half_ints, half_ints)
    def test_arithmetic_matches_fractions(self, a, b):
        assert (a + b).to_fraction() == a.to_fraction() + b.to_fraction()
        assert (a - b).to_fraction() == a.to_fraction() - b.to_fraction()
        assert (a < b) == (a.to_fraction() < b.to_fraction())

    def test_mixed_comparisons(self):
        assert HALF < 1
        assert HalfInt(2) == 1
        assert HalfInt(1) == Fraction(1, 2)


class TestUnitSign:
    def test_products(self):
        assert PLUS * MINUS == MINUS
        assert -MINUS == PLUS
        assert MINUS ** 3 == MINUS
        assert MINUS ** 4 == PLUS

    def test_only_units(self):
        with pytest.raises(ValueError):
            UnitSign(2)


class TestQLaurent:
    def test_monomial_exponents_add(self):
        assert qlaurent_mul(Q, Q ** 2) == Q ** 3

    def test_difference_of_squares(self):
        assert (ONE - Q) * (ONE + Q) == ONE - Q ** 2

    def test_half_exponents_close(self):
        h = QLaurent.monomial(HALF)
        assert h * h == Q

    def test_zero_terms_dropped(self):
        assert QLaurent({1: 2, 0: 0}) - QLaurent({1: 2}) == QLaurent()
        assert QLaurent().is_zero()

    def test_inverse_of_unit_monomial(self):
        assert QLaurent.monomial(3, -1) ** -1 == QLaurent.monomial(-3, -1)
        with pytest.raises(ValueError):
            (ONE + Q) ** -1

    def test_evaluate(self):
        assert (Q ** 2 - Q).evaluate(3) == 6
        assert QLaurent.monomial(-2).evaluate(2) == Fraction(1, 4)
        with pytest.raises(ValueError):
            QLaurent.monomial(HALF).evaluate(2)

    def test_json_round_trip(self):
        p = QLaurent({HalfInt(3): -2, 0: 5})
        assert QLaurent.from_json(p.to_json()) == p

    def test_str(self):
        assert str(QLaurent()) == "0"
        assert str(Q ** 2 - Q) == "q^2 - q"

    @given(laurents, laurents, laurents)
    def test_ring_axioms(self, a, b, c):
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a - a == QLaurent()

    @given(laurents, laurents)
    def test_product_agrees_with_sympy(self, a, b):
        assert sympy.simplify(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0

    @given(st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=4), st.sampled_from([2, 3, 5]))
    def test_evaluate_agrees_with_sympy(self, coeffs, q):
        p = QLaurent(coeffs)
        assert p.evaluate(q) == Fraction(str(to_sympy(p).subs(Q_SYM, q)))
