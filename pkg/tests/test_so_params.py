import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import InputError
from artifact.gl_ring import Segment, segment_conductor, unramified_character
from artifact.sampling import random_parameter
from artifact.so_params import (
    EMPTY,
    EQUAL,
    L_TRIVIAL,
    NON_SEED,
    OFF_BY_ONE,
    SEED_STRIP,
    SUPERCUSPIDAL,
    TEMPERED,
    DiscreteLParameter,
    conductor,
    construct,
    epsilon_sign,
    gamma_ratio_product,
    is_seed,
    is_supercuspidal,
    non_seed_segments,
    partition,
    reduction_chain,
    seed_of,
    validate,
)
from artifact.symbolics import MINUS, PLUS, HalfInt, QLaurent, UnitSign


def P(*pairs, n=None):
    return DiscreteLParameter.of(*pairs, n=n)


class TestValidate:
    def test_ok(self, chi):
        validate(P((chi, "3/2"), n=2))

    def test_duplicate(self, chi):
        with pytest.raises(InputError, match="duplicate"):
            validate(P((chi, "3/2"), (chi, "3/2")))

    def test_parity(self, chi, chi_p):
        with pytest.raises(InputError, match="parity"):
            validate(P((chi, 1), (chi_p, 1)))

    def test_dimension(self, chi):
        with pytest.raises(InputError, match="dimension"):
            validate(P((chi, "3/2"), n=3))

    def test_same_character_twice(self, chi):
        alias = unramified_character("other", 1)
        with pytest.raises(InputError, match="same unramified character"):
            validate(P((chi, "1/2"), (alias, "3/2")))

    def test_twisted_label(self, chi):
        with pytest.raises(InputError, match="twist"):
            validate(P((chi.twisted(1), "1/2")))


class TestPartition:
    def test_cases(self, chi, rho_sp):
        assert partition(P((rho_sp, 0))).i00 == (rho_sp,)
        assert partition(P((rho_sp, 0), (rho_sp, 1), (rho_sp, 2))).i01 == (rho_sp,)
        assert partition(P((rho_sp, 1))).i02 == (rho_sp,)
        assert partition(P((rho_sp, 1), (rho_sp, 2))).i1 == (rho_sp,)
        assert partition(P((chi, "1/2"))).i2_odd == (chi,)
        assert partition(P((chi, "1/2"), (chi, "3/2"))).i2_even == (chi,)


class TestConstruct:
    def test_even_line(self, chi):
        res = construct(P((chi, "1/2"), (chi, "3/2")))
        assert res.segments == (Segment(chi, HalfInt(3), HalfInt(-1)),)

    def test_odd_line(self, chi):
        assert construct(P((chi, "3/2"))).segments == (Segment(chi, HalfInt(3), HalfInt(1)),)

    def test_supercuspidal_label(self, rho_sp):
        res = construct(P((rho_sp, 0)))
        assert res.segments == ()
        assert res.cuspidal_support == (rho_sp,)
        assert res.n0 == 1
        assert is_supercuspidal(P((rho_sp, 0)))

    def test_i01_i02(self, rho_sp):
        res = construct(P((rho_sp, 0), (rho_sp, 1), (rho_sp, 2)))
        assert res.segments == (Segment(rho_sp, HalfInt(4), HalfInt(-2)),)
        assert res.cuspidal_support == (rho_sp,)
        res = construct(P((rho_sp, 1)))
        assert res.segments == (Segment(rho_sp, HalfInt(2), HalfInt(2)),)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_dimension_bookkeeping(self, seed):
        phi = random_parameter(random.Random(seed))
        res = construct(phi)
        gl = sum(s.dim for s in res.segments)
        assert gl + res.n0 == phi.n


class TestConductorEpsilon:
    def test_examples(self, chi, chi_p):
        assert conductor(P((chi, "3/2"))) == 3
        assert conductor(EMPTY) == 0
        assert conductor(P((chi, "1/2"), (chi_p, "1/2"))) == 2

    def test_ramified_conductor(self, rho_o):
        assert conductor(P((rho_o, "1/2"))) == 4

    def test_epsilon(self, chi, chi_p):
        assert epsilon_sign(P((chi, "3/2"))) == MINUS
        assert epsilon_sign(P((chi_p, "1/2"))) == PLUS
        assert epsilon_sign(EMPTY) == PLUS

    def test_epsilon_needs_ramified_signs(self, chi, rho_sp):
        phi = P((chi, "1/2"), (rho_sp, 0))
        with pytest.raises(InputError):
            epsilon_sign(phi)
        assert epsilon_sign(phi, {"rho": MINUS}) == PLUS

    @pytest.mark.parametrize("twice", range(1, 16, 2))
    @pytest.mark.parametrize("sign", [1, -1])
    def test_gamma_product(self, twice, sign):
        q_part, t_power = gamma_ratio_product(UnitSign(sign), HalfInt(twice))
        assert t_power == twice
        assert q_part == QLaurent.monomial(HalfInt(twice), (-sign) ** twice)


class TestSeed:
    def test_odd_line_keeps_smallest(self, chi, rho_sp):
        phi = P((chi, "1/2"), (chi, "3/2"), (chi, "5/2"), (rho_sp, 0))
        assert seed_of(phi) == P((chi, "1/2"), (rho_sp, 0))
        assert non_seed_segments(phi) == [Segment(chi, HalfInt(5), HalfInt(-3))]

    def test_even_lines(self, chi, chi_p, rho_sp):
        phi = P((chi, "1/2"), (chi, "3/2"), (chi_p, "1/2"), (chi_p, "5/2"), (rho_sp, 0))
        assert seed_of(phi) == P((rho_sp, 0))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_idempotent(self, seed):
        phi = random_parameter(random.Random(seed))
        s = seed_of(phi)
        assert is_seed(s)
        assert seed_of(s) == s
        # peeled segments account for the dimension
        assert s.dim + 2 * sum(x.dim for x in non_seed_segments(phi)) == phi.dim


class TestReductionChain:
    def test_non_seed_pair(self, chi):
        chain = reduction_chain(P((chi, "1/2"), (chi, "3/2")))
        first = chain[0]
        assert first.step == NON_SEED
        assert first.segments_peeled == (Segment(chi, HalfInt(3), HalfInt(-1)),)
        assert segment_conductor(first.segments_peeled[0]) == 2
        assert first.a_induced == conductor(first.next_parameter) + 4 == 4
        assert first.relation == EQUAL
        assert [n.relation for n in chain] == [EQUAL]

    def test_seed_strip(self, chi, rho_sp):
        chain = reduction_chain(P((chi, "3/2"), (rho_sp, 0)))
        assert chain[0].step == SEED_STRIP
        assert chain[0].a_induced == chain[0].c_param - 1
        assert chain[0].relation == OFF_BY_ONE

    def test_all_ramified(self, rho_sp):
        chain = reduction_chain(P((rho_sp, 0)))
        assert len(chain) == 1
        assert chain[0].step == SUPERCUSPIDAL
        assert chain[0].a_induced == chain[0].c_param

    def test_l_trivial(self, rho_sp):
        chain = reduction_chain(P((rho_sp, 0), (rho_sp, 1)))
        assert [n.step for n in chain] == [L_TRIVIAL]
        assert chain[0].relation == EQUAL

    def test_tempered_prefix(self, chi, rho_sp):
        phi = P((rho_sp, 0))
        chain = reduction_chain(phi, [Segment(chi, HalfInt(1), HalfInt(1))])
        assert chain[0].step == TEMPERED
        assert chain[0].relation == EQUAL

    def test_chain_ends_supercuspidal(self, chi, chi_p, rho_sp):
        phi = P((chi, "1/2"), (chi, "3/2"), (chi, "7/2"), (chi_p, "5/2"), (rho_sp, 1))
        chain = reduction_chain(phi)
        assert [n.step for n in chain] == [NON_SEED, SEED_STRIP, SEED_STRIP, L_TRIVIAL]
        assert is_supercuspidal(chain[-1].next_parameter)

    def test_invalid_input(self, chi):
        with pytest.raises(InputError):
            reduction_chain(P((chi, 1), (chi.twisted(0), 1)))
