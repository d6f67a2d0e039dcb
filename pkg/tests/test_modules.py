"""Module construction, the twisted action, and the expansion family."""

import random
from fractions import Fraction as F

import pytest

from abmod import (BadAlpha, HostMismatch, NonSquare, TruncSeries,
                   build_xi_tensor, module_e_lambda, module_from_matrix,
                   xi_module)
from abmod.modules import direct_sum, module_from_left_form

P = 10


class TestFromMatrix:
    def test_rank_one_lambda(self):
        m = module_from_matrix([[TruncSeries([0, F(1, 3)], P)]])
        e = m.basis(0)
        assert e.act_a() == e.mul_series(TruncSeries([0, F(1, 3)], P))

    def test_xi_depth_one(self):
        ab = TruncSeries([0, F(1, 2)], P)
        z = TruncSeries.zero(P)
        m = module_from_matrix([[ab, ab], [z, ab]])
        assert m.same_action(xi_module(F(1, 2), 1, P))

    def test_non_simple_pole_is_allowed(self):
        m = module_from_matrix([[TruncSeries([1], P)]])
        assert not m.is_simple_pole()

    def test_non_square_rejected(self):
        with pytest.raises(NonSquare):
            module_from_matrix([[TruncSeries.one(P), TruncSeries.one(P)]])


class TestAction:
    def test_rank_one_eigen(self):
        m = module_e_lambda(F(1, 2), P)
        e = m.basis(0)
        assert e.act_a() == e.act_b().scale(F(1, 2))

    def test_b_action_is_shift(self):
        xi = xi_module(F(1, 2), 1, P)
        e0 = xi.basis(0)
        assert e0.act_b().coords[0] == TruncSeries.b_power(1, P)

    def test_twist_on_scaled_element(self):
        # a((1+b) e) = (1+b) a e + b^2 e
        m = module_e_lambda(F(2, 3), P)
        e = m.basis(0)
        s = TruncSeries([1, 1], P)
        lhs = e.mul_series(s).act_a()
        rhs = e.act_a().mul_series(s) + e.mul_series(TruncSeries.b_power(2, P))
        assert lhs == rhs

    def test_twist_identity_random(self):
        rng = random.Random(3)
        xi = xi_module(F(2, 5), 1, P)
        for _ in range(20):
            s = TruncSeries([F(rng.randint(-3, 3)) for _ in range(P)], P)
            x = xi.element([TruncSeries([rng.randint(-2, 2)
                                         for _ in range(4)], P)
                            for _ in range(2)])
            lhs = x.mul_series(s).act_a()
            rhs = x.act_a().mul_series(s) + x.mul_series(s.twist())
            assert lhs == rhs

    def test_host_mismatch(self):
        m1 = module_e_lambda(F(1, 2), P)
        m2 = module_e_lambda(F(1, 2), P)
        with pytest.raises(HostMismatch):
            m1.basis(0) + m2.basis(0)


class TestSimplePole:
    def test_xi_has_simple_pole(self):
        assert xi_module(F(1, 2), 1, P).is_simple_pole()

    def test_companion_does_not(self):
        m = module_from_left_form(
            [(2, TruncSeries.one(P)), (1, TruncSeries([0, -3], P)),
             (0, TruncSeries([0, 0, 2], P))], P)
        assert not m.is_simple_pole()

    def test_identity_action_does_not(self):
        assert not module_from_matrix([[TruncSeries.one(P)]]).is_simple_pole()


class TestXiFamily:
    def test_depth_zero_is_rank_one(self):
        m = build_xi_tensor([F(1, 2)], 0, 1, P)
        assert m.rank == 1
        assert m.same_action(module_e_lambda(F(1, 2), P))

    def test_depth_one_action(self):
        m = build_xi_tensor([F(1, 2)], 1, 1, P)
        e0, e1 = m.basis(0), m.basis(1)
        half_b = TruncSeries([0, F(1, 2)], P)
        assert e1.act_a() == (e0 + e1).mul_series(half_b)

    def test_two_classes_block_diagonal(self):
        m = build_xi_tensor([F(1, 2), F(1, 3)], 0, 1, P)
        assert m.rank == 2
        assert m.a_matrix[0][1].is_zero_known()
        assert m.a_matrix[1][0].is_zero_known()

    def test_tensor_dimension(self):
        m = build_xi_tensor([F(1, 2)], 1, 3, P)
        assert m.rank == 6

    def test_bad_alpha(self):
        with pytest.raises(BadAlpha):
            build_xi_tensor([F(3, 2)], 0, 1, P)
        with pytest.raises(BadAlpha):
            build_xi_tensor([F(0)], 0, 1, P)


class TestSerialization:
    def test_json_shape(self):
        m = xi_module(F(1, 2), 1, P)
        obj = m.to_json()
        assert obj["rank"] == 2 and obj["prec"] == P
        assert obj["a_matrix"][0][0]["coeffs"][1] == "1/2"

    def test_direct_sum(self):
        m = direct_sum(module_e_lambda(F(1, 2), P), module_e_lambda(F(1, 3), P))
        assert m.rank == 2
        assert m.a_matrix[0][1].is_zero_known()
