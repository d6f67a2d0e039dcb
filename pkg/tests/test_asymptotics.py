"""Differential systems, embeddings and log-power expansions."""

import random
from fractions import Fraction as F

import pytest

from abmod import (DiffSystem, NoEmbeddingFound, TruncSeries,
                   bernstein_polynomial, embed_into_xi,
                   from_differential_system, module_e_lambda,
                   realize_expansion, singular_term_report, xi_module)
from abmod.asymptotics import LogPowerFunction, realize_function
from abmod.frescos import FrescoPresentation, fresco_from_presentation
from abmod.modules import direct_sum
from abmod.operators import op_normalize

P = 16


class TestFromDifferentialSystem:
    def test_constant_scalar(self):
        m = from_differential_system(DiffSystem([[[F(1, 2)]]]), P)
        assert m.a_matrix[0][0] == TruncSeries([0, F(1, 2)], P)
        assert bernstein_polynomial(m).roots == ((F(-1, 2), 1),)

    def test_constant_jordan_block(self):
        a = DiffSystem([[[F(1, 2)], [1]], [[0], [F(1, 2)]]])
        m = from_differential_system(a, P)
        assert m.a_matrix[0][1] == TruncSeries([0, 1], P)
        assert bernstein_polynomial(m).roots == ((F(-1, 2), 2),)

    def test_linear_entry_closed_form(self):
        m = from_differential_system(DiffSystem([[[F(1, 2), 1]]]), P)
        # X (1 - b) = 1/2 + b, so bX = b(1/2 + 3/2 b + 3/2 b^2 + ...)
        expected = TruncSeries([0, F(1, 2)] + [F(3, 2)] * (P - 2), P)
        assert m.a_matrix[0][0] == expected

    def test_defining_equation_holds(self):
        sys_ = DiffSystem([[[F(1, 3), 2], [0, 1]], [[1], [F(1, 2), 0, 1]]])
        m = from_differential_system(sys_, P)
        for j in range(2):
            lhs = m.basis(j).act_a()
            acc = m.zero()
            for i in range(2):
                h = m.zero()
                for c in reversed(sys_.entries[i][j]):
                    h = h.act_a() + h.act_b()
                    if c:
                        h = h + m.basis(i).scale(c)
                acc = acc + h
            assert lhs == acc.act_b()
        assert m.is_simple_pole()

    def test_diagonal_spectrum(self):
        sys_ = DiffSystem([[[F(1, 2)], [0]], [[0], [F(2, 3)]]])
        m = from_differential_system(sys_, P)
        poly = bernstein_polynomial(m)
        assert poly.roots == ((F(-2, 3), 1), (F(-1, 2), 1))

    def test_json_round_trip(self):
        sys_ = DiffSystem([[[F(1, 2), 1], [0]], [[1], [F(2, 3)]]])
        again = DiffSystem.from_json(sys_.to_json())
        assert again.entries == sys_.entries
        assert sys_.to_json()["size"] == 2

    def test_saturation_cap_is_respected(self):
        from abmod import NotRegular, saturate
        from abmod.frescos import FrescoPresentation, fresco_from_presentation
        fr = fresco_from_presentation(
            FrescoPresentation([(F(9, 2), 1), (F(5, 2), 1), (F(1, 2),)], P), P)
        assert saturate(fr.module).steps == 2
        with pytest.raises(NotRegular):
            saturate(fr.module, max_iter=1)


class TestEmbedding:
    def test_rank_one_shift(self):
        emb = embed_into_xi(module_e_lambda(F(3, 2), P))
        assert emb.depth == 0 and emb.dim_v == 1
        assert emb.classes == (F(1, 2),)
        col = emb.matrix[0][0]
        assert col.known_valuation() == 1
        assert emb.check_equivariance()

    def test_theme_embeds_with_one_dimensional_v(self):
        fr = fresco_from_presentation(
            FrescoPresentation([(F(3, 2), 1), (F(1, 2),)], P), P)
        emb = embed_into_xi(fr.module)
        assert emb.dim_v == 1 and emb.depth == 1
        assert emb.check_equivariance()

    def test_xi_embeds_into_itself(self):
        xi = xi_module(F(1, 2), 1, P)
        emb = embed_into_xi(xi)
        assert emb.depth == 1 and emb.dim_v == 1

    def test_isotypic_sum_needs_bigger_v(self):
        m = direct_sum(module_e_lambda(F(1, 2), P), module_e_lambda(F(1, 2), P))
        emb = embed_into_xi(m)
        assert emb.depth == 0 and emb.dim_v == 2

    def test_flat_embedding_fails_for_log_modules(self):
        with pytest.raises(NoEmbeddingFound):
            embed_into_xi(xi_module(F(1, 2), 1, P), depth=0)

    def test_image_generates_same_bernstein(self):
        fr = fresco_from_presentation(
            FrescoPresentation([(F(3, 2), 1), (F(1, 2),)], P), P)
        emb = embed_into_xi(fr.module)
        from abmod.lattices import lattice_reduce, sub_module_structure
        cols = [emb.apply(fr.module.basis(j)) for j in range(2)]
        sub = sub_module_structure(lattice_reduce(cols, host=emb.target))
        assert bernstein_polynomial(sub.module, mode="characteristic") \
            == bernstein_polynomial(fr.module, mode="characteristic")


class TestRealize:
    def test_basis_vector(self):
        xi0 = xi_module(F(1, 2), 0, P)
        terms = realize_expansion(xi0.basis(0), 4)
        assert [(t.alpha, t.m, t.j, t.coeff) for t in terms] == [
            (F(1, 2), 0, 0, F(1))]
        assert terms[0].render() == "1*s^(-1/2)"

    def test_primitive_of_inverse_sqrt(self):
        xi0 = xi_module(F(1, 2), 0, P)
        terms = realize_expansion(xi0.basis(0).act_b(), 4)
        assert [(t.m, t.coeff) for t in terms] == [(1, F(2))]
        assert terms[0].render() == "2*s^(1/2)"

    def test_log_direction(self):
        xi1 = xi_module(F(1, 2), 1, P)
        terms = realize_expansion(xi1.basis(1), 4)
        assert [(t.m, t.j, t.coeff) for t in terms] == [(0, 1, F(1, 2))]
        assert terms[0].render() == "(1/2)*s^(-1/2)*log(s)"

    def test_multiplication_by_s_intertwines(self):
        xi1 = xi_module(F(1, 2), 1, P)
        x = xi1.element([TruncSeries([1, 2, 0, 1], P), TruncSeries([0, 3], P)])
        lhs = realize_function(x.act_a(), 12)
        rhs = realize_function(x, 12).mul_s()
        assert lhs.eq_through_order(rhs, 10)

    def test_primitive_intertwines(self):
        xi1 = xi_module(F(2, 5), 1, P)
        x = xi1.element([TruncSeries([1, -1], P), TruncSeries([2], P)])
        lhs = realize_function(x.act_b(), 12)
        rhs = realize_function(x, 12).integrate()
        assert lhs.eq_through_order(rhs, 10)

    def test_closed_form_integral_of_log_terms(self):
        # int_0^s t^(a-1) log t = s^a/a log s - s^a/a^2 for a = 3/2
        f = LogPowerFunction({(F(1, 2), 1, 1): F(1)}, 8)
        out = f.integrate()
        assert out.terms == {(F(1, 2), 2, 1): F(2, 3),
                             (F(1, 2), 2, 0): F(-4, 9)}


class TestWordOracle:
    def test_normal_form_action_matches_symbolic_calculus(self):
        rng = random.Random(99)
        xi = xi_module(F(1, 2), 2, 24)
        v = xi.element([TruncSeries([1, 2], 24), TruncSeries([0, 1], 24),
                        TruncSeries([3], 24)])
        fv = realize_function(v, 20)
        for _ in range(25):
            word = []
            for _ in range(rng.randint(1, 6)):
                letter = rng.choice(["a", "b", "u"])
                if letter == "u":
                    word.append(TruncSeries(
                        [1, rng.randint(-2, 2), rng.randint(-2, 2)], 24))
                else:
                    word.append(letter)
            op = op_normalize(word, 24)
            via_module = realize_function(v.act(op), 20)
            f = fv
            for letter in reversed(word):
                if letter == "a":
                    f = f.mul_s()
                elif letter == "b":
                    f = f.integrate()
                else:
                    f = f.apply_series(letter)
            assert via_module.eq_through_order(f, 10)


class TestSingularTermReport:
    def test_worked_theme(self):
        fr = fresco_from_presentation(
            FrescoPresentation([(F(3, 2), 1), (F(1, 2),)], P), P)
        rep = singular_term_report(fr)
        assert len(rep.classes) == 1
        c = rep.classes[0]
        assert c.alpha == F(1, 2) and c.nilpotent_order == 2
        assert c.terms == ((F(-1), 0, 1),)

    def test_flat_module_has_no_logarithm(self):
        rep = singular_term_report(module_e_lambda(F(1, 2), P))
        c = rep.classes[0]
        assert c.nilpotent_order == 1
        assert c.terms == ((F(-1), 0, 0),)

    def test_alpha_one_log_power_convention(self):
        rep = singular_term_report(module_e_lambda(F(1), P))
        c = rep.classes[0]
        assert c.alpha == F(1) and c.nilpotent_order == 1
        assert c.terms == ((F(0), 0, 1),)
