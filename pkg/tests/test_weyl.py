from fractions import Fraction

import pytest

from fedstar.coefficients import Scalar
from fedstar.errors import (DimensionMismatch, NonHamiltonianError,
                            TruncationMismatch)
from fedstar.sampling import random_section, rng_for
from fedstar.weyl import (SymplecticData, WeylSection, delta, delta_inv,
                          deserialize_section, graded_commutator,
                          lie_generator, moyal_mul, section_from_jet,
                          serialize_section, sigma, unit_section)

SYMP = SymplecticData(2)


def y_power(beta, dim=2, order=2, dmax=6, jet_order=4):
    section = WeylSection(dim, order, dmax, jet_order)
    section.add_term((0,) * dim, beta, (), 0, Scalar.one())
    return section


class TestMoyal:
    def test_first_order_commutator(self):
        y1, y2 = y_power((1, 0)), y_power((0, 1))
        comm = moyal_mul(y1, y2, SYMP) - moyal_mul(y2, y1, SYMP)
        expected = WeylSection(2, 2, 6, 4)
        expected.add_term((0, 0), (0, 0), (), 1, Scalar.one())
        assert comm == expected

    def test_unit(self):
        rng = rng_for(2)
        one = unit_section(2, 2, 6, 4)
        for _ in range(5):
            a = random_section(rng, 2, 2, 6, 4)
            assert moyal_mul(one, a, SYMP) == a
            assert moyal_mul(a, one, SYMP) == a

    def test_squares_hand_expansion(self):
        a, b = y_power((2, 0)), y_power((0, 2))
        product = moyal_mul(a, b, SYMP)
        expected = WeylSection(2, 2, 6, 4)
        expected.add_term((0, 0), (2, 2), (), 0, Scalar.one())
        expected.add_term((0, 0), (1, 1), (), 1, Scalar.from_fraction(2))
        expected.add_term((0, 0), (0, 0), (), 2,
                          Scalar.from_fraction(Fraction(1, 2)))
        assert product == expected

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            moyal_mul(y_power((1, 0)), y_power((1, 0, 0, 0), dim=4), SYMP)

    def test_truncation_mismatch(self):
        with pytest.raises(TruncationMismatch):
            moyal_mul(y_power((1, 0)), y_power((1, 0), order=3), SYMP)

    def test_associativity_exact(self):
        rng = rng_for(7)
        for _ in range(8):
            a = random_section(rng, 2, 3, 7, 3)
            b = random_section(rng, 2, 3, 7, 3)
            c = random_section(rng, 2, 3, 7, 3)
            left = moyal_mul(moyal_mul(a, b, SYMP), c, SYMP)
            right = moyal_mul(a, moyal_mul(b, c, SYMP), SYMP)
            assert left == right

    def test_degree_additivity(self):
        rng = rng_for(9)
        for _ in range(8):
            a = random_section(rng, 2, 3, 7, 2)
            b = random_section(rng, 2, 3, 7, 2)
            product = moyal_mul(a, b, SYMP)
            if product.is_zero() or a.is_zero() or b.is_zero():
                continue
            deg = lambda s: max(sum(k[1]) + 2 * k[3] for k in s.entries)
            assert deg(product) <= deg(a) + deg(b)

    def test_commutator_first_order_is_fiber_poisson(self):
        rng = rng_for(13)
        for _ in range(6):
            a = random_section(rng, 2, 2, 7, 2)
            b = random_section(rng, 2, 2, 7, 2)
            a = a.restrict_form_degree(0)
            b = b.restrict_form_degree(0)
            comm = graded_commutator(a, b, SYMP)
            # lambda^1 part of the commutator of lambda-free sections
            poisson = WeylSection(2, 2, 7, comm.jet_order)
            for (alpha1, beta1, _, k1), c1 in a.entries.items():
                if k1:
                    continue
                for (alpha2, beta2, _, k2), c2 in b.entries.items():
                    if k2:
                        continue
                    for i, j, sign in SYMP.pairs:
                        if not (beta1[i] and beta2[j]):
                            continue
                        beta = tuple(
                            x + y - (1 if t == i else 0) - (1 if t == j else 0)
                            for t, (x, y) in enumerate(zip(beta1, beta2)))
                        poisson.add_term(
                            tuple(x + y for x, y in zip(alpha1, alpha2)),
                            beta, (), 1,
                            c1 * c2 * (sign * beta1[i] * beta2[j]))
            comm_first = WeylSection(2, 2, 7, comm.jet_order)
            for key, coeff in comm.entries.items():
                if key[3] == 1:
                    comm_first.add_term(*key, coeff)
            assert comm_first == poisson


class TestHomotopyOperators:
    def test_delta_on_y(self):
        out = delta(y_power((1, 0)))
        expected = WeylSection(2, 2, 6, 4)
        expected.add_term((0, 0), (0, 0), (0,), 0, Scalar.one())
        assert out == expected

    def test_delta_inv_on_dx(self):
        section = WeylSection(2, 2, 6, 4)
        section.add_term((0, 0), (0, 0), (0,), 0, Scalar.one())
        out = delta_inv(section)
        assert out == y_power((1, 0))

    def test_hodge_identity(self):
        rng = rng_for(21)
        for _ in range(10):
            a = random_section(rng, 2, 2, 6, 3)
            recomposed = delta(delta_inv(a)) + delta_inv(delta(a)) \
                + section_from_jet(sigma(a), a.dmax)
            assert recomposed == a

    def test_nilpotence(self):
        rng = rng_for(22)
        for _ in range(10):
            a = random_section(rng, 2, 2, 6, 3)
            assert delta(delta(a)).is_zero()
            assert delta_inv(delta_inv(a)).is_zero()

    def test_sigma_drops_fiber_and_forms(self):
        a = y_power((1, 0))
        a.add_term((1, 0), (0, 0), (), 0, Scalar.from_fraction(5))
        jet = sigma(a)
        assert list(jet.coeffs) == [(1, 0)]

    def test_sigma_of_unit(self):
        jet = sigma(unit_section(2, 2, 6, 4))
        assert jet.value_at_origin().coeffs[0] == Scalar.one()


class TestLieGenerator:
    def test_zero_field(self):
        out = lie_generator([[0, 0], [0, 0]], SYMP, 2, 6, 4)
        assert out.is_zero()

    def test_reproduces_lie_derivative(self):
        # H-flow diag(e^t, e^-t): the fiber bracket with A must equal the
        # y-rotation y1 d/dy1 - y2 d/dy2 on test sections
        matrix = [[1, 0], [0, -1]]
        a_section = lie_generator(matrix, SYMP, 2, 6, 4)
        rng = rng_for(31)
        for _ in range(6):
            probe = random_section(rng, 2, 2, 6, 3)
            comm = graded_commutator(a_section, probe, SYMP)
            rotated = WeylSection(2, 2, 6, probe.jet_order)
            for (alpha, beta, form, k), coeff in probe.entries.items():
                weight = beta[0] - beta[1]
                if weight:
                    rotated.add_term(alpha, beta, form, k + 1,
                                     coeff * weight)
            assert comm == rotated

    def test_commutator_consistency(self):
        # the map B -> A(B) satisfies [A(B), A(B')] / lambda = -A([B, B'])
        e = [[0, 0], [1, 0]]
        f = [[0, 1], [0, 0]]
        h = [[1, 0], [0, -1]]
        a_e = lie_generator(e, SYMP, 2, 6, 4)
        a_f = lie_generator(f, SYMP, 2, 6, 4)
        a_h = lie_generator(h, SYMP, 2, 6, 4)
        comm = graded_commutator(a_e, a_f, SYMP)
        # [B_E, B_F] = -B_H, so expect [A(E), A(F)] = -lambda A(-H) = lambda A(H)
        assert comm == a_h.lambda_shift(1)

    def test_non_hamiltonian_rejected(self):
        with pytest.raises(NonHamiltonianError):
            lie_generator([[1, 0], [0, 1]], SYMP, 2, 6, 4)


class TestSerialization:
    def test_round_trip(self):
        rng = rng_for(41)
        a = random_section(rng, 2, 2, 6, 3)
        text = serialize_section(a)
        back = deserialize_section(text)
        assert back == a
        assert serialize_section(back) == text

    def test_deterministic_ordering(self):
        a = WeylSection(2, 2, 6, 4)
        a.add_term((1, 0), (0, 1), (1,), 0, Scalar.from_fraction(2))
        a.add_term((0, 0), (1, 0), (), 1, Scalar.from_fraction(3))
        lines = serialize_section(a).strip().splitlines()
        assert lines[1].startswith("alpha=0,0")
