from fractions import Fraction

import pytest

from fedstar.coefficients import (LambdaSeries, Scalar, UnivariateJet,
                                  cos_jet, jet_sqrt, series_inverse,
                                  series_mul, sin_jet)
from fedstar.errors import ParseError, TruncationMismatch
from fedstar.sampling import random_scalar, rng_for


def S(text, params=("r",)):
    return Scalar.parse(text, params)


class TestScalar:
    def test_inverse_pair(self):
        r = Scalar.parameter("r")
        assert r.inverse() * r == Scalar.one(("r",))

    def test_halves(self):
        assert Scalar.from_fraction(Fraction(1, 2)) * 2 == Scalar.one()

    def test_negative_inverse_pair_with_substitution(self):
        r = Scalar.parameter("r")
        product = (-r.inverse()) * (-r)
        assert product == Scalar.one(("r",))
        # independent big-rational evaluation at r = 3
        lhs = Fraction(-1, 3) * Fraction(-3)
        assert product.substitute({"r": 3}) == lhs == 1

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            Scalar.one() / Scalar.zero()

    def test_equality_cross_multiplication(self):
        a = S("(r^2 + r)/r")
        b = S("r + 1")
        assert a == b

    @pytest.mark.parametrize("text", [
        "3*r^2/2", "(r^2 + 1)/r", "1/4", "-r", "r^2 - 2*r + 1",
        "(2*r^3 - 1)/(3*r)", "0", "7",
    ])
    def test_round_trip(self, text):
        value = S(text)
        assert Scalar.parse(str(value), ("r",)) == value

    def test_parse_error_reports_position(self):
        with pytest.raises(ParseError):
            S("r +")
        with pytest.raises(ParseError):
            S("q + 1")

    def test_field_axioms_randomized(self):
        rng = rng_for(11)
        for _ in range(40):
            a = random_scalar(rng, ("r",))
            b = random_scalar(rng, ("r",))
            c = random_scalar(rng, ("r",))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            if not a.is_zero():
                assert a * a.inverse() == Scalar.one(("r",))
            assert a + (-a) == Scalar.zero(("r",))

    def test_substitution_is_a_homomorphism(self):
        rng = rng_for(5)
        point = {"r": Fraction(5, 2)}
        for _ in range(30):
            a = random_scalar(rng, ("r",))
            b = random_scalar(rng, ("r",))
            assert (a + b).substitute(point) == \
                a.substitute(point) + b.substitute(point)
            assert (a * b).substitute(point) == \
                a.substitute(point) * b.substitute(point)


class TestLambdaSeries:
    def test_mul_difference_of_squares(self):
        one_plus = LambdaSeries.from_fractions([1, 1], 2)
        one_minus = LambdaSeries.from_fractions([1, -1], 2)
        assert series_mul(one_plus, one_minus) == \
            LambdaSeries.from_fractions([1, 0, -1], 2)

    def test_mul_lambda_squared(self):
        lam = LambdaSeries.variable(2)
        assert lam * lam == LambdaSeries.from_fractions([0, 0, 1], 2)

    def test_mul_hand_expansion(self):
        # (lambda - lambda^2)^2 = lambda^2 - 2 lambda^3 at K = 3
        s = LambdaSeries.from_fractions([0, 1, -1, 0], 3)
        assert s * s == LambdaSeries.from_fractions([0, 0, 1, -2], 3)

    def test_order_mismatch(self):
        with pytest.raises(TruncationMismatch):
            LambdaSeries.from_fractions([1], 1) * \
                LambdaSeries.from_fractions([1], 2)

    def test_inverse_geometric(self):
        s = LambdaSeries.from_fractions([1, 1], 3)
        assert series_inverse(s) == \
            LambdaSeries.from_fractions([1, -1, 1, -1], 3)

    def test_inverse_of_one(self):
        one = LambdaSeries.constant(1, 3)
        assert series_inverse(one) == one

    def test_inverse_hand_value(self):
        s = LambdaSeries.from_fractions([1, -1, 1, 0], 3)
        inv = series_inverse(s)
        assert inv == LambdaSeries.from_fractions([1, 1, 0, -1], 3)
        assert s * inv == LambdaSeries.constant(1, 3)

    def test_inverse_requires_unit(self):
        with pytest.raises(ZeroDivisionError):
            series_inverse(LambdaSeries.variable(2))

    def test_inverse_randomized(self):
        rng = rng_for(3)
        for _ in range(10):
            coeffs = [Scalar.one(("r",))] + \
                [random_scalar(rng, ("r",)) for _ in range(3)]
            s = LambdaSeries(coeffs, 3)
            assert s * series_inverse(s) == \
                LambdaSeries.constant(Scalar.one(("r",)), 3)


class TestUnivariateJet:
    def test_sqrt_of_one(self):
        one = UnivariateJet.from_fractions([1], 4)
        assert jet_sqrt(one) == one

    def test_sqrt_binomial(self):
        base = UnivariateJet.from_fractions([1, 0, -1], 6)
        root = jet_sqrt(base)
        expected = UnivariateJet.from_fractions(
            [1, 0, Fraction(-1, 2), 0, Fraction(-1, 8), 0, Fraction(-1, 16)],
            6)
        assert root == expected
        assert root * root == UnivariateJet.from_fractions([1, 0, -1], 6)

    def test_sqrt_perfect_square(self):
        base = UnivariateJet.from_fractions([1, 2, 1], 4)
        assert jet_sqrt(base) == UnivariateJet.from_fractions([1, 1], 4)

    def test_sqrt_requires_unit_constant(self):
        with pytest.raises(ValueError):
            jet_sqrt(UnivariateJet.from_fractions([4, 0, 1], 3))

    def test_trig_jets(self):
        c = cos_jet(4)
        s = sin_jet(4)
        # cos^2 + sin^2 = 1
        total = c * c + s * s
        assert total == UnivariateJet.from_fractions([1], 4)
