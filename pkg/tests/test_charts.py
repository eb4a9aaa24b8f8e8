from fractions import Fraction

import pytest

from fedstar.charts import (Chart, builtin_chart_r2, builtin_chart_s2,
                            covariant_derivative, curvature_from_gamma,
                            linear_pullback, moment_jets_r2, moment_jets_s2)
from fedstar.coefficients import LambdaSeries, Scalar
from fedstar.errors import InputError, MathCheckError
from fedstar.jets import FunctionJet
from fedstar.sampling import random_function_jet, rng_for

R = ("r",)


def jet0(dim, jet_order):
    return FunctionJet(dim, 0, jet_order)


class TestChartValidation:
    def test_r2_is_flat(self):
        chart = builtin_chart_r2(6)
        assert chart.is_flat_gamma()
        assert curvature_from_gamma(chart).components == {}

    def test_r2_poisson_normalization(self):
        chart = builtin_chart_r2(6)
        x = chart.parse_function("x", 1, 6)
        p = chart.parse_function("p", 1, 6)
        bracket = x.poisson(p, chart.symplectic)
        assert bracket == FunctionJet.constant(1, 2, 1, 5)

    def test_torsion_is_rejected(self):
        gamma = {(0, 0, 1): _linear_jet(), (0, 1, 0): jet0(2, 4)}
        with pytest.raises(MathCheckError):
            Chart("bad", 2, (), ("x", "p"), 4, gamma)

    def test_non_symplectic_is_rejected(self):
        # symmetric in the lower pair but the lowered tensor is not
        # totally symmetric
        gamma = {(0, 0, 0): _linear_jet()}
        with pytest.raises(MathCheckError):
            Chart("bad", 2, (), ("x", "p"), 4, gamma)

    def test_round_trip(self):
        chart = builtin_chart_s2(6)
        back = Chart.from_text(chart.to_text())
        assert back.dim == 2 and back.params == ("r",)
        for key, jet in chart.gamma.items():
            assert back.gamma_jet(*key) == jet


def _linear_jet():
    jet = jet0(2, 4)
    jet._set((1, 0), LambdaSeries((Scalar.one(),), 0))
    return jet


class TestSphereChart:
    def test_gamma_vanishes_at_origin(self):
        chart = builtin_chart_s2(8)
        for k in range(2):
            for i in range(2):
                for j in range(2):
                    assert chart.gamma_jet(k, i, j).value_at_origin().is_zero()

    def test_first_order_gamma_jets(self):
        chart = builtin_chart_s2(8)
        r = Scalar.parameter("r")
        inv_r2 = (r * r).inverse()
        assert chart.gamma_jet(0, 0, 0).partial(0).value_at_origin() == \
            LambdaSeries((inv_r2,), 0)
        assert chart.gamma_jet(0, 1, 1).partial(0).value_at_origin() == \
            LambdaSeries((Scalar.one(R),), 0)
        assert chart.gamma_jet(1, 0, 1).partial(0).value_at_origin() == \
            LambdaSeries((-inv_r2,), 0)

    def test_gauss_curvature(self):
        # independent oracle: R^0_101 at the origin over g_22(o) = r^2 must
        # equal the round curvature 1/r^2; with omega_01 = 1 the lowered
        # component R_1101(o) = -R^0_101(o)
        chart = builtin_chart_s2(8)
        curv = curvature_from_gamma(chart)
        lowered = curv.component(1, 1, 0, 1).value_at_origin().coeffs[0]
        raised = -lowered  # omega_10 = -1
        r = Scalar.parameter("r")
        gauss = raised / (r * r)
        assert gauss == (r * r).inverse()

    def test_curvature_antisymmetry_forced(self):
        chart = builtin_chart_s2(8)
        curv = curvature_from_gamma(chart)
        for (i, j, k, l) in list(curv.components):
            assert curv.component(i, j, k, l) == \
                curv.component(i, j, l, k).scale(Fraction(-1))


class TestMomentJets:
    def test_sphere_values_at_origin(self):
        jets = moment_jets_s2(2, 8)
        r = Scalar.parameter("r")
        assert jets["sx"].value_at_origin() == LambdaSeries.constant(r, 2)
        assert jets["sy"].value_at_origin().is_zero()
        assert jets["sz"].value_at_origin().is_zero()

    def test_sphere_second_derivatives(self):
        jets = moment_jets_s2(2, 8)
        sx = jets["sx"]
        r = Scalar.parameter("r")
        d_tt = sx.partial(0).partial(0).value_at_origin()
        d_pp = sx.partial(1).partial(1).value_at_origin()
        d_tp = sx.partial(0).partial(1).value_at_origin()
        assert d_tt == LambdaSeries.constant(-r.inverse(), 2)
        assert d_pp == LambdaSeries.constant(-r, 2)
        assert d_tp.is_zero()

    def test_sphere_bracket_relations(self):
        chart = builtin_chart_s2(8)
        jets = moment_jets_s2(2, 8)
        symp = chart.symplectic
        order = ("sx", "sy", "sz")
        for a in range(3):
            b = (a + 1) % 3
            c = (a + 2) % 3
            bracket = jets[order[a]].poisson(jets[order[b]], symp)
            assert bracket == jets[order[c]].truncate_jet(bracket.jet_order)

    def test_sum_of_squares_is_constant(self):
        jets = moment_jets_s2(2, 8)
        total = None
        for name in jets:
            sq = jets[name] * jets[name]
            total = sq if total is None else total + sq
        r = Scalar.parameter("r")
        assert total == FunctionJet.constant(r * r, 2, 2, total.jet_order)

    def test_fundamental_field_commutator(self):
        # realizing T_a f := {Phi_a, f}: [T_y, T_z] f = T_x f on random jets
        chart = builtin_chart_s2(8)
        jets = moment_jets_s2(2, 8)
        symp = chart.symplectic
        rng = rng_for(17)

        def act(name, f):
            return jets[name].poisson(f, symp)

        for _ in range(5):
            f = random_function_jet(rng, 2, 2, 8, params=R)
            lhs = act("sy", act("sz", f)) - act("sz", act("sy", f))
            rhs = act("sx", f)
            trust = min(lhs.jet_order, rhs.jet_order)
            assert lhs.truncate_jet(trust) == rhs.truncate_jet(trust)

    def test_moment_property_generates_action(self):
        # {Phi(X), f} equals the fundamental action for the plane generators
        chart = builtin_chart_r2(8)
        jets = moment_jets_r2(2, 8)
        symp = chart.symplectic
        x = chart.parse_function("x", 2, 8)
        p = chart.parse_function("p", 2, 8)
        # E acts as x d/dp
        assert jets["E"].poisson(p, symp) == x.truncate_jet(7)
        assert jets["E"].poisson(x, symp).is_zero()
        # H acts as x d/dx - p d/dp
        assert jets["H"].poisson(x, symp) == x.truncate_jet(7)
        assert jets["H"].poisson(p, symp) == (-p).truncate_jet(7)

    def test_plane_bracket(self):
        chart = builtin_chart_r2(8)
        jets = moment_jets_r2(2, 8)
        assert jets["E"].poisson(jets["F"], chart.symplectic) == \
            jets["H"].truncate_jet(7)
        assert jets["H"].value_at_origin().is_zero()


class TestCovariantDerivative:
    def test_scalar_gradient_matches_partials_at_origin(self):
        chart = builtin_chart_s2(8)
        jets = moment_jets_s2(2, 8)
        grad = covariant_derivative(chart, {(): jets["sx"]}, 0)
        for k in range(2):
            assert grad[(k,)].value_at_origin() == \
                jets["sx"].partial(k).value_at_origin()

    def test_second_derivative_is_symmetric(self):
        chart = builtin_chart_s2(8)
        jets = moment_jets_s2(2, 8)
        grad = covariant_derivative(chart, {(): jets["sy"]}, 0)
        hess = covariant_derivative(chart, grad, 1)
        for i in range(2):
            for j in range(2):
                a = hess.get((i, j))
                b = hess.get((j, i))
                if a is None and b is None:
                    continue
                assert a == b


class TestLinearPullback:
    def test_identity(self):
        chart = builtin_chart_r2(6)
        jet = chart.parse_function("x^2*p - x", 1, 6)
        matrix = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        assert linear_pullback(jet, matrix) == jet

    def test_shear(self):
        chart = builtin_chart_r2(6)
        x = chart.parse_function("x", 1, 6)
        matrix = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
        pulled = linear_pullback(x, matrix)
        assert pulled == chart.parse_function("x + p", 1, 6)


class TestParsing:
    def test_rejects_rational_in_coordinates(self):
        chart = builtin_chart_r2(6)
        with pytest.raises(InputError):
            chart.parse_function("1/x", 1, 6)

    def test_degree_bound(self):
        chart = builtin_chart_r2(3)
        with pytest.raises(InputError):
            chart.parse_function("x^5", 1, 3)
