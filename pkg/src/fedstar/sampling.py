"""Seeded random inputs for the property suites.

Exact algebra admits no flakiness: every randomized check takes an integer
seed and reproduces byte-identically.  Coefficients are small integers so
failures stay readable.
"""

import random
from fractions import Fraction

from .coefficients import LambdaSeries, Scalar
from .jets import FunctionJet
from .weyl import WeylSection


def rng_for(seed):
    return random.Random(seed)


def random_function_jet(rng, dim, order, jet_order, max_degree=2,
                        lambda_free=True, params=()):
    jet = FunctionJet(dim, order, jet_order)
    zero = Scalar.zero(params)
    for _ in range(4):
        alpha = [0] * dim
        for _ in range(rng.randint(0, max_degree)):
            alpha[rng.randrange(dim)] += 1
        coeffs = [zero] * (order + 1)
        coeffs[0] = Scalar.from_fraction(rng.randint(-3, 3), params)
        if not lambda_free and order >= 1 and rng.random() < 0.5:
            coeffs[rng.randint(1, order)] = Scalar.from_fraction(
                rng.randint(-2, 2), params)
        series = LambdaSeries(coeffs, order)
        if series.is_zero():
            continue
        alpha = tuple(alpha)
        held = jet.coeffs.get(alpha)
        jet._set(alpha, series if held is None else held + series)
    return jet


def random_section(rng, dim, order, dmax, jet_order, entries=10, params=()):
    """Random section with Fedosov degree strictly below the bound.

    Keeping one degree of headroom means the homotopy identities are
    exactly representable (delta_inv raises the degree by one).
    """
    section = WeylSection(dim, order, dmax, jet_order)
    forms = [()]
    for i in range(dim):
        forms.append((i,))
        for j in range(i + 1, dim):
            forms.append((i, j))
    for _ in range(entries):
        alpha = tuple(rng.randint(0, 1) for _ in range(dim))
        k = rng.randint(0, max(order - 1, 0))
        budget = (dmax - 1) - 2 * k
        beta = [0] * dim
        for _ in range(rng.randint(0, max(budget, 0))):
            beta[rng.randrange(dim)] += 1
        if sum(beta) + 2 * k > dmax - 1:
            continue
        form = forms[rng.randrange(len(forms))]
        coeff = Scalar.from_fraction(rng.randint(-3, 3), params)
        section.add_term(alpha, tuple(beta), form, k, coeff)
    return section


def random_scalar(rng, params=(), den_power=1):
    num = {}
    nv = len(params)
    for _ in range(rng.randint(1, 3)):
        exp = tuple(rng.randint(0, 2) for _ in range(nv))
        num[exp] = num.get(exp, Fraction(0)) + rng.randint(-4, 4)
    num = {e: c for e, c in num.items() if c}
    if not num:
        num = {(0,) * nv: Fraction(1)}
    den_exp = tuple(rng.randint(0, den_power) for _ in range(nv))
    den = {den_exp: Fraction(rng.choice([1, 2, 3]))}
    return Scalar(num, den, tuple(params))


def random_lambda_series(rng, order, params=()):
    return LambdaSeries([random_scalar(rng, params) for _ in range(order + 1)],
                        order)
