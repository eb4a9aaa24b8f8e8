"""The Fedosov engine: Abelian connections, quantization, star products.

The connection acts on Weyl-bundle sections as

    D a = -delta a + nabla a - (1/lambda) [gamma, a],

with nabla the covariant derivative of the chart connection and gamma a
one-form section of Fedosov degree >= 3 normalized by delta^{-1} gamma = 0.
The scalar two-form measuring D^2 is

    Omega = omega - R + delta gamma - nabla gamma + (1/lambda) gamma gamma,

with R = (1/4) R_ijkl y^i y^j dx^k ^ dx^l and R_ijkl = omega_im R^m_jkl.
``build_connection`` solves the degree-ascending fixed point

    gamma = delta^{-1}(Omega~ + R + nabla gamma - (1/lambda) gamma gamma)

for a prescribed perturbation Omega~ = Omega - omega, grading the
recursion by Fedosov degree so every piece carries an honest jet trust.
The recursion raises degree by at least one per step, so it terminates
within the degree bound; no tolerance is involved anywhere.

Quantization lifts a function jet to the unique flat section with the
given y-free part, by the same degree-ascending recursion

    a = u + delta^{-1}(nabla a - (1/lambda)[gamma, a]),

and the star product of two jets is the projection of the fiberwise
product of their lifts.

Perturbation labels.  Built-in perturbations are specified as scalar
multiples of omega per lambda power, "omega + sum_i lambda^i c_i omega".
The label is resolved so that, on a flat chart with label coefficient
series e, the linear part of the connection is the closed-form series

    gamma^(1) = s * m(e) * omega_ij y^i dx^j,   m + m^2 = e,

with s the ``semimoyal-gamma-sign`` convention; the internal Weyl
curvature of that connection is (1 + s m)^2 omega.  This reproduces the
published perturbation series gamma = (lambda - lambda^2 + ...) omega_ij
y^i dx^j for the label "omega + lambda omega" and keeps the engine itself
exactly Abelian; see ``conventions`` for the pinning tests.
"""

from fractions import Fraction

from .charts import curvature_from_gamma
from .coefficients import LambdaSeries, Scalar
from .conventions import DEFAULTS
from .errors import (InputError, MathCheckError, NonClosedFormError,
                     TruncationMismatch)
from .jets import FunctionJet
from .weyl import (WeylSection, delta, delta_inv, exterior_d, moyal_mul,
                   omega_section, section_from_jet, sigma, two_form_section,
                   unit_section)


# ---------------------------------------------------------------------------
# fiber commutator with the 1/lambda division built in
# ---------------------------------------------------------------------------

def commutator_div_lambda(a, b, symplectic, degree_filter=None):
    """(1/lambda) [a, b] for the graded fiber commutator.

    The graded commutator keeps exactly the odd-contraction terms of the
    fiber product, doubled, regardless of form degrees; every such term
    carries at least one power of lambda, so the division is exact.  The
    lambda bound is applied after the division, so no information is lost
    at the top order.
    """
    a._compat(b)
    from math import factorial

    from .weyl import _compositions, _falling, _merge_forms

    out = WeylSection(a.dim, a.order, a.dmax,
                      min(a.jet_order, b.jet_order), a._combined_sigma(b))
    pairs = symplectic.fiber_pairs
    nslots = len(pairs)
    half = Fraction(1, 2)
    for (a1, b1, s1, k1), c1 in a.entries.items():
        deg1 = sum(b1) + 2 * k1
        for (a2, b2, s2, k2), c2 in b.entries.items():
            if degree_filter is not None:
                if deg1 + sum(b2) + 2 * k2 - 2 not in degree_filter:
                    continue
            merged = _merge_forms(s1, s2)
            if merged is None:
                continue
            wsign, form = merged
            alpha = tuple(x + y for x, y in zip(a1, a2))
            if sum(alpha) > out.jet_order:
                continue
            base = c1 * c2
            if wsign < 0:
                base = -base
            mmax = min(sum(b1), sum(b2))
            for m in range(1, mmax + 1, 2):
                k = k1 + k2 + m - 1
                if k > out.order:
                    break
                scale = 2 * half ** m
                for comp in _compositions(m, nslots):
                    mu1 = [0] * a.dim
                    mu2 = [0] * a.dim
                    coeff = scale
                    for c, (i, j, sgn) in zip(comp, pairs):
                        if not c:
                            continue
                        mu1[i] += c
                        mu2[j] += c
                        coeff *= sgn ** c / factorial(c)
                    f1 = 1
                    f2 = 1
                    for t in range(a.dim):
                        f1 *= _falling(b1[t], mu1[t])
                        f2 *= _falling(b2[t], mu2[t])
                        if not f1 or not f2:
                            break
                    if not f1 or not f2:
                        continue
                    beta = tuple(x + y - u - v
                                 for x, y, u, v in zip(b1, b2, mu1, mu2))
                    out.add_term(alpha, beta, form, k, base * (coeff * f1 * f2))
    return out


# ---------------------------------------------------------------------------
# Weyl curvature data
# ---------------------------------------------------------------------------

class WeylCurvature:
    """Perturbation of the symplectic form: Omega = omega + sum lambda^k omega_k.

    ``tilde`` maps lambda powers k >= 1 to two-form coefficient dicts
    {(i, j): Scalar or FunctionJet} with i < j.  Each omega_k must be
    closed jetwise.
    """

    __slots__ = ("chart", "tilde", "label")

    def __init__(self, chart, tilde, label=None):
        self.chart = chart
        self.tilde = {int(k): dict(v) for k, v in tilde.items() if v}
        self.label = label
        for k in self.tilde:
            if k < 1:
                raise InputError("perturbation powers start at lambda^1")
        self._check_closed()

    def _check_closed(self):
        dim = self.chart.dim
        for k, coeffs in self.tilde.items():
            jets = {}
            for (i, j), value in coeffs.items():
                if isinstance(value, FunctionJet):
                    jets[(i, j)] = value
                else:
                    if isinstance(value, (int, Fraction)):
                        value = Scalar.from_fraction(value)
                    jets[(i, j)] = FunctionJet.constant(
                        value, dim, 0, self.chart.jet_order)

            def comp(i, j):
                if i == j:
                    return None
                if i < j:
                    return jets.get((i, j))
                got = jets.get((j, i))
                return got.scale(Fraction(-1)) if got is not None else None

            for i in range(dim):
                for j in range(i + 1, dim):
                    for l in range(j + 1, dim):
                        acc = None
                        for (a, b, c) in ((i, j, l), (j, l, i), (l, i, j)):
                            jet = comp(b, c)
                            if jet is None:
                                continue
                            term = jet.partial(a)
                            acc = term if acc is None else acc + term
                        if acc is not None and not acc.is_zero():
                            raise NonClosedFormError(
                                "omega_%d is not closed on axes (%d,%d,%d)"
                                % (k, i, j, l))

    def is_trivial(self):
        return not self.tilde

    def tilde_section(self, order, dmax, jet_order):
        out = WeylSection(self.chart.dim, order, dmax, jet_order)
        zero_beta = (0,) * self.chart.dim
        for k, coeffs in self.tilde.items():
            if k > order:
                continue
            for (i, j), value in coeffs.items():
                if isinstance(value, FunctionJet):
                    for alpha, series in value.coeffs.items():
                        out.add_term(alpha, zero_beta, (i, j), k,
                                     series.coeffs[0])
                else:
                    if isinstance(value, (int, Fraction)):
                        value = Scalar.from_fraction(value)
                    out.add_term((0,) * self.chart.dim, zero_beta, (i, j), k,
                                 value)
        return out

    def full_section(self, order, dmax, jet_order):
        return omega_section(self.chart.symplectic, order, dmax, jet_order) \
            + self.tilde_section(order, dmax, jet_order)

    @classmethod
    def canonical(cls, chart):
        return cls(chart, {}, label=())

    @classmethod
    def from_omega_multiples(cls, chart, coeffs, order, conventions=DEFAULTS):
        """Resolve the label "omega + sum_i lambda^i c_i omega".

        The label series e = sum c_i lambda^i is converted through
        m + m^2 = e (m = (sqrt(1 + 4 e) - 1)/2) into the internal
        perturbation (2 s m + m^2) omega, so the connection's linear part
        is exactly s m(e) omega_ij y^i dx^j.
        """
        coeffs = list(coeffs)
        if not coeffs:
            return cls.canonical(chart)
        if len(coeffs) > order:
            raise InputError("perturbation label has %d coefficients but the "
                             "lambda order is %d" % (len(coeffs), order))
        params = chart.params
        zero = Scalar.zero(params)
        eps = [zero]
        for c in coeffs:
            if isinstance(c, (int, Fraction)):
                c = Scalar.from_fraction(c, params)
            eps.append(c)
        eps += [zero] * (order + 1 - len(eps))
        e_series = LambdaSeries(eps, order)
        one = LambdaSeries.constant(Scalar.one(params), order)
        m = (one + e_series * 4).sqrt_unit()
        m = (m - one) * Fraction(1, 2)
        s = conventions["semimoyal-gamma-sign"]
        g = m * (2 * s) + m * m
        omega = chart.symplectic.lower
        tilde = {}
        for k in range(1, order + 1):
            c = g.coeffs[k]
            if c.is_zero():
                continue
            level = {}
            for i in range(chart.dim):
                for j in range(i + 1, chart.dim):
                    if omega[i][j]:
                        level[(i, j)] = c * omega[i][j]
            tilde[k] = level
        return cls(chart, tilde, label=tuple(str(c) for c in coeffs))


# ---------------------------------------------------------------------------
# the connection
# ---------------------------------------------------------------------------

class FedosovConnection:
    """Abelian connection data: chart, curvature input, gamma, truncations."""

    __slots__ = ("chart", "omega_curvature", "order", "dmax", "gamma",
                 "gamma_parts", "curvature_section", "conventions",
                 "_lift_cache")

    def __init__(self, chart, omega_curvature, order, gamma, gamma_parts,
                 curvature_section, conventions):
        self.chart = chart
        self.omega_curvature = omega_curvature
        self.order = order
        # one degree above 2*order so the top lambda slice of the curvature
        # identity is witnessed; star products only consume degrees <= 2*order
        self.dmax = 2 * order + 1
        self.gamma = gamma
        self.gamma_parts = gamma_parts
        self.curvature_section = curvature_section
        self.conventions = conventions
        self._lift_cache = {}

    # -- operators -----------------------------------------------------------

    def covariant(self, a):
        """nabla a: exterior derivative plus the connection action on y."""
        return covariant_section(self.chart, a)

    def apply_d(self, a):
        """D a = -delta a + nabla a - (1/lambda)[gamma, a]."""
        out = self.covariant(a) - delta(a)
        if not self.gamma.is_zero():
            out = out - commutator_div_lambda(self.gamma, a,
                                              self.chart.symplectic)
        return out

    def computed_curvature(self, jet_order=None):
        """omega - R + delta gamma - nabla gamma + gamma gamma / lambda."""
        if jet_order is None:
            jet_order = self.gamma.jet_order - 1
        symp = self.chart.symplectic
        out = omega_section(symp, self.order, self.dmax, jet_order)
        out = out - self.curvature_section
        out = out + delta(self.gamma)
        out = out - self.covariant(self.gamma)
        square = commutator_div_lambda(self.gamma, self.gamma, symp)
        out = out + square.scale(Fraction(1, 2))
        return out

    def check_abelian_on_probes(self):
        """D^2 must vanish on the fiber generators (pins curvature sign)."""
        dim = self.chart.dim
        jtrust = max(self.gamma.jet_order - 2, 0)
        for axis in range(dim):
            probe = WeylSection(dim, self.order, self.dmax, self.gamma.jet_order)
            beta = tuple(1 if t == axis else 0 for t in range(dim))
            probe.add_term((0,) * dim, beta, (), 0, Scalar.one())
            dd = self.apply_d(self.apply_d(probe))
            dd = _restrict_jet(dd, jtrust).restrict_degree(self.dmax - 2)
            if not dd.is_zero():
                raise MathCheckError(
                    "connection is not Abelian: D^2 y_%d != 0 "
                    "(curvature sign convention violated)" % axis)

    # -- quantization and the star product -------------------------------------

    def quantize(self, u, sigma_bound=None):
        """The unique flat section with y-free part u, degree by degree.

        The seed jet may carry lambda powers, so its embedding is split by
        Fedosov degree and each slice enters the recursion at its degree.
        """
        if u.order != self.order:
            raise TruncationMismatch("jet lambda order %d != connection order %d"
                                     % (u.order, self.order))
        symp = self.chart.symplectic
        seed = section_from_jet(u, self.dmax, sigma_bound)
        seed_parts = _split_by_degree(seed)
        parts = {0: seed_parts.get(0, seed._like())}
        for d in range(1, self.dmax + 1):
            src = self.covariant(parts[d - 1])
            for g, gpart in self.gamma_parts.items():
                dprime = d + 1 - g
                if dprime < 0 or dprime >= d:
                    continue
                lower = parts.get(dprime)
                if lower is None or lower.is_zero():
                    continue
                src = src - commutator_div_lambda(gpart, lower, symp,
                                                  degree_filter={d - 1})
            piece = delta_inv(src)
            extra = seed_parts.get(d)
            if extra is not None:
                piece = piece + extra
            parts[d] = piece
        total = parts[0]
        for d in range(1, self.dmax + 1):
            total = total + parts[d]
        return total

    def _lift_for_star(self, u, sigma_bound):
        # keyed by identity: pipelines star the same jet objects repeatedly
        held = self._lift_cache.get((id(u), sigma_bound))
        if held is not None and held[0] is u:
            return held[1]
        lifted = self.quantize(u, sigma_bound)
        if len(self._lift_cache) > 64:
            self._lift_cache.clear()
        self._lift_cache[(id(u), sigma_bound)] = (u, lifted)
        return lifted

    def star(self, u, v, sigma_bound="auto"):
        """u * v = sigma(Q(u) Q(v)); exact through the lambda order."""
        if sigma_bound == "auto":
            sigma_bound = self.order
        qu = self._lift_for_star(u, sigma_bound)
        qv = self._lift_for_star(v, sigma_bound)
        return sigma(moyal_mul(qu, qv, self.chart.symplectic))

    def star_commutator(self, u, v):
        return self.star(u, v) - self.star(v, u)


def _restrict_jet(section, jet_order):
    out = WeylSection(section.dim, section.order, section.dmax, jet_order,
                      section.sigma_bound)
    for key, coeff in section.entries.items():
        out.add_term(*key, coeff)
    return out


def _split_by_degree(section):
    parts = {}
    for key, coeff in section.entries.items():
        d = sum(key[1]) + 2 * key[3]
        part = parts.get(d)
        if part is None:
            part = section._like()
            parts[d] = part
        part.add_term(*key, coeff)
    return parts


def covariant_section(chart, a):
    """nabla a = dx^k ^ (d_k a - Gamma^m_{k i} y^i da/dy^m)."""
    from .weyl import _insert_axis

    out = exterior_d(a)
    for (m, kk, ii), jet in chart.gamma.items():
        if jet.is_zero():
            continue
        for (alpha, beta, form, k), coeff in a.entries.items():
            if not beta[m]:
                continue
            ins = _insert_axis(kk, form)
            if ins is None:
                continue
            sign, new_form = ins
            new_beta = tuple(b - (1 if t == m else 0) + (1 if t == ii else 0)
                             for t, b in enumerate(beta))
            factor = beta[m] * sign
            for galpha, series in jet.coeffs.items():
                new_alpha = tuple(x + y for x, y in zip(alpha, galpha))
                if sum(new_alpha) > out.jet_order:
                    continue
                out.add_term(new_alpha, new_beta, new_form, k,
                             -(coeff * series.coeffs[0] * factor))
    return out


def _curvature_section(chart, order, dmax, jet_order, sign):
    """R = (sign/4) R_ijkl y^i y^j dx^k ^ dx^l from the chart's Gamma jets."""
    if chart.is_flat_gamma():
        return WeylSection(chart.dim, order, dmax, jet_order)
    curv = curvature_from_gamma(chart)
    out = WeylSection(chart.dim, order, dmax,
                      min(jet_order, curv.jet_order))
    quarter = Fraction(sign, 4)
    for (i, j, k, l), jet in curv.components.items():
        if k >= l:
            continue  # antisymmetric pair counted once, doubled below
        beta = tuple((1 if t == i else 0) + (1 if t == j else 0)
                     for t in range(chart.dim))
        for alpha, series in jet.coeffs.items():
            # sum over both (k,l) orders collapses to twice the k<l term
            out.add_term(alpha, beta, (k, l), 0,
                         series.coeffs[0] * (2 * quarter))
    return out


def build_connection(chart, omega_curvature, order, conventions=DEFAULTS):
    """Solve for the unique normalized gamma of the Abelian connection.

    Postconditions checked here: delta^{-1} gamma = 0, Fedosov degree of
    gamma at least 3, and the computed scalar curvature form equals
    omega + Omega~ within the trusted truncation.
    """
    if omega_curvature.chart is not chart:
        raise InputError("Weyl curvature was built for a different chart")
    dmax = 2 * order + 1
    symp = chart.symplectic
    jet0 = chart.jet_order
    curv_sign = conventions["curvature-sign"]
    r_section = _curvature_section(chart, order, dmax, jet0, curv_sign)
    tilde = omega_curvature.tilde_section(order, dmax, jet0)
    base = tilde + r_section

    parts = {}
    for d in range(3, dmax + 1):
        src = None

        def accumulate(term):
            nonlocal src
            src = term if src is None else src + term

        base_d = WeylSection(chart.dim, order, dmax, base.jet_order)
        for key, coeff in base.entries.items():
            if sum(key[1]) + 2 * key[3] == d - 1:
                base_d.add_term(*key, coeff)
        if not base_d.is_zero():
            accumulate(base_d)
        prev = parts.get(d - 1)
        if prev is not None and not prev.is_zero():
            nabla = covariant_section(chart, prev)
            if not nabla.is_zero():
                accumulate(nabla)
        for g1, p1 in parts.items():
            g2 = d + 1 - g1
            if g2 < 3 or g2 > g1:
                continue
            p2 = parts.get(g2)
            if p2 is None:
                continue
            # - gamma gamma / lambda = -(1/2) [gamma, gamma] / lambda
            term = commutator_div_lambda(p1, p2, symp, degree_filter={d - 1})
            if g1 == g2:
                term = term.scale(Fraction(1, 2))
            if not term.is_zero():
                accumulate(-term)
        if src is None:
            continue
        piece = delta_inv(src)
        if not piece.is_zero():
            parts[d] = piece

    gamma = WeylSection(chart.dim, order, dmax,
                        min([jet0] + [p.jet_order for p in parts.values()]))
    for piece in parts.values():
        gamma = gamma + piece

    conn = FedosovConnection(chart, omega_curvature, order, gamma, parts,
                             r_section, conventions)

    if not delta_inv(gamma).is_zero():
        raise MathCheckError("normalization failed: delta^{-1} gamma != 0")
    mindeg = gamma.min_fedosov_degree()
    if mindeg is not None and mindeg < 3:
        raise MathCheckError("gamma has Fedosov degree %d < 3" % mindeg)

    # gamma is complete through degree dmax, so the identity is witnessed
    # through degree dmax - 1 = 2 * order: the full lambda range.
    target = omega_curvature.full_section(order, dmax, gamma.jet_order - 1)
    got = conn.computed_curvature(jet_order=gamma.jet_order - 1)
    if not got.restrict_degree(dmax - 1) == target.restrict_degree(dmax - 1):
        raise MathCheckError(
            "curvature identity failed: the connection is not Abelian with "
            "the requested Weyl curvature")
    return conn


def semi_moyal(chart, omega_curvature, order, conventions=DEFAULTS):
    """Fedosov connection on a chart whose symplectic connection is exterior d."""
    if not chart.is_flat_gamma():
        raise InputError("semi-Moyal connections require a flat chart "
                         "connection (Gamma = 0); chart %r has curvature"
                         % chart.name)
    return build_connection(chart, omega_curvature, order, conventions)


# ---------------------------------------------------------------------------
# formal equivalences and transported products
# ---------------------------------------------------------------------------

class EquivalenceOp:
    """T = Id + sum_n lambda^n T_n, T_n differential operators killing constants.

    Each T_n is a list of (multi-index, Scalar) pairs meaning
    sum coeff * d^mu; every mu must be nonzero so that T(1) = 1.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms):
        self.dim = dim
        self.terms = {}
        for n, ops in terms.items():
            n = int(n)
            if n < 1:
                raise InputError("equivalence corrections start at lambda^1")
            cleaned = []
            for mu, coeff in ops:
                mu = tuple(int(x) for x in mu)
                if len(mu) != dim:
                    raise InputError("derivative multi-index of wrong length")
                if not any(mu):
                    raise MathCheckError(
                        "equivalence operators must annihilate constants: "
                        "T(1) != 1")
                if isinstance(coeff, (int, Fraction)):
                    coeff = Scalar.from_fraction(coeff)
                cleaned.append((mu, coeff))
            if cleaned:
                self.terms[n] = cleaned

    def _correction(self, jet):
        """N(u) = sum_n lambda^n T_n u."""
        out = None
        for n, ops in self.terms.items():
            if n > jet.order:
                continue
            for mu, coeff in ops:
                term = jet
                for axis, power in enumerate(mu):
                    for _ in range(power):
                        term = term.partial(axis)
                term = term.scale(coeff).lambda_shift(n)
                out = term if out is None else out + term
        if out is None:
            out = FunctionJet.zero(jet.dim, jet.order, jet.jet_order)
        return out

    def apply(self, jet):
        return jet + self._correction(jet)

    def apply_inverse(self, jet):
        """Neumann series; exact because the correction is O(lambda)."""
        out = jet
        term = jet
        for _ in range(jet.order):
            term = self._correction(term).scale(Fraction(-1))
            if term.is_zero():
                break
            out = out + term
        return out


def transport(equivalence, conn, u, v):
    """The transported product u *^T v = T(T^{-1} u * T^{-1} v)."""
    tu = equivalence.apply_inverse(u)
    tv = equivalence.apply_inverse(v)
    return equivalence.apply(conn.star(tu, tv))
