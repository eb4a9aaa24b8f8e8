"""Darboux chart data: connection jets, curvature, built-in geometries.

A :class:`Chart` is a Darboux chart descriptor at a reference origin: the
dimension, the named formal parameters, and the Taylor jets of the
Christoffel coefficients Gamma^k_ij of a torsion-free symplectic
connection, expressed in canonical coordinates where the symplectic form
is the constant standard one.  Constructors validate the torsion-free and
nabla-omega = 0 conditions jetwise (with constant omega the latter is the
total symmetry of the lowered coefficients omega_il Gamma^l_jk).

Two geometries are built in:

* the flat plane chart with coordinates (x, p), {x, p} = 1;
* the sphere of radius r about the point where the first axis of its
  ambient embedding meets it, in canonical coordinates (theta, phi) where
  theta is r times the negative cosine of the colatitude.  The invariant
  connection is realised as the Levi-Civita connection of the round metric
  of radius r; its coefficients vanish at the origin, and all jets are
  exact rational functions of r.

The classical moment maps of the built-in group actions are provided as
exact jets, built by composing square-root and trigonometric expansions.
"""

import json
from fractions import Fraction

from .coefficients import (LambdaSeries, Scalar, UnivariateJet, cos_jet,
                           jet_sqrt, sin_jet)
from .errors import InputError, MathCheckError
from .jets import FunctionJet
from .weyl import SymplecticData

_ORDER0 = 0


def _jet0(dim, jet_order):
    return FunctionJet(dim, _ORDER0, jet_order)


def _scalar_series(scalar):
    return LambdaSeries((scalar,), _ORDER0)


class Chart:
    """Darboux chart: dimension, parameters, connection jets at the origin."""

    __slots__ = ("name", "dim", "params", "coords", "jet_order", "gamma",
                 "symplectic")

    def __init__(self, name, dim, params, coords, jet_order, gamma,
                 fiber_sign=1):
        self.name = name
        self.dim = dim
        self.params = tuple(sorted(params))
        self.coords = tuple(coords)
        self.jet_order = jet_order
        self.symplectic = SymplecticData(dim, fiber_sign)
        full = {}
        for (k, i, j), jet in gamma.items():
            full[(k, i, j)] = jet
        self.gamma = full
        self._validate()

    def _validate(self):
        zero = _jet0(self.dim, self.jet_order)
        for (k, i, j), jet in self.gamma.items():
            mirror = self.gamma.get((k, j, i), zero)
            if not jet == mirror:
                raise MathCheckError(
                    "connection has torsion: Gamma^%d_%d%d != Gamma^%d_%d%d"
                    % (k, i, j, k, j, i))
        # total symmetry of omega_il Gamma^l_jk  <=>  nabla omega = 0
        lowered = {}
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    acc = None
                    for l in range(self.dim):
                        w = self.symplectic.lower[i][l]
                        if not w:
                            continue
                        jet = self.gamma.get((l, j, k))
                        if jet is None:
                            continue
                        term = jet.scale(Fraction(w))
                        acc = term if acc is None else acc + term
                    lowered[(i, j, k)] = acc if acc is not None else zero
        for (i, j, k), jet in lowered.items():
            for perm in ((j, i, k), (k, j, i)):
                if not jet == lowered[perm]:
                    raise MathCheckError(
                        "connection is not symplectic: lowered coefficients "
                        "are not totally symmetric at %r vs %r"
                        % ((i, j, k), perm))

    def gamma_jet(self, k, i, j):
        jet = self.gamma.get((k, i, j))
        if jet is None:
            return _jet0(self.dim, self.jet_order)
        return jet

    def is_flat_gamma(self):
        return all(jet.is_zero() for jet in self.gamma.values())

    def coordinate_jet(self, axis, order, jet_order):
        return FunctionJet.coordinate(axis, self.dim, order, jet_order)

    def parse_function(self, text, order, jet_order):
        """Polynomial in the chart coordinates (and parameters) as a jet."""
        scalar = Scalar.parse(text, tuple(self.coords) + self.params)
        return FunctionJet.from_scalar_polynomial(scalar, self.coords, order,
                                                  jet_order)

    # -- serialization ---------------------------------------------------------

    def to_document(self):
        entries = []
        for (k, i, j) in sorted(self.gamma):
            jet = self.gamma[(k, i, j)]
            for alpha in sorted(jet.coeffs):
                entries.append({"k": k, "i": i, "j": j, "alpha": list(alpha),
                                "coeff": str(jet.coeffs[alpha].coeffs[0])})
        return {"name": self.name, "dim": self.dim,
                "params": list(self.params), "coords": list(self.coords),
                "omega": "standard", "jet_order": self.jet_order,
                "gamma_jets": entries}

    def to_text(self):
        return json.dumps(self.to_document(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_document(cls, doc):
        if doc.get("omega", "standard") != "standard":
            raise InputError("only the standard constant omega is supported")
        dim = int(doc["dim"])
        params = tuple(doc.get("params", ()))
        jet_order = int(doc["jet_order"])
        gamma = {}
        for item in doc.get("gamma_jets", ()):
            key = (int(item["k"]), int(item["i"]), int(item["j"]))
            jet = gamma.setdefault(key, _jet0(dim, jet_order))
            alpha = tuple(int(x) for x in item["alpha"])
            coeff = Scalar.parse(item["coeff"], params)
            jet._set(alpha, _scalar_series(coeff))
        return cls(doc.get("name", "chart"), dim, params,
                   tuple(doc.get("coords", ["x%d" % i for i in range(dim)])),
                   jet_order, gamma)

    @classmethod
    def from_text(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError("malformed chart file: %s" % exc) from exc
        return cls.from_document(doc)


class CurvatureJets:
    """Lowered curvature tensor jets R_ijkl at the chart origin."""

    __slots__ = ("dim", "jet_order", "components")

    def __init__(self, dim, jet_order, components):
        self.dim = dim
        self.jet_order = jet_order
        self.components = components  # dict (i,j,k,l) -> FunctionJet (order 0)
        self._validate()

    def _validate(self):
        zero = _jet0(self.dim, self.jet_order)
        get = lambda idx: self.components.get(idx, zero)
        rng = range(self.dim)
        for i in rng:
            for j in rng:
                for k in rng:
                    for l in rng:
                        if not get((i, j, k, l)) == -get((i, j, l, k)):
                            raise MathCheckError(
                                "curvature not antisymmetric in its form "
                                "indices at %r" % ((i, j, k, l),))
                        if not get((i, j, k, l)) == get((j, i, k, l)):
                            raise MathCheckError(
                                "curvature not symmetric in its first two "
                                "indices at %r" % ((i, j, k, l),))

    def component(self, i, j, k, l):
        return self.components.get((i, j, k, l), _jet0(self.dim, self.jet_order))


def curvature_from_gamma(chart):
    """R^m_jkl = d_k Gamma^m_lj - d_l Gamma^m_kj + Gamma Gamma terms, lowered.

    Requires connection jets of order at least one; the result is trusted
    one jet order below the chart's.
    """
    if chart.jet_order < 1:
        raise InputError("connection jets of order >= 1 are required for "
                         "curvature; chart has jet order %d" % chart.jet_order)
    dim = chart.dim
    out_order = chart.jet_order - 1
    raised = {}
    for m in range(dim):
        for j in range(dim):
            for k in range(dim):
                for l in range(dim):
                    if k == l:
                        continue
                    term = chart.gamma_jet(m, l, j).partial(k) \
                        - chart.gamma_jet(m, k, j).partial(l)
                    for p in range(dim):
                        term = term + chart.gamma_jet(m, k, p) * chart.gamma_jet(p, l, j)
                        term = term - chart.gamma_jet(m, l, p) * chart.gamma_jet(p, k, j)
                    if not term.is_zero():
                        raised[(m, j, k, l)] = term.truncate_jet(out_order)
    lowered = {}
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                for l in range(dim):
                    acc = None
                    for m in range(dim):
                        w = chart.symplectic.lower[i][m]
                        if not w:
                            continue
                        jet = raised.get((m, j, k, l))
                        if jet is None:
                            continue
                        term = jet.scale(Fraction(w))
                        acc = term if acc is None else acc + term
                    if acc is not None and not acc.is_zero():
                        lowered[(i, j, k, l)] = acc
    return CurvatureJets(dim, out_order, lowered)


def covariant_derivative(chart, tensor, rank):
    """One covariant derivative of a fully lowered tensor of jets.

    ``tensor`` maps index tuples of length ``rank`` to FunctionJets; the
    result maps (k,) + idx tuples:  nabla_k T_idx = d_k T_idx
    - sum_s Gamma^m_{k idx[s]} T_{idx with m at slot s}.
    """
    from itertools import product as iproduct

    dim = chart.dim
    orders = {jet.order for jet in tensor.values()}
    order = orders.pop() if orders else _ORDER0
    jet_orders = [jet.jet_order for jet in tensor.values()]
    out_jet_order = (min(jet_orders) - 1) if jet_orders else chart.jet_order - 1
    rng = range(dim)
    out = {}
    for idx in iproduct(rng, repeat=rank):
        for k in rng:
            acc = None
            jet = tensor.get(idx)
            if jet is not None and not jet.is_zero():
                acc = jet.partial(k)
            for s in range(rank):
                for m in rng:
                    g = chart.gamma_jet(m, k, idx[s])
                    if g.is_zero():
                        continue
                    sub = idx[:s] + (m,) + idx[s + 1:]
                    t = tensor.get(sub)
                    if t is None or t.is_zero():
                        continue
                    term = lift_order(g, order) * t
                    acc = -term if acc is None else acc - term
            if acc is not None and not acc.is_zero():
                out[(k,) + idx] = acc.truncate_jet(out_jet_order)
    return out


def lift_order(jet, order):
    """Re-express a lambda-order-0 jet at a higher lambda order."""
    if jet.order == order:
        return jet
    out = FunctionJet(jet.dim, order, jet.jet_order)
    for alpha, series in jet.coeffs.items():
        coeffs = list(series.coeffs) + [Scalar.zero()] * (order - series.order)
        out._set(alpha, LambdaSeries(coeffs, order))
    return out


def linear_pullback(jet, matrix):
    """Pull a polynomial jet back along the linear map x -> M x.

    ``matrix`` has Fraction entries; (g . u)(x) = u(M x) with M the matrix
    of g^{-1} when realizing a group action.  Exact on polynomial jets of
    degree within the jet order.
    """
    dim = jet.dim
    out = FunctionJet(dim, jet.order, jet.jet_order)
    basis = []
    for j in range(dim):
        row = FunctionJet(dim, jet.order, jet.jet_order)
        for i in range(dim):
            if matrix[j][i]:
                alpha = tuple(1 if t == i else 0 for t in range(dim))
                row._set(alpha, LambdaSeries.constant(
                    Scalar.from_fraction(matrix[j][i]), jet.order))
        basis.append(row)
    acc = FunctionJet(dim, jet.order, jet.jet_order)
    for alpha, series in jet.coeffs.items():
        term = FunctionJet.constant(LambdaSeries.constant(1, jet.order),
                                    dim, jet.order, jet.jet_order)
        for axis, power in enumerate(alpha):
            for _ in range(power):
                term = term * basis[axis]
        acc = acc + term.scale(series)
    return acc


# -------------------------------------------------------------------------------
# built-in charts
# -------------------------------------------------------------------------------

def builtin_chart_r2(jet_order=8, fiber_sign=1):
    """Flat plane chart: coordinates (x, p), {x, p} = 1, Gamma = 0."""
    return Chart("r2", 2, (), ("x", "p"), jet_order, {}, fiber_sign)


def builtin_chart_s2(jet_order=8, fiber_sign=1):
    """Sphere of radius r in canonical coordinates (theta, phi) at the origin.

    The connection is the Levi-Civita connection of the round metric of
    radius r written in the canonical coordinates; its coefficients vanish
    at the origin.  With u the first coordinate and S^2 = 1 - u^2/r^2:

        Gamma^1_11 = u / (r^2 S^2)
        Gamma^1_22 = u S^2
        Gamma^2_12 = Gamma^2_21 = -u / (r^2 S^2)
    """
    r = Scalar.parameter("r")
    one = Scalar.one(("r",))
    # series in u: 1/(r^2 S^2) = sum_j u^{2j} / r^{2j+2}
    inv_r2 = (r * r).inverse()
    s2_jet = UnivariateJet(
        [one if n == 0 else (-inv_r2 if n == 2 else Scalar.zero(("r",)))
         for n in range(jet_order + 1)], jet_order)
    g_jet = s2_jet.inverse() * inv_r2

    def from_univariate(ujet, extra_power=0):
        jet = _jet0(2, jet_order)
        for n, c in enumerate(ujet.coeffs):
            if c.is_zero():
                continue
            total = n + extra_power
            if total > jet_order:
                continue
            jet._set((total, 0), _scalar_series(c))
        return jet

    gamma = {}
    gamma[(0, 0, 0)] = from_univariate(g_jet, extra_power=1)
    gamma[(0, 1, 1)] = from_univariate(s2_jet, extra_power=1)
    minus_g = from_univariate(g_jet, extra_power=1).scale(Fraction(-1))
    gamma[(1, 0, 1)] = minus_g
    gamma[(1, 1, 0)] = minus_g
    chart = Chart("s2", 2, ("r",), ("theta", "phi"), jet_order, gamma,
                  fiber_sign)
    origin_ok = all(chart.gamma_jet(k, i, j).value_at_origin().is_zero()
                    for k in range(2) for i in range(2) for j in range(2))
    if not origin_ok:
        raise MathCheckError("sphere connection coefficients must vanish "
                             "at the origin")
    return chart


# -------------------------------------------------------------------------------
# classical moment maps of the built-in actions
# -------------------------------------------------------------------------------

def moment_jets_r2(order, jet_order=8):
    """Quadratic moment map of the linear symplectic action on the plane.

    Generators E, F, H act with {Phi(E), Phi(F)} = Phi(H),
    {Phi(H), Phi(E)} = 2 Phi(E), {Phi(H), Phi(F)} = -2 Phi(F).
    """
    chart = builtin_chart_r2(jet_order)
    x = chart.parse_function("x", order, jet_order)
    p = chart.parse_function("p", order, jet_order)
    half = Fraction(1, 2)
    return {
        "E": (x * x).scale(half),
        "F": (p * p).scale(-half),
        "H": (x * p).scale(Fraction(-1)),
    }


def moment_jets_s2(order, jet_order=8):
    """Components of the sphere's rotational moment map as exact jets.

    In canonical coordinates (theta, phi) with S = sqrt(1 - theta^2/r^2):

        Phi(sx) = r S cos(phi),  Phi(sy) = r S sin(phi),  Phi(sz) = -theta.
    """
    r = Scalar.parameter("r")
    one = Scalar.one(("r",))
    inv_r2 = (r * r).inverse()
    base = UnivariateJet(
        [one if n == 0 else (-inv_r2 if n == 2 else Scalar.zero(("r",)))
         for n in range(jet_order + 1)], jet_order)
    s_jet = jet_sqrt(base)          # sqrt(1 - u^2/r^2)
    cphi = cos_jet(jet_order, ("r",))
    sphi = sin_jet(jet_order, ("r",))

    def combine(radial, angular):
        jet = FunctionJet(2, order, jet_order)
        for a, ca in enumerate(radial.coeffs):
            if ca.is_zero():
                continue
            for b, cb in enumerate(angular.coeffs):
                if cb.is_zero() or a + b > jet_order:
                    continue
                jet._set((a, b), LambdaSeries.constant(r * ca * cb, order))
        return jet

    phi_x = combine(s_jet, cphi)
    phi_y = combine(s_jet, sphi)
    phi_z = FunctionJet(2, order, jet_order)
    phi_z._set((1, 0), LambdaSeries.constant(-one, order))
    return {"sx": phi_x, "sy": phi_y, "sz": phi_z}
