"""Function jets: truncated Taylor expansions at a chart origin.

A :class:`FunctionJet` stores the Taylor coefficients of a function of the
chart coordinates, each coefficient a :class:`~fedstar.coefficients.LambdaSeries`.
``jet_order`` is the trusted truncation in the coordinates; operations that
consume derivatives lower it.  All arithmetic is exact.
"""

from fractions import Fraction

from .coefficients import LambdaSeries, Scalar
from .errors import DimensionMismatch, InputError, TruncationMismatch


def _zero_alpha(dim):
    return (0,) * dim


class FunctionJet:
    """Truncated Taylor expansion with lambda-series coefficients."""

    __slots__ = ("dim", "order", "jet_order", "coeffs")

    def __init__(self, dim, order, jet_order, coeffs=None):
        self.dim = dim
        self.order = order
        self.jet_order = jet_order
        self.coeffs = {}
        if coeffs:
            for alpha, series in coeffs.items():
                self._set(alpha, series)

    def _set(self, alpha, series):
        if len(alpha) != self.dim:
            raise DimensionMismatch("alpha %r has wrong length" % (alpha,))
        if sum(alpha) > self.jet_order:
            return
        if series.order != self.order:
            raise TruncationMismatch("coefficient series order %d != %d"
                                     % (series.order, self.order))
        if not series.is_zero():
            self.coeffs[alpha] = series

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, dim, order, jet_order):
        return cls(dim, order, jet_order)

    @classmethod
    def constant(cls, value, dim, order, jet_order):
        if isinstance(value, (int, Fraction, Scalar)):
            value = LambdaSeries.constant(value, order)
        jet = cls(dim, order, jet_order)
        jet._set(_zero_alpha(dim), value)
        return jet

    @classmethod
    def coordinate(cls, axis, dim, order, jet_order):
        jet = cls(dim, order, jet_order)
        alpha = tuple(1 if i == axis else 0 for i in range(dim))
        jet._set(alpha, LambdaSeries.constant(1, order))
        return jet

    @classmethod
    def from_scalar_polynomial(cls, scalar, coords, order, jet_order):
        """Split a Scalar over coords+params into a jet with Scalar coefficients.

        The denominator must not involve the coordinates.
        """
        dim = len(coords)
        positions = [scalar.vars.index(c) if c in scalar.vars else None
                     for c in coords]
        param_idx = [i for i, v in enumerate(scalar.vars) if v not in coords]
        params = tuple(scalar.vars[i] for i in param_idx)
        for e in scalar.den:
            if any(positions[j] is not None and e[positions[j]] for j in range(dim)):
                raise InputError("denominator involves chart coordinates; "
                                 "only polynomials in the coordinates are accepted")
        den = {tuple(e[i] for i in param_idx): c for e, c in scalar.den.items()}
        terms = {}
        for e, c in scalar.num.items():
            alpha = tuple(e[positions[j]] if positions[j] is not None else 0
                          for j in range(dim))
            pe = tuple(e[i] for i in param_idx)
            bucket = terms.setdefault(alpha, {})
            bucket[pe] = bucket.get(pe, Fraction(0)) + c
        jet = cls(dim, order, jet_order)
        for alpha, num in terms.items():
            if sum(alpha) > jet_order:
                raise InputError("polynomial degree %d exceeds jet order %d"
                                 % (sum(alpha), jet_order))
            coeff = Scalar({k: v for k, v in num.items() if v}, dict(den), params)
            jet._set(alpha, LambdaSeries.constant(coeff, order))
        return jet

    # -- structural helpers ---------------------------------------------------

    def _compat(self, other):
        if not isinstance(other, FunctionJet):
            raise TypeError("expected FunctionJet, got %r" % type(other))
        if self.dim != other.dim:
            raise DimensionMismatch("jet dims differ")
        if self.order != other.order:
            raise TruncationMismatch("jet lambda orders differ")

    def copy(self):
        jet = FunctionJet(self.dim, self.order, self.jet_order)
        jet.coeffs = dict(self.coeffs)
        return jet

    def truncate_jet(self, jet_order):
        jet = FunctionJet(self.dim, self.order, jet_order)
        for alpha, series in self.coeffs.items():
            jet._set(alpha, series)
        return jet

    def truncate_order(self, order):
        """Drop lambda coefficients above ``order``."""
        jet = FunctionJet(self.dim, order, self.jet_order)
        for alpha, series in self.coeffs.items():
            jet._set(alpha, series.truncate(order))
        return jet

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        self._compat(other)
        jet_order = min(self.jet_order, other.jet_order)
        jet = FunctionJet(self.dim, self.order, jet_order)
        for alpha in set(self.coeffs) | set(other.coeffs):
            if sum(alpha) > jet_order:
                continue
            a = self.coeffs.get(alpha)
            b = other.coeffs.get(alpha)
            series = a + b if (a is not None and b is not None) else (a or b)
            jet._set(alpha, series)
        return jet

    def __neg__(self):
        jet = FunctionJet(self.dim, self.order, self.jet_order)
        jet.coeffs = {a: -s for a, s in self.coeffs.items()}
        return jet

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar, LambdaSeries)):
            return self.scale(other)
        self._compat(other)
        jet_order = min(self.jet_order, other.jet_order)
        jet = FunctionJet(self.dim, self.order, jet_order)
        acc = {}
        for a1, s1 in self.coeffs.items():
            for a2, s2 in other.coeffs.items():
                alpha = tuple(x + y for x, y in zip(a1, a2))
                if sum(alpha) > jet_order:
                    continue
                prod = s1 * s2
                if alpha in acc:
                    acc[alpha] = acc[alpha] + prod
                else:
                    acc[alpha] = prod
        for alpha, series in acc.items():
            jet._set(alpha, series)
        return jet

    __rmul__ = __mul__

    def scale(self, factor):
        jet = FunctionJet(self.dim, self.order, self.jet_order)
        for alpha, series in self.coeffs.items():
            jet._set(alpha, series * factor)
        return jet

    def lambda_shift(self, n):
        jet = FunctionJet(self.dim, self.order, self.jet_order)
        for alpha, series in self.coeffs.items():
            jet._set(alpha, series.shift(n))
        return jet

    def partial(self, axis):
        """Coordinate derivative; trusted jet order drops by one."""
        jet = FunctionJet(self.dim, self.order, self.jet_order - 1)
        for alpha, series in self.coeffs.items():
            if alpha[axis] == 0:
                continue
            down = tuple(a - (1 if i == axis else 0) for i, a in enumerate(alpha))
            jet._set(down, series * alpha[axis])
        return jet

    # -- queries ----------------------------------------------------------------

    def value_at_origin(self):
        series = self.coeffs.get(_zero_alpha(self.dim))
        if series is None:
            return LambdaSeries.zero(self.order)
        return series

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return all(sum(alpha) == 0 for alpha in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FunctionJet):
            return NotImplemented
        if self.dim != other.dim or self.order != other.order:
            return False
        common = min(self.jet_order, other.jet_order)
        keys = {a for a in set(self.coeffs) | set(other.coeffs) if sum(a) <= common}
        zero = LambdaSeries.zero(self.order)
        return all(self.coeffs.get(a, zero) == other.coeffs.get(a, zero)
                   for a in keys)

    __hash__ = None

    def poisson(self, other, symplectic):
        """Canonical Poisson bracket {self, other} on the chart."""
        self._compat(other)
        out = None
        for i, j, sign in symplectic.pairs:
            term = (self.partial(i) * other.partial(j)).scale(sign)
            out = term if out is None else out + term
        return out

    # -- text form ----------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for alpha in sorted(self.coeffs):
            parts.append("x^%s: %s" % ("".join(map(str, alpha)), self.coeffs[alpha]))
        return "; ".join(parts)

    def __repr__(self):
        return "FunctionJet(%s; K=%d, J=%d)" % (self, self.order, self.jet_order)

    def to_entries(self):
        """Deterministic listing for serialization and reports."""
        out = []
        for alpha in sorted(self.coeffs):
            series = self.coeffs[alpha]
            out.append({"alpha": list(alpha),
                        "series": [str(c) for c in series.coeffs]})
        return out

    @classmethod
    def from_entries(cls, entries, dim, order, jet_order, params=()):
        jet = cls(dim, order, jet_order)
        for item in entries:
            alpha = tuple(item["alpha"])
            coeffs = [Scalar.parse(s, params) for s in item["series"]]
            jet._set(alpha, LambdaSeries(coeffs, order))
        return jet
