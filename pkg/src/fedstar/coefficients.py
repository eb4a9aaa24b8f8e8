"""Exact scalar arithmetic and truncated power-series utilities.

The ground field for every computation in this package is the field of
rational functions in a small set of named formal parameters (typically
just the sphere radius ``r``) over the rationals.  A :class:`Scalar` is a
fraction of two multivariate polynomials with ``fractions.Fraction``
coefficients, stored as sparse exponent-tuple dicts.

Canonicalisation is deliberately light: common monomial factors and
rational content are removed and the denominator's leading coefficient is
made positive; no polynomial gcd is attempted.  Equality is decided by
cross-multiplication, which is exact and total.

:class:`LambdaSeries` is a truncated power series in the deformation
parameter with Scalar coefficients, of fixed order ``K`` (length ``K+1``).
:class:`UnivariateJet` is the same container used as a truncated Taylor
expansion in a single chart coordinate; it additionally supports the square
root with unit constant term, used to build the sphere chart data.

Scalars serialise as text like ``3*r^2/2`` and round-trip exactly through
:func:`Scalar.parse`.
"""

from fractions import Fraction

from .errors import ParseError, TruncationMismatch

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# sparse polynomials: dict {exponent tuple: Fraction}, exponents aligned with
# an externally supplied tuple of variable names
# ---------------------------------------------------------------------------

def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, _ZERO) + c
        if s:
            out[e] = s
        elif e in out:
            del out[e]
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, _ZERO) + c1 * c2
            if s:
                out[e] = s
            elif e in out:
                del out[e]
    return out


def _pscale(a, q):
    if not q:
        return {}
    return {e: c * q for e, c in a.items()}


def _pconst(q, nvars):
    if not q:
        return {}
    return {(0,) * nvars: Fraction(q)}


def _remap(poly, positions, nvars):
    """Re-embed a polynomial into a larger variable tuple."""
    out = {}
    for e, c in poly.items():
        new = [0] * nvars
        for old_i, new_i in enumerate(positions):
            new[new_i] = e[old_i]
        out[tuple(new)] = c
    return out


def _content(poly):
    """gcd of numerators over lcm of denominators, as a positive Fraction."""
    from math import gcd, lcm

    if not poly:
        return _ONE
    num = 0
    den = 1
    for c in poly.values():
        num = gcd(num, c.numerator)
        den = lcm(den, c.denominator)
    return Fraction(num, den)


def _lead_exp(poly):
    return max(poly)


class Scalar:
    """Exact rational function in named parameters over Q.

    Immutable.  ``vars`` is a sorted tuple of parameter names; ``num`` and
    ``den`` are sparse polynomial dicts whose exponent tuples align with it.
    """

    __slots__ = ("vars", "num", "den")

    def __init__(self, num, den, variables):
        if not den:
            raise ZeroDivisionError("scalar with zero denominator")
        self.vars = variables
        self.num = num
        self.den = den
        self._normalize()

    def _normalize(self):
        num, den = self.num, self.den
        if not num:
            self.den = _pconst(1, len(self.vars))
            return
        # cancel common monomial factor
        nv = len(self.vars)
        if nv:
            mins = [min(min(e[i] for e in num), min(e[i] for e in den))
                    for i in range(nv)]
            if any(mins):
                shift = tuple(mins)
                num = {tuple(x - s for x, s in zip(e, shift)): c
                       for e, c in num.items()}
                den = {tuple(x - s for x, s in zip(e, shift)): c
                       for e, c in den.items()}
        # content-reduce against the denominator, positive leading coefficient
        cd = _content(den)
        if den[_lead_exp(den)] < 0:
            cd = -cd
        if cd != 1:
            inv = 1 / cd
            num = _pscale(num, inv)
            den = _pscale(den, inv)
        self.num = num
        self.den = den

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_fraction(cls, q, variables=()):
        q = Fraction(q)
        nv = len(variables)
        return cls(_pconst(q, nv), _pconst(1, nv), variables)

    @classmethod
    def zero(cls, variables=()):
        return cls.from_fraction(0, variables)

    @classmethod
    def one(cls, variables=()):
        return cls.from_fraction(1, variables)

    @classmethod
    def parameter(cls, name, variables=None):
        if variables is None:
            variables = (name,)
        if name not in variables:
            raise ValueError("parameter %r not among variables %r" % (name, variables))
        nv = len(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls({e: _ONE}, _pconst(1, nv), variables)

    # -- variable unification ---------------------------------------------

    def _unified(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.from_fraction(other, self.vars)
        if self.vars == other.vars:
            return self, other
        merged = tuple(sorted(set(self.vars) | set(other.vars)))
        return self._embed(merged), other._embed(merged)

    def _embed(self, merged):
        if merged == self.vars:
            return self
        pos = [merged.index(v) for v in self.vars]
        nv = len(merged)
        return Scalar(_remap(self.num, pos, nv), _remap(self.den, pos, nv), merged)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        a, b = self._unified(other)
        if a.den == b.den:
            return Scalar(_padd(a.num, b.num), dict(a.den), a.vars)
        num = _padd(_pmul(a.num, b.den), _pmul(b.num, a.den))
        return Scalar(num, _pmul(a.den, b.den), a.vars)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(_pneg(self.num), dict(self.den), self.vars)

    def __sub__(self, other):
        a, b = self._unified(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Scalar.zero(self.vars)
            return Scalar(_pscale(self.num, Fraction(other)), dict(self.den), self.vars)
        a, b = self._unified(other)
        return Scalar(_pmul(a.num, b.num), _pmul(a.den, b.den), a.vars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_fraction(other, self.vars)
        a, b = self._unified(other)
        if not b.num:
            raise ZeroDivisionError("division by zero scalar")
        return Scalar(_pmul(a.num, b.den), _pmul(a.den, b.num), a.vars)

    def __rtruediv__(self, other):
        return Scalar.from_fraction(other, self.vars) / self

    def inverse(self):
        return Scalar.one(self.vars) / self

    # -- predicates & queries ----------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == self.den

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_fraction(other, self.vars)
        if not isinstance(other, Scalar):
            return NotImplemented
        a, b = self._unified(other)
        return _pmul(a.num, b.den) == _pmul(b.num, a.den)

    __hash__ = None  # cross-multiplication equality; not usable as dict keys

    def as_fraction_or_none(self):
        """Return the value as a Fraction when parameter-free, else None."""
        zero = (0,) * len(self.vars)
        if all(e == zero for e in self.num) and all(e == zero for e in self.den):
            if not self.num:
                return _ZERO
            return self.num[zero] / self.den[zero]
        return None

    def substitute(self, values):
        """Evaluate at rational parameter values; exact Fraction result."""

        def ev(poly):
            total = _ZERO
            for e, c in poly.items():
                term = c
                for i, p in enumerate(e):
                    if p:
                        term *= Fraction(values[self.vars[i]]) ** p
                total += term
            return total

        den = ev(self.den)
        if not den:
            raise ZeroDivisionError("denominator vanishes at substitution point")
        return ev(self.num) / den

    # -- text form ----------------------------------------------------------

    def __str__(self):
        num, den = self.num, self.den
        # scale both sides to integer coefficients for printing
        cn, cd = _content(num), _content(den)
        scale = Fraction(cn.denominator * cd.denominator)
        pn = _pscale(num, scale)
        pd = _pscale(den, scale)
        g = _content(pn) if pn else _ONE
        gd = _content(pd)
        from math import gcd
        gg = Fraction(gcd(g.numerator, gd.numerator)) if pn else gd
        if gg and gg != 1:
            pn = _pscale(pn, 1 / gg)
            pd = _pscale(pd, 1 / gg)
        ns = _poly_str(pn, self.vars)
        if pd == _pconst(1, len(self.vars)):
            return ns
        ds = _poly_str(pd, self.vars)
        if len(pn) > 1 or ns.startswith("-"):
            ns = "(" + ns + ")"
        if len(pd) > 1 or "*" in ds or any(v in ds for v in self.vars):
            ds = "(" + ds + ")"
        return ns + "/" + ds

    def __repr__(self):
        return "Scalar(%s)" % self

    @classmethod
    def parse(cls, text, variables=()):
        """Parse an expression in ``+ - * / ^ ( )``, integers and names."""
        return _ExprParser(text, variables).parse()


def _poly_str(poly, variables):
    if not poly:
        return "0"
    parts = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        factors = []
        for name, p in zip(variables, e):
            if p == 1:
                factors.append(name)
            elif p:
                factors.append("%s^%d" % (name, p))
        mag = abs(c)
        coeff = ""
        if mag != 1 or not factors:
            coeff = str(mag.numerator)
            if mag.denominator != 1:
                coeff += "/" + str(mag.denominator)
        body = "*".join(([coeff] if coeff else []) + factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


class _ExprParser:
    """Recursive-descent parser for polynomial/rational expressions.

    Used both for Scalar round-trips and for CLI jet expressions, where the
    variable set is the chart coordinates plus parameters.
    """

    def __init__(self, text, variables):
        self.text = text
        self.vars = tuple(sorted(variables))
        self.pos = 0

    def parse(self):
        value = self._expr()
        self._skip()
        if self.pos != len(self.text):
            raise ParseError(self.text, self.pos, "trailing input")
        return value

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self):
        value = self._term()
        while True:
            ch = self._peek()
            if ch == "+":
                self.pos += 1
                value = value + self._term()
            elif ch == "-":
                self.pos += 1
                value = value - self._term()
            else:
                return value

    def _term(self):
        value = self._factor()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                value = value * self._factor()
            elif ch == "/":
                self.pos += 1
                value = value / self._factor()
            else:
                return value

    def _factor(self):
        ch = self._peek()
        sign = 1
        while ch == "-":
            self.pos += 1
            sign = -sign
            ch = self._peek()
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise ParseError(self.text, self.pos, "expected integer exponent")
            n = int(self.text[start:self.pos])
            out = Scalar.one(base.vars)
            for _ in range(n):
                out = out * base
            base = out
        return base if sign > 0 else -base

    def _atom(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            value = self._expr()
            if self._peek() != ")":
                raise ParseError(self.text, self.pos, "expected ')'")
            self.pos += 1
            return value
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Scalar.from_fraction(int(self.text[start:self.pos]), self.vars)
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                                 or self.text[self.pos] in "_~"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.vars:
                raise ParseError(self.text, start, "unknown name %r" % name)
            return Scalar.parameter(name, self.vars)
        raise ParseError(self.text, self.pos, "unexpected character %r" % ch)


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------

class _TruncatedSeries:
    """Shared machinery of LambdaSeries and UnivariateJet.

    ``coeffs`` has length exactly ``order + 1``; arithmetic never reads
    beyond index ``order``.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order=None):
        coeffs = tuple(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) != order + 1:
            raise TruncationMismatch(
                "need exactly %d coefficients, got %d" % (order + 1, len(coeffs)))
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def from_fractions(cls, values, order=None, variables=()):
        coeffs = [Scalar.from_fraction(v, variables) for v in values]
        if order is not None:
            zero = Scalar.zero(variables)
            coeffs += [zero] * (order + 1 - len(coeffs))
        return cls(coeffs, order)

    @classmethod
    def constant(cls, scalar, order):
        if isinstance(scalar, (int, Fraction)):
            scalar = Scalar.from_fraction(scalar)
        zero = Scalar.zero(scalar.vars)
        return cls((scalar,) + (zero,) * order, order)

    @classmethod
    def zero(cls, order, variables=()):
        return cls.constant(Scalar.zero(variables), order)

    @classmethod
    def variable(cls, order, variables=()):
        """The series t (or lambda) itself."""
        if order < 1:
            raise TruncationMismatch("order must be >= 1 for the variable series")
        coeffs = [Scalar.zero(variables) for _ in range(order + 1)]
        coeffs[1] = Scalar.one(variables)
        return cls(coeffs, order)

    def _check(self, other):
        if not isinstance(other, _TruncatedSeries):
            other = type(self).constant(other, self.order)
        if self.order != other.order:
            raise TruncationMismatch(
                "series orders differ: %d vs %d" % (self.order, other.order))
        return other

    def __add__(self, other):
        other = self._check(other)
        return type(self)(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.order)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(tuple(-a for a in self.coeffs), self.order)

    def __sub__(self, other):
        other = self._check(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return type(self)(tuple(a * other for a in self.coeffs), self.order)
        other = self._check(other)
        K = self.order
        out = [None] * (K + 1)
        for n in range(K + 1):
            acc = None
            for i in range(n + 1):
                a, b = self.coeffs[i], other.coeffs[n - i]
                if a.is_zero() or b.is_zero():
                    continue
                term = a * b
                acc = term if acc is None else acc + term
            out[n] = acc if acc is not None else self.coeffs[0] * 0
        return type(self)(out, K)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse mod t^{K+1}; requires a unit constant term."""
        a0 = self.coeffs[0]
        if a0.is_zero():
            raise ZeroDivisionError("series with zero constant term has no inverse")
        K = self.order
        inv0 = a0.inverse()
        out = [inv0]
        for n in range(1, K + 1):
            acc = None
            for i in range(1, n + 1):
                if self.coeffs[i].is_zero():
                    continue
                term = self.coeffs[i] * out[n - i]
                acc = term if acc is None else acc + term
            if acc is None:
                out.append(a0 * 0)
            else:
                out.append(-(inv0 * acc))
        return type(self)(out, K)

    def sqrt_unit(self):
        """Square root with constant term 1; requires constant term == 1."""
        if not self.coeffs[0].is_one():
            raise ValueError("series square root requires unit constant term")
        K = self.order
        one = self.coeffs[0]
        out = [one]
        half = Fraction(1, 2)
        for n in range(1, K + 1):
            acc = self.coeffs[n]
            for i in range(1, n):
                acc = acc - out[i] * out[n - i]
            out.append(acc * half)
        result = type(self)(out, K)
        return result

    def shift(self, n):
        """Multiply by t^n, truncating."""
        zero = self.coeffs[0] * 0
        coeffs = (zero,) * n + self.coeffs[:self.order + 1 - n]
        return type(self)(coeffs, self.order)

    def truncate(self, order):
        if order > self.order:
            raise TruncationMismatch("cannot extend a truncated series")
        return type(self)(self.coeffs[:order + 1], order)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, _TruncatedSeries):
            return NotImplemented
        return (self.order == other.order
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    __hash__ = None

    def _str(self, symbol):
        parts = []
        for n, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = str(c)
            if n == 0:
                parts.append(cs)
                continue
            power = symbol if n == 1 else "%s^%d" % (symbol, n)
            if cs == "1":
                parts.append(power)
            elif cs == "-1":
                parts.append("-" + power)
            else:
                if "+" in cs or (" - " in cs) or "/" in cs:
                    cs = "(" + cs + ")"
                parts.append("%s*%s" % (cs, power))
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text


class LambdaSeries(_TruncatedSeries):
    """Truncated power series in the deformation parameter."""

    def __str__(self):
        return self._str("lambda")

    def __repr__(self):
        return "LambdaSeries(%s; K=%d)" % (self, self.order)


class UnivariateJet(_TruncatedSeries):
    """Truncated Taylor expansion of a chart function in one coordinate."""

    def __str__(self):
        return self._str("t")

    def __repr__(self):
        return "UnivariateJet(%s; J=%d)" % (self, self.order)


def jet_sqrt(jet):
    """Square root of a univariate jet with unit constant term."""
    if not isinstance(jet, UnivariateJet):
        raise TypeError("jet_sqrt expects a UnivariateJet")
    return jet.sqrt_unit()


def series_inverse(series):
    return series.inverse()


def series_mul(a, b):
    return a * b


def cos_jet(order, variables=()):
    """Taylor jet of cos at 0: 1 - t^2/2 + t^4/24 - ..."""
    coeffs = []
    sign = 1
    fact = 1
    for n in range(order + 1):
        if n:
            fact *= n
        if n % 2 == 0:
            coeffs.append(Fraction(sign, fact))
            sign = -sign
        else:
            coeffs.append(Fraction(0))
    return UnivariateJet.from_fractions(coeffs, order, variables)


def sin_jet(order, variables=()):
    """Taylor jet of sin at 0: t - t^3/6 + t^5/120 - ..."""
    coeffs = []
    sign = 1
    fact = 1
    for n in range(order + 1):
        if n:
            fact *= n
        if n % 2 == 1:
            coeffs.append(Fraction(sign, fact))
            sign = -sign
        else:
            coeffs.append(Fraction(0))
    return UnivariateJet.from_fractions(coeffs, order, variables)
