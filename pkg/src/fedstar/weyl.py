"""The graded Weyl-algebra-with-forms kernel.

Sections of the Weyl bundle tensored with the exterior algebra are stored
as jets at the chart origin: a :class:`WeylSection` maps keys

    (alpha, beta, form, k)

to :class:`~fedstar.coefficients.Scalar` coefficients, where ``alpha`` is
the coordinate jet multi-index, ``beta`` the fiber (y) multi-index,
``form`` the sorted tuple of antisymmetric dx axes, and ``k`` the power of
the deformation parameter.  Antisymmetry is resolved at insertion by
sorting the form axes and tracking the permutation sign.

Truncation discipline.  ``dmax`` bounds the Fedosov degree |beta| + 2k;
``jet_order`` bounds |alpha|; the lambda power is bounded by ``order``.
The Fedosov degree of a fiberwise product term is exactly the sum of the
factors' degrees, so truncating by ``dmax`` commutes with association and
the fiberwise product stays associative on the nose within the kept range.
An optional ``sigma_bound`` prunes entries with |beta| + k above the bound;
such entries can never influence the y=0 projection at lambda orders
<= sigma_bound (each fiber contraction consumes one y from each factor and
produces one lambda), and the bound is non-decreasing along products and
the flatness recursion, so pruning is exact for star products truncated at
that lambda order.

The fiberwise multiplication is the Moyal rule with one factor of
(lambda/2) per contraction against the canonical bivector {y^i, y^j}.
"""

from fractions import Fraction
from math import factorial

from .coefficients import LambdaSeries, Scalar
from .errors import (DimensionMismatch, InputError, NonHamiltonianError,
                     TruncationMismatch)
from .jets import FunctionJet


class SymplecticData:
    """Constant standard Darboux symplectic structure on R^{2n}.

    ``lower`` is omega_ij with omega(q_a, p_a) = +1 in block order
    (q_1..q_n, p_1..p_n); ``poisson`` is the canonical bivector
    {y^i, y^j}; ``inverse`` is the matrix inverse of ``lower``
    (omega^{ik} omega_{kj} = delta^i_j).  ``pairs`` lists the nonzero
    Poisson pairs (i, j, sign); ``fiber_pairs`` is the same list with the
    fiberwise sign convention applied.
    """

    __slots__ = ("dim", "n", "lower", "poisson", "inverse", "pairs",
                 "fiber_pairs", "fiber_sign")

    def __init__(self, dim, fiber_sign=1):
        if dim % 2 or dim <= 0:
            raise DimensionMismatch("chart dimension must be positive even")
        self.dim = dim
        self.n = dim // 2
        n = self.n
        self.lower = [[Fraction(0)] * dim for _ in range(dim)]
        for a in range(n):
            self.lower[a][n + a] = Fraction(1)
            self.lower[n + a][a] = Fraction(-1)
        # canonical bracket {q_a, p_a} = 1: same block matrix
        self.poisson = [row[:] for row in self.lower]
        self.inverse = [[-x for x in row] for row in self.lower]
        self.pairs = tuple((a, n + a, Fraction(1)) for a in range(n)) + \
            tuple((n + a, a, Fraction(-1)) for a in range(n))
        self.fiber_sign = fiber_sign
        self.fiber_pairs = tuple((i, j, s * fiber_sign) for i, j, s in self.pairs)


def _falling(b, m):
    out = 1
    for t in range(m):
        out *= (b - t)
        if not out:
            return 0
    return out


def _merge_forms(s1, s2):
    """Wedge two disjoint sorted axis tuples; returns (sign, merged) or None."""
    if not s1:
        return 1, s2
    if not s2:
        return 1, s1
    inversions = 0
    for x in s1:
        for y in s2:
            if x == y:
                return None
            if x > y:
                inversions += 1
    merged = tuple(sorted(s1 + s2))
    return (-1 if inversions % 2 else 1), merged


def _insert_axis(axis, form):
    """dx^axis wedged from the left onto a sorted form tuple."""
    if axis in form:
        return None
    before = sum(1 for s in form if s < axis)
    sign = -1 if before % 2 else 1
    return sign, tuple(sorted(form + (axis,)))


def _remove_axis(form):
    """Yield (sign, axis, remaining) for left contraction slots."""
    for t, axis in enumerate(form):
        sign = -1 if t % 2 else 1
        yield sign, axis, form[:t] + form[t + 1:]


def _compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


class WeylSection:
    """Jet-valued element of the Weyl bundle with forms at the chart origin."""

    __slots__ = ("dim", "order", "dmax", "jet_order", "sigma_bound", "entries")

    def __init__(self, dim, order, dmax, jet_order, sigma_bound=None):
        self.dim = dim
        self.order = order
        self.dmax = dmax
        self.jet_order = jet_order
        self.sigma_bound = sigma_bound
        self.entries = {}

    # -- entry management ------------------------------------------------------

    def _keep(self, alpha, beta, form, k):
        if k > self.order or sum(alpha) > self.jet_order:
            return False
        if sum(beta) + 2 * k > self.dmax:
            return False
        if self.sigma_bound is not None and sum(beta) + k > self.sigma_bound:
            return False
        return True

    def add_term(self, alpha, beta, form, k, coeff):
        """Accumulate a coefficient; the form tuple must already be sorted."""
        if isinstance(coeff, (int, Fraction)):
            coeff = Scalar.from_fraction(coeff)
        if coeff.is_zero() or not self._keep(alpha, beta, form, k):
            return
        key = (alpha, beta, form, k)
        held = self.entries.get(key)
        if held is None:
            self.entries[key] = coeff
        else:
            total = held + coeff
            if total.is_zero():
                del self.entries[key]
            else:
                self.entries[key] = total

    def _like(self, jet_order=None, sigma_bound="same"):
        return WeylSection(self.dim, self.order, self.dmax,
                           self.jet_order if jet_order is None else jet_order,
                           self.sigma_bound if sigma_bound == "same" else sigma_bound)

    def copy(self):
        out = self._like()
        out.entries = dict(self.entries)
        return out

    def _compat(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch("sections live on different dimensions")
        if self.order != other.order or self.dmax != other.dmax:
            raise TruncationMismatch("sections carry different truncations")

    # -- linear structure ---------------------------------------------------------

    def __add__(self, other):
        self._compat(other)
        bound = self._combined_sigma(other)
        out = WeylSection(self.dim, self.order, self.dmax,
                          min(self.jet_order, other.jet_order), bound)
        for key, coeff in self.entries.items():
            out.add_term(*key, coeff)
        for key, coeff in other.entries.items():
            out.add_term(*key, coeff)
        return out

    def __neg__(self):
        out = self._like()
        out.entries = {k: -c for k, c in self.entries.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        out = self._like()
        for key, coeff in self.entries.items():
            out.add_term(*key, coeff * factor)
        return out

    def lambda_shift(self, n):
        out = self._like()
        for (alpha, beta, form, k), coeff in self.entries.items():
            out.add_term(alpha, beta, form, k + n, coeff)
        return out

    def _combined_sigma(self, other):
        if self.sigma_bound is None:
            return other.sigma_bound
        if other.sigma_bound is None:
            return self.sigma_bound
        return min(self.sigma_bound, other.sigma_bound)

    # -- queries --------------------------------------------------------------------

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, WeylSection):
            return NotImplemented
        self._compat(other)
        keys = set(self.entries) | set(other.entries)
        for key in keys:
            a = self.entries.get(key)
            b = other.entries.get(key)
            if a is None or b is None:
                if not (a or b).is_zero():
                    return False
            elif not (a - b).is_zero():
                return False
        return True

    __hash__ = None

    def form_degrees(self):
        return sorted({len(form) for (_, _, form, _) in self.entries})

    def min_fedosov_degree(self):
        degrees = [sum(beta) + 2 * k for (_, beta, _, k) in self.entries]
        return min(degrees) if degrees else None

    def restrict_form_degree(self, q):
        out = self._like()
        for key, coeff in self.entries.items():
            if len(key[2]) == q:
                out.entries[key] = coeff
        return out

    def restrict_degree(self, dbound):
        """Drop entries of Fedosov degree above ``dbound``."""
        out = self._like()
        for key, coeff in self.entries.items():
            if sum(key[1]) + 2 * key[3] <= dbound:
                out.entries[key] = coeff
        return out

    def __repr__(self):
        return ("WeylSection(dim=%d, K=%d, D=%d, J=%d, %d entries)"
                % (self.dim, self.order, self.dmax, self.jet_order,
                   len(self.entries)))


# -------------------------------------------------------------------------------
# constructors
# -------------------------------------------------------------------------------

def section_from_jet(jet, dmax, sigma_bound=None):
    """Embed a function jet as the y-free, form-free part of a section."""
    out = WeylSection(jet.dim, jet.order, dmax, jet.jet_order, sigma_bound)
    zero_beta = (0,) * jet.dim
    for alpha, series in jet.coeffs.items():
        for k, coeff in enumerate(series.coeffs):
            out.add_term(alpha, zero_beta, (), k, coeff)
    return out


def unit_section(dim, order, dmax, jet_order, sigma_bound=None):
    out = WeylSection(dim, order, dmax, jet_order, sigma_bound)
    out.add_term((0,) * dim, (0,) * dim, (), 0, Scalar.one())
    return out


def two_form_section(coefficients, dim, order, dmax, jet_order):
    """Scalar two-form sum_{i<j} c_ij dx^i ^ dx^j, c_ij FunctionJets or Scalars."""
    out = WeylSection(dim, order, dmax, jet_order)
    zero_beta = (0,) * dim
    for (i, j), value in coefficients.items():
        if i >= j:
            raise InputError("two-form coefficients are keyed by i < j")
        if isinstance(value, FunctionJet):
            for alpha, series in value.coeffs.items():
                for k, coeff in enumerate(series.coeffs):
                    out.add_term(alpha, zero_beta, (i, j), k, coeff)
        else:
            if isinstance(value, (int, Fraction)):
                value = Scalar.from_fraction(value)
            out.add_term((0,) * dim, zero_beta, (i, j), 0, value)
    return out


def omega_section(symplectic, order, dmax, jet_order):
    """The symplectic form itself as a scalar two-form section."""
    coeffs = {}
    for i in range(symplectic.dim):
        for j in range(i + 1, symplectic.dim):
            if symplectic.lower[i][j]:
                coeffs[(i, j)] = Scalar.from_fraction(symplectic.lower[i][j])
    return two_form_section(coeffs, symplectic.dim, order, dmax, jet_order)


def omega_bar_section(symplectic, order, dmax, jet_order):
    """omega_ij y^i dx^j, the generator whose fiber bracket gives delta."""
    dim = symplectic.dim
    out = WeylSection(dim, order, dmax, jet_order)
    alpha0 = (0,) * dim
    for i in range(dim):
        for j in range(dim):
            w = symplectic.lower[i][j]
            if w:
                beta = tuple(1 if t == i else 0 for t in range(dim))
                out.add_term(alpha0, beta, (j,), 0, Scalar.from_fraction(w))
    return out


# -------------------------------------------------------------------------------
# the fiberwise product and the fundamental operators
# -------------------------------------------------------------------------------

def moyal_mul(a, b, symplectic, degree_filter=None):
    """Fiberwise Moyal product, applied jetwise, wedging the form parts.

    ``degree_filter`` optionally keeps only output terms whose Fedosov
    degree lies in the given set (used to build graded recursions cheaply).
    """
    a._compat(b)
    if a.dim != symplectic.dim:
        raise DimensionMismatch("section/symplectic dimension mismatch")
    out = WeylSection(a.dim, a.order, a.dmax,
                      min(a.jet_order, b.jet_order), a._combined_sigma(b))
    pairs = symplectic.fiber_pairs
    nslots = len(pairs)
    half = Fraction(1, 2)
    for (a1, b1, s1, k1), c1 in a.entries.items():
        deg1 = sum(b1) + 2 * k1
        for (a2, b2, s2, k2), c2 in b.entries.items():
            if degree_filter is not None:
                if deg1 + sum(b2) + 2 * k2 not in degree_filter:
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
            for m in range(mmax + 1):
                k = k1 + k2 + m
                if k > out.order:
                    break
                scale = half ** m
                for comp in _compositions(m, nslots) if m else ((0,) * nslots,):
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
                    out.add_term(alpha, beta, form, k,
                                 base * (coeff * f1 * f2))
    return out


def graded_commutator(a, b, symplectic):
    """[a, b] = a b - (-1)^{|a||b|} b a, graded by form degree."""
    out = None
    for qa in a.form_degrees():
        part_a = a.restrict_form_degree(qa)
        for qb in b.form_degrees():
            part_b = b.restrict_form_degree(qb)
            term = moyal_mul(part_a, part_b, symplectic)
            swap = moyal_mul(part_b, part_a, symplectic)
            if (qa * qb) % 2:
                term = term + swap
            else:
                term = term - swap
            out = term if out is None else out + term
    if out is None:
        out = a._like(jet_order=min(a.jet_order, b.jet_order))
        out.entries = {}
    return out


def delta(a):
    """delta a = dx^k ^ d a / d y^k."""
    out = a._like()
    for (alpha, beta, form, k), coeff in a.entries.items():
        for axis in range(a.dim):
            if not beta[axis]:
                continue
            ins = _insert_axis(axis, form)
            if ins is None:
                continue
            sign, new_form = ins
            new_beta = tuple(b - (1 if t == axis else 0)
                             for t, b in enumerate(beta))
            out.add_term(alpha, new_beta, new_form, k,
                         coeff * (beta[axis] * sign))
    return out


def delta_inv(a):
    """Homotopy inverse: (1/(p+q)) y^k i(d/dx^k) on monomials, zero on p+q=0."""
    out = a._like()
    for (alpha, beta, form, k), coeff in a.entries.items():
        p = sum(beta)
        q = len(form)
        if p + q == 0 or q == 0:
            continue
        w = Fraction(1, p + q)
        for sign, axis, rest in _remove_axis(form):
            new_beta = tuple(b + (1 if t == axis else 0)
                             for t, b in enumerate(beta))
            out.add_term(alpha, new_beta, rest, k, coeff * (w * sign))
    return out


def sigma(a):
    """Projection to the center: keep beta = 0, no form part."""
    zero_beta = (0,) * a.dim
    jet = FunctionJet(a.dim, a.order, a.jet_order)
    buckets = {}
    for (alpha, beta, form, k), coeff in a.entries.items():
        if beta != zero_beta or form != ():
            continue
        buckets.setdefault(alpha, {})[k] = coeff
    for alpha, by_k in buckets.items():
        coeffs = [by_k.get(k, Scalar.zero()) for k in range(a.order + 1)]
        jet._set(alpha, LambdaSeries(coeffs, a.order))
    return jet


def exterior_d(a):
    """Coordinate exterior derivative dx^k ^ d/dx^k; consumes one jet order."""
    out = a._like(jet_order=a.jet_order - 1)
    for (alpha, beta, form, k), coeff in a.entries.items():
        for axis in range(a.dim):
            if not alpha[axis]:
                continue
            ins = _insert_axis(axis, form)
            if ins is None:
                continue
            sign, new_form = ins
            new_alpha = tuple(x - (1 if t == axis else 0)
                              for t, x in enumerate(alpha))
            out.add_term(new_alpha, beta, new_form, k,
                         coeff * (alpha[axis] * sign))
    return out


def contract_vector(a, components):
    """Interior product i(X) for X = components[j] d/dx^j (FunctionJets)."""
    out = a._like(jet_order=min([a.jet_order] + [c.jet_order for c in components]))
    for (alpha, beta, form, k), coeff in a.entries.items():
        for sign, axis, rest in _remove_axis(form):
            comp = components[axis]
            for calpha, series in comp.coeffs.items():
                new_alpha = tuple(x + y for x, y in zip(alpha, calpha))
                if sum(new_alpha) > out.jet_order:
                    continue
                for kk, c in enumerate(series.coeffs):
                    if c.is_zero():
                        continue
                    out.add_term(new_alpha, beta, rest, k + kk,
                                 coeff * (c if sign > 0 else -c))
    return out


def lie_generator(matrix, symplectic, order, dmax, jet_order):
    """Quadratic section generating the Lie derivative of a linear field.

    ``matrix`` is X^k_j (rows k, columns j) with Scalar or Fraction entries;
    the flow x -> exp(tX) x must be symplectic, i.e. omega X symmetric.
    Returns (1/2) (omega X)_{ij} y^i y^j, whose fiber bracket divided by
    lambda acts on sections as the y-rotation part of L_X.
    """
    dim = symplectic.dim
    lowered = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            acc = Scalar.zero()
            for k in range(dim):
                w = symplectic.lower[i][k]
                if not w:
                    continue
                entry = matrix[k][j]
                if isinstance(entry, (int, Fraction)):
                    entry = Scalar.from_fraction(entry)
                acc = acc + entry * w
            lowered[i][j] = acc
    for i in range(dim):
        for j in range(i + 1, dim):
            if not (lowered[i][j] - lowered[j][i]).is_zero():
                raise NonHamiltonianError(
                    "omega X is not symmetric at (%d, %d): matrix is not in sp(2n)"
                    % (i, j))
    out = WeylSection(dim, order, dmax, jet_order)
    alpha0 = (0,) * dim
    half = Fraction(1, 2)
    for i in range(dim):
        for j in range(dim):
            c = lowered[i][j]
            if c.is_zero():
                continue
            beta = tuple((1 if t == i else 0) + (1 if t == j else 0)
                         for t in range(dim))
            out.add_term(alpha0, beta, (), 0, c * half)
    return out


# -------------------------------------------------------------------------------
# serialization: deterministic entry listing
# -------------------------------------------------------------------------------

def serialize_section(a):
    lines = ["dim=%d order=%d dmax=%d jet_order=%d"
             % (a.dim, a.order, a.dmax, a.jet_order)]
    for key in sorted(a.entries):
        alpha, beta, form, k = key
        lines.append("alpha=%s beta=%s form=%s k=%d coeff=%s"
                     % (",".join(map(str, alpha)), ",".join(map(str, beta)),
                        ",".join(map(str, form)) if form else "-", k,
                        a.entries[key]))
    return "\n".join(lines) + "\n"


def deserialize_section(text, params=()):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    header = dict(part.split("=") for part in lines[0].split())
    out = WeylSection(int(header["dim"]), int(header["order"]),
                      int(header["dmax"]), int(header["jet_order"]))
    for ln in lines[1:]:
        fields = {}
        head, _, coeff_text = ln.partition(" coeff=")
        for part in head.split():
            name, _, value = part.partition("=")
            fields[name] = value
        alpha = tuple(int(x) for x in fields["alpha"].split(","))
        beta = tuple(int(x) for x in fields["beta"].split(","))
        form = (() if fields["form"] == "-"
                else tuple(int(x) for x in fields["form"].split(",")))
        out.add_term(alpha, beta, form, int(fields["k"]),
                     Scalar.parse(coeff_text, params))
    return out
