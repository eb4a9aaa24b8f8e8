"""Deformed enveloping algebra and the induced star product on polynomials.

The Lie algebra is rescaled by the deformation parameter, so generators
satisfy x_i x_j - x_j x_i = lambda [x_i, x_j].  Noncommutative elements are
word sums with lambda-series coefficients (:class:`NCElement`);
straightening rewrites every word into nondecreasing index order with the
rewriting rule

    x_i x_j -> x_j x_i + lambda C^k_ij x_k     (i > j),

which terminates (each step reduces the inversion count or the length) and
is confluent by the Jacobi identity; confluence is property-tested rather
than assumed.

Commutative polynomials on the dual (:class:`SymPoly`) correspond to
straightened words through symmetrization: a monomial maps to the average
of its word permutations.  Desymmetrization inverts this order by order in
the total degree (the straightened image of a symmetrized monomial is that
monomial's ordered word plus lower-length lambda corrections), and the
product

    f * g = desymmetrize(straighten(symmetrize(f) . symmetrize(g)))

is the induced star product on polynomials.
"""

import json
from fractions import Fraction
from itertools import permutations

from .coefficients import LambdaSeries, Scalar
from .errors import InputError, MathCheckError, NonCentralError

DEGREE_BOUND = 6


class LieAlgebra:
    """Finite-dimensional Lie algebra with exact structure constants.

    ``brackets`` maps ordered pairs (i, j), i < j, to coefficient dicts
    {k: Scalar}; antisymmetry fills in the rest.  Antisymmetry is by
    construction, the Jacobi identity is validated exactly on load.
    """

    __slots__ = ("name", "dim", "names", "brackets", "params")

    def __init__(self, name, names, brackets, params=()):
        self.name = name
        self.names = tuple(names)
        self.dim = len(self.names)
        self.params = tuple(params)
        cleaned = {}
        for (i, j), comps in brackets.items():
            if not (0 <= i < j < self.dim):
                raise InputError("bracket keys must satisfy 0 <= i < j < dim")
            comps = {k: (Scalar.from_fraction(v, self.params)
                         if isinstance(v, (int, Fraction)) else v)
                     for k, v in comps.items()}
            cleaned[(i, j)] = {k: v for k, v in comps.items() if not v.is_zero()}
        self.brackets = cleaned
        self._check_jacobi()

    def bracket(self, i, j):
        """Structure constants of [x_i, x_j] as {k: Scalar}."""
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        flipped = self.brackets.get((j, i), {})
        return {k: -v for k, v in flipped.items()}

    def _check_jacobi(self):
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for l in range(j + 1, self.dim):
                    acc = {}

                    def add_in(comps, scale_pairs):
                        for k, v in comps.items():
                            for m, w in scale_pairs.get(k, {}).items():
                                acc[m] = acc.get(m, Scalar.zero(self.params)) \
                                    + v * w

                    # [[i,j],l] + [[j,l],i] + [[l,i],j]
                    for (a, b), c in (((i, j), l), ((j, l), i), ((l, i), j)):
                        inner = self.bracket(a, b)
                        outer = {k: self.bracket(k, c) for k in inner}
                        add_in(inner, outer)
                    for m, v in acc.items():
                        if not v.is_zero():
                            raise MathCheckError(
                                "Jacobi identity fails for generators "
                                "(%s, %s, %s)" % (self.names[i],
                                                  self.names[j],
                                                  self.names[l]))

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError("unknown generator %r" % name) from None

    # -- serialization -----------------------------------------------------

    def to_document(self):
        entries = []
        for (i, j) in sorted(self.brackets):
            for k in sorted(self.brackets[(i, j)]):
                entries.append({"i": i, "j": j, "k": k,
                                "coeff": str(self.brackets[(i, j)][k])})
        return {"name": self.name, "dim": self.dim, "names": list(self.names),
                "params": list(self.params), "c": entries}

    def to_text(self):
        return json.dumps(self.to_document(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_document(cls, doc):
        names = tuple(doc["names"])
        params = tuple(doc.get("params", ()))
        brackets = {}
        for item in doc.get("c", ()):
            key = (int(item["i"]), int(item["j"]))
            brackets.setdefault(key, {})[int(item["k"])] = \
                Scalar.parse(item["coeff"], params)
        return cls(doc.get("name", "liealg"), names, brackets, params)

    @classmethod
    def from_text(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError("malformed Lie algebra file: %s" % exc) from exc
        return cls.from_document(doc)


def builtin_sl2():
    """[E, F] = H, [H, E] = 2E, [H, F] = -2F on generators (E, F, H)."""
    return LieAlgebra("sl2", ("E", "F", "H"), {
        (0, 1): {2: 1},      # [E, F] = H
        (0, 2): {0: -2},     # [E, H] = -2E
        (1, 2): {1: 2},      # [F, H] = 2F
    })


def builtin_so3():
    """[sx, sy] = sz cyclically on generators (sx, sy, sz)."""
    return LieAlgebra("so3", ("sx", "sy", "sz"), {
        (0, 1): {2: 1},
        (1, 2): {0: 1},
        (0, 2): {1: -1},     # [sx, sz] = -sy
    })


BUILTIN_LIE_ALGEBRAS = {"sl2": builtin_sl2, "so3": builtin_so3}


def casimir_element(algebra, order):
    """The quadratic Casimir word sum of a built-in algebra."""
    if algebra.name == "sl2":
        z = NCElement.zero(order)
        one = LambdaSeries.constant(1, order)
        z = z.add_word((0, 1), one)
        z = z.add_word((2, 2), one * Fraction(1, 2))
        z = z.add_word((1, 0), one)
        return z
    if algebra.name == "so3":
        z = NCElement.zero(order)
        one = LambdaSeries.constant(1, order)
        for i in range(3):
            z = z.add_word((i, i), one)
        return z
    raise InputError("no built-in Casimir for algebra %r" % algebra.name)


class NCElement:
    """Word sum over Lie algebra generators with lambda-series coefficients."""

    __slots__ = ("order", "words", "max_degree")

    def __init__(self, order, words=None, max_degree=DEGREE_BOUND):
        self.order = order
        self.max_degree = max_degree
        self.words = {}
        if words:
            for w, series in words.items():
                self._set(w, series)

    def _set(self, word, series):
        if len(word) > self.max_degree:
            raise InputError("word length %d exceeds the degree bound %d"
                             % (len(word), self.max_degree))
        if not series.is_zero():
            self.words[tuple(word)] = series

    @classmethod
    def zero(cls, order, max_degree=DEGREE_BOUND):
        return cls(order, None, max_degree)

    @classmethod
    def generator(cls, i, order, max_degree=DEGREE_BOUND):
        return cls(order, {(i,): LambdaSeries.constant(1, order)}, max_degree)

    def add_word(self, word, series):
        out = self.copy()
        held = out.words.get(tuple(word))
        total = series if held is None else held + series
        if total.is_zero():
            out.words.pop(tuple(word), None)
        else:
            out.words[tuple(word)] = total
        return out

    def copy(self):
        out = NCElement(self.order, None, self.max_degree)
        out.words = dict(self.words)
        return out

    def __add__(self, other):
        out = self.copy()
        for w, series in other.words.items():
            out = out.add_word(w, series)
        return out

    def __neg__(self):
        out = NCElement(self.order, None, self.max_degree)
        out.words = {w: -s for w, s in self.words.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Concatenation product in the enveloping algebra."""
        if isinstance(other, (int, Fraction, Scalar, LambdaSeries)):
            out = NCElement(self.order, None, self.max_degree)
            out.words = {w: s * other for w, s in self.words.items()}
            return out
        out = NCElement(self.order, None, self.max_degree)
        for w1, s1 in self.words.items():
            for w2, s2 in other.words.items():
                if len(w1) + len(w2) > self.max_degree:
                    raise InputError(
                        "product exceeds the degree bound %d" % self.max_degree)
                out = out.add_word(w1 + w2, s1 * s2)
        return out

    def is_zero(self):
        return not self.words

    def __eq__(self, other):
        if not isinstance(other, NCElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.words:
            return "0"
        parts = []
        for w in sorted(self.words):
            parts.append("(%s)*%s" % (self.words[w], ".".join(map(str, w))
                                      if w else "1"))
        return " + ".join(parts)


def pbw_straighten(element, algebra, strategy="leftmost"):
    """Rewrite every word into nondecreasing index order.

    ``strategy`` picks which descent is rewritten first; the result is
    independent of the choice (confluence via Jacobi), which the tests
    exercise with randomized strategies.
    """
    order = element.order
    out = NCElement.zero(order, element.max_degree)
    stack = [(w, s) for w, s in element.words.items()]
    while stack:
        word, series = stack.pop()
        descents = [p for p in range(len(word) - 1) if word[p] > word[p + 1]]
        if not descents:
            out = out.add_word(word, series)
            continue
        if strategy == "leftmost":
            p = descents[0]
        elif strategy == "rightmost":
            p = descents[-1]
        else:
            p = strategy(descents, word)
        i, j = word[p], word[p + 1]
        swapped = word[:p] + (j, i) + word[p + 2:]
        stack.append((swapped, series))
        shifted = series.shift(1)
        if not shifted.is_zero():
            for k, coeff in algebra.bracket(i, j).items():
                stack.append((word[:p] + (k,) + word[p + 2:],
                              shifted * coeff))
    return out


class SymPoly:
    """Commutative polynomial on the dual with lambda-series coefficients."""

    __slots__ = ("order", "dim", "monomials", "max_degree")

    def __init__(self, order, dim, monomials=None, max_degree=DEGREE_BOUND):
        self.order = order
        self.dim = dim
        self.max_degree = max_degree
        self.monomials = {}
        if monomials:
            for m, series in monomials.items():
                self._set(m, series)

    def _set(self, mono, series):
        if sum(mono) > self.max_degree:
            raise InputError("degree %d exceeds the bound %d"
                             % (sum(mono), self.max_degree))
        if not series.is_zero():
            self.monomials[tuple(mono)] = series

    @classmethod
    def zero(cls, order, dim, max_degree=DEGREE_BOUND):
        return cls(order, dim, None, max_degree)

    @classmethod
    def variable(cls, i, order, dim, max_degree=DEGREE_BOUND):
        mono = tuple(1 if t == i else 0 for t in range(dim))
        return cls(order, dim, {mono: LambdaSeries.constant(1, order)},
                   max_degree)

    def add_monomial(self, mono, series):
        out = self.copy()
        held = out.monomials.get(tuple(mono))
        total = series if held is None else held + series
        if total.is_zero():
            out.monomials.pop(tuple(mono), None)
        else:
            out.monomials[tuple(mono)] = total
        return out

    def copy(self):
        out = SymPoly(self.order, self.dim, None, self.max_degree)
        out.monomials = dict(self.monomials)
        return out

    def __add__(self, other):
        out = self.copy()
        for m, series in other.monomials.items():
            out = out.add_monomial(m, series)
        return out

    def __neg__(self):
        out = SymPoly(self.order, self.dim, None, self.max_degree)
        out.monomials = {m: -s for m, s in self.monomials.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar, LambdaSeries)):
            out = SymPoly(self.order, self.dim, None, self.max_degree)
            out.monomials = {m: s * other for m, s in self.monomials.items()}
            return out
        out = SymPoly.zero(self.order, self.dim, self.max_degree)
        for m1, s1 in self.monomials.items():
            for m2, s2 in other.monomials.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out = out.add_monomial(mono, s1 * s2)
        return out

    def is_zero(self):
        return not self.monomials

    def __eq__(self, other):
        if not isinstance(other, SymPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def poisson(self, other, algebra):
        """Linear Poisson bracket C^k_ij d_i f d_j g x_k."""
        out = SymPoly.zero(self.order, self.dim, self.max_degree)
        for i in range(self.dim):
            for j in range(self.dim):
                comps = algebra.bracket(i, j)
                if not comps:
                    continue
                di = self._partial(i)
                dj = other._partial(j)
                if di.is_zero() or dj.is_zero():
                    continue
                prod = di * dj
                for k, coeff in comps.items():
                    xk = SymPoly.variable(k, self.order, self.dim,
                                          self.max_degree)
                    out = out + (prod * xk) * coeff
        return out

    def _partial(self, i):
        out = SymPoly.zero(self.order, self.dim, self.max_degree)
        for m, series in self.monomials.items():
            if not m[i]:
                continue
            down = tuple(a - (1 if t == i else 0) for t, a in enumerate(m))
            out = out.add_monomial(down, series * m[i])
        return out

    def __str__(self):
        if not self.monomials:
            return "0"
        parts = []
        for m in sorted(self.monomials):
            parts.append("(%s)*x^%s" % (self.monomials[m],
                                        "".join(map(str, m))))
        return " + ".join(parts)


def _mono_to_word(mono):
    word = []
    for i, power in enumerate(mono):
        word.extend([i] * power)
    return tuple(word)


def _word_to_mono(word, dim):
    mono = [0] * dim
    for i in word:
        mono[i] += 1
    return tuple(mono)


def symmetrize(poly):
    """Average of the word permutations of each monomial."""
    out = NCElement.zero(poly.order, poly.max_degree)
    for mono, series in poly.monomials.items():
        word = _mono_to_word(mono)
        perms = sorted(set(permutations(word)))
        weight = Fraction(1, len(perms)) if perms else Fraction(1)
        if not word:
            out = out.add_word((), series)
            continue
        for perm in perms:
            out = out.add_word(perm, series * weight)
    return out


def desymmetrize(element, algebra):
    """Inverse of symmetrization on straightened input, degree by degree."""
    for word in element.words:
        if any(word[p] > word[p + 1] for p in range(len(word) - 1)):
            raise InputError("desymmetrize expects straightened input")
    remainder = element
    out = SymPoly.zero(element.order, algebra.dim, element.max_degree)
    while not remainder.is_zero():
        top = max(len(w) for w in remainder.words)
        layer = SymPoly.zero(element.order, algebra.dim, element.max_degree)
        for w, series in remainder.words.items():
            if len(w) == top:
                layer = layer.add_monomial(_word_to_mono(w, algebra.dim),
                                           series)
        out = out + layer
        remainder = remainder - pbw_straighten(symmetrize(layer), algebra)
        if not remainder.is_zero():
            if max(len(w) for w in remainder.words) >= top:
                raise MathCheckError(
                    "desymmetrization failed to reduce the degree")
    return out


def gutt_mul(f, g, algebra):
    """The induced star product on polynomials over the dual."""
    product = symmetrize(f) * symmetrize(g)
    return desymmetrize(pbw_straighten(product, algebra), algebra)


def check_central(element, algebra):
    """True iff the element commutes with every generator mod truncation."""
    straightened = pbw_straighten(element, algebra)
    for i in range(algebra.dim):
        gen = NCElement.generator(i, element.order, element.max_degree)
        comm = pbw_straighten(straightened * gen - gen * straightened,
                              algebra)
        if not comm.is_zero():
            return False
    return True
