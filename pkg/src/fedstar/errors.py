"""Exceptions shared across the engine.

Everything in this package is exact algebra, so errors are structural:
mismatched truncations, violated preconditions, or a mathematical check
that came out false.  The CLI maps :class:`InputError` to exit code 2 and
:class:`MathCheckError` (and subclasses) to exit code 3.
"""


class FedstarError(Exception):
    """Base class for engine errors."""


class InputError(FedstarError):
    """Malformed or inconsistent user input (bad file, bad expression)."""


class ParseError(InputError):
    def __init__(self, text, pos, message):
        self.text = text
        self.pos = pos
        super().__init__("at position %d: %s (in %r)" % (pos, message, text))


class TruncationMismatch(FedstarError):
    """Operands carry different truncation orders."""


class DimensionMismatch(FedstarError):
    """Operands live on charts of different dimension."""


class MathCheckError(FedstarError):
    """A mathematical consistency check failed."""


class NonClosedFormError(MathCheckError):
    """A two-form (or correction covector) that must be closed is not."""


class NonHamiltonianError(MathCheckError):
    """Matrix of a claimed hamiltonian vector field is not in sp(2n)."""


class NonCentralError(MathCheckError):
    """Element claimed central fails to commute with a generator."""


class NonConstantInvariantError(MathCheckError):
    """A Casimir evaluation produced a non-constant jet.

    Carries the offending jet so convention bugs can be diagnosed.
    """

    def __init__(self, message, jet=None):
        super().__init__(message)
        self.jet = jet


class NoQuantumMomentMapError(MathCheckError):
    """The constant-fixing linear system is inconsistent at some order."""


class NonUniqueMomentMapError(MathCheckError):
    """The constant-fixing linear system is singular (H^1(g) != 0)."""
