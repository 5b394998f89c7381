"""Exception hierarchy.

Numerical gray-zone failures derive from :class:`NumericalAmbiguity` so callers
can tell "the floating point rank decision was not clean" apart from "the input
is not what it claims to be".
"""


class SpectraLabError(Exception):
    pass


class NumericalAmbiguity(SpectraLabError):
    pass


class ToleranceAmbiguity(NumericalAmbiguity):
    pass


class DegenerateSpectrum(NumericalAmbiguity):
    pass


class ShapeMismatch(SpectraLabError, ValueError):
    pass


class InvalidInput(SpectraLabError, ValueError):
    """Structural violation of a domain invariant."""


class NotAnAlgebra(InvalidInput):
    pass


class BadUnit(NotAnAlgebra):
    pass


class NonIntegralBlock(InvalidInput):
    pass


class NotInsideAlgebra(InvalidInput):
    pass


class NotAProjection(InvalidInput):
    pass


class NotUnitary(InvalidInput):
    pass


class NotPreserving(InvalidInput):
    pass


class GroupLawViolation(InvalidInput):
    pass


class NotInvariantProjection(InvalidInput):
    pass


class UnknownGroup(InvalidInput, KeyError):
    pass


class EnumerationBudgetExceeded(SpectraLabError):
    pass


class InternalInconsistency(SpectraLabError):
    """Two independent routes to the same answer disagreed."""


class DocumentError(SpectraLabError, ValueError):
    """A system document failed to parse or validate; ``path`` locates the field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)
