"""Exception types shared across the package."""


class KeypolyError(Exception):
    """Base class for all domain errors raised by this package."""


class NonUnitValue(KeypolyError):
    """Residue requested for an element whose valuation is not zero."""


class UnsupportedResidueField(KeypolyError):
    """Factorization request outside the supported residue-field range."""


class NonMonicDivisor(KeypolyError):
    """Euclidean division attempted with a non-monic divisor."""


class ZeroPolynomial(KeypolyError):
    """Operation that needs a nonzero polynomial received zero."""


class NotIrreducible(KeypolyError):
    """A residual polynomial failed its irreducibility certificate."""


class NoVanishingFactor(KeypolyError):
    """No residual factor passed the lift test; the oracle is not a valuation."""


class NonPositiveValueOfX(KeypolyError):
    """Run started with an oracle for which the value of x is not positive."""


class PrecisionExhausted(KeypolyError):
    """A truncated-series backend cannot certify the requested value.

    Carries the frontier that was reached when certification failed.
    """

    def __init__(self, message, frontier=None):
        super().__init__(message)
        self.frontier = frontier


class BudgetExhausted(KeypolyError):
    """A step or search budget ran out before the operation finished."""


class NotStabilized(KeypolyError):
    """A trace window did not exhibit the stabilization the operation needs."""


class GapConditionUnmet(KeypolyError):
    """No level in the observed window satisfies the required value gap."""


class NoDefectiveProbe(KeypolyError):
    """Limit-candidate construction found no persistently defective probe."""


class ParseError(KeypolyError):
    """Polynomial expression rejected by the parser."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class UnknownSymbol(ParseError):
    """Symbol not available over the configured base field."""
