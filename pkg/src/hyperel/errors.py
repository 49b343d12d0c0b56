"""Exception types shared across the package.

Every error raised on a contract violation derives from HyperelError so callers
can catch the package's failures without masking genuine bugs (TypeError etc.).
"""


class HyperelError(Exception):
    """Base class for all package-specific errors."""


class DegenerateParameter(HyperelError):
    """A parameter value makes the requested quantity undefined.

    Examples: pochhammer(a, n) with n < 0 when one of a-1, ..., a+n is zero;
    a contiguity step whose scalar denominator vanishes.
    """


class DegenerateAlpha(DegenerateParameter):
    """Jacobi polynomial with alpha in {-1, ..., -n}: the prefactor collapses."""


class NonTerminating(HyperelError):
    """Gauss series requested with neither upper parameter a nonpositive integer."""


class DegenerateC(HyperelError):
    """Gauss series whose lower parameter hits 0, -1, ... before termination."""


class NonTerminatingFactor(HyperelError):
    """A product-formula factor does not terminate at the chosen specialization."""


class NonIntegerResult(HyperelError):
    """An accumulation that must produce an integer did not; implementation bug."""


class IntegralityViolation(HyperelError):
    """A quantity proved integral by the underlying identity came out fractional."""


class ZeroPolynomial(HyperelError):
    """Operation undefined for the zero polynomial (valuation stripping)."""


class PoleAtPoint(HyperelError):
    """Rational function evaluated where its denominator vanishes."""


class TableTooSmall(HyperelError):
    """Prime table queried beyond its sieve limit."""


class OutOfDomain(HyperelError):
    """Argument outside the certified domain (certified bounds need x >= 599)."""


class CheckpointError(HyperelError):
    """Checkpoint resume refused: stored run configuration does not match."""
