"""Exception types shared across the package."""


class KeypolyError(Exception):
    """Base class for all library errors."""


class UndefinedDifference(KeypolyError):
    """Subtraction or negation that would leave the value group (inf - inf)."""


class UndefinedProduct(KeypolyError):
    """Integer multiple of infinity with a non-positive scalar."""


class NoEventualMinimizer(KeypolyError):
    """The horizon is too short to certify a strict eventual minimizer."""


class DivisionByZero(KeypolyError):
    """Division by the zero element of a field or polynomial ring."""


class FieldMismatch(KeypolyError):
    """Operands live over different coefficient fields."""


class InsufficientPrecision(KeypolyError):
    """A truncated series does not determine the requested quantity."""


class InvalidChain(KeypolyError):
    """An augmentation step does not increase the value of its key."""


class DegreeBound(KeypolyError):
    """A coefficient or evaluation point violates a declared degree bound."""


class InvalidScenario(KeypolyError):
    """A scenario fails one of its structural invariants."""


class HorizonExhausted(KeypolyError):
    """No chain index within the usable horizon satisfies the request."""


class CertificateFailed(KeypolyError):
    """A value certificate for a constructed polynomial does not hold."""


class PrecisionExhausted(KeypolyError):
    """One or more check cases could not be certified at this precision."""


class PreconditionFailed(KeypolyError):
    """An operation was called outside its stated contract."""


class ParseError(KeypolyError):
    """Malformed polynomial literal, value literal, or scenario file."""
