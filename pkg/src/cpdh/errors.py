"""Exception hierarchy shared by every module."""


class CPDHError(Exception):
    """Base class for all library errors."""


class ParameterError(CPDHError, ValueError):
    """Invalid or mismatched parameters (modulus, characteristic, coefficients)."""


class DomainError(CPDHError, ValueError):
    """Input outside the domain of an operation (0^0, zero vector, ...)."""


class NotInvertibleError(CPDHError, ZeroDivisionError):
    pass


class ScaleError(CPDHError):
    """Refusal to run an operation whose size exceeds the desk-scale guard."""


class UnfactoredError(CPDHError):
    """A group order whose factorization is required but unavailable."""


class NotFoundError(CPDHError):
    """Exhaustive search ended without a result inside its cap."""


class NoSolutionError(CPDHError):
    """Target does not lie in the subgroup generated by the base."""


class InconsistencyError(CPDHError):
    """Two computations that must agree did not."""


class RetryExhaustedError(CPDHError):
    pass


class ProtocolError(CPDHError):
    """Key-agreement session failure. ``code`` distinguishes the cause."""

    code = "protocol"


class MalformedFrameError(ProtocolError):
    code = "malformed-frame"


class BadMagicError(ProtocolError):
    code = "bad-magic"


class ValidationError(ProtocolError):
    code = "validation"


class ConnectionLostError(ProtocolError):
    code = "connection-lost"


class DigestMismatchError(ProtocolError):
    code = "digest-mismatch"
