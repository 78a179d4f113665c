"""
Exception hierarchy for the quantum matrix ball toolkit.
Every error carries the exit code the command line maps it to.
"""


class QBallError(Exception):
    """Base class for all errors raised by qball"""

    exit_code = 2


class ConfigError(QBallError):
    """Invalid run configuration (flags, config file or defaults)"""

    exit_code = 1


class ShapeError(QBallError):
    """Matrix shape or index out of range"""

    exit_code = 1


class ScalarError(QBallError):
    """Division by zero, vanishing denominator or unsupported coercion"""


class SerializationError(QBallError):
    """Malformed scalar string or JSON document"""

    exit_code = 1


class RewriteError(QBallError):
    """The rewriting engine violated its termination measure"""


class FockError(QBallError):
    """Invalid use of the Fock representation"""


class IntegralError(FockError):
    """Weighted integral requested outside its domain (for instance λ ≤ m+n-1)"""

    exit_code = 1


class StabilizationError(QBallError):
    """A truncated trace did not stabilize within the degree cap"""

    exit_code = 2


class VerificationError(QBallError):
    """At least one check of a verification suite failed"""

    exit_code = 2
