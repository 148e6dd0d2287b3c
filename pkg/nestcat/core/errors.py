"""Exception hierarchy shared by every nestcat module."""


class NestcatError(Exception):
    """Base class for all library errors."""


class FieldDomainError(NestcatError, ValueError):
    """Inverse of zero or division by the zero polynomial."""


class UsageError(NestcatError, ValueError):
    """Arguments violate an operation's preconditions (lengths, degrees, ranges)."""


class UnsupportedParameterError(UsageError):
    """Parameters outside the supported regime (even n, m > 16, n not dividing q-1)."""


class CapacityError(NestcatError):
    """An exhaustive search would exceed the desk-scale enumeration bound."""


class ConstructionError(NestcatError, ValueError):
    """A code cannot be built from the given recipe."""


class NotACodewordError(NestcatError, ValueError):
    """A vector that must be a codeword is not one."""


class ConsistencyError(NestcatError, RuntimeError):
    """An internal algebraic invariant does not hold."""


class ConfigError(NestcatError, ValueError):
    """A code description or experiment config cannot be parsed or validated."""
