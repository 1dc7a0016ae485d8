"""Exception types shared across the package."""


class LevyPassageError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LevyPassageError):
    """An evaluation point lies outside the finite domain of the Laplace exponent."""


class NoRootError(LevyPassageError):
    """A defining equation has no root in the admissible interval."""


class RangeError(LevyPassageError):
    """A target value lies outside the range attainable by the underlying function."""


class UnsupportedModelError(LevyPassageError):
    """The requested closed form does not exist for this model class."""


class ValidationError(LevyPassageError):
    """A model violates one of its structural invariants."""


class ParseError(LevyPassageError):
    """A configuration file is syntactically or structurally invalid."""
