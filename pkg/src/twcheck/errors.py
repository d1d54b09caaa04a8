"""Exception types shared across the package."""


class TwcheckError(Exception):
    """Base class for all package-specific errors."""


class ParseError(TwcheckError, ValueError):
    """Syntax error in a regex, omega-term, or identity file.

    `position` is a 0-based character offset into the source text.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownLetterError(TwcheckError, ValueError):
    """A word or regex used a letter outside the declared alphabet."""


class ResourceLimitError(TwcheckError, RuntimeError):
    """A configured cap (states, order, table size) was exceeded."""


class BudgetExceededError(ResourceLimitError):
    """The exhaustive assignment space is larger than the configured budget."""


class NotAMonoidError(TwcheckError, ValueError):
    """A monoid-variety membership check was applied to a semigroup without
    an identity element; use the local surface or adjoin an identity first."""


class UnboundVariableError(TwcheckError, KeyError):
    """A witness assignment is missing a variable used by the identity."""
