"""Exception types shared across the package."""


class EquitransError(Exception):
    pass


class DimensionError(EquitransError, ValueError):
    """A profile, game or transformation does not match the expected shape."""


class BudgetExceeded(EquitransError, RuntimeError):
    """An enumeration would exceed its configured budget."""


class ParseError(EquitransError, ValueError):
    """Malformed JSON input."""


class InexactEvaluation(EquitransError, ArithmeticError):
    """A map containing ``exp`` was asked for an exact rational value."""
