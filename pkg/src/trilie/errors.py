"""Exception types shared by every module."""


class InputError(ValueError):
    """Malformed or inconsistent user data (wrong shapes, failed preconditions)."""


class ComplexError(ArithmeticError):
    """An internal consistency failure, e.g. coboundaries not contained in cocycles."""
