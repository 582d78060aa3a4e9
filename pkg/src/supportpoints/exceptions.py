"""Exception types raised by the package."""


class InvalidInputError(ValueError):
    """Malformed point sets, mismatched dimensions or bad parameters."""


class SingularityError(ArithmeticError):
    """A closed-form map hit a zero distance."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NumericError(ArithmeticError):
    """A numerical routine produced a non-finite result."""


class ParseError(ValueError):
    """A sample file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateDimensionError(ValueError):
    """A dimension has zero sample variance."""

    def __init__(self, dimension):
        super().__init__(f"dimension {dimension} has zero variance")
        self.dimension = dimension
