"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed function text. ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ParseError):
    def __init__(self, name, offset):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class DomainError(ValueError):
    """Evaluation outside the set where an expression is defined."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class SpectrumError(ValidationError):
    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
