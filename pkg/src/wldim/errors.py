"""Exception hierarchy.  The CLI maps ``BudgetExceeded`` to exit code 2 and
every other ``WldimError`` to exit code 1."""


class WldimError(Exception):
    pass


class BudgetExceeded(WldimError):
    pass


class ParseError(WldimError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotAHomomorphism(WldimError):
    pass


class OutOfScope(WldimError):
    pass


class NoExtension(WldimError):
    pass
