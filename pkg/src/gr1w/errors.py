"""Exception hierarchy shared by all modules."""


class Gr1Error(Exception):
    """Base class for every error raised by gr1w."""


class ParseError(Gr1Error):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UndeclaredVariable(ParseError):
    def __init__(self, name, line=None, column=None):
        self.name = name
        super().__init__(f"undeclared variable '{name}'", line, column)


class CapExceeded(Gr1Error):
    def __init__(self, nvars, cap):
        self.nvars = nvars
        self.cap = cap
        super().__init__(
            f"{nvars} variables exceed the explicit-state cap of {cap}")


class VarTableMismatch(Gr1Error):
    pass


class PreconditionError(Gr1Error, ValueError):
    pass


class ConvergenceError(Gr1Error, ArithmeticError):
    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(relative bracket width {residual:.3e})")
