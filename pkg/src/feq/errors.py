"""Exception types shared across the package."""


class FeqError(Exception):
    """Base class for every error raised by feq."""


class ParseError(FeqError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        super().__init__(where + message)


class UnknownIdentifier(ParseError):
    pass


class UnboundVariable(ParseError):
    pass


class UnsupportedFragment(FeqError):
    """The input lies outside the equational fragment the internal pipeline handles."""

    def __init__(self, reason, line=None, column=None):
        self.reason = reason
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + reason)


class EvaluationIncomplete(FeqError):
    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(f"no value for symbol {symbol!r}")


class NotInlined(FeqError):
    """An application of the unknown function survived where a polynomial was required."""


class NoSolvedForm(FeqError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class NoRationalRoot(NoSolvedForm):
    pass


class NotUnitEquational(FeqError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class CorpusError(FeqError):
    pass
