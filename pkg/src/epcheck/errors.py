"""Exception hierarchy shared by the parser, the engine and the checker."""


class EPCError(Exception):
    """Base class for every error raised by this package."""


class EPCSyntaxError(EPCError):
    def __init__(self, line, col, expected, found=None):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        msg = f"{line}:{col}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)


class ValidationError(EPCError):
    """A well-formed input that violates a model or formula constraint.

    ``kind`` is a short tag such as ``"MissingSystem"`` or ``"UnknownAgent"``.
    """

    def __init__(self, kind, detail="", line=None, col=None):
        self.kind = kind
        self.detail = detail
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{kind}" + (f": {detail}" if detail else ""))


class UnfoldLimitExceeded(EPCError):
    pass


class LimitExceeded(EPCError):
    def __init__(self, limit, frontier):
        self.limit = limit
        self.frontier = frontier
        super().__init__(f"exploration exceeded max_configs={limit} at {frontier}")


class StrategyLimitExceeded(EPCError):
    def __init__(self, limit, formula):
        self.limit = limit
        self.formula = formula
        super().__init__(f"more than {limit} strategies needed for {formula}")


class FormulaError(EPCError):
    pass
