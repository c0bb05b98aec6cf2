"""Exception hierarchy shared by the parsers, the engine and the synthesizer."""


class ReactSynthError(Exception):
    pass


class ParseError(ReactSynthError):
    """Malformed program or automaton text.

    ``line`` and ``column`` are 1-based; ``expected`` lists the tokens that
    would have been accepted at that position (may be empty).
    """

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"{line}:{column}: " if line is not None else ""
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{hint}")


class UnknownVariable(ParseError):
    def __init__(self, name, line=None, column=None):
        self.name = name
        super().__init__(f"unknown variable {name!r}", line, column)


class UndeclaredState(ParseError):
    def __init__(self, name, line=None):
        self.name = name
        super().__init__(f"undeclared state {name!r}", line, None)


class MultipleInitial(ParseError):
    pass


class UnknownState(ReactSynthError, KeyError):
    pass


class ArityMismatch(ReactSynthError, ValueError):
    pass


class ResourceLimit(ReactSynthError):
    """Saturation exceeded its configured state-count cap."""
