"""Exceptions shared across the package."""


class ParseError(ValueError):
    """Input text rejected, with 1-based line/column and what was expected."""

    def __init__(self, message, line, col, expected=None):
        self.line = line
        self.col = col
        self.expected = expected
        tail = f" (expected {expected})" if expected else ""
        super().__init__(f"line {line}, col {col}: {message}{tail}")


class ClosureError(ValueError):
    """A pushforward left the declared function dictionary; names the residue."""

    def __init__(self, residue, detail):
        self.residue = residue
        super().__init__(f"immersion dictionary not closed: {detail} (missing {residue})")


class CapReached(RuntimeError):
    """A depth-capped iteration hit its cap before stabilizing."""

    def __init__(self, what, cap):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} did not stabilize within depth cap {cap}")
