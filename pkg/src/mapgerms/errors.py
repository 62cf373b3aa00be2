class Refusal(Exception):
    """An operation's mathematical precondition does not hold."""


class ContextMismatch(ValueError):
    """Objects from different jet rings / ambients were combined."""


class DSLError(Exception):
    """Parse or semantic error in a session script."""

    def __init__(self, msg, line=None, col=None):
        self.msg = msg
        self.line = line
        self.col = col
        where = "" if line is None else "line %d, col %d: " % (line, col or 0)
        super().__init__(where + msg)
