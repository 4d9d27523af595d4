class ZequaError(Exception):
    """Base class for all errors raised by zequa."""


class DimensionError(ZequaError, ValueError):
    pass


class SizeError(ZequaError, ValueError):
    """A construction would exceed the configured dimension cap."""


class NumericError(ZequaError, ValueError):
    pass


class ChannelError(ZequaError, ValueError):
    """Kraus operators do not form a trace-preserving channel."""


class PreconditionError(ZequaError, ValueError):
    pass


class InvalidCodewordError(ZequaError, ValueError):
    pass


class ParseError(ZequaError, ValueError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class CorruptCorpusError(ZequaError):
    def __init__(self, path, check):
        super().__init__(f"{path}: failed check '{check}'")
        self.path = path
        self.check = check
