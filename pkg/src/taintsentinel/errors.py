"""Exception types shared across the analysis pipeline."""


class SentinelError(Exception):
    """Base class for all analysis errors."""


class LexError(SentinelError):
    def __init__(self, message, span):
        super().__init__(f"{message} at {span}")
        self.span = span


class ParseError(SentinelError):
    def __init__(self, message, span, expected=None):
        super().__init__(f"{message} at {span}")
        self.span = span
        self.expected = set(expected or ())


class UnsupportedFeature(SentinelError):
    def __init__(self, feature, span):
        super().__init__(f"unsupported Solidity feature '{feature}' at {span}")
        self.feature = feature
        self.span = span


class GraphError(SentinelError):
    pass


class SerializationError(SentinelError):
    pass


class SchemaError(SentinelError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MissingLabel(SentinelError):
    def __init__(self, contract_id):
        super().__init__(f"no ground-truth label for contract {contract_id!r}")
        self.contract_id = contract_id


class DegenerateLabels(SentinelError):
    pass


class EmptyPaths(SentinelError):
    pass


class InsufficientClass(SentinelError):
    pass
