class MonteeError(Exception):
    """Base class for all toolkit errors."""


class LexiconError(MonteeError):
    pass


class GraphError(MonteeError):
    pass


class CorpusFormatError(MonteeError):
    pass


class EvalError(MonteeError):
    pass
