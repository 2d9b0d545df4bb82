"""Exception hierarchy. Everything derives from :class:`BHRankError` (a ValueError)."""


class BHRankError(ValueError):
    pass


# graph construction / validation
class DuplicateArc(BHRankError):
    pass


class WeightOutOfBounds(BHRankError):
    pass


class InvalidBounds(BHRankError):
    pass


class NodeIndexOutOfRange(BHRankError):
    pass


class SelfLoop(BHRankError):
    pass


class MissingBounds(BHRankError):
    pass


# file ingestion
class ParseError(BHRankError):
    def __init__(self, line, reason, path=None):
        self.line = line
        self.reason = reason
        self.path = path
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}: {reason}")


class EmptyGraph(BHRankError):
    pass


# ranking
class ZeroOutStrength(BHRankError):
    def __init__(self, node, label=None):
        self.node = node
        name = f"{node} ({label})" if label is not None and str(label) != str(node) else f"{node}"
        super().__init__(f"node {name} has outgoing arcs but their weights sum to 0")


class DegenerateScale(BHRankError):
    pass


class TooLarge(BHRankError):
    pass


class LengthMismatch(BHRankError):
    pass


class SpecUnreachable(BHRankError):
    pass


class NotConvergedWarning(RuntimeWarning):
    """Power iteration hit ``max_iters``; the best iterate is returned flagged."""
