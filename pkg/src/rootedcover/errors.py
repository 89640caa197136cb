"""Exception types raised by the library."""


class CoverError(Exception):
    """Base class for every error raised by rootedcover."""


class DisconnectedGraph(CoverError):
    """A raw site graph has at least one unreachable vertex pair."""

    def __init__(self, u, v):
        super().__init__(f"no path between vertex {u} and vertex {v}")
        self.pair = (u, v)


class ParseError(CoverError):
    """Malformed instance input.

    ``locus`` names the offending field (JSON) or line number (matrix text).
    """

    def __init__(self, message, locus=None):
        text = message if locus is None else f"{locus}: {message}"
        super().__init__(text)
        self.locus = locus


class ValidationError(CoverError):
    """An instance failed validation; ``report`` holds every violation."""

    def __init__(self, report):
        lines = "; ".join(str(v) for v in report)
        super().__init__(f"invalid instance: {lines}")
        self.report = list(report)


class PreconditionViolation(CoverError):
    pass


class NoFeasibleSolution(CoverError):
    pass


class InstanceTooLarge(CoverError):
    pass
