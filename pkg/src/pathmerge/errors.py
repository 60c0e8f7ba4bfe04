"""Exception types shared across the package."""


class PathMergeError(Exception):
    """Base class for all package errors."""


class UnknownVertex(PathMergeError):
    pass


class CyclicInput(PathMergeError):
    """Graph contains a directed cycle where an acyclic one is required."""


class VertexNotOnPath(PathMergeError):
    pass


class OrderViolation(PathMergeError):
    """Requested subpath endpoints appear in the wrong order."""


class EndpointMismatch(PathMergeError):
    pass


class EdgeRepetition(PathMergeError):
    pass


class NoPath(PathMergeError):
    pass


class NotAMerge(PathMergeError):
    pass


class DegreeViolation(PathMergeError):
    """Auxiliary graph violates the expected degree structure."""


class PreconditionUnverified(PathMergeError):
    """Witness regularization hit a self-reachable element."""


class StalePlan(PathMergeError):
    pass


class ValidationFailure(PathMergeError):
    pass


class SourceMismatch(PathMergeError):
    pass


class InvalidCut(PathMergeError):
    pass


class BudgetExceeded(PathMergeError):
    pass


class PartUnavailable(PathMergeError):
    pass


class SearchExhausted(PathMergeError):
    pass


class ParseError(PathMergeError):
    pass


class UnknownGenerator(PathMergeError):
    pass
