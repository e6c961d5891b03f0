"""Exception types shared across the toolkit.

Each error carries a stable ``code`` string so CLI reports and tests can
match on machine-readable identifiers rather than messages.
"""


class NCXError(Exception):
    code = "ERROR"


class EmptySetError(NCXError):
    code = "EMPTY_SET"


class NotNearlyConvexError(NCXError):
    code = "NOT_NEARLY_CONVEX"


class CQViolationError(NCXError):
    """A constraint qualification (nonempty intersection of relative
    interiors, or the polyhedral refinement of it) failed."""

    code = "CQ_VIOLATED"


class NoClosedFormError(NCXError):
    code = "NO_CLOSED_FORM"


class IrrationalBoundaryError(NCXError):
    code = "IRRATIONAL_BOUNDARY"


class NotInteriorError(NCXError):
    code = "NOT_INTERIOR"


class BadIntervalError(NCXError):
    code = "BAD_INTERVAL"


class NotFullDimError(NCXError):
    code = "NOT_FULL_DIM"


class Not2DError(NCXError):
    code = "NOT_2D"


class InfiniteAtXError(NCXError):
    code = "INFINITE_AT_X"


class NotInDomainError(NCXError):
    code = "NOT_IN_DOM"


class EmptySampleError(NCXError):
    code = "EMPTY_SAMPLE"
