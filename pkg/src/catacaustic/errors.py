"""Exception hierarchy.

Three families matter to callers: parse errors (CLI exit 2), degenerate
geometry (exit 3), and unstable/inconclusive numerics (exit 4). Everything
derives from CatacausticError so library users can catch one type.
"""


class CatacausticError(Exception):
    pass


class ParseError(CatacausticError):
    """Bad input text. `position` is a 0-based offset into the source string."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NonHomogeneousError(ParseError):
    """Mixed-degree input; `monomials` lists the offending exponent triples."""

    def __init__(self, message, monomials):
        super().__init__(message)
        self.monomials = monomials


class DegenerateError(CatacausticError):
    """A geometric precondition failed (singular point, zero ray, ...)."""


class ZeroPolynomialDegree(DegenerateError):
    """The degree of the zero polynomial was queried."""


class CommonComponentError(DegenerateError):
    """Two curves share a component; finite intersection does not exist."""


class PointCausticError(DegenerateError):
    """The envelope collapses to a single point (e.g. mirror is a line).

    Carries the point so callers can report it as a successful outcome.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class UnstableError(CatacausticError):
    """Numerics did not stabilize (retry budgets exhausted, ambiguous data)."""


class UnluckyCoordinatesError(UnstableError):
    pass


class ClusterAmbiguityError(UnstableError):
    pass


class InconclusiveError(UnstableError):
    pass
