"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PlanarTannerError(Exception):
    """Base class for every error raised by the package."""


class InvalidArgument(PlanarTannerError, ValueError):
    """Malformed input: unknown ids, loops, inconsistent rotations."""


class ContractViolation(PlanarTannerError):
    """A documented precondition of an operation does not hold."""


class TrivialCodeError(PlanarTannerError):
    """The code has dimension zero, so minimum distance is undefined."""


class UnsupportedSize(PlanarTannerError):
    """Check graphs need at least three check nodes."""


class UnsupportedRate(PlanarTannerError):
    """The design rate lies outside the range where a bound is available."""


class GirthError(PlanarTannerError):
    """The dual girth is too small for the requested complete 3-graph size."""

    def __init__(self, girth: float, required: int):
        super().__init__(f"dual girth {girth} < required {required}")
        self.girth = girth
        self.required = required


class InvalidStep(PlanarTannerError):
    """A DS/DE transformation step cannot be applied to the given graph."""


class NonPlanarError(PlanarTannerError):
    """Raised with a Kuratowski certificate when a graph is not planar."""

    def __init__(self, kind: str, edges: list):
        super().__init__(f"graph is not planar ({kind} subdivision found)")
        self.kind = kind
        self.edges = edges


class InvalidSpec(InvalidArgument):
    """An ensemble specification cannot be realised (e.g. too many degree-3 bits)."""
