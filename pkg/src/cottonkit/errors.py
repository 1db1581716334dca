"""Exception hierarchy shared by all cottonkit modules.

Every error carries enough context to be rendered by the CLI/service layer
without re-deriving anything.  The service maps `InputError` subclasses to
HTTP 400 (CLI exit 2) and `PreconditionError` subclasses to HTTP 422 with
kind="precondition" (CLI exit 3).
"""

from __future__ import annotations


class CottonkitError(Exception):
    """Base class for all cottonkit errors."""


class InputError(CottonkitError):
    """Malformed input: bad expression, bad spec file, bad point syntax."""


class PreconditionError(CottonkitError):
    """Well-formed input that violates a documented precondition."""


class ParseError(InputError):
    """Expression syntax error, annotated with a 0-based source position."""

    def __init__(self, message: str, source: str, position: int):
        self.message = message
        self.source = source
        self.position = position
        super().__init__(f"{message} (at position {position})")

    def annotate(self) -> str:
        """Two-line caret rendering of the offending position."""
        return f"{self.source}\n{' ' * self.position}^ {self.message}"


class UnknownVariableError(ParseError):
    def __init__(self, name: str, source: str, position: int):
        self.name = name
        super().__init__(f"unknown variable {name!r}", source, position)


class SpecFileError(InputError):
    """Malformed metric-spec or tensor-spec document."""


class ArityMismatchError(InputError):
    """Point has the wrong number of coordinate values."""


class DegenerateMetricError(PreconditionError):
    """Metric determinant vanishes at the evaluation point."""

    def __init__(self, point=None, message: str | None = None):
        self.point = tuple(point) if point is not None else None
        if message is None:
            at = f" at point {self.point}" if self.point is not None else ""
            message = f"metric is degenerate{at}"
        super().__init__(message)


class InsufficientJetOrderError(PreconditionError):
    """An operation would need more derivative orders than the jets carry."""


class JetMismatchError(InputError):
    """Jets with different variable counts, orders, or scalar modes combined."""


class JetDivisionError(CottonkitError):
    """Division by a jet whose constant term is zero."""


class NotCottonLikeError(PreconditionError):
    """Tensor violates one of the three Cotton symmetries."""

    def __init__(self, identity: str, indices=None, value=None):
        self.identity = identity
        self.indices = indices
        self.value = value
        where = f" at indices {indices}" if indices is not None else ""
        super().__init__(f"violates {identity}{where}" + (f" (value {value})" if value is not None else ""))


class NotNullError(PreconditionError):
    """A vector required to be null (self-inner-product zero) is not."""


class InconsistentKernelDimError(PreconditionError):
    """Kernel of a nonzero Cotton-like tensor came out 2-dimensional."""


class KernelContainsNonNullError(PreconditionError):
    """A nonzero Cotton-like tensor has a non-null kernel vector."""


class NotRankOneFormError(PreconditionError):
    """Ricci tensor is not a scalar multiple of the given rank-one form."""


class DecompositionError(CottonkitError):
    """Internal frame-component assertion failed during decomposition."""
