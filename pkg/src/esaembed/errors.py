"""Exception hierarchy shared by every module."""


class EsaEmbedError(Exception):
    """Base class for all package errors."""


class DomainError(EsaEmbedError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(EsaEmbedError, ValueError):
    """A documented precondition of a check or reduction is violated."""


class ResourceError(EsaEmbedError):
    """The requested instance exceeds the configured memory budget."""

    def __init__(self, message, M=None):
        super().__init__(message)
        self.M = M


class ReductionError(EsaEmbedError):
    """The normal-form reduction produced a family violating one of its conclusions.

    ``tag`` names the violated condition: ``suppz``, ``zdiff``, ``lfarz`` or ``alphaN``.
    """

    def __init__(self, tag, message):
        super().__init__(f"[{tag}] {message}")
        self.tag = tag
