"""Exception types shared across the toolkit."""

from __future__ import annotations


class TreeIdealsError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateSymbol(TreeIdealsError):
    """A symbol name was created twice in one table."""


class UnboundSymbol(TreeIdealsError):
    """Evaluation or lookup referenced a symbol with no assignment."""


class ForeignSymbol(TreeIdealsError):
    """A polynomial mentions symbols that do not belong to the expected ring."""


class UnknownVertex(TreeIdealsError):
    """A vertex id is not part of the tree."""


class NotSameStage(TreeIdealsError):
    """An operation requiring two same-stage vertices got an unrelated pair."""


class LengthMismatch(TreeIdealsError):
    """A probability vector has the wrong number of entries."""


class InvalidSimplexPoint(TreeIdealsError):
    """A point or parameter assignment violates the open-simplex constraints."""


class ZeroDenominator(TreeIdealsError):
    """A conditional probability could not be recovered because p_[v] = 0."""


class ParseError(TreeIdealsError):
    """A document or polynomial string could not be parsed.

    The message carries the location (line or field path) when known.
    """


class ValidationError(TreeIdealsError):
    """A tree definition violates the structural rules.

    Carries the full ValidationReport in the ``report`` attribute.
    """

    def __init__(self, report):
        self.report = report
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"invalid tree: {lines}")
