"""Exception hierarchy shared by all gstrat modules."""

from __future__ import annotations


class GStratError(Exception):
    """Base class for every error raised by gstrat."""


class InvalidElementError(GStratError, ValueError):
    """A residue tuple is not an element of the ambient group."""


class AmbientMismatchError(GStratError, ValueError):
    """Two subgroups (or a subgroup and a group) live in different ambient groups."""


class NotASubgroupError(GStratError, ValueError):
    """A subgroup is not contained in the group it is required to lie in."""


class ConstructionError(GStratError, ValueError):
    """A space constructor received arguments it cannot build from."""


class InvalidSpaceError(GStratError, ValueError):
    """A space failed validation where a valid one was required."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ModelError(GStratError, ValueError):
    """Numeric model misuse: bad grammar term, point outside a chart, etc."""
