"""Semantic exception hierarchy shared by all smoothinfo modules."""

from __future__ import annotations


class SmoothinfoError(Exception):
    """Base class for every error raised by this package."""


class InputError(SmoothinfoError, ValueError):
    """Inputs violate an operation's contract (domain, shape, range)."""


class SupportError(InputError):
    """A support-containment precondition fails (P puts mass where Q has none)."""


class ResourceError(SmoothinfoError):
    """A dense materialization would exceed the configured cell cap."""


class BudgetError(SmoothinfoError):
    """An epsilon budget violates the achievability constraints.

    ``violations`` lists every failed constraint in human-readable form.
    """

    def __init__(self, violations: tuple[str, ...] | list[str]):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations))
