"""Comparison tolerance policy.

Every geometric predicate in the package funnels floating point
comparisons through a `Tol` instance instead of raw equality.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tol:
    """Absolute/relative tolerance pair used by all predicates."""

    abs: float = 1e-12
    rel: float = 1e-9

    def slack(self, scale: float = 1.0) -> float:
        """Allowed wiggle room at a given magnitude."""
        s = scale if scale >= 0 else -scale
        return self.abs + self.rel * s

    def eq(self, a: float, b: float, scale: float | None = None) -> bool:
        if scale is None:
            scale = max(abs(a), abs(b), 1.0)
        return abs(a - b) <= self.slack(scale)

    def le(self, a: float, b: float, scale: float | None = None) -> bool:
        if scale is None:
            scale = max(abs(a), abs(b), 1.0)
        return a <= b + self.slack(scale)

    def lt(self, a: float, b: float, scale: float | None = None) -> bool:
        if scale is None:
            scale = max(abs(a), abs(b), 1.0)
        return a < b - self.slack(scale)

    def ge(self, a: float, b: float, scale: float | None = None) -> bool:
        return self.le(b, a, scale)

    def gt(self, a: float, b: float, scale: float | None = None) -> bool:
        return self.lt(b, a, scale)

    def is_zero(self, a: float, scale: float = 1.0) -> bool:
        return abs(a) <= self.slack(scale)


DEFAULT_TOL = Tol()
