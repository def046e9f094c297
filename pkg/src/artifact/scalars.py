"""Scalar fields used by the linear algebra kernel.

Two modes exist. ``Exact`` works over the rationals with no tolerance at all.
``Approx`` works over doubles and uses a single epsilon for every rank
decision. ``JetRing`` is the ring of first-order jets a + b*d with d*d = 0; it
is only a ring, so it supports products and inverses of unit matrices but no
subspace computations.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

EPS_ENV = "ARTIFACT_EPS"
DEFAULT_EPS = 1e-9


def parse_number(x) -> Fraction:
    """Turn ints, Fractions, decimal or "p/q" strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x.strip() if isinstance(x, str) else x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a number")


class Exact:
    name = "exact"
    eps = None
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, float):
            raise TypeError("floats are not allowed in exact mode")
        return parse_number(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def is_unit(self, x) -> bool:
        return x != 0

    def pivot_score(self, x):
        # any nonzero entry is a fine pivot; prefer the first one
        return 1 if x != 0 else 0

    def __eq__(self, other):
        return isinstance(other, Exact)

    def __hash__(self):
        return hash("exact")

    def __repr__(self):
        return "Exact()"


@dataclass(frozen=True)
class Approx:
    """Double precision with tolerance ``eps`` for rank decisions."""

    eps: float = DEFAULT_EPS
    name = "float"
    zero = 0.0
    one = 1.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("epsilon must be positive")

    def coerce(self, x):
        if isinstance(x, float):
            return x
        return float(parse_number(x))

    def is_zero(self, x) -> bool:
        return abs(x) <= self.eps

    def is_unit(self, x) -> bool:
        return abs(x) > self.eps

    def pivot_score(self, x):
        return abs(x)


def approx_from_env() -> Approx:
    """Float mode with epsilon taken from ``ARTIFACT_EPS`` when set."""
    raw = os.environ.get(EPS_ENV)
    return Approx(float(raw)) if raw else Approx()


EXACT = Exact()


def field_from_mode(mode: str = "exact", eps: float | None = None):
    if mode == "exact":
        return EXACT
    if mode == "float":
        return Approx(eps) if eps is not None else approx_from_env()
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class Jet:
    """First-order jet ``a + b*d`` with ``d*d = 0``."""

    a: Fraction
    b: Fraction = Fraction(0)

    @staticmethod
    def lift(x) -> "Jet":
        return x if isinstance(x, Jet) else Jet(Fraction(x), Fraction(0))

    def __add__(self, other):
        o = Jet.lift(other)
        return Jet(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-Jet.lift(other))

    def __rsub__(self, other):
        return Jet.lift(other) - self

    def __mul__(self, other):
        o = Jet.lift(other)
        return Jet(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> "Jet":
        if self.a == 0:
            raise ZeroDivisionError("jet with zero base part is not invertible")
        return Jet(1 / self.a, -self.b / (self.a * self.a))

    def __truediv__(self, other):
        return self * Jet.lift(other).inverse()

    def __rtruediv__(self, other):
        return Jet.lift(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = Jet.lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"Jet({self.a}, {self.b})"


class JetRing:
    name = "jet"
    eps = None
    zero = Jet(Fraction(0))
    one = Jet(Fraction(1))

    def coerce(self, x):
        return Jet.lift(x) if isinstance(x, Jet) else Jet(parse_number(x))

    def is_zero(self, x) -> bool:
        return x.a == 0 and x.b == 0

    def is_unit(self, x) -> bool:
        return x.a != 0

    def pivot_score(self, x):
        return 1 if x.a != 0 else 0

    def __eq__(self, other):
        return isinstance(other, JetRing)

    def __hash__(self):
        return hash("jet")


JETS = JetRing()
