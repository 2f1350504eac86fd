"""Exact-or-float numbers carrying an optional factor of pi^2.

Every flat-model eigenvalue is a rational multiple of ``pi^2/l^2`` where ``l``
is the length unit of the metric parameters.  When lengths are given in units
of ``pi`` the factor cancels and the value is a plain rational.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isclose, pi
from numbers import Rational

PI2 = "pi^2"
UNIT = "1"
DEFAULT_RTOL = 1e-9


def parse_number(x):
    """JSON scalar -> int / Fraction / float.  Strings like ``"3/4"`` stay exact."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ValueError(f"cannot parse number {x!r}") from exc
    raise TypeError(f"unsupported number {x!r}")


def format_number(x):
    """Inverse of :func:`parse_number` for JSON output."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    return float(x)


def is_exact(x):
    return isinstance(x, Rational)


def exact_or_float(x):
    if isinstance(x, Rational):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class Quantity:
    coeff: object
    unit: str = UNIT

    def __post_init__(self):
        if self.unit not in (UNIT, PI2):
            raise ValueError(f"unknown unit {self.unit!r}")
        object.__setattr__(self, "coeff", exact_or_float(self.coeff))

    @property
    def exact(self):
        return isinstance(self.coeff, Fraction)

    def __float__(self):
        return float(self.coeff) * (pi ** 2 if self.unit == PI2 else 1.0)

    def to_json(self):
        out = {"value": float(self), "unit": self.unit}
        out["exact"] = format_number(self.coeff) if self.exact else None
        if out["exact"] is not None:
            out["exact"] = str(out["exact"])
        return out

    def __str__(self):
        c = str(self.coeff) if self.exact else f"{self.coeff:.12g}"
        return c if self.unit == UNIT else f"{c}*pi^2"


def as_quantity(x):
    return x if isinstance(x, Quantity) else Quantity(x)


def q_equal(a, b, rtol=DEFAULT_RTOL):
    """Equality of two quantities: exact when both are exact, else relative ``rtol``."""
    a, b = as_quantity(a), as_quantity(b)
    if a.exact and b.exact:
        if a.unit == b.unit:
            return a.coeff == b.coeff
        return a.coeff == 0 and b.coeff == 0
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= rtol * max(1.0, abs(fa), abs(fb))


def q_less_equal(a, b, rtol=DEFAULT_RTOL):
    a, b = as_quantity(a), as_quantity(b)
    if a.exact and b.exact and a.unit == b.unit:
        return a.coeff <= b.coeff
    return float(a) <= float(b) or q_equal(a, b, rtol)


def q_sub(a, b):
    a, b = as_quantity(a), as_quantity(b)
    if a.unit == b.unit:
        return Quantity(a.coeff - b.coeff, a.unit)
    if a.exact and a.coeff == 0:
        return Quantity(-b.coeff, b.unit)
    if b.exact and b.coeff == 0:
        return a
    return Quantity(float(a) - float(b))


def close(a, b, rtol=DEFAULT_RTOL):
    return isclose(float(a), float(b), rel_tol=rtol, abs_tol=rtol)
