"""Commutative semirings used as value carriers for tables.

A table over a semiring assigns each tuple an element of the carrier; the
boolean semiring gives ordinary relations, the probability semiring gives
(exact) probabilistic databases.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import FormatError

REAL_TOLERANCE = 1e-9

_RATIONAL = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+)\s*)?$")


@dataclass(frozen=True)
class Semiring:
    """A commutative semiring ``(carrier, add, zero, mul, one)``.

    ``parse`` and ``format`` convert elements to and from the strings used
    by the interchange format; ``check`` rejects values outside the carrier.
    """

    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    parse: Callable[[str], Any]
    format: Callable[[Any], str]
    check: Callable[[Any], Any]
    exact: bool = True

    def is_zero(self, x) -> bool:
        return x == self.zero

    def eq(self, x, y, tol: float = REAL_TOLERANCE) -> bool:
        if self.exact:
            return x == y
        return abs(x - y) <= tol

    def sum(self, values) -> Any:
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total

    def __repr__(self):
        return f"Semiring({self.name})"


def _parse_bool(text: str) -> bool:
    text = text.strip()
    if text == "0":
        return False
    if text == "1":
        return True
    raise FormatError(f"boolean value must be '0' or '1', got {text!r}")


def _check_bool(x) -> bool:
    if x in (0, 1):
        return bool(x)
    raise ValueError(f"not a boolean: {x!r}")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise FormatError(f"expected a non-negative rational 'p/q', got {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise FormatError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _check_prob(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("probability entries must be exact; use Fraction")
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"negative probability weight {x}")
    return x


def _parse_minplus(text: str):
    if text.strip() in ("inf", "infinity", "∞"):
        return math.inf
    return parse_rational(text)


def _format_minplus(x) -> str:
    return "inf" if x == math.inf else format_rational(x)


def _check_minplus(x):
    if x == math.inf:
        return math.inf
    return _check_prob(x)


def _parse_real(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise FormatError(f"expected a decimal number, got {text!r}") from None
    if not math.isfinite(x) or x < 0:
        raise FormatError(f"real weight must be finite and non-negative, got {text!r}")
    return x


def _check_real(x) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"real weight must be finite and non-negative, got {x!r}")
    return x


BOOLEAN = Semiring(
    "boolean", False, True,
    add=lambda x, y: x or y, mul=lambda x, y: x and y,
    parse=_parse_bool, format=lambda x: "1" if x else "0", check=_check_bool,
)

PROBABILITY = Semiring(
    "probability", Fraction(0), Fraction(1),
    add=lambda x, y: x + y, mul=lambda x, y: x * y,
    parse=parse_rational, format=format_rational, check=_check_prob,
)

MINPLUS = Semiring(
    "minplus", math.inf, Fraction(0),
    add=min, mul=lambda x, y: x + y,
    parse=_parse_minplus, format=_format_minplus, check=_check_minplus,
)

# Floating-point non-negative reals: only used for Born-rule output before
# rationalization; equality is up to REAL_TOLERANCE.
REAL = Semiring(
    "real", 0.0, 1.0,
    add=lambda x, y: x + y, mul=lambda x, y: x * y,
    parse=_parse_real, format=repr, check=_check_real, exact=False,
)

SEMIRINGS = {s.name: s for s in (BOOLEAN, PROBABILITY, MINPLUS, REAL)}


def get_semiring(name: str) -> Semiring:
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise FormatError(f"unknown semiring {name!r}", "$.semiring") from None


def support_of(semiring: Semiring) -> Callable[[Any], bool]:
    """The homomorphism into the booleans sending non-zero elements to 1."""
    return lambda x: not semiring.is_zero(x)
