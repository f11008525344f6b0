"""Exact arithmetic over numbers of the form ``p/q + (r/s) * xi``.

``xi`` is a single declared irrational constant identified by a tag, e.g.
``sqrt2``. Values of this shape are closed under addition, subtraction and
rational scaling, and rationality is decidable exactly: the value is rational
if and only if the irrational coefficient is zero. That is all the actuator
endpoint tests require, so no general algebraic-number machinery is built.

Decimal literals are parsed into exact rationals (``"0.3"`` becomes 3/10);
floating-point values are never trusted for rationality decisions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction, str]

# Certified enclosures: one IEEE double on each side of the true value.
# math.sqrt and math.pi are correctly rounded, so the open interval between
# the two neighbouring doubles contains the exact constant.


def _double_enclosure(value: float) -> tuple[float, float]:
    return (math.nextafter(value, -math.inf), math.nextafter(value, math.inf))


_ENCLOSURES: dict[str, tuple[float, float]] = {
    "sqrt2": _double_enclosure(math.sqrt(2.0)),
    "sqrt3": _double_enclosure(math.sqrt(3.0)),
    "sqrt5": _double_enclosure(math.sqrt(5.0)),
    "pi": _double_enclosure(math.pi),
}


def register_irrational(tag: str, low: float, high: float) -> None:
    """Declare a new irrational tag with a certified enclosure ``(low, high)``.

    Re-registering a tag with the same enclosure is a no-op; changing an
    existing enclosure is rejected.
    """
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tag):
        raise ValueError(f"invalid irrational tag {tag!r}")
    low = float(low)
    high = float(high)
    if not (math.isfinite(low) and math.isfinite(high) and low < high):
        raise ValueError("enclosure must be a finite nonempty interval (low < high)")
    known = _ENCLOSURES.get(tag)
    if known is not None and known != (low, high):
        raise ValueError(f"tag {tag!r} already registered with a different enclosure")
    _ENCLOSURES[tag] = (low, high)


def known_irrationals() -> tuple[str, ...]:
    return tuple(sorted(_ENCLOSURES))


_RAT_RE = re.compile(r"[+-]?(?:\d+\.\d+|\d+(?:/\d+)?)")
_TERM_RE = re.compile(
    r"^(?P<first>[+-]?(?:\d+\.\d+|\d+(?:/\d+)?))"
    r"(?:\*(?P<tag1>[A-Za-z_][A-Za-z0-9_]*))?"
    r"(?:(?P<op>[+-])(?P<second>\d+\.\d+|\d+(?:/\d+)?)"
    r"\*(?P<tag2>[A-Za-z_][A-Za-z0-9_]*))?$"
)


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("rational value must not be a bool")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        if not _RAT_RE.fullmatch(value.strip()):
            raise ValueError(f"not a valid rational literal: {value!r}")
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


@dataclass(frozen=True)
class ExactReal:
    """A number ``rat + irr * xi`` with exact rational parts.

    ``tag`` names the irrational ``xi`` and must be registered; it is dropped
    whenever ``irr`` cancels to zero, so equality and ``is_rational`` are
    exact structural decisions.
    """

    rat: Fraction
    irr: Fraction = Fraction(0)
    tag: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "rat", _as_fraction(self.rat))
        object.__setattr__(self, "irr", _as_fraction(self.irr))
        if self.irr == 0:
            object.__setattr__(self, "tag", None)
        else:
            if self.tag is None:
                raise ValueError("an irrational part requires a tag")
            if self.tag not in _ENCLOSURES:
                raise ValueError(f"unknown irrational tag {self.tag!r}")

    # -- constructors -------------------------------------------------

    @classmethod
    def rational(cls, value: RationalLike) -> "ExactReal":
        return cls(_as_fraction(value))

    @classmethod
    def parse(cls, text: str) -> "ExactReal":
        """Parse ``RAT``, ``RAT*TAG`` or ``RAT (+|-) RAT*TAG`` (spaces allowed)."""
        compact = re.sub(r"\s+", "", text)
        match = _TERM_RE.match(compact)
        if match is None:
            raise ValueError(f"cannot parse exact number: {text!r}")
        first = Fraction(match.group("first"))
        tag1 = match.group("tag1")
        if tag1 is not None:
            if match.group("op") is not None:
                raise ValueError(f"at most one irrational term is allowed: {text!r}")
            return cls(Fraction(0), first, tag1)
        if match.group("op") is None:
            return cls(first)
        second = Fraction(match.group("second"))
        if match.group("op") == "-":
            second = -second
        return cls(first, second, match.group("tag2"))

    # -- predicates and conversions ------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.irr == 0

    def enclosure(self) -> tuple[float, float]:
        """A floating interval containing the value (up to double rounding)."""
        base = float(self.rat)
        if self.irr == 0:
            return (base, base)
        low, high = _ENCLOSURES[self.tag]  # type: ignore[index]
        coeff = float(self.irr)
        ends = (base + coeff * low, base + coeff * high)
        return (min(ends), max(ends))

    def to_float(self) -> float:
        low, high = self.enclosure()
        return 0.5 * (low + high)

    def __float__(self) -> float:
        return self.to_float()

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other: object) -> "ExactReal":
        if isinstance(other, ExactReal):
            return other
        return ExactReal(_as_fraction(other))  # type: ignore[arg-type]

    def __add__(self, other: object) -> "ExactReal":
        rhs = self._coerce(other)
        if self.irr != 0 and rhs.irr != 0 and self.tag != rhs.tag:
            raise ValueError(
                f"cannot combine distinct irrationals {self.tag!r} and {rhs.tag!r}"
            )
        tag = self.tag if self.irr != 0 else rhs.tag
        return ExactReal(self.rat + rhs.rat, self.irr + rhs.irr, tag)

    def __radd__(self, other: object) -> "ExactReal":
        return self.__add__(other)

    def __neg__(self) -> "ExactReal":
        return ExactReal(-self.rat, -self.irr, self.tag)

    def __sub__(self, other: object) -> "ExactReal":
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other: object) -> "ExactReal":
        return (-self).__add__(other)

    def scale(self, factor: RationalLike) -> "ExactReal":
        """Multiply by an exact rational factor."""
        q = _as_fraction(factor)
        return ExactReal(self.rat * q, self.irr * q, self.tag if self.irr * q != 0 else None)

    def __mul__(self, other: object) -> "ExactReal":
        if isinstance(other, ExactReal):
            if other.is_rational:
                return self.scale(other.rat)
            if self.is_rational:
                return other.scale(self.rat)
            raise ValueError("products of two irrational values are not representable")
        return self.scale(other)  # type: ignore[arg-type]

    def __rmul__(self, other: object) -> "ExactReal":
        return self.__mul__(other)

    # -- formatting -------------------------------------------------------

    def __str__(self) -> str:
        if self.irr == 0:
            return str(self.rat)
        irr_part = f"{abs(self.irr)}*{self.tag}"
        if self.rat == 0:
            return irr_part if self.irr > 0 else f"-{irr_part}"
        sign = "+" if self.irr > 0 else "-"
        return f"{self.rat} {sign} {irr_part}"


def parse(text: str) -> ExactReal:
    """Module-level alias for :meth:`ExactReal.parse`."""
    return ExactReal.parse(text)
