"""Natural numbers extended with an infinity element."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, eq=False)
class ExtNat:
    """A value in {0, 1, 2, ...} plus infinity.  ``None`` encodes infinity.

    Comparisons treat infinity as larger than every finite value; addition
    with infinity stays infinite.  Infinity is never coerced to an int.
    """

    value: int | None = None

    def __post_init__(self):
        if self.value is not None and (not isinstance(self.value, int) or self.value < 0):
            raise ValueError(f"ExtNat takes a nonnegative int or None, got {self.value!r}")

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __eq__(self, other):
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, ExtNat):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(("ExtNat", self.value))

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.is_finite:
            return False
        if not other.is_finite:
            return True
        return self.value < other.value

    def __le__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self < other or self == other

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other < self

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other <= self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_finite and other.is_finite:
            return ExtNat(self.value + other.value)
        return INFINITY

    __radd__ = __add__

    def __repr__(self):
        return "ExtNat(inf)" if self.value is None else f"ExtNat({self.value})"

    def __str__(self):
        return "inf" if self.value is None else str(self.value)


def _coerce(other):
    if isinstance(other, ExtNat):
        return other
    if isinstance(other, int) and not isinstance(other, bool):
        return ExtNat(other)
    return NotImplemented


INFINITY = ExtNat(None)
