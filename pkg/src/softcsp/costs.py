"""Exact cost arithmetic: non-negative rationals extended with infinity.

Costs form a totally ordered commutative monoid under addition with
infinity as the absorbing top element.  Everything is kept exact
(arbitrary-precision integers, lowest terms) because the solvers rely on
reliable equality tests between costs; floats would corrupt them.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Union

CostLike = Union["Cost", int, Fraction, str]


@total_ordering
class Cost:
    """A non-negative rational number or infinity.

    Supports addition (total, saturating at infinity), subtraction with the
    extended rule ``inf - x = inf``, multiplication by a non-negative integer
    (with ``0 * inf = 0``), and a total order in which infinity is strictly
    greatest.
    """

    __slots__ = ("_value",)

    def __init__(self, value: CostLike = 0):
        if isinstance(value, Cost):
            self._value = value._value
            return
        if isinstance(value, str):
            text = value.strip()
            if text in ("inf", "infinity", "oo"):
                self._value = None
                return
            value = Fraction(text)
        if isinstance(value, float):
            raise TypeError("costs are exact; use int, Fraction or 'p/q' text")
        frac = Fraction(value)
        if frac < 0:
            raise ValueError(f"costs must be non-negative, got {frac}")
        self._value = frac

    @classmethod
    def _wrap(cls, frac: Fraction | None) -> "Cost":
        obj = cls.__new__(cls)
        obj._value = frac
        return obj

    @classmethod
    def parse(cls, text: str) -> "Cost":
        return cls(text)

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    def finite_value(self) -> Fraction:
        if self._value is None:
            raise ValueError("cost is infinite")
        return self._value

    @property
    def numerator(self) -> int:
        return self.finite_value().numerator

    @property
    def denominator(self) -> int:
        return self.finite_value().denominator

    def __add__(self, other: CostLike) -> "Cost":
        other = as_cost(other)
        if self._value is None or other._value is None:
            return INFINITY
        return Cost._wrap(self._value + other._value)

    __radd__ = __add__

    def __sub__(self, other: CostLike) -> "Cost":
        # Extended subtraction: inf - x = inf for every x (including inf).
        other = as_cost(other)
        if self._value is None:
            return INFINITY
        if other._value is None:
            raise ValueError("cannot subtract infinity from a finite cost")
        diff = self._value - other._value
        if diff < 0:
            raise ValueError(f"cost subtraction went negative: {self} - {other}")
        return Cost._wrap(diff)

    def __mul__(self, factor: int) -> "Cost":
        if not isinstance(factor, int):
            return NotImplemented
        if factor < 0:
            raise ValueError("cost scaling factor must be non-negative")
        if factor == 0:
            return ZERO
        if self._value is None:
            return INFINITY
        return Cost._wrap(self._value * factor)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, str)):
            other = Cost(other)
        if not isinstance(other, Cost):
            return NotImplemented
        return self._value == other._value

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction, str)):
            other = Cost(other)
        if not isinstance(other, Cost):
            return NotImplemented
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __hash__(self) -> int:
        return hash(("Cost", self._value))

    def __bool__(self) -> bool:
        return self._value is None or self._value != 0

    def __str__(self) -> str:
        if self._value is None:
            return "inf"
        if self._value.denominator == 1:
            return str(self._value.numerator)
        return f"{self._value.numerator}/{self._value.denominator}"

    def __repr__(self) -> str:
        return f"Cost('{self}')"


ZERO = Cost(0)
INFINITY = Cost._wrap(None)


def as_cost(value: CostLike) -> Cost:
    return value if isinstance(value, Cost) else Cost(value)


def cost_sum(values: Iterable[CostLike]) -> Cost:
    total = ZERO
    for v in values:
        total = total + as_cost(v)
        if total.is_infinite:
            return INFINITY
    return total
