from fractions import Fraction

import pytest

from softcsp import Cost, INFINITY, ZERO, as_cost, cost_sum
from softcsp.errors import SoftcspError


def test_construction_and_canonical_form():
    c = Cost(Fraction(6, 4))
    assert c.numerator == 3 and c.denominator == 2
    assert Cost("3/2") == c
    assert Cost(5) == Cost("5")
    assert Cost.parse("inf") == INFINITY


def test_negative_and_float_rejected():
    with pytest.raises(ValueError):
        Cost(-1)
    with pytest.raises(ValueError):
        Cost("-1/2")
    with pytest.raises(TypeError):
        Cost(0.5)


def test_addition_saturates():
    assert Cost(1) + Cost("1/2") == Cost("3/2")
    assert Cost(1) + INFINITY == INFINITY
    assert INFINITY + INFINITY == INFINITY
    assert cost_sum([1, "1/3", Fraction(2, 3)]) == Cost(2)


def test_total_order_with_infinity_greatest():
    values = [INFINITY, Cost(0), Cost("7/2"), Cost(2)]
    assert sorted(values) == [Cost(0), Cost(2), Cost("7/2"), INFINITY]
    assert not (INFINITY < INFINITY)
    assert Cost(3) < INFINITY
    assert INFINITY <= INFINITY


def test_extended_subtraction():
    assert Cost(3) - Cost(1) == Cost(2)
    assert INFINITY - Cost(5) == INFINITY
    assert INFINITY - INFINITY == INFINITY
    with pytest.raises(ValueError):
        Cost(1) - Cost(2)
    with pytest.raises(ValueError):
        Cost(1) - INFINITY


def test_integer_scaling():
    assert Cost("1/2") * 4 == Cost(2)
    assert 3 * Cost(2) == Cost(6)
    assert INFINITY * 2 == INFINITY
    assert INFINITY * 0 == ZERO
    with pytest.raises(ValueError):
        Cost(1) * -1


def test_str_round_trip():
    for text in ("0", "7", "3/4", "inf"):
        assert str(Cost.parse(text)) == text


def test_hash_consistency():
    assert hash(Cost("2/4")) == hash(Cost(Fraction(1, 2)))
    assert len({Cost(1), Cost("1"), as_cost(1)}) == 1
