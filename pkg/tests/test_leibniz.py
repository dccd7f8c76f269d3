from math import comb

import pytest
from hypothesis import given, strategies as st

from derivorder.algebra import MultiIndex, StatePoly
from derivorder.config import EngineConfig
from derivorder.errors import InputError
from derivorder.leibniz import (
    bell_expand,
    collapse_to_single,
    composition_count,
    expand_power,
    expand_power_recursive,
    expand_product,
    formal_derivative,
    sorted_compositions,
    weak_compositions,
)


@pytest.mark.parametrize(
    "k, p, text",
    [
        (1, 2, "2*X*D1"),
        (2, 2, "2*X*D2 + 2*D1^2"),
        (2, 3, "3*X^2*D2 + 6*X*D1^2"),
        (0, 5, "X^5"),
    ],
)
def test_expand_power_examples(k, p, text):
    assert expand_power(k, p).render() == text


@pytest.mark.parametrize(
    "k, p, text",
    [(2, 2, "2*X*D2 + 2*D1^2"), (3, 2, "2*X*D3 + 6*D1*D2"), (1, 1, "D1")],
)
def test_recursive_examples(k, p, text):
    assert expand_power_recursive(k, p).render() == text


def test_frozen_higher_expansion():
    # computed by the recursive route and frozen
    assert expand_power(4, 3).render() == "3*X^2*D4 + 24*X*D1*D3 + 18*X*D2^2 + 36*D1^2*D2"


@given(st.integers(0, 7), st.integers(1, 7))
def test_routes_agree(k, p):
    assert expand_power(k, p) == expand_power_recursive(k, p)


@given(st.integers(0, 8), st.integers(1, 8))
def test_grading_and_coefficient_sum(k, p):
    poly = expand_power(k, p)
    for m in poly.terms:
        assert m.weight == k
        assert m.degree == p
    assert sum(poly.terms.values()) == p ** k


def test_power_zero():
    assert expand_power(0, 0) == StatePoly.constant(1)
    assert not expand_power(2, 0)


def test_formal_derivative_product_rule():
    assert formal_derivative(StatePoly.parse("X^2")).render() == "2*X*D1"
    assert formal_derivative(StatePoly.parse("D1*D2")).render() == "D1*D3 + D2^2"


@pytest.mark.parametrize(
    "k, p, expected",
    [(2, 2, {(2, 0): 1, (0, 2): 1, (1, 1): 2}), (1, 3, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}), (0, 2, {(0, 0): 1})],
)
def test_expand_product_examples(k, p, expected):
    assert expand_product(k, p).terms == expected


@given(st.integers(0, 6), st.integers(1, 5))
def test_product_key_count(k, p):
    exp = expand_product(k, p)
    assert len(exp) == comb(k + p - 1, p - 1) == composition_count(k, p)
    assert all(sum(key) == k for key in exp.terms)


@given(st.integers(0, 9), st.integers(1, 9))
def test_sorted_compositions_cover_orbits(k, p):
    orbits = {tuple(sorted(c, reverse=True)) for c in weak_compositions(k, p)}
    assert set(sorted_compositions(k, p)) == orbits


def test_caps_raise():
    small = EngineConfig(max_order=3, max_power=3)
    with pytest.raises(InputError):
        expand_power(4, 2, small)
    with pytest.raises(InputError):
        expand_power(1, 4, small)


def test_bell_expand_single_axis():
    assert collapse_to_single(bell_expand(MultiIndex([1]))).render() == "D1"
    assert collapse_to_single(bell_expand(MultiIndex([2]), 2)) == expand_power(2, 2)


@given(st.lists(st.integers(0, 2), min_size=1, max_size=3), st.integers(1, 3))
def test_bell_collapse_matches_single_derivation(alpha, p):
    a = MultiIndex(alpha)
    assert collapse_to_single(bell_expand(a, p)) == expand_power(a.order, p)
