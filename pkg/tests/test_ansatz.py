from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from derivorder.algebra import StateMonomial, StatePoly
from derivorder.ansatz import (
    AnsatzSpec,
    ProductUnknown,
    coeffs_from_json,
    coeffs_to_json,
    direct_residual,
    expand_equation,
    instantiate,
)
from derivorder.equation import EquationSpec
from derivorder.errors import InputError


def spec(pairs):
    return EquationSpec.from_pairs(pairs)


def test_single_term_rows():
    s = spec([(1, 1)])
    system = expand_equation(s, AnsatzSpec.uniform(s, 1, 1))
    rows = {m.render(): {u: c for u, c in form.terms.items()} for m, form in system.rows.items()}
    assert rows == {
        "X^2": {ProductUnknown(1, 0, 0): 1},
        "X*D1": {ProductUnknown(1, 0, 1): 1, ProductUnknown(1, 1, 0): 1},
        "D1^2": {ProductUnknown(1, 1, 1): 1},
    }


def test_all_orders_zero_gives_one_row():
    s = spec([(1, 6), (2, 5), (3, 4)])
    system = expand_equation(s, AnsatzSpec.uniform(s, 0, 0))
    assert list(system.rows) == [StateMonomial((7,))]
    assert set(system.rows[StateMonomial((7,))].terms) == {ProductUnknown(i, 0, 0) for i in (1, 2, 3)}


def test_instantiate_examples():
    s = spec([(1, 1)])
    system = expand_equation(s, AnsatzSpec.uniform(s, 1, 1))
    lam = {(1, 0): 1, (1, 1): 0}
    mu = {(1, 0): 1, (1, 1): 0}
    assert instantiate(system, lam, mu).render() == "X^2"

    s = spec([(1, 4), (2, 3)])
    system = expand_equation(s, AnsatzSpec.uniform(s, 0, 0))
    assert not instantiate(system, {(1, 0): 1, (2, 0): 1}, {(1, 0): 1, (2, 0): -1})


def test_instantiate_missing_coefficient():
    s = spec([(1, 1)])
    system = expand_equation(s, AnsatzSpec.uniform(s, 1, 1))
    with pytest.raises(InputError):
        instantiate(system, {(1, 0): 1}, {(1, 0): 1, (1, 1): 1})


def test_pinned_sides_expose_one_unknown():
    from derivorder.orderbound import binomial_family

    fam = binomial_family(3, 3)
    ansatz = AnsatzSpec.uniform(fam.spec, 2, 2)
    assert all(ansatz.g_order(t.i) == 0 for t in fam.spec.terms)
    system = expand_equation(fam.spec, ansatz)
    assert not instantiate(system, fam.lam, fam.mu)


def test_mixed_degree_rejected():
    s = spec([(1, 1), (2, 3)])
    with pytest.raises(InputError):
        expand_equation(s, AnsatzSpec.uniform(s, 1, 1))


def test_coeffs_json_round_trip():
    c = {(1, 0): Fraction(1, 2), (2, 3): Fraction(-4)}
    assert coeffs_from_json(coeffs_to_json(c)) == c
    assert coeffs_to_json(c)[0] == {"i": 1, "j": 0, "c": "1/2"}


SPECS = [[(1, 4), (2, 3)], [(1, 6), (2, 5), (3, 4)], [(2, 5), (3, 4)]]
coef = st.integers(-3, 3).map(Fraction)


@st.composite
def assignment(draw):
    pairs = draw(st.sampled_from(SPECS))
    s = spec(pairs)
    k, l = draw(st.integers(0, 2)), draw(st.integers(0, 2))
    lam = {(t.i, j): draw(coef) for t in s.terms for j in range(k + 1)}
    mu = {(t.i, j): draw(coef) for t in s.terms for j in range(l + 1)}
    return s, k, l, lam, mu


@given(assignment())
def test_bilinear_consistency(data):
    s, k, l, lam, mu = data
    system = expand_equation(s, AnsatzSpec.uniform(s, k, l))
    assert instantiate(system, lam, mu) == direct_residual(s, lam, mu)


@given(assignment(), st.integers(1, 5), st.booleans())
def test_scaling_invariance(data, c, neg):
    s, k, l, lam, mu = data
    c = Fraction(-c if neg else c)
    lam2 = {key: v * c for key, v in lam.items()}
    mu2 = {key: v / c for key, v in mu.items()}
    assert direct_residual(s, lam, mu) == direct_residual(s, lam2, mu2)


@given(st.sampled_from(SPECS), st.integers(0, 2), st.integers(0, 2))
def test_rows_are_homogeneous_integer_forms(pairs, k, l):
    s = spec(pairs)
    system = expand_equation(s, AnsatzSpec.uniform(s, k, l))
    for mono, form in system.rows.items():
        assert mono.degree == s.N
        assert 0 <= mono.weight <= k + l
        assert form.constant == 0 and form.terms
        assert all(c.denominator == 1 for c in form.terms.values())


def test_system_json_shape():
    s = spec([(1, 1)])
    js = expand_equation(s, AnsatzSpec.uniform(s, 1, 1)).to_json()
    first = js["rows"][0]
    assert set(first) == {"monomial", "coeffs"}
    assert set(first["coeffs"][0]) == {"i", "k", "l", "c"}
