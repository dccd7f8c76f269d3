import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from derivorder.ansatz import AnsatzSpec, expand_equation, instantiate
from derivorder.diffield import check_witness_with_oracle
from derivorder.equation import EquationSpec
from derivorder.errors import InputError
from derivorder.orderbound import (
    Infeasible,
    ProductUnknown,
    WitnessFound,
    admissible_specs,
    binomial_family,
    binomial_product_matrix,
    is_admissible,
    max_order_scan,
    random_admissible,
    rank_experiment,
    top_order_feasible,
    vandermonde_system,
    verify_certificate,
    verify_witness,
)


def spec(pairs):
    return EquationSpec.from_pairs(pairs)


TWO = spec([(1, 4), (2, 3)])
THREE = spec([(1, 6), (2, 5), (3, 4)])


def test_infeasible_above_bound():
    v = top_order_feasible(TWO, 2, 2)
    assert isinstance(v, Infeasible)
    assert set(v.certificate) == {ProductUnknown(1, 2, 2), ProductUnknown(2, 2, 2)}
    assert verify_certificate(TWO, 2, 2, v)


def test_identity_witness():
    v = top_order_feasible(TWO, 0, 0)
    assert isinstance(v, WitnessFound)
    assert v.lam == {(1, 0): 1, (2, 0): 1}
    assert v.mu == {(1, 0): 1, (2, 0): -1}


def test_binomial_witness_from_pinned_spec():
    fam = binomial_family(3, 7)
    v = top_order_feasible(fam.spec, 2, 0)
    assert isinstance(v, WitnessFound)
    # the nullspace vector is the binomial weight vector up to scale
    ratios = {v.mu[(i, 0)] / w for i, w in zip((1, 2, 3), fam.weights)}
    assert len(ratios) == 1


def test_conditions_are_required():
    with pytest.raises(InputError):
        top_order_feasible(spec([(1, 4), (4, 1)]), 1, 1)
    with pytest.raises(InputError):
        top_order_feasible(spec([(1, 1), (2, 3)]), 1, 1)


def test_single_term_has_no_solution():
    scan = max_order_scan(spec([(1, 2)]), 3, 3)
    assert all(isinstance(v, Infeasible) for v in scan.grid.values())
    assert scan.certified_bound is None


def test_two_term_scan():
    scan = max_order_scan(TWO, 3, 3)
    for (k, l), v in scan.grid.items():
        assert isinstance(v, Infeasible) == (max(k, l) >= 2)
    assert scan.certified_bound == 1


def test_three_term_scan():
    scan = max_order_scan(THREE, 4, 4)
    assert (scan.bound_k, scan.bound_l, scan.certified_bound) == (2, 2, 2)


@pytest.mark.parametrize("pairs", [[(1, 4), (2, 3)], [(1, 6), (2, 5), (3, 4)], [(2, 7), (3, 6), (4, 5)]])
def test_every_verdict_reverifies(pairs):
    s = spec(pairs)
    scan = max_order_scan(s, s.n + 1, s.n + 1)
    for (k, l), v in scan.grid.items():
        if isinstance(v, Infeasible):
            assert verify_certificate(s, k, l, v)
        else:
            assert isinstance(v, WitnessFound)
            assert verify_witness(s, k, l, v.lam, v.mu)
            assert check_witness_with_oracle(s, v.lam, v.mu, points=3, seed=k * 10 + l)


def test_tampered_certificate_fails():
    v = top_order_feasible(TWO, 2, 2)
    assert not verify_certificate(TWO, 2, 2, Infeasible(v.certificate[:1], v.rank))


def test_vandermonde_examples():
    assert vandermonde_system([1, 2], [4, 3], 2, "case1").tolist() == [[4, 6], [0, 6]]
    assert vandermonde_system([1, 2], [4, 3], 2, "case3").tolist() == [[4, 6], [4, 12]]
    assert vandermonde_system([2, 2], [3, 3], 2, "case1").rank() < 2
    with pytest.raises(InputError):
        vandermonde_system([1, 2], [4, 3], 3, "case1")
    with pytest.raises(InputError):
        vandermonde_system([1, 2], [4, 3], 1, "case4")


@given(st.integers(1, 8), st.integers(0, 10_000))
def test_case3_full_rank_on_random_draws(n, seed):
    drawn = random_admissible(random.Random(seed), n, N_max=60)
    if drawn is None:
        return
    p, q = drawn
    assert vandermonde_system(p, q, n, "case3").rank() == n


def test_binomial_product_matrix_rows():
    # row r sums (p)_a (q)_b over a + b = r + 1, a, b >= 1; row 2 at (2, 3) is 2*6 + 2*3
    m = binomial_product_matrix([1, 2], [4, 3])
    assert m.tolist() == [[4, 6], [12, 18]]


def test_rank_experiment_is_deterministic():
    a = [r.to_json() for r in rank_experiment(10, seed=3)]
    b = [r.to_json() for r in rank_experiment(10, seed=3)]
    assert a == b and a


def test_admissible_enumeration():
    specs = list(admissible_specs(2, 6))
    assert all(is_admissible([t.p for t in s.terms], s.N) for s in specs)
    assert spec([(1, 4), (2, 3)]) in specs
    assert not is_admissible([1, 4], 5)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_binomial_family_solves(n):
    fam = binomial_family(n, n + 2)
    system = expand_equation(fam.spec, AnsatzSpec.uniform(fam.spec, n - 1, 0))
    assert not instantiate(system, fam.lam, fam.mu)
    assert fam.weights[:2] == [-n, n * (n - 1) // 2]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_binomial_family_order_window(n):
    # d^j solves the family exactly for 1 <= j <= n - 1; j = 0 fails because the
    # dropped i = 0 term f(1) x^N only vanishes when f(1) = 0
    fam = binomial_family(n, n)
    for j in range(n + 1):
        lam = {(i, jj): Fraction(0) for i in range(1, n + 1) for jj in range(j + 1)}
        lam.update({(i, j): w for i, w in zip(range(1, n + 1), fam.weights)})
        system = expand_equation(fam.spec, AnsatzSpec.uniform(fam.spec, j, 0))
        assert (not instantiate(system, lam, fam.mu)) == (1 <= j <= n - 1)
