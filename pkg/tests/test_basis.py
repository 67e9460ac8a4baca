import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eur.basis import (BLOCK_LABELS, BasisIndex, BasisSpec, enumerate_basis, enumerate_block, gauss_hermite_rule,
                       hermite_function, hermite_functions, sinh_rule, trapezoid_axis)


def test_ground_function_at_origin():
    assert hermite_function(0, 0.0, 1.0) == pytest.approx(math.pi ** -0.25, abs=1e-15)
    assert hermite_function(1, 0.0, 1.0) == 0.0


def test_psi7_psi5_orthogonal_with_60_point_rule():
    rule = gauss_hermite_rule(60)
    # weight exp(-x^2) is already inside psi_7 psi_5, divide it back out
    val = rule.integrate(lambda x: hermite_function(7, x) * hermite_function(5, x) * np.exp(x * x))
    assert abs(val) < 1e-10


@pytest.mark.parametrize("scale", [1.0, 0.37, 2.5])
def test_orthonormal_up_to_20(scale):
    rule = gauss_hermite_rule(64)
    # substitute u = sqrt(scale) x so the rule's weight matches
    x = rule.nodes / math.sqrt(scale)
    F = hermite_functions(20, x, scale) * np.exp(0.5 * rule.nodes ** 2)
    G = (F * rule.weights) @ F.T / math.sqrt(scale)
    assert np.max(np.abs(G - np.eye(21))) < 1e-10


def test_recurrence_bounded_to_n200():
    x = np.linspace(-20, 20, 4001)
    F = hermite_functions(200, x, 1.0)
    assert np.all(np.isfinite(F))
    assert np.max(np.abs(F)) <= 1.1


def test_far_tail_underflows_quietly():
    v = hermite_functions(10, np.array([60.0, -1e3]))
    assert np.all(v == 0.0)


def test_scale_matches_closed_form():
    s, x = 2.3, np.linspace(-3, 3, 7)
    expect = (s / math.pi) ** 0.25 * math.sqrt(2 * s) * x * np.exp(-0.5 * s * x * x)
    assert np.allclose(hermite_function(1, x, s), expect, atol=1e-15)


def test_rule_small_orders():
    r1 = gauss_hermite_rule(1)
    assert np.allclose(r1.nodes, [0.0]) and np.allclose(r1.weights, [math.sqrt(math.pi)])
    r2 = gauss_hermite_rule(2)
    assert np.allclose(r2.nodes, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)
    assert np.allclose(r2.weights, [math.sqrt(math.pi) / 2] * 2, atol=1e-15)


def test_fourth_moment():
    assert gauss_hermite_rule(20).integrate(lambda x: x ** 4) == pytest.approx(0.75 * math.sqrt(math.pi), abs=1e-12)


@pytest.mark.parametrize("order", [5, 40, 100, 150])
def test_rule_matches_numpy(order):
    x, w = np.polynomial.hermite.hermgauss(order)
    r = gauss_hermite_rule(order)
    assert np.allclose(r.nodes, x, atol=1e-12)
    assert np.allclose(r.weights, w, rtol=1e-9, atol=1e-300)


def test_rule_order_200_has_distinct_nodes():
    r = gauss_hermite_rule(200)
    assert np.all(np.diff(r.nodes) > 0)
    assert r.weights.sum() == pytest.approx(math.sqrt(math.pi), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 60), st.integers(0, 40))
def test_polynomial_exactness(order, half_degree):
    deg = 2 * half_degree
    if deg > 2 * order - 1:
        return
    # int x^{2k} e^{-x^2} = Gamma(k + 1/2)
    val = gauss_hermite_rule(order).integrate(lambda x: x ** deg)
    assert val == pytest.approx(math.gamma(half_degree + 0.5), rel=1e-10)


@pytest.mark.parametrize("order", [0, 201, -3])
def test_rule_order_out_of_range(order):
    with pytest.raises(ValueError):
        gauss_hermite_rule(order)


def test_rule_is_read_only():
    with pytest.raises(ValueError):
        gauss_hermite_rule(8).nodes[0] = 1.0


def test_blocks_small():
    spec = BasisSpec(2)
    assert enumerate_block(spec, "even", "even") == [(0, 0), (2, 0), (0, 2)]
    assert enumerate_block(spec, "odd", "odd") == [(1, 1)]


@pytest.mark.parametrize("n_max,trunc", [(4, "triangular"), (9, "triangular"), (5, "rectangular")])
def test_blocks_partition_basis(n_max, trunc):
    spec = BasisSpec(n_max, truncation=trunc)
    blocks = [enumerate_block(spec, *lab) for lab in BLOCK_LABELS]
    union = [i for b in blocks for i in b]
    assert len(union) == len(set(union)) == spec.size
    assert set(union) == set(enumerate_basis(spec))
    if trunc == "triangular" and n_max == 4:
        assert spec.size == 15
    for (px, py), b in zip(BLOCK_LABELS, blocks):
        assert all(i.n_x % 2 == (px == "odd") and i.n_y % 2 == (py == "odd") for i in b)


def test_basis_index_is_tuple():
    assert BasisIndex(3, 1) == (3, 1)


def test_spec_validation():
    with pytest.raises(ValueError):
        BasisSpec(-1)
    with pytest.raises(ValueError):
        BasisSpec(4, scale_x=0)
    with pytest.raises(ValueError):
        BasisSpec(4, truncation="square")


def test_sinh_rule_branch_point_integrand():
    # int sqrt(1 + x^2/eps^2) exp(-x^2) has branch points close to the real axis
    x, w = sinh_rule(0.1, 9.0, 96)
    x2, w2 = sinh_rule(0.1, 9.0, 192)
    f = lambda x: np.sqrt(1 + (x / 0.1) ** 2) * np.exp(-x * x)  # noqa: E731
    assert abs(np.sum(w * f(x)) - np.sum(w2 * f(x2))) < 1e-12


def test_trapezoid_axis():
    x, w = trapezoid_axis(2.0, 5)
    assert np.allclose(x, [-2, -1, 0, 1, 2])
    assert np.allclose(w, [0.5, 1, 1, 1, 0.5])
    with pytest.raises(ValueError):
        trapezoid_axis(1.0, 2)
