"""Coefficient container and algebra tests."""

import json

import numpy as np
import pytest

from rhalylab.coeffcore import (
    CircleGrid,
    CoeffSeq,
    add,
    block,
    derivative,
    evaluate_on_circle,
    hadamard,
    partial_sum,
    prefix_sums,
    scale,
    shift,
    slice_coeffs,
    subtract,
)
from rhalylab.errors import IndexOrder, OversamplingViolation


def test_coeffs_are_frozen():
    f = CoeffSeq(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        f.coeffs[0] = 5.0


def test_coeff_out_of_range_reads_zero():
    f = CoeffSeq(np.array([1.0, 2.0]))
    assert f.coeff(1) == 2.0
    assert f.coeff(5) == 0.0
    assert f.coeff(-1) == 0.0
    assert f.degree == 1


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        CoeffSeq(np.array([]))
    with pytest.raises(ValueError):
        CoeffSeq(np.array([np.nan]))
    with pytest.raises(ValueError):
        CoeffSeq(np.ones((2, 2)))


def test_json_roundtrip():
    f = CoeffSeq(np.array([1.0 + 2.0j, -0.5]))
    g = CoeffSeq.from_json(f.to_json())
    assert f == g
    data = json.loads(f.to_json())
    assert data["coeffs"][0] == [1.0, 2.0]


def test_log_series_coefficients():
    f = CoeffSeq.log_one_over_one_minus_z(4)
    assert np.allclose(f.coeffs, [0, 1, 1 / 2, 1 / 3, 1 / 4])


def test_hadamard_takes_min_degree():
    f = CoeffSeq(np.array([1.0, 2.0, 3.0]))
    g = CoeffSeq(np.array([2.0, 5.0]))
    h = hadamard(f, g)
    assert h.degree == 1
    assert np.allclose(h.coeffs, [2.0, 10.0])


def test_derivative():
    f = CoeffSeq(np.array([5.0, 3.0, 2.0]))
    assert np.allclose(derivative(f).coeffs, [3.0, 4.0])
    const = CoeffSeq(np.array([7.0]))
    assert np.allclose(derivative(const).coeffs, [0.0])


def test_shift_then_derivative_identity():
    # coefficient n of (z f)' is (n+1) a_n
    rng = np.random.default_rng(3)
    f = CoeffSeq(rng.standard_normal(9))
    g = derivative(shift(f))
    n = np.arange(9)
    assert np.allclose(g.coeffs, (n + 1) * f.coeffs)


def test_prefix_sums_matches_cumsum():
    rng = np.random.default_rng(0)
    c = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    f = CoeffSeq(c)
    assert np.allclose(prefix_sums(f).coeffs, np.cumsum(c), atol=1e-13)


def test_prefix_sums_compensation_on_alternating_input():
    # large alternating terms cancel; the running sum must stay exact
    n = 10001
    c = np.empty(n)
    c[0::2] = 1e8
    c[1::2] = -1e8
    out = prefix_sums(CoeffSeq(c)).coeffs
    assert out[-1] == 1e8
    assert np.all(np.abs(out[1::2]) == 0.0)


def test_evaluate_on_circle_matches_direct_evaluation():
    rng = np.random.default_rng(7)
    c = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    f = CoeffSeq(c)
    grid = CircleGrid(points=64, radius=0.8)
    vals = evaluate_on_circle(f, grid)
    theta = 2 * np.pi * np.arange(64) / 64
    z = 0.8 * np.exp(1j * theta)
    direct = np.polyval(c[::-1], z)
    assert np.allclose(vals, direct, atol=1e-10)


def test_oversampling_guard():
    f = CoeffSeq(np.ones(10))
    with pytest.raises(OversamplingViolation):
        evaluate_on_circle(f, CircleGrid(points=16))
    # 4*(degree+1) = 40 is the minimum
    evaluate_on_circle(f, CircleGrid(points=40))


def test_slice_keeps_indices_in_place():
    f = CoeffSeq(np.arange(1.0, 7.0))
    s = slice_coeffs(f, 2, 4)
    assert np.allclose(s.coeffs, [0, 0, 3, 4, 5, 0])
    assert s.degree == f.degree


def test_slice_past_degree_reads_zero():
    f = CoeffSeq(np.arange(1.0, 4.0))
    s = slice_coeffs(f, 2, 10)
    assert np.allclose(s.coeffs, [0, 0, 3])


def test_slice_order_errors():
    f = CoeffSeq(np.ones(5))
    with pytest.raises(IndexOrder):
        slice_coeffs(f, 3, 2)
    with pytest.raises(IndexOrder):
        slice_coeffs(f, -1, 2)


def test_block_and_partial_sum():
    f = CoeffSeq(np.arange(1.0, 9.0))
    b = block(f, 2)  # indices 2..3
    assert np.allclose(b.coeffs, [0, 0, 3, 4, 0, 0, 0, 0])
    s = partial_sum(f, 3)
    assert np.allclose(s.coeffs, [1, 2, 3, 4, 0, 0, 0, 0])


def test_linear_ops():
    f = CoeffSeq(np.array([1.0, 2.0]))
    g = CoeffSeq(np.array([1.0, 1.0, 1.0]))
    assert np.allclose(add(f, g).coeffs, [2, 3, 1])
    assert np.allclose(subtract(f, g).coeffs, [0, 1, -1])
    assert np.allclose(scale(f, 2j).coeffs, [2j, 4j])
