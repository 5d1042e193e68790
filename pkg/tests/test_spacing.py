import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pwlut.catalog import affine, get_function, max_abs_second_derivative
from pwlut.errors import ArgumentError, DomainError
from pwlut.spacing import (entry_count, footprint_reduction, segment_error_bound, spacing_many,
                           uniform_spacing)

from conftest import BENCH_EA, BENCH_INTERVALS, LOG_EA


def test_error_bound_log_example():
    assert segment_error_bound(0.01953125, 2.56) == pytest.approx(1.220703125e-4, rel=1e-12)


def test_error_bound_zero_curvature():
    assert segment_error_bound(0.3, 0.0) == 0.0


def test_error_bound_quadratic_in_delta():
    assert segment_error_bound(0.2, 3.0) == pytest.approx(4 * segment_error_bound(0.1, 3.0))


def test_error_bound_rejects_bad_delta():
    with pytest.raises(ArgumentError):
        segment_error_bound(0.0, 1.0)
    with pytest.raises(ArgumentError):
        segment_error_bound(-0.1, 1.0)


def test_log_reference_spacing():
    r = uniform_spacing(get_function("log"), LOG_EA, 0.625, 15.625)
    assert r.delta == pytest.approx(0.01953125, abs=1e-12)
    assert abs(r.kappa - 770) <= 2
    assert r.max_f2 == pytest.approx(2.56)


def test_linear_reference_spacing():
    r = uniform_spacing(affine(), 1e-6, 0.0, 1.0)
    assert (r.delta, r.kappa) == (1.0, 2)


def test_tan_reference_spacing():
    r = uniform_spacing(get_function("tan"), BENCH_EA, -1.5, 1.5)
    assert abs(r.kappa - 81543) <= 0.001 * 81543


def test_entry_count_exact_division():
    assert entry_count(0.25, 1.0) == 5
    assert entry_count(0.3, 1.0) == 5


def test_footprint_reduction_examples():
    assert footprint_reduction(770, 182) == pytest.approx(76.36, abs=0.01)
    assert footprint_reduction(500, 500) == 0.0
    assert footprint_reduction(770, 146) == pytest.approx(81.04, abs=0.01)
    with pytest.raises(ArgumentError):
        footprint_reduction(0, 3)


def test_uniform_spacing_errors():
    fn = get_function("log")
    with pytest.raises(ArgumentError):
        uniform_spacing(fn, 0.0, 1.0, 2.0)
    with pytest.raises(DomainError):
        uniform_spacing(fn, 1e-4, -1.0, 2.0)


def test_curvature_taken_over_covered_span():
    # exp grows past the interval end; the last step reaches beyond hi
    fn = get_function("exp")
    r = uniform_spacing(fn, 1e-4, 0.0, 1.05)
    span_end = (r.kappa - 1) * r.delta
    assert span_end >= 1.05
    assert segment_error_bound(r.delta, max_abs_second_derivative(fn, 0.0, span_end)) <= 1e-4


@pytest.mark.parametrize("fn_id", sorted(BENCH_INTERVALS))
def test_vector_path_bit_identical(fn_id):
    fn = get_function(fn_id)
    lo, hi = BENCH_INTERVALS[fn_id]
    rng = np.random.default_rng(5)
    pairs = np.sort(rng.uniform(lo, hi, (200, 2)), axis=1)
    d, k = spacing_many(fn, BENCH_EA, pairs[:, 0], pairs[:, 1])
    for (a, b), dd, kk in zip(pairs, d, k):
        r = uniform_spacing(fn, BENCH_EA, a, b)
        assert (r.delta, r.kappa) == (dd, kk)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(sorted(BENCH_INTERVALS)), st.floats(0, 1), st.floats(0, 1),
       st.floats(1e-8, 1e-2))
def test_round_trip_coverage_and_bound(fn_id, u, v, ea):
    lo, hi = BENCH_INTERVALS[fn_id]
    a, b = sorted((lo + (hi - lo) * u, lo + (hi - lo) * v))
    if not b - a > 1e-9:
        return
    fn = get_function(fn_id)
    r = uniform_spacing(fn, ea, a, b)
    assert r.kappa >= 2
    assert (r.kappa - 1) * r.delta >= b - a
    assert segment_error_bound(r.delta, r.max_f2) <= ea + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(sorted(BENCH_INTERVALS)), st.floats(1e-8, 1e-3), st.floats(1.0, 50.0))
def test_larger_ea_never_shrinks_delta(fn_id, ea, factor):
    fn = get_function(fn_id)
    lo, hi = BENCH_INTERVALS[fn_id]
    assert uniform_spacing(fn, ea * factor, lo, hi).delta >= uniform_spacing(fn, ea, lo, hi).delta
