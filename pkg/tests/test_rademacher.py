"""Exact sign averages: contraction and multiple-Khinchin comparisons."""

import itertools
import math

import numpy as np
import pytest

from lpforms import (
    CapacityError,
    contraction_check,
    khinchin_multiple_check,
    multiple_rademacher_l1,
)


def brute_force_l1(a):
    """Oracle: average |signed sum| over all sign tuples via itertools."""
    a = np.asarray(a, dtype=float)
    axes_bits = a.shape
    total = 0.0
    count = 0
    spaces = [list(itertools.product([-1.0, 1.0], repeat=nk)) for nk in axes_bits]
    for combo in itertools.product(*spaces):
        out = a
        for eps in combo:
            out = np.tensordot(out, np.array(eps), axes=([0], [0]))
        total += abs(float(out))
        count += 1
    return total / count


class TestL1Average:
    def test_single_entry(self):
        assert multiple_rademacher_l1([[1.0, 0.0], [0.0, 0.0]]) == 1.0

    def test_witness_always_two(self):
        # every sign pattern gives |+-2|
        assert multiple_rademacher_l1([[1.0, 1.0], [1.0, -1.0]]) == 2.0

    def test_d1_pair(self):
        # (|2| + |0| + |0| + |-2|) / 4 = 1
        assert multiple_rademacher_l1([1.0, 1.0]) == 1.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(30)
        for shape in [(4,), (2, 3), (3, 2), (2, 2, 2)]:
            a = rng.standard_normal(shape)
            assert multiple_rademacher_l1(a) == pytest.approx(
                brute_force_l1(a), rel=1e-12
            )

    def test_slice_sign_flip_invariance(self):
        rng = np.random.default_rng(31)
        a = rng.standard_normal((3, 3))
        flipped = a.copy()
        flipped[1, :] *= -1.0
        assert multiple_rademacher_l1(flipped) == pytest.approx(
            multiple_rademacher_l1(a), rel=1e-12
        )

    def test_homogeneous(self):
        rng = np.random.default_rng(32)
        a = rng.standard_normal((2, 4))
        r = multiple_rademacher_l1(a)
        assert multiple_rademacher_l1(2.5 * a) == pytest.approx(2.5 * r, rel=1e-12)

    def test_budget(self):
        with pytest.raises(CapacityError, match="2\\^30"):
            multiple_rademacher_l1(np.ones((15, 15)), budget=2**24)


class TestContraction:
    def test_equality_single_entry(self):
        report = contraction_check([[1.0, 0.0], [0.0, 0.0]])
        assert report.max_abs == 1.0
        assert report.l1_average == 1.0

    def test_witness(self):
        report = contraction_check([[1.0, 1.0], [1.0, -1.0]])
        assert report.max_abs == 1.0
        assert report.l1_average == 2.0

    def test_random_arrays(self):
        rng = np.random.default_rng(33)
        for _ in range(100):
            report = contraction_check(rng.standard_normal((3, 3)))
            assert report.max_abs <= report.l1_average * (1 + 1e-12)

    def test_report_fields(self):
        report = contraction_check(np.ones((2, 2)))
        assert report.d == 2
        assert report.dims == (2, 2)
        assert report.khinchin_constant == pytest.approx(2.0, rel=1e-15)


class TestKhinchin:
    def test_d1_equality_case(self):
        report = khinchin_multiple_check([1.0, 1.0])
        assert report.l2_norm == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert report.khinchin_constant * report.l1_average == pytest.approx(
            math.sqrt(2.0), rel=1e-15
        )

    def test_witness(self):
        report = khinchin_multiple_check([[1.0, 1.0], [1.0, -1.0]])
        assert report.l2_norm == 2.0
        assert report.khinchin_constant * report.l1_average == pytest.approx(4.0)

    def test_single_entry_d1(self):
        report = khinchin_multiple_check([1.0, 0.0])
        assert report.l2_norm == 1.0
        assert report.khinchin_constant == pytest.approx(math.sqrt(2.0))

    def test_random_arrays(self):
        rng = np.random.default_rng(34)
        for shape in [(8,), (3, 3), (2, 4)]:
            for _ in range(30):
                report = khinchin_multiple_check(rng.standard_normal(shape))
                bound = report.khinchin_constant * report.l1_average
                assert report.l2_norm <= bound * (1 + 1e-12)
