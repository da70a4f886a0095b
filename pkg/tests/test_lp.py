"""Exponent arithmetic, p-norms, and the closed-form ball maximizer."""

import math

import numpy as np
import pytest

from lpforms import DegenerateInputError, conjugate, dual_maximizer, parse_exponent, pnorm
from lpforms.lp import pnorm_rows, random_unit_vector, require_ball_exponent


class TestParse:
    def test_inf_strings(self):
        assert math.isinf(parse_exponent("inf"))
        assert math.isinf(parse_exponent("Infinity"))

    def test_fraction(self):
        assert parse_exponent("4/3") == pytest.approx(4.0 / 3.0, abs=0)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            parse_exponent(float("nan"))


class TestPnorm:
    def test_euclidean(self):
        assert pnorm(np.array([3.0, 4.0]), 2.0) == 5.0

    def test_sup(self):
        assert pnorm(np.array([3.0, 4.0]), math.inf) == 4.0

    def test_p4_direct_sum(self):
        expected = (3.0**4 + 4.0**4) ** 0.25
        assert pnorm(np.array([3.0, 4.0]), 4.0) == pytest.approx(expected, rel=1e-15)
        assert expected == pytest.approx(4.2845722949538165, abs=1e-12)

    def test_zero_vector(self):
        assert pnorm(np.zeros(3), 2.5) == 0.0

    def test_huge_p_no_overflow(self):
        v = np.array([1e200, 5e199])
        assert pnorm(v, 100.0) == pytest.approx(1e200, rel=1e-10)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(17)
        for p in [1.0, 1.3, 2.0, 4.0, 7.0, math.inf]:
            for _ in range(50):
                u, v = rng.standard_normal(6), rng.standard_normal(6)
                lhs = pnorm(u + v, p)
                rhs = pnorm(u, p) + pnorm(v, p)
                assert lhs <= rhs * (1 + 1e-12)

    def test_rows_matches_scalar(self):
        rng = np.random.default_rng(8)
        mat = rng.standard_normal((5, 4))
        for p in [1.0, 2.5, math.inf]:
            rows = pnorm_rows(mat, p)
            for i in range(5):
                assert rows[i] == pytest.approx(pnorm(mat[i], p), rel=1e-14)


class TestConjugate:
    def test_self_conjugate(self):
        assert conjugate(2.0) == 2.0

    def test_four(self):
        assert conjugate(4.0) == pytest.approx(4.0 / 3.0, abs=1e-15)

    def test_three_halves(self):
        assert conjugate(1.5) == pytest.approx(3.0, abs=1e-15)

    def test_involution(self):
        for p in [1.1, 1.5, 2.0, 3.7, 40.0]:
            assert conjugate(conjugate(p)) == pytest.approx(p, abs=1e-12)

    def test_endpoints(self):
        assert conjugate(math.inf) == 1.0
        assert math.isinf(conjugate(1.0))

    def test_one_is_not_a_ball_exponent(self):
        # conjugate(inf) = 1 is fine as a norm exponent but must be rejected
        # anywhere a ball exponent > 1 is required
        with pytest.raises(ValueError):
            require_ball_exponent(conjugate(math.inf))
        with pytest.raises(ValueError):
            dual_maximizer(np.array([1.0, 2.0]), 1.0)


def grid_max_over_lp_circle(c, p, resolution=200_000):
    """Independent oracle: max <c, x> over the l_p unit circle by angle scan."""
    theta = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    norms = (np.abs(pts) ** p).sum(axis=1) ** (1.0 / p)
    pts /= norms[:, None]
    return float((pts @ np.asarray(c)).max())


class TestDualMaximizer:
    def test_basis_direction(self):
        y, value = dual_maximizer(np.array([1.0, 0.0]), 4.0)
        np.testing.assert_allclose(y, [1.0, 0.0], atol=1e-15)
        assert value == pytest.approx(1.0, abs=1e-15)

    def test_symmetric_euclidean(self):
        y, value = dual_maximizer(np.array([1.0, 1.0]), 2.0)
        np.testing.assert_allclose(y, [2**-0.5, 2**-0.5], rtol=1e-14)
        assert value == pytest.approx(math.sqrt(2.0), rel=1e-14)

    def test_p4_formula_and_grid_oracle(self):
        c = np.array([2.0, 1.0])
        y, value = dual_maximizer(c, 4.0)
        expected = (2.0 ** (4.0 / 3.0) + 1.0) ** 0.75
        assert value == pytest.approx(expected, rel=1e-13)
        assert value == pytest.approx(2.5697589428259664, abs=1e-12)
        assert pnorm(y, 4.0) == pytest.approx(1.0, rel=1e-13)
        assert float(c @ y) == pytest.approx(value, rel=1e-13)
        assert value == pytest.approx(grid_max_over_lp_circle(c, 4.0), rel=1e-8)

    def test_infinity_ball(self):
        y, value = dual_maximizer(np.array([2.0, -1.0, 0.0]), math.inf)
        np.testing.assert_allclose(y, [1.0, -1.0, 1.0])  # sign(0) -> +1
        assert value == 3.0

    def test_huge_p_treated_as_infinity(self):
        c = np.array([2.0, -1.0])
        y, value = dual_maximizer(c, 5e6)
        assert value == pytest.approx(3.0)
        np.testing.assert_allclose(y, [1.0, -1.0])

    def test_zero_vector_rejected(self):
        with pytest.raises(DegenerateInputError):
            dual_maximizer(np.zeros(4), 2.0)

    def test_hoelder_sharpness_against_random_unit_vectors(self):
        rng = np.random.default_rng(23)
        exponents = list(1.1 + 6.9 * rng.random(6)) + [math.inf]
        for p in exponents:
            c = rng.standard_normal(5)
            y, value = dual_maximizer(c, p)
            assert pnorm(y, p) == pytest.approx(1.0, rel=1e-12)
            z = np.stack([random_unit_vector(rng, 5, p) for _ in range(1000)])
            assert value >= float((z @ c).max()) - 1e-9
