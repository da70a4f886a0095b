"""Operator-norm estimators: ascent, sign enumeration, grid bracket."""

import itertools
import math

import numpy as np
import pytest

from lpforms import (
    CapacityError,
    DegenerateInputError,
    EstimateStatus,
    MultilinearForm,
    alternating_ascent,
    conjugate,
    opnorm_grid_bracket,
    opnorm_infinity_exact,
    pnorm,
    random_form,
)

DIAG = MultilinearForm(2, 2, [[1, 0], [0, 1]])
WITNESS = MultilinearForm(2, 2, [[1, 1], [1, -1]])
E11 = MultilinearForm(2, 2, [[1, 0], [0, 0]])


def brute_force_sign_norm(coeffs):
    """Oracle: max |T| over all sign-vector tuples, by full enumeration."""
    coeffs = np.asarray(coeffs, dtype=float)
    n, m = coeffs.shape[0], coeffs.ndim
    best = 0.0
    for signs in itertools.product([-1.0, 1.0], repeat=n * m):
        vecs = [np.array(signs[k * n : (k + 1) * n]) for k in range(m)]
        out = coeffs
        for v in vecs:
            out = np.tensordot(out, v, axes=([0], [0]))
        best = max(best, abs(float(out)))
    return best


class TestAlternatingAscent:
    def test_rank_one_unit(self):
        est = alternating_ascent(E11, (4.0, 4.0), seed=1)
        assert est.status is EstimateStatus.HEURISTIC_LOWER_BOUND
        assert est.value == pytest.approx(1.0, rel=1e-12)

    def test_diagonal_closed_form(self):
        # ||diag ones|| on l_p x l_p is n^(1-2/p) for p >= 2
        est = alternating_ascent(DIAG, (4.0, 4.0), seed=1)
        assert est.value == pytest.approx(2.0**0.5, abs=1e-6)

    def test_rank_one_product_of_conjugate_norms(self):
        rng = np.random.default_rng(2)
        u, v = rng.standard_normal(4), rng.standard_normal(4)
        form = MultilinearForm(2, 4, np.outer(u, v))
        p = (3.0, 5.0)
        est = alternating_ascent(form, p, seed=7)
        expected = pnorm(u, conjugate(p[0])) * pnorm(v, conjugate(p[1]))
        assert est.value == pytest.approx(expected, rel=1e-9)

    def test_basis_domination(self):
        rng = np.random.default_rng(3)
        for s in range(20):
            form = MultilinearForm(3, 3, rng.standard_normal((3, 3, 3)))
            est = alternating_ascent(form, (4.0, 4.0, 4.0), starts=4, seed=s)
            assert est.value >= form.max_abs_coeff * (1 - 1e-12)

    def test_scaling_equivariance(self):
        form = random_form(2, 3, "gaussian", seed=9)
        est = alternating_ascent(form, (2.5, 2.5), seed=5)
        est_scaled = alternating_ascent(form.scaled(-3.5), (2.5, 2.5), seed=5)
        assert est_scaled.value == pytest.approx(3.5 * est.value, rel=1e-12)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(4)
        form = MultilinearForm(3, 3, rng.standard_normal((3, 3, 3)))
        p = (2.5, 4.0, 6.0)
        est = alternating_ascent(form, p, seed=11)
        perm = (3, 1, 2)
        permuted = form.permuted(perm)
        p_perm = tuple(p[k - 1] for k in perm)
        est_perm = alternating_ascent(permuted, p_perm, seed=11)
        assert est_perm.value == pytest.approx(est.value, rel=1e-9)

    def test_argmax_attains_value(self):
        form = random_form(3, 3, "gaussian", seed=31)
        p = (3.0, 3.0, 3.0)
        est = alternating_ascent(form, p, seed=2)
        assert abs(form.evaluate(est.argmax)) == pytest.approx(est.value, rel=1e-10)
        for k, x in enumerate(est.argmax):
            assert pnorm(x, p[k]) == pytest.approx(1.0, rel=1e-10)

    def test_infinite_exponents_supported(self):
        est = alternating_ascent(WITNESS, (math.inf, math.inf), seed=1)
        assert est.value == pytest.approx(2.0, rel=1e-12)

    def test_zero_form_rejected(self):
        with pytest.raises(DegenerateInputError):
            alternating_ascent(MultilinearForm(2, 2, np.zeros((2, 2))), (4, 4))

    def test_reproducible(self):
        form = random_form(3, 4, "gaussian", seed=77)
        a = alternating_ascent(form, (3.5,) * 3, seed=13)
        b = alternating_ascent(form, (3.5,) * 3, seed=13)
        assert a.value == b.value
        for x, y in zip(a.argmax, b.argmax):
            assert np.array_equal(x, y)


class TestInfinityExact:
    def test_witness_is_two(self):
        est = opnorm_infinity_exact(WITNESS)
        assert est.status is EstimateStatus.EXACT_ENUMERATION
        assert est.value == 2.0
        assert brute_force_sign_norm(WITNESS.coeffs) == 2.0

    def test_all_ones(self):
        form = MultilinearForm(2, 2, np.ones((2, 2)))
        assert opnorm_infinity_exact(form).value == 4.0

    def test_single_entry(self):
        assert opnorm_infinity_exact(E11).value == 1.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(6)
        for m, n in [(2, 3), (3, 2)]:
            form = MultilinearForm(m, n, rng.standard_normal((n,) * m))
            est = opnorm_infinity_exact(form)
            assert est.value == pytest.approx(
                brute_force_sign_norm(form.coeffs), rel=1e-12
            )

    def test_argmax_attains(self):
        form = random_form(3, 3, "gaussian", seed=8)
        est = opnorm_infinity_exact(form)
        assert abs(form.evaluate(est.argmax)) == pytest.approx(est.value, rel=1e-12)

    def test_budget_exceeded_names_size(self):
        form = random_form(2, 13, "gaussian", seed=0)
        with pytest.raises(CapacityError, match="2\\^26"):
            opnorm_infinity_exact(form)


class TestGridBracket:
    def test_diagonal_bracket_contains_truth(self):
        est = opnorm_grid_bracket(DIAG, (4.0, 4.0), resolution=4096)
        truth = 2.0**0.5
        assert est.status is EstimateStatus.GRID_BRACKET
        assert est.lo <= truth <= est.hi
        assert est.hi - est.lo < 1e-2

    def test_single_entry_p2(self):
        est = opnorm_grid_bracket(E11, (2.0, 2.0), resolution=512)
        assert est.lo <= 1.0 <= est.hi

    def test_contains_ascent_value(self):
        rng = np.random.default_rng(10)
        for s in range(100):
            form = MultilinearForm(2, 2, rng.standard_normal((2, 2)))
            p = (2.5, 2.5) if s % 2 else (4.0, 4.0)
            bracket = opnorm_grid_bracket(form, p, resolution=512)
            ascent = alternating_ascent(form, p, starts=8, seed=s)
            assert bracket.lo - 1e-9 <= ascent.value <= bracket.hi + 1e-9

    def test_trilinear_supported(self):
        form = random_form(3, 2, "gaussian", seed=3)
        est = opnorm_grid_bracket(form, (3.0, 3.0, 3.0), resolution=64)
        ascent = alternating_ascent(form, (3.0,) * 3, seed=4)
        assert ascent.value <= est.hi + 1e-9

    def test_wrong_dimension_rejected(self):
        form = random_form(2, 3, "gaussian", seed=1)
        with pytest.raises(CapacityError):
            opnorm_grid_bracket(form, (2.0, 2.0))

    def test_infinite_p_rejected(self):
        with pytest.raises(CapacityError):
            opnorm_grid_bracket(DIAG, (math.inf, 2.0))


class TestSerialization:
    def test_estimate_dict_keys(self):
        est = alternating_ascent(DIAG, (4.0, 4.0), seed=0)
        d = est.to_dict()
        assert list(d) == ["value", "status", "starts", "iterations"]
        bracket = opnorm_grid_bracket(DIAG, (4.0, 4.0), resolution=64)
        assert set(bracket.to_dict()) == {
            "value", "status", "starts", "iterations", "lo", "hi",
        }
