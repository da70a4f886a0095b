"""Exact multiple Rademacher L1 averages by exhaustive sign enumeration.

For an order-d array a, the quantity computed is

    R(a) = 2^(-sum n_k) * sum over all sign choices eps^(k) in {-1,+1}^{n_k}
           of | sum_i a_i * eps^(1)_{i_1} ... eps^(d)_{i_d} |,

i.e. the expected absolute value of the fully signed sum, one independent
sign per index per axis.  No Monte Carlo is involved: desk-scale arrays
permit the exact dyadic average, so the two classical comparisons checked
here (coefficient max below R, and l2 norm below (sqrt 2)^d * R) are free
of statistical noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvariantViolationError

DEFAULT_SIGN_BUDGET = 2**24
_REL_TOL = 1e-12


@dataclass(frozen=True)
class SignAverageReport:
    """Exact sign-average statistics of one coefficient array."""

    dims: tuple[int, ...]
    l1_average: float
    max_abs: float
    l2_norm: float
    khinchin_constant: float

    @property
    def d(self) -> int:
        return len(self.dims)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "d": self.d,
            "l1_average": self.l1_average,
            "max_abs": self.max_abs,
            "l2_norm": self.l2_norm,
            "khinchin_constant": self.khinchin_constant,
        }


def _as_array(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim < 1:
        raise ValueError("array must have order >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("array entries must be finite")
    return arr


def _check_budget(arr: np.ndarray, budget: int) -> None:
    bits = int(sum(arr.shape))
    if 2**bits > budget:
        raise CapacityError(
            f"sign enumeration needs 2^{bits} patterns, above the budget of {budget}"
        )


def _sign_matrix(n: int) -> np.ndarray:
    q = np.arange(2**n)
    bits = (q[None, :] >> np.arange(n)[:, None]) & 1
    return bits * 2.0 - 1.0


def multiple_rademacher_l1(a, budget: int = DEFAULT_SIGN_BUDGET) -> float:
    """Exact L1 average of the d-fold signed sum of ``a``.

    Enumerates every sign assignment by contracting one axis at a time with
    the full sign matrix; the final mean over 2^(sum n_k) dyadic values is a
    fixed-order summation, so results are bit-reproducible.
    """
    arr = _as_array(a)
    _check_budget(arr, budget)
    out = arr
    for _ in range(arr.ndim):
        # contract the current leading axis; its pattern axis lands at the end
        out = np.tensordot(out, _sign_matrix(out.shape[0]), axes=([0], [0]))
    return float(np.abs(out).mean())


def contraction_check(a, budget: int = DEFAULT_SIGN_BUDGET) -> SignAverageReport:
    """Verify max |a_i| <= L1 sign average; a theorem, so failure raises."""
    report = _report(a, budget)
    if report.max_abs > report.l1_average * (1.0 + _REL_TOL) + 1e-300:
        raise InvariantViolationError(
            f"contraction bound failed: max |a| = {report.max_abs!r} exceeds "
            f"L1 average {report.l1_average!r}"
        )
    return report


def khinchin_multiple_check(a, budget: int = DEFAULT_SIGN_BUDGET) -> SignAverageReport:
    """Verify (sum a^2)^(1/2) <= (sqrt 2)^d * L1 sign average (real scalars)."""
    report = _report(a, budget)
    bound = report.khinchin_constant * report.l1_average
    if report.l2_norm > bound * (1.0 + _REL_TOL) + 1e-300:
        raise InvariantViolationError(
            f"multiple Khinchin bound failed: l2 norm = {report.l2_norm!r} exceeds "
            f"(sqrt 2)^{report.d} * L1 average = {bound!r}"
        )
    return report


def _report(a, budget: int) -> SignAverageReport:
    arr = _as_array(a)
    return SignAverageReport(
        dims=tuple(arr.shape),
        l1_average=multiple_rademacher_l1(arr, budget),
        max_abs=float(np.abs(arr).max()),
        l2_norm=float(np.sqrt(np.sum(arr**2))),
        khinchin_constant=math.sqrt(2.0) ** arr.ndim,
    )
