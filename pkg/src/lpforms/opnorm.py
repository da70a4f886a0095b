"""Operator norm ||T|| = sup |T(x1,...,xm)| over products of l_p unit balls.

Three estimators with distinct certification semantics:

* ``alternating_ascent`` -- multistart coordinate maximization.  Each sweep
  replaces one argument by the exact l_p-ball maximizer of the induced
  linear functional, so the objective never decreases; the result is always
  a valid lower bound and never claimed as more.
* ``opnorm_infinity_exact`` -- exact value for all-sup-norm balls by sign
  enumeration (a multilinear form on a product of cubes attains its maximum
  modulus at vertices).
* ``opnorm_grid_bracket`` -- certified [lo, hi] interval for n = 2 from a
  dense angular grid plus a Lipschitz remainder bound.

Randomness: one run of ``alternating_ascent`` draws everything from
``default_rng(SeedSequence(seed))`` in a fixed order (random-start vectors
start-major/slot-minor, then mid-sweep restart draws in event order), so
results are bit-reproducible from the seed alone; basis starts precede the
random starts in row-major coefficient order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CapacityError, DegenerateInputError, InvariantViolationError
from .forms import MultilinearForm, _EINSUM_LETTERS
from .lp import (
    dual_maximizer_rows,
    is_ball_infinity,
    pnorm,
    pnorm_rows,
    random_unit_vector,
    require_ball_exponent,
)

DEFAULT_ENUMERATION_BUDGET = 2**24
_TIE_REL_TOL = 1e-12


class EstimateStatus(str, Enum):
    EXACT_ENUMERATION = "exact_enumeration"
    EXACT_CLOSED_FORM = "exact_closed_form"
    HEURISTIC_LOWER_BOUND = "heuristic_lower_bound"
    GRID_BRACKET = "grid_bracket"


@dataclass
class NormEstimate:
    """Norm value plus certification status and convergence metadata.

    ``value`` is always a valid lower bound on ||T||; it is the exact norm
    for the two exact statuses, and ``lo``/``hi`` bracket the truth for
    GRID_BRACKET (where ``value`` = ``lo``).
    """

    value: float
    status: EstimateStatus
    starts_used: int = 0
    iterations: int = 0
    argmax: tuple | None = None
    lo: float | None = None
    hi: float | None = None

    @property
    def is_exact(self) -> bool:
        return self.status in (
            EstimateStatus.EXACT_ENUMERATION,
            EstimateStatus.EXACT_CLOSED_FORM,
        )

    @property
    def upper_bound(self) -> float:
        """Certified upper bound on ||T||; +inf when only a lower bound is known."""
        if self.is_exact:
            return self.value
        if self.status is EstimateStatus.GRID_BRACKET:
            return float(self.hi)
        return math.inf

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "status": self.status.value,
            "starts": self.starts_used,
            "iterations": self.iterations,
        }
        if self.status is EstimateStatus.GRID_BRACKET:
            out["lo"] = self.lo
            out["hi"] = self.hi
        return out


def _validate_exponents(form: MultilinearForm, p) -> tuple[float, ...]:
    exps = tuple(float(x) for x in p)
    if len(exps) != form.order:
        raise ValueError(
            f"need one exponent per slot ({form.order}); got {len(exps)}"
        )
    for x in exps:
        require_ball_exponent(x)
    return exps


def _batched_evaluate(form: MultilinearForm, xs) -> np.ndarray:
    letters = _EINSUM_LETTERS[: form.order]
    spec = letters + "," + ",".join("z" + c for c in letters) + "->z"
    return np.einsum(spec, form.coeffs, *xs)


def _batched_partial(form: MultilinearForm, xs, k: int) -> np.ndarray:
    """Partial coefficient vectors in slot k (0-based) for a batch of tuples."""
    m = form.order
    if m == 1:
        batch = xs[0].shape[0]
        return np.broadcast_to(form.coeffs, (batch, form.dim))
    letters = _EINSUM_LETTERS[:m]
    operands = ",".join("z" + letters[j] for j in range(m) if j != k)
    spec = f"{letters},{operands}->z{letters[k]}"
    return np.einsum(spec, form.coeffs, *(xs[j] for j in range(m) if j != k))


def _maximal_basis_indices(form: MultilinearForm) -> np.ndarray:
    mags = np.abs(form.coeffs)
    cutoff = mags.max() * (1.0 - _TIE_REL_TOL)
    return np.argwhere(mags >= cutoff)


def _basis_vector(n: int, j: int) -> np.ndarray:
    e = np.zeros(n)
    e[j] = 1.0
    return e


def alternating_ascent(
    form: MultilinearForm,
    p,
    starts: int = 32,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
    extra_starts=None,
) -> NormEstimate:
    """Multistart alternating dual ascent; a heuristic lower bound on ||T||.

    Starts are the basis tuples of every maximal-|coefficient| entry (so the
    result dominates max |coeff|) plus ``starts`` random unit tuples, plus
    any caller-supplied ``extra_starts`` tuples (used to warm-start search
    loops).  Each slot update is the exact ball maximizer of the induced
    linear functional, hence the per-start objective is nondecreasing; a
    start stops when a full sweep improves it by less than ``tol``
    relatively.  A zero partial-coefficient vector mid-sweep restarts that
    slot from a fresh random unit vector (three attempts, then the start is
    abandoned at objective 0).
    """
    if not np.any(form.coeffs):
        raise DegenerateInputError("alternating_ascent: zero form")
    exps = _validate_exponents(form, p)
    if starts < 0:
        raise ValueError("starts must be >= 0")
    m, n = form.order, form.dim

    basis = _maximal_basis_indices(form)
    extra = list(extra_starts) if extra_starts else []
    total = len(basis) + starts + len(extra)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    xs = [np.zeros((total, n)) for _ in range(m)]
    for b, idx in enumerate(basis):
        for k in range(m):
            xs[k][b, idx[k]] = 1.0
    # Single stream, fixed draw order: random starts start-major/slot-minor,
    # then zero-partial restarts in the (deterministic) order they occur.
    for b in range(len(basis), len(basis) + starts):
        for k in range(m):
            xs[k][b] = random_unit_vector(rng, n, exps[k])
    for j, tup in enumerate(extra):
        b = len(basis) + starts + j
        for k in range(m):
            v = np.asarray(tup[k], dtype=float)
            norm = pnorm(v, exps[k])
            xs[k][b] = v / norm if norm > 0.0 else _basis_vector(n, 0)

    obj = np.abs(_batched_evaluate(form, xs))
    active = np.ones(total, dtype=bool)
    sweeps = 0

    for _ in range(max_iter):
        if not active.any():
            break
        prev = obj.copy()
        vals = obj.copy()
        for k in range(m):
            c = _batched_partial(form, xs, k)
            y, v, nonzero = dual_maximizer_rows(c, exps[k])
            for b in np.flatnonzero(active & ~nonzero):
                for _attempt in range(3):
                    xs[k][b] = random_unit_vector(rng, n, exps[k])
                    cb = _batched_partial(form, [x[b : b + 1] for x in xs], k)[0]
                    if np.any(cb):
                        yb, vb, _ = dual_maximizer_rows(cb[None, :], exps[k])
                        y[b], v[b], nonzero[b] = yb[0], vb[0], True
                        break
            write = active & nonzero
            xs[k][write] = y[write]
            vals[write] = v[write]
            vals[active & ~nonzero] = 0.0
        obj[active] = vals[active]
        sweeps += int(active.sum())
        scale = max(float(obj.max()), 1.0)
        if np.any(obj[active] < prev[active] - 1e-12 * scale):
            raise InvariantViolationError(
                "alternating ascent sweep decreased the objective"
            )
        improvement = obj[active] - prev[active]
        denom = np.maximum(prev[active], 1e-300)
        active[active.nonzero()[0][improvement / denom < tol]] = False

    best = int(np.argmax(obj))
    return NormEstimate(
        value=float(obj[best]),
        status=EstimateStatus.HEURISTIC_LOWER_BOUND,
        starts_used=total,
        iterations=sweeps,
        argmax=tuple(xs[k][best].copy() for k in range(m)),
    )


def _sign_matrix(n: int) -> np.ndarray:
    """Columns are all 2^n sign vectors; column q has sign +1 at row j iff bit j of q is set."""
    q = np.arange(2**n)
    bits = (q[None, :] >> np.arange(n)[:, None]) & 1
    return bits * 2.0 - 1.0


def opnorm_infinity_exact(
    form: MultilinearForm, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> NormEstimate:
    """Exact ||T|| over sup-norm balls: max over sign tuples of |T(eps1,...,epsm)|.

    The maximum over the first slot is taken in closed form
    (max_{eps in {-1,1}^n} |<c, eps>| = ||c||_1), so only the other m-1
    slots are enumerated; the budget precondition is still stated against
    the full 2^(n m) sign space.
    """
    if not np.any(form.coeffs):
        raise DegenerateInputError("opnorm_infinity_exact: zero form")
    m, n = form.order, form.dim
    if n * m > math.log2(budget):
        raise CapacityError(
            f"sign enumeration needs 2^{n * m} patterns, above the budget of {budget}"
        )
    if m == 1:
        c = form.coeffs
        eps = np.where(c >= 0.0, 1.0, -1.0)
        return NormEstimate(
            value=float(np.abs(c).sum()),
            status=EstimateStatus.EXACT_ENUMERATION,
            argmax=(eps,),
        )

    sign = _sign_matrix(n)
    out = form.coeffs
    for axis in range(m - 1, 0, -1):
        out = np.tensordot(out, sign, axes=([axis], [0]))
    # out: axis 0 = slot-1 coefficient index, then pattern axes for slots m, m-1, ..., 2
    values = np.abs(out).sum(axis=0)
    flat_best = int(np.argmax(values))
    pattern = np.unravel_index(flat_best, values.shape)
    eps_rest = [sign[:, q].copy() for q in pattern][::-1]  # slots 2..m in order
    c_best = out[(slice(None),) + pattern]
    eps1 = np.where(c_best >= 0.0, 1.0, -1.0)
    return NormEstimate(
        value=float(values.reshape(-1)[flat_best]),
        status=EstimateStatus.EXACT_ENUMERATION,
        argmax=tuple([eps1] + eps_rest),
    )


def _sphere_points(resolution: int, p: float) -> np.ndarray:
    theta = 2.0 * math.pi * np.arange(resolution) / resolution
    pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return pts / pnorm_rows(pts, p)[:, None]


def _euclidean_radius(p: float) -> float:
    """max ||x||_2 over the l_p unit sphere in R^2."""
    return max(1.0, 2.0 ** (0.5 - 1.0 / p))


def _speed_bound(p: float) -> float:
    """Upper bound on the speed of the angle parametrization of the l_p sphere."""
    nmax = max(1.0, 2.0 ** (1.0 / p - 0.5))
    nmin = min(1.0, 2.0 ** (1.0 / p - 0.5))
    return 2.0 * nmax / nmin**2


def opnorm_grid_bracket(
    form: MultilinearForm, p, resolution: int = 4096
) -> NormEstimate:
    """Certified bracket lo <= ||T|| <= hi for n = 2 and finite exponents.

    Each l_p sphere is parametrized by angle and sampled at ``resolution``
    points; lo is the best sampled |T| and hi adds a Lipschitz remainder
    L * delta, where delta = pi/resolution is the covering radius of the
    sample grid and L bounds the derivative of |T| along the parametrized
    product of spheres using only coefficient magnitudes.
    """
    if not np.any(form.coeffs):
        raise DegenerateInputError("opnorm_grid_bracket: zero form")
    m, n = form.order, form.dim
    if n != 2:
        raise CapacityError(f"grid bracket requires n = 2; got n = {n}")
    if m > 3:
        raise CapacityError(f"grid bracket requires m <= 3; got m = {m}")
    exps = _validate_exponents(form, p)
    for x in exps:
        if is_ball_infinity(x):
            raise CapacityError(
                "grid bracket requires finite exponents; "
                "use opnorm_infinity_exact for p = inf"
            )
    if resolution < 8:
        raise ValueError("resolution must be >= 8")

    points = [_sphere_points(resolution, x) for x in exps]
    a = form.coeffs
    best_val = -1.0
    best_idx = (0,) * m
    chunk = max(1, 2**22 // resolution)
    if m == 1:
        vals = np.abs(points[0] @ a)
        best_val = float(vals.max())
        best_idx = (int(np.argmax(vals)),)
    elif m == 2:
        z = points[0] @ a  # (res, 2)
        for start in range(0, resolution, chunk):
            block = np.abs(z @ points[1][start : start + chunk].T)
            local = float(block.max())
            if local > best_val:
                r, s = np.unravel_index(int(np.argmax(block)), block.shape)
                best_val, best_idx = local, (int(r), int(s) + start)
    else:
        c1 = np.tensordot(points[0], a, axes=([1], [0]))  # (res, 2, 2)
        for r in range(resolution):
            block = np.abs(points[1] @ c1[r] @ points[2].T)
            local = float(block.max())
            if local > best_val:
                s, t = np.unravel_index(int(np.argmax(block)), block.shape)
                best_val, best_idx = local, (r, int(s), int(t))

    fro = float(np.sqrt(np.sum(a**2)))
    radii = [_euclidean_radius(x) for x in exps]
    lipschitz = 0.0
    for k in range(m):
        prod_r = 1.0
        for i in range(m):
            if i != k:
                prod_r *= radii[i]
        lipschitz += fro * prod_r * _speed_bound(exps[k])
    delta = math.pi / resolution
    lo = best_val
    hi = lo + lipschitz * delta
    return NormEstimate(
        value=lo,
        status=EstimateStatus.GRID_BRACKET,
        iterations=resolution,
        argmax=tuple(points[k][best_idx[k]].copy() for k in range(m)),
        lo=lo,
        hi=hi,
    )
