"""Mixed coefficient norms and the exponent/constant formulas per regime.

A "regime" bundles the hypotheses of one summability inequality for
m-linear forms on l_p balls together with its exponents and its proven
constant.  The isotropic regimes bound the full coefficient l_rho norm;
the anisotropic ones bound a nested mixed norm: an outer l_alpha
aggregation over one index of an inner l_s aggregation over the rest.

Hypothesis boundaries are checked exactly as printed (strict vs
non-strict), with an absolute tolerance of 1e-12 on exponent comparisons.
Computed exponents at or above 1e6 are reported as infinity, since p
approaching the degenerate point sends them to the sup norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import RegimeError
from .forms import MultilinearForm
from .lp import EXPONENT_TOL, pnorm, pnorm_rows, require_ball_exponent

_EXPONENT_INF_REPORT = 1e6

SQRT2 = math.sqrt(2.0)


def _lt(a: float, b: float) -> bool:
    return a < b - EXPONENT_TOL


def _le(a: float, b: float) -> bool:
    return a <= b + EXPONENT_TOL


def _eq(a: float, b: float) -> bool:
    return abs(a - b) <= EXPONENT_TOL


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def _clamp_exponent(x: float) -> float:
    return math.inf if x >= _EXPONENT_INF_REPORT else x


def exponent_to_json(x: float):
    return "inf" if math.isinf(x) else x


# ---------------------------------------------------------------------------
# mixed norms of the coefficient tensor


@dataclass(frozen=True)
class MixedNormSpec:
    """One slot singled out: outer l_outer over its index, inner l_inner over the rest.

    ``excluded_slot`` is 1-based, matching the CLI convention.
    """

    excluded_slot: int
    inner: float
    outer: float

    def __post_init__(self):
        if not (self.inner >= 1.0 - EXPONENT_TOL):
            raise ValueError(f"inner exponent must be >= 1; got {self.inner}")
        if not (self.outer >= 1.0 - EXPONENT_TOL):
            raise ValueError(f"outer exponent must be >= 1; got {self.outer}")


def isotropic_mixed_sum(form: MultilinearForm, rho: float) -> float:
    """(sum over all multi-indices |coeff|^rho)^(1/rho); max |coeff| for rho = inf."""
    if not math.isinf(rho) and rho < 1.0 - EXPONENT_TOL:
        raise ValueError(f"rho must be >= 1 or inf; got {rho}")
    return pnorm(form.flat, rho)


def partial_mixed_sum(form: MultilinearForm, spec: MixedNormSpec) -> float:
    """Nested mixed norm with ``spec.excluded_slot``'s index outermost."""
    i = spec.excluded_slot
    if not 1 <= i <= form.order:
        raise ValueError(f"excluded_slot must be in 1..{form.order}; got {i}")
    moved = np.moveaxis(form.coeffs, i - 1, 0).reshape(form.dim, -1)
    inner = pnorm_rows(moved, spec.inner)
    return pnorm(inner, spec.outer)


# ---------------------------------------------------------------------------
# regimes


class RegimeKind(str, Enum):
    BOHNENBLUST_HILLE = "bohnenblust-hille"
    PRACIANO_PEREIRA = "praciano-pereira"
    DIMANT_SEVILLA_PERIS = "dimant-sevilla-peris"
    NEW_ISOTROPIC = "new-isotropic"
    ANISOTROPIC_2M2 = "anisotropic-2m-2"
    BILINEAR_HEAD = "anisotropic-bilinear-head"
    DEGENERATE = "degenerate"


class AggregationPolicy(Enum):
    """How a regime's mixed quantity aggregates the coefficient tensor."""

    FULL = "full"  # isotropic: single l_rho norm over all indices
    MAX_OVER_SLOTS = "max-over-slots"  # anisotropic, scored for every excluded slot
    LAST_SLOT = "last-slot"  # anisotropic with the last index outermost


@dataclass(frozen=True)
class RegimeExponents:
    inner: float
    outer: float
    policy: AggregationPolicy

    @property
    def isotropic_exponent(self) -> float:
        return self.inner


@dataclass(frozen=True)
class Regime:
    """A regime tag: kind plus the (m, p) it is instantiated at.

    ``p`` always stores one exponent per slot; scalar p is broadcast by
    ``make_regime``.
    """

    kind: RegimeKind
    m: int
    p: tuple[float, ...]

    def describe(self) -> str:
        ps = ",".join("inf" if math.isinf(x) else f"{x:g}" for x in self.p)
        return f"{self.kind.value}(m={self.m}, p=({ps}))"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "m": self.m,
            "p": [exponent_to_json(x) for x in self.p],
        }


def make_regime(kind, m: int, p=None) -> Regime:
    """Build and validate a regime; raises RegimeError naming any violated hypothesis."""
    kind = RegimeKind(kind)
    if m < 1:
        raise ValueError(f"m must be >= 1; got {m}")
    if p is None:
        if kind is not RegimeKind.BOHNENBLUST_HILLE:
            raise ValueError(f"{kind.value} requires exponents p")
        exps = (math.inf,) * m
    elif np.isscalar(p) or isinstance(p, str):
        exps = (float(p),) * m
    else:
        exps = tuple(float(x) for x in p)
    if len(exps) != m:
        raise ValueError(f"need one exponent per slot ({m}); got {len(exps)}")
    for x in exps:
        require_ball_exponent(x)
    regime = Regime(kind, m, exps)
    _validate_regime(regime)
    return regime


def _require_equal_finite(regime: Regime) -> float:
    p0 = regime.p[0]
    if math.isinf(p0) or any(not _eq(x, p0) for x in regime.p):
        raise RegimeError(
            f"{regime.kind.value} requires a single finite p on every slot; "
            f"got {regime.describe()}"
        )
    return p0


def _validate_regime(regime: Regime) -> None:
    kind, m, p = regime.kind, regime.m, regime.p
    inv_sum = sum(_inv(x) for x in p)
    if kind is RegimeKind.BOHNENBLUST_HILLE:
        if any(not math.isinf(x) for x in p):
            raise RegimeError(
                "bohnenblust-hille requires p = inf on every slot; "
                f"got {regime.describe()}"
            )
    elif kind is RegimeKind.PRACIANO_PEREIRA:
        p0 = _require_equal_finite(regime)
        if not _le(2 * m, p0):
            raise RegimeError(
                f"praciano-pereira requires p >= 2m; got p = {p0:g}, 2m = {2 * m}"
            )
    elif kind in (RegimeKind.DIMANT_SEVILLA_PERIS, RegimeKind.NEW_ISOTROPIC):
        if m < 2:
            raise RegimeError(f"{kind.value} requires m >= 2; got m = {m}")
        if not (_le(0.5, inv_sum) and _lt(inv_sum, 1.0)):
            raise RegimeError(
                f"{kind.value} requires 1/2 <= sum(1/p_k) < 1; "
                f"got sum(1/p_k) = {inv_sum:.6g}"
            )
    elif kind is RegimeKind.ANISOTROPIC_2M2:
        if m < 2:
            raise RegimeError(f"anisotropic-2m-2 requires m >= 2; got m = {m}")
        p0 = _require_equal_finite(regime)
        if not (_lt(m, p0) and _le(p0, 2 * m - 2)):
            raise RegimeError(
                f"anisotropic-2m-2 requires m < p <= 2m-2; "
                f"got p = {p0:g}, m = {m}, 2m-2 = {2 * m - 2}"
            )
    elif kind is RegimeKind.BILINEAR_HEAD:
        if m < 3:
            raise RegimeError(
                f"anisotropic-bilinear-head requires m >= 3; got m = {m}"
            )
        head = _inv(p[0]) + _inv(p[1])
        if not (_le(0.5, head) and _lt(head, 1.0)):
            raise RegimeError(
                "anisotropic-bilinear-head requires 1/2 <= 1/p_1 + 1/p_2 < 1; "
                f"got 1/p_1 + 1/p_2 = {head:.6g}"
            )
        if not _lt(inv_sum, 1.0):
            raise RegimeError(
                "anisotropic-bilinear-head requires sum(1/p_k) < 1; "
                f"got sum(1/p_k) = {inv_sum:.6g}"
            )
    elif kind is RegimeKind.DEGENERATE:
        p0 = _require_equal_finite(regime)
        if not _eq(p0, m):
            raise RegimeError(
                f"degenerate requires p = m exactly; got p = {p0:g}, m = {m}"
            )
    else:  # pragma: no cover
        raise RegimeError(f"unknown regime kind {kind!r}")


def regime_exponents(regime: Regime) -> RegimeExponents:
    """The summability exponents of the regime's inequality.

    Isotropic regimes return inner == outer == rho with the FULL policy;
    anisotropic ones return the (inner, outer) pair and the slot policy.
    """
    kind, m, p = regime.kind, regime.m, regime.p
    inv_sum = sum(_inv(x) for x in p)
    if kind is RegimeKind.BOHNENBLUST_HILLE:
        rho = 2.0 * m / (m + 1.0)
        return RegimeExponents(rho, rho, AggregationPolicy.FULL)
    if kind is RegimeKind.PRACIANO_PEREIRA:
        p0 = p[0]
        rho = 2.0 * m * p0 / (m * p0 + p0 - 2.0 * m)
        return RegimeExponents(rho, rho, AggregationPolicy.FULL)
    if kind in (RegimeKind.DIMANT_SEVILLA_PERIS, RegimeKind.NEW_ISOTROPIC):
        rho = _clamp_exponent(1.0 / (1.0 - inv_sum))
        return RegimeExponents(rho, rho, AggregationPolicy.FULL)
    if kind is RegimeKind.ANISOTROPIC_2M2:
        p0 = p[0]
        inner = _clamp_exponent(p0 / (p0 - (m - 1.0)))
        outer = _clamp_exponent(p0 / (p0 - m))
        return RegimeExponents(inner, outer, AggregationPolicy.MAX_OVER_SLOTS)
    if kind is RegimeKind.BILINEAR_HEAD:
        head_sum = sum(_inv(x) for x in p[: m - 1])
        inner = _clamp_exponent(1.0 / (1.0 - head_sum))
        outer = _clamp_exponent(1.0 / (1.0 - inv_sum))
        return RegimeExponents(inner, outer, AggregationPolicy.LAST_SLOT)
    # degenerate: only the sup norm of the coefficients is controlled
    return RegimeExponents(math.inf, math.inf, AggregationPolicy.FULL)


def regime_constant(regime: Regime) -> float:
    """The proven constant of the regime's inequality."""
    kind, m, p = regime.kind, regime.m, regime.p
    if kind in (RegimeKind.BOHNENBLUST_HILLE, RegimeKind.PRACIANO_PEREIRA,
                RegimeKind.DIMANT_SEVILLA_PERIS):
        return SQRT2 ** (m - 1)
    if kind is RegimeKind.NEW_ISOTROPIC:
        inv_sum = sum(_inv(x) for x in p)
        return 2.0 ** ((m - 1) * (1.0 - inv_sum))
    if kind is RegimeKind.ANISOTROPIC_2M2:
        p0 = p[0]
        return 2.0 ** ((m - 1) * (p0 - m + 1) / p0)
    if kind is RegimeKind.BILINEAR_HEAD:
        return 2.0 ** (1.0 - (_inv(p[0]) + _inv(p[1])))
    return 1.0  # degenerate


def regime_mixed_value(form: MultilinearForm, regime: Regime) -> float:
    """The regime's coefficient-side quantity for ``form``."""
    if form.order != regime.m:
        raise ValueError(
            f"form order {form.order} does not match regime m = {regime.m}"
        )
    exps = regime_exponents(regime)
    if exps.policy is AggregationPolicy.FULL:
        return isotropic_mixed_sum(form, exps.inner)
    if exps.policy is AggregationPolicy.LAST_SLOT:
        spec = MixedNormSpec(form.order, exps.inner, exps.outer)
        return partial_mixed_sum(form, spec)
    return max(
        partial_mixed_sum(form, MixedNormSpec(i, exps.inner, exps.outer))
        for i in range(1, form.order + 1)
    )


def applicable_regimes(m: int, p) -> list[Regime]:
    """All regimes whose printed hypotheses hold at (m, p), in a fixed order."""
    out = []
    for kind in RegimeKind:
        try:
            out.append(make_regime(kind, m, p))
        except (RegimeError, ValueError):
            continue
    return out


# ---------------------------------------------------------------------------
# the exponent ladder transferring inequalities between exponent vectors


@dataclass(frozen=True)
class LadderResult:
    """Interpolation chain lambda_0 < lambda_1 < ... < lambda_m with its endpoints.

    ``eta1`` = lambda_m governs the all-slots transfer; ``eta2`` =
    lambda_{m-1} the last-slot transfer.  When the strict admissibility
    inequality fails the chain is omitted.
    """

    admissible: bool
    lambda_chain: tuple[float, ...] | None = None
    eta1: float | None = None
    eta2: float | None = None

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "lambda_chain": list(self.lambda_chain) if self.lambda_chain else None,
            "eta1": self.eta1,
            "eta2": self.eta2,
        }


def ladder_exponents(p, q, lambda0: float) -> LadderResult:
    """Chain lambda_j = [1/lambda_0 - sum_{i<=j} (1/p_i - 1/q_i)]^{-1}.

    Requires p_k < q_k on every slot (q_k may be inf) and lambda_0 >= 1.
    Admissible iff the full deficiency sum is strictly below 1/lambda_0.
    """
    ps = tuple(float(x) for x in p)
    qs = tuple(float(x) for x in q)
    if len(ps) != len(qs):
        raise ValueError(f"p and q must have equal length; got {len(ps)}, {len(qs)}")
    if not ps:
        raise ValueError("need at least one slot")
    if lambda0 < 1.0 - EXPONENT_TOL:
        raise ValueError(f"lambda0 must be >= 1; got {lambda0}")
    for k, (pk, qk) in enumerate(zip(ps, qs), start=1):
        require_ball_exponent(pk)
        require_ball_exponent(qk)
        if not _lt(pk, qk):
            raise ValueError(
                f"slot {k}: requires p_k < q_k strictly; got p_{k} = {pk:g}, "
                f"q_{k} = {qk:g}"
            )
    deltas = [_inv(pk) - _inv(qk) for pk, qk in zip(ps, qs)]
    if not _lt(sum(deltas), 1.0 / lambda0):
        return LadderResult(admissible=False)
    chain = [float(lambda0)]
    acc = 1.0 / lambda0
    for d in deltas:
        acc -= d
        chain.append(1.0 / acc)
    return LadderResult(
        admissible=True,
        lambda_chain=tuple(chain),
        eta1=chain[-1],
        eta2=chain[-2],
    )
