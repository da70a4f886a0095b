"""Inequality ratios, bound-verification sweeps, and extremal-constant search.

The central object is the conservative ratio

    ratio(T) = mixed_value(T) / norm_estimate(T),

where the denominator is a lower bound on ||T|| unless an exact oracle
applies.  Dividing by a lower bound over-estimates the true ratio, which is
the safe direction for verifying an upper bound C: a sweep PASS means even
the inflated ratios stayed below C.  The same inflation is unsafe for
claiming lower bounds on optimal constants, so a search result is only
flagged ``certified`` when its denominator is an exact enumeration (all
p = inf) or an n = 2 grid-bracket upper endpoint.

Seeding: a sweep cell ci derives its form f from
``SeedSequence(seed, spawn_key=(ci, f))``; a search restart r draws from
``SeedSequence(seed, spawn_key=(r,))``.  All reductions are max-operations,
so concurrent execution of cells or restarts cannot change results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, RegimeError
from .forms import MultilinearForm
from .opnorm import (
    DEFAULT_ENUMERATION_BUDGET,
    NormEstimate,
    alternating_ascent,
    opnorm_grid_bracket,
    opnorm_infinity_exact,
)
from .regimes import (
    MixedNormSpec,
    Regime,
    _validate_regime,
    exponent_to_json,
    ladder_exponents,
    partial_mixed_sum,
    regime_constant,
    regime_mixed_value,
)

PASS_SLACK = 1e-9


@dataclass
class RatioReport:
    """One form scored against one regime's inequality.

    ``ratio`` over-estimates the true mixed/norm quotient whenever the norm
    estimate is a lower bound, so ``margin = bound - ratio >= 0`` certifies
    the inequality on this instance.
    """

    regime: Regime
    mixed_value: float
    norm_estimate: NormEstimate
    ratio: float
    bound: float
    margin: float
    form_digest: str
    seed: int
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.to_dict(),
            "mixed_value": self.mixed_value,
            "norm": self.norm_estimate.to_dict(),
            "ratio": self.ratio,
            "bound": self.bound,
            "margin": self.margin,
            "form_digest": self.form_digest,
            "seed": self.seed,
            "metadata": self.metadata,
        }


def _estimate_norm(
    form: MultilinearForm,
    regime: Regime,
    oracle: str,
    starts: int,
    tol: float,
    max_iter: int,
    seed: int,
    bracket_resolution: int,
    enumeration_budget: int,
    extra_starts=None,
) -> tuple[NormEstimate, str]:
    all_inf = all(math.isinf(x) for x in regime.p)
    if oracle == "auto":
        oracle = "exact" if all_inf else "ascent"
    if oracle == "exact":
        if not all_inf:
            raise ValueError("exact oracle requires p = inf on every slot")
        return opnorm_infinity_exact(form, budget=enumeration_budget), "exact"
    if oracle == "bracket":
        return opnorm_grid_bracket(form, regime.p, resolution=bracket_resolution), "bracket"
    if oracle == "ascent":
        est = alternating_ascent(
            form, regime.p, starts=starts, tol=tol, max_iter=max_iter, seed=seed,
            extra_starts=extra_starts,
        )
        return est, "ascent"
    raise ValueError(f"unknown oracle {oracle!r}")


def ratio(
    form: MultilinearForm,
    regime: Regime,
    oracle: str = "auto",
    starts: int = 32,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
    bracket_resolution: int = 4096,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> RatioReport:
    """Score ``form`` against ``regime``: mixed value over norm estimate.

    ``oracle`` selects the denominator: "auto" uses exact sign enumeration
    when every slot has p = inf and alternating ascent otherwise; "bracket"
    forces the n = 2 certified bracket.
    """
    _validate_regime(regime)
    if form.order != regime.m:
        raise ValueError(
            f"form order {form.order} does not match regime m = {regime.m}"
        )
    if not np.any(form.coeffs):
        raise DegenerateInputError("ratio: zero form")
    mixed = regime_mixed_value(form, regime)
    est, oracle_used = _estimate_norm(
        form, regime, oracle, starts, tol, max_iter, seed,
        bracket_resolution, enumeration_budget,
    )
    value = mixed / est.value
    bound = regime_constant(regime)
    metadata = {
        "oracle": oracle_used,
        "starts": starts,
        "tol": tol,
        "max_iter": max_iter,
    }
    if oracle_used == "bracket":
        metadata["bracket_resolution"] = bracket_resolution
    return RatioReport(
        regime=regime,
        mixed_value=mixed,
        norm_estimate=est,
        ratio=value,
        bound=bound,
        margin=bound - value,
        form_digest=form.digest(),
        seed=seed,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# derivative-free search for extremal ratios


@dataclass
class SearchReport:
    """Best ratio found by seeded hill climbing, with its improvement trace."""

    best: RatioReport
    trace: list[tuple[int, float]]
    restarts: int
    evaluations: int
    certified: bool
    certified_ratio: float | None
    rng: dict

    def to_dict(self) -> dict:
        return {
            "best": self.best.to_dict(),
            "trace": [[i, v] for i, v in self.trace],
            "restarts": self.restarts,
            "evaluations": self.evaluations,
            "certified": self.certified,
            "certified_ratio": self.certified_ratio,
            "rng": self.rng,
        }


def _unit_rms(coeffs: np.ndarray) -> np.ndarray:
    rms = float(np.sqrt(np.mean(coeffs**2)))
    return coeffs / rms


def _hill_climb(
    m: int,
    n: int,
    objective,
    budget: int,
    seed: int,
    init_step: float = 0.5,
    decay: float = 0.9,
    patience: int = 20,
    min_step: float = 1e-6,
    rescore=None,
):
    """Maximize ``objective(coeffs) -> (value, payload)`` over coefficient tensors.

    Multistart accept-on-improvement climbing: one uniformly chosen
    coordinate gets a Gaussian kick of the current step size; twenty
    consecutive rejections decay the step by 0.9; a step below ``min_step``
    triggers a fresh restart.  The objective must be scale-invariant (the
    current point is renormalized to unit rms after every acceptance).

    When ``rescore`` is given, the climb explores on ``objective`` but a
    candidate only becomes the recorded best after ``rescore(coeffs)``
    confirms the improvement; the trace then contains rescored values
    only, so it stays a valid nondecreasing record even when the cheap
    exploration objective is noisy.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    evals = 0
    restarts = 0
    rescores = 0
    best_value = -math.inf
    best_coeffs = None
    best_payload = None
    trace: list[tuple[int, float]] = []

    def consider(coeffs, value, payload):
        nonlocal best_value, best_coeffs, best_payload, rescores
        if value <= best_value:
            return
        if rescore is not None:
            value, payload = rescore(coeffs)
            rescores += 1
            if value <= best_value:
                return
        best_value, best_coeffs, best_payload = value, coeffs, payload
        trace.append((evals, value))

    while evals < budget:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restarts,)))
        restarts += 1
        current = _unit_rms(rng.standard_normal((n,) * m))
        value, payload = objective(current)
        evals += 1
        consider(current, value, payload)
        step = init_step
        rejections = 0
        while evals < budget and step >= min_step:
            proposal = current.copy()
            index = tuple(rng.integers(0, n, size=m))
            proposal[index] += step * rng.standard_normal()
            evals += 1
            accepted = False
            if np.any(proposal):
                new_value, new_payload = objective(proposal)
                if new_value > value:
                    current = _unit_rms(proposal)
                    value = new_value
                    accepted = True
                    consider(current, new_value, new_payload)
            if accepted:
                rejections = 0
            else:
                rejections += 1
                if rejections >= patience:
                    step *= decay
                    rejections = 0
    return best_coeffs, best_value, best_payload, trace, restarts, evals, rescores


def search_lower_bound(
    regime: Regime,
    n: int,
    budget: int = 10_000,
    seed: int = 0,
    ascent_starts: int = 16,
    ascent_tol: float = 1e-10,
    ascent_max_iter: int = 300,
    certify_resolution: int = 4096,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> SearchReport:
    """Hill-climb the conservative ratio toward the regime's optimal constant.

    With all-inf exponents every denominator is an exact enumeration and the
    best ratio is a certified lower bound on the optimal constant.  With
    finite exponents the climb explores on a cheap warm-started ascent and
    every candidate best is re-scored with a stronger multistart ascent
    (``ascent_starts`` starts) before it enters the report, which keeps the
    recorded ratios from chasing denominator weaknesses; when n = 2 the
    final best form is additionally scored against the grid-bracket upper
    endpoint and that value is reported as ``certified_ratio``.
    """
    _validate_regime(regime)
    m = regime.m
    all_inf = all(math.isinf(x) for x in regime.p)
    bound = regime_constant(regime)
    warm: dict = {"argmax": None}

    def objective(coeffs: np.ndarray):
        form = MultilinearForm(m, n, coeffs)
        mixed = regime_mixed_value(form, regime)
        if all_inf:
            est = opnorm_infinity_exact(form, budget=enumeration_budget)
        else:
            extra = (warm["argmax"],) if warm["argmax"] is not None else None
            est = alternating_ascent(
                form, regime.p, starts=1, tol=1e-8, max_iter=40, seed=0,
                extra_starts=extra,
            )
            warm["argmax"] = est.argmax
        return mixed / est.value, (form, mixed, est)

    def strong_rescore(coeffs: np.ndarray):
        form = MultilinearForm(m, n, coeffs)
        mixed = regime_mixed_value(form, regime)
        extra = (warm["argmax"],) if warm["argmax"] is not None else None
        est = alternating_ascent(
            form, regime.p, starts=ascent_starts, tol=ascent_tol,
            max_iter=ascent_max_iter, seed=0, extra_starts=extra,
        )
        return mixed / est.value, (form, mixed, est)

    coeffs, value, payload, trace, restarts, evals, rescores = _hill_climb(
        m, n, objective, budget, seed,
        rescore=None if all_inf else strong_rescore,
    )
    form, mixed, est = payload
    best = RatioReport(
        regime=regime,
        mixed_value=mixed,
        norm_estimate=est,
        ratio=value,
        bound=bound,
        margin=bound - value,
        form_digest=form.digest(),
        seed=seed,
        metadata={
            "oracle": "exact" if all_inf else "ascent",
            "budget": budget,
            "rescores": rescores,
        },
    )
    certified = all_inf
    certified_ratio = value if all_inf else None
    if (
        not all_inf
        and n == 2
        and m <= 3
        and certify_resolution >= 8
        and all(math.isfinite(x) for x in regime.p)
    ):
        bracket = opnorm_grid_bracket(form, regime.p, resolution=certify_resolution)
        certified = True
        certified_ratio = mixed / bracket.hi
    return SearchReport(
        best=best,
        trace=trace,
        restarts=restarts,
        evaluations=evals,
        certified=certified,
        certified_ratio=certified_ratio,
        rng={"seed": seed, "splitting": "SeedSequence(seed, spawn_key=(restart,))"},
    )


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class CellReport:
    regime: Regime
    n: int
    samples: int
    max_ratio: float
    bound: float
    margin: float
    passed: bool
    worst_digest: str
    search_ratio: float | None

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.to_dict(),
            "n": self.n,
            "samples": self.samples,
            "max_ratio": self.max_ratio,
            "bound": self.bound,
            "margin": self.margin,
            "pass": self.passed,
            "worst_digest": self.worst_digest,
            "search_ratio": self.search_ratio,
        }

    def csv_row(self) -> list:
        ps = ";".join(
            "inf" if math.isinf(x) else f"{x:g}" for x in self.regime.p
        )
        return [
            self.regime.kind.value, self.regime.m, self.n, ps,
            repr(self.max_ratio), repr(self.bound), repr(self.margin),
            "pass" if self.passed else "FAIL",
        ]


CSV_COLUMNS = ["regime", "m", "n", "p", "max_ratio", "bound", "margin", "pass"]


@dataclass
class SweepReport:
    seed: int
    samples: int
    search_budget: int
    passed: bool
    cells: list[CellReport]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "search_budget": self.search_budget,
            "pass": self.passed,
            "cells": [c.to_dict() for c in self.cells],
        }


def _run_cell(
    cell_index: int,
    regime: Regime,
    n: int,
    samples: int,
    seed: int,
    search_budget: int,
    ascent_starts: int,
) -> CellReport:
    m = regime.m
    max_ratio = -math.inf
    worst_digest = ""
    for f in range(samples):
        rng = np.random.default_rng(
            np.random.SeedSequence(seed, spawn_key=(cell_index, f))
        )
        form = MultilinearForm(m, n, rng.standard_normal((n,) * m))
        report = ratio(form, regime, starts=ascent_starts, seed=0)
        if report.ratio > max_ratio:
            max_ratio = report.ratio
            worst_digest = report.form_digest
    search_ratio = None
    if search_budget > 0:
        search_seed = int(
            np.random.SeedSequence(seed, spawn_key=(cell_index, samples))
            .generate_state(1)[0]
        )
        found = search_lower_bound(regime, n, budget=search_budget, seed=search_seed)
        search_ratio = found.best.ratio
        if search_ratio > max_ratio:
            max_ratio = search_ratio
            worst_digest = found.best.form_digest
    bound = regime_constant(regime)
    margin = bound - max_ratio
    return CellReport(
        regime=regime,
        n=n,
        samples=samples,
        max_ratio=max_ratio,
        bound=bound,
        margin=margin,
        passed=margin >= -PASS_SLACK,
        worst_digest=worst_digest,
        search_ratio=search_ratio,
    )


def sweep_verify(
    cells,
    samples: int = 200,
    seed: int = 0,
    search_budget: int = 10_000,
    ascent_starts: int = 32,
    threads: int = 1,
) -> SweepReport:
    """Max conservative ratio per (regime, n) cell over random forms plus one search.

    PASS iff every cell's margin is >= -1e-9.  Cells are independent; with
    ``threads`` > 1 they run on a thread pool, and per-cell child seeds keep
    the result identical to the serial run.
    """
    cells = list(cells)
    for regime, _n in cells:
        _validate_regime(regime)
    args = [
        (ci, regime, n, samples, seed, search_budget, ascent_starts)
        for ci, (regime, n) in enumerate(cells)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda a: _run_cell(*a), args))
    else:
        reports = [_run_cell(*a) for a in args]
    return SweepReport(
        seed=seed,
        samples=samples,
        search_budget=search_budget,
        passed=all(c.passed for c in reports),
        cells=reports,
    )


# ---------------------------------------------------------------------------
# empirical transfer check for the exponent ladder


@dataclass
class LadderCheckReport:
    variant: str
    p: tuple[float, ...]
    q: tuple[float, ...]
    lambda0: float
    s: float
    eta: float
    n: int
    samples: int
    estimated_rhs_constant: float
    max_lhs_ratio: float
    tolerance: float
    passed: bool
    worst_digest: str

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "p": [exponent_to_json(x) for x in self.p],
            "q": [exponent_to_json(x) for x in self.q],
            "lambda0": self.lambda0,
            "s": self.s,
            "eta": self.eta,
            "n": self.n,
            "samples": self.samples,
            "estimated_rhs_constant": self.estimated_rhs_constant,
            "max_lhs_ratio": self.max_lhs_ratio,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "worst_digest": self.worst_digest,
        }


def ladder_empirical_check(
    p,
    q,
    lambda0: float,
    s: float,
    n: int,
    samples: int = 100,
    seed: int = 0,
    variant: str = "a",
    search_budget: int = 2000,
    tolerance: float = 0.05,
    ascent_starts: int = 8,
) -> LadderCheckReport:
    """Check the ladder transfer: p-space mixed ratios below the q-space constant.

    The right-hand constant (mixed (s, lambda0) quantity over the q-ball
    norm, sup over forms) is estimated from below by a seeded search plus
    the sampled forms themselves; each sampled form is then scored on the
    p-spaces with outer exponent eta1 (variant "a", max over slots) or eta2
    (variant "b", last slot).  Since both estimates lean conservative in
    opposite directions, a multiplicative ``tolerance`` absorbs the
    estimation gap.
    """
    ps = tuple(float(x) for x in p)
    qs = tuple(float(x) for x in q)
    m = len(ps)
    ladder = ladder_exponents(ps, qs, lambda0)
    if not ladder.admissible:
        raise RegimeError(
            "ladder not admissible: requires sum(1/p_k - 1/q_k) < 1/lambda0"
        )
    if variant not in ("a", "b"):
        raise ValueError(f"variant must be 'a' or 'b'; got {variant!r}")
    eta = ladder.eta1 if variant == "a" else ladder.eta2
    if s < eta - 1e-12:
        label = "eta1" if variant == "a" else "eta2"
        raise RegimeError(
            f"variant ({variant}) requires s >= {label} = "
            f"[1/lambda0 - sum(1/p_j - 1/q_j)]^-1 = {eta:.12g}; got s = {s:g}"
        )
    q_all_inf = all(math.isinf(x) for x in qs)

    def rhs_ratio(form: MultilinearForm) -> float:
        mixed = max(
            partial_mixed_sum(form, MixedNormSpec(i, s, lambda0))
            for i in range(1, m + 1)
        )
        if q_all_inf:
            est = opnorm_infinity_exact(form)
        else:
            est = alternating_ascent(form, qs, starts=ascent_starts, seed=0)
        return mixed / est.value

    def lhs_ratio(form: MultilinearForm) -> float:
        if variant == "a":
            mixed = max(
                partial_mixed_sum(form, MixedNormSpec(i, s, eta))
                for i in range(1, m + 1)
            )
        else:
            mixed = partial_mixed_sum(form, MixedNormSpec(m, s, eta))
        est = alternating_ascent(form, ps, starts=ascent_starts, seed=0)
        return mixed / est.value

    _, searched, _, _, _, _, _ = _hill_climb(
        m, n, lambda c: (rhs_ratio(MultilinearForm(m, n, c)), None),
        budget=search_budget, seed=seed,
    )
    estimated = searched
    max_lhs = -math.inf
    worst_digest = ""
    for f in range(samples):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, f)))
        form = MultilinearForm(m, n, rng.standard_normal((n,) * m))
        estimated = max(estimated, rhs_ratio(form))
        lhs = lhs_ratio(form)
        if lhs > max_lhs:
            max_lhs = lhs
            worst_digest = form.digest()
    passed = max_lhs <= estimated * (1.0 + tolerance)
    return LadderCheckReport(
        variant=variant,
        p=ps,
        q=qs,
        lambda0=float(lambda0),
        s=float(s),
        eta=float(eta),
        n=n,
        samples=samples,
        estimated_rhs_constant=estimated,
        max_lhs_ratio=max_lhs,
        tolerance=tolerance,
        passed=passed,
        worst_digest=worst_digest,
    )
