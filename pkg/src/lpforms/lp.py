"""l_p exponent arithmetic, vector p-norms, and the Hoelder-dual ball maximizer.

Exponents are plain floats with ``math.inf`` for the sup-norm case.  Ball
exponents (the p defining a unit ball we optimize over) must be strictly
greater than 1 or infinite; norm exponents only need p >= 1.  Values at or
above ``INFINITY_THRESHOLD`` are treated as infinity in ball-maximizer
contexts, where a finite-p power law would overflow.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateInputError

INFINITY_THRESHOLD = 1e6
EXPONENT_TOL = 1e-12


def parse_exponent(value) -> float:
    """Parse a norm exponent from a number or string.

    Accepts floats, ints, the strings "inf"/"infinity" (case-insensitive),
    and simple fractions like "4/3".
    """
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return math.inf
        if "/" in text:
            num, _, den = text.partition("/")
            return float(num) / float(den)
        return float(text)
    p = float(value)
    if math.isnan(p):
        raise ValueError("exponent must not be NaN")
    return p


def is_ball_infinity(p: float) -> bool:
    """True when p should be handled as infinity by ball maximizers."""
    return p >= INFINITY_THRESHOLD


def require_ball_exponent(p: float) -> float:
    """Validate p as a unit-ball exponent: strictly > 1 or infinity."""
    if math.isinf(p):
        return p
    if not p > 1.0 + EXPONENT_TOL:
        raise ValueError(
            f"ball exponent must satisfy p > 1 (or be infinite); got p = {p!r}"
        )
    return p


def require_norm_exponent(p: float) -> float:
    """Validate p as a norm exponent: p >= 1 or infinity."""
    if math.isinf(p):
        return p
    if not p >= 1.0 - EXPONENT_TOL:
        raise ValueError(f"norm exponent must satisfy p >= 1; got p = {p!r}")
    return p


def conjugate(p: float) -> float:
    """Hoelder conjugate p* with 1/p + 1/p* = 1.

    conjugate(inf) = 1 and conjugate(1) = inf; the value 1 is a valid norm
    exponent but not a valid ball exponent, so callers feeding the result
    into a ball maximizer must check it themselves (``require_ball_exponent``
    raises there).
    """
    require_norm_exponent(p)
    if math.isinf(p):
        return 1.0
    if abs(p - 1.0) <= EXPONENT_TOL:
        return math.inf
    return p / (p - 1.0)


def pnorm(v: np.ndarray, p: float) -> float:
    """(sum |v_j|^p)^(1/p) for finite p >= 1; max |v_j| for p = inf.

    Entries are rescaled by the max magnitude before exponentiation, so
    large p does not overflow.  The zero vector gives 0.
    """
    require_norm_exponent(p)
    v = np.asarray(v, dtype=float)
    a = np.abs(v)
    m = float(a.max(initial=0.0))
    if m == 0.0:
        return 0.0
    if math.isinf(p):
        return m
    return m * float(np.sum((a / m) ** p) ** (1.0 / p))


def pnorm_rows(mat: np.ndarray, p: float) -> np.ndarray:
    """Row-wise p-norms of a 2-D array, with the same overflow-safe scaling."""
    require_norm_exponent(p)
    a = np.abs(np.asarray(mat, dtype=float))
    m = a.max(axis=1)
    if math.isinf(p):
        return m
    safe = np.where(m > 0.0, m, 1.0)[:, None]
    out = safe[:, 0] * np.sum((a / safe) ** p, axis=1) ** (1.0 / p)
    return np.where(m > 0.0, out, 0.0)


def dual_maximizer(c: np.ndarray, p: float) -> tuple[np.ndarray, float]:
    """Maximize <c, y> over the unit ball of l_p; returns (argmax y, value).

    The maximum equals the conjugate norm ||c||_{p*} and is attained at the
    Hoelder equality point: y_j = sign(c_j) |c_j|^{p*-1} / ||c||_{p*}^{p*-1}
    for finite p, and y = sign(c) for p = inf.  sign(0) is taken as +1 so
    the output is always a well-defined unit vector.
    """
    c = np.asarray(c, dtype=float)
    if not np.any(c):
        raise DegenerateInputError("dual_maximizer: zero coefficient vector")
    require_ball_exponent(p)
    signs = np.where(c >= 0.0, 1.0, -1.0)
    if is_ball_infinity(p):
        return signs, float(np.abs(c).sum())
    pstar = p / (p - 1.0)
    a = np.abs(c)
    m = float(a.max())
    scaled = a / m
    norm_scaled = float(np.sum(scaled**pstar) ** (1.0 / pstar))
    y = signs * (scaled ** (pstar - 1.0)) / norm_scaled ** (pstar - 1.0)
    return y, m * norm_scaled


def dual_maximizer_rows(
    c: np.ndarray, p: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized ``dual_maximizer`` over the rows of a 2-D array.

    Returns (Y, values, nonzero_mask); rows that are entirely zero get a
    zero maximizer and value 0 and are flagged False in the mask (callers
    decide how to restart them).  All-nonzero batches (the common case in
    the ascent inner loop) take a branch without masking overhead.
    """
    c = np.asarray(c, dtype=float)
    require_ball_exponent(p)
    a = np.abs(c)
    m = a.max(axis=1)
    nonzero = m > 0.0
    signs = np.where(c >= 0.0, 1.0, -1.0)
    if is_ball_infinity(p):
        values = a.sum(axis=1)
        if nonzero.all():
            return signs, values, nonzero
        y = np.where(nonzero[:, None], signs, 0.0)
        return y, np.where(nonzero, values, 0.0), nonzero
    pstar = p / (p - 1.0)
    if nonzero.all():
        scaled = a / m[:, None]
        t = scaled ** (pstar - 1.0)
        norm_scaled = np.einsum("ij,ij->i", t, scaled) ** (1.0 / pstar)
        y = signs * t / norm_scaled[:, None] ** (pstar - 1.0)
        return y, m * norm_scaled, nonzero
    safe = np.where(nonzero, m, 1.0)[:, None]
    scaled = a / safe
    norm_scaled = np.sum(scaled**pstar, axis=1) ** (1.0 / pstar)
    norm_safe = np.where(nonzero, norm_scaled, 1.0)
    y = signs * scaled ** (pstar - 1.0) / norm_safe[:, None] ** (pstar - 1.0)
    y = np.where(nonzero[:, None], y, 0.0)
    values = np.where(nonzero, safe[:, 0] * norm_scaled, 0.0)
    return y, values, nonzero


def random_unit_vector(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    """Gaussian direction normalized to unit l_p norm."""
    while True:
        v = rng.standard_normal(n)
        norm = pnorm(v, p)
        if norm > 0.0:
            return v / norm
