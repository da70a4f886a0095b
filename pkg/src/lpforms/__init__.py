"""Operator norms of multilinear forms on l_p balls and the summability
inequalities that bound their coefficient norms.

Everything is desk-scale and exact-minded: forms are dense tensors with
n <= ~10 and m <= ~4, norm estimates carry explicit certification status,
and every randomized routine is bit-reproducible from a single seed.
"""

from .errors import (
    CapacityError,
    DegenerateInputError,
    InvariantViolationError,
    RegimeError,
)
from .forms import MultilinearForm, load_form, random_form, save_form
from .lp import (
    conjugate,
    dual_maximizer,
    parse_exponent,
    pnorm,
)
from .opnorm import (
    EstimateStatus,
    NormEstimate,
    alternating_ascent,
    opnorm_grid_bracket,
    opnorm_infinity_exact,
)
from .rademacher import (
    SignAverageReport,
    contraction_check,
    khinchin_multiple_check,
    multiple_rademacher_l1,
)
from .regimes import (
    AggregationPolicy,
    LadderResult,
    MixedNormSpec,
    Regime,
    RegimeExponents,
    RegimeKind,
    applicable_regimes,
    isotropic_mixed_sum,
    ladder_exponents,
    make_regime,
    partial_mixed_sum,
    regime_constant,
    regime_exponents,
    regime_mixed_value,
)
from .search import (
    CellReport,
    LadderCheckReport,
    RatioReport,
    SearchReport,
    SweepReport,
    ladder_empirical_check,
    ratio,
    search_lower_bound,
    sweep_verify,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DegenerateInputError",
    "InvariantViolationError",
    "RegimeError",
    "MultilinearForm",
    "load_form",
    "random_form",
    "save_form",
    "conjugate",
    "dual_maximizer",
    "parse_exponent",
    "pnorm",
    "EstimateStatus",
    "NormEstimate",
    "alternating_ascent",
    "opnorm_grid_bracket",
    "opnorm_infinity_exact",
    "SignAverageReport",
    "contraction_check",
    "khinchin_multiple_check",
    "multiple_rademacher_l1",
    "AggregationPolicy",
    "LadderResult",
    "MixedNormSpec",
    "Regime",
    "RegimeExponents",
    "RegimeKind",
    "applicable_regimes",
    "isotropic_mixed_sum",
    "ladder_exponents",
    "make_regime",
    "partial_mixed_sum",
    "regime_constant",
    "regime_exponents",
    "regime_mixed_value",
    "CellReport",
    "LadderCheckReport",
    "RatioReport",
    "SearchReport",
    "SweepReport",
    "ladder_empirical_check",
    "ratio",
    "search_lower_bound",
    "sweep_verify",
    "__version__",
]
