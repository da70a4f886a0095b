"""Command-line front end.

Subcommands: norm, mixed, exponents, bounds, ratio, search, sweep, verify.
Output is a pretty table on a terminal and JSON when piped; ``--format``
overrides.  Every randomized command requires an explicit ``--seed`` and is
bit-reproducible from it.  Exit codes: 0 success/PASS, 1 verification
failure, 2 usage or hypothesis error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .errors import (
    CapacityError,
    DegenerateInputError,
    InvariantViolationError,
    RegimeError,
)
from .forms import MultilinearForm, load_form, random_form
from .lp import parse_exponent
from .opnorm import alternating_ascent, opnorm_grid_bracket, opnorm_infinity_exact
from .rademacher import contraction_check, khinchin_multiple_check
from .regimes import (
    AggregationPolicy,
    MixedNormSpec,
    RegimeKind,
    applicable_regimes,
    exponent_to_json,
    isotropic_mixed_sum,
    ladder_exponents,
    make_regime,
    partial_mixed_sum,
    regime_constant,
    regime_exponents,
)
from .search import (
    CSV_COLUMNS,
    ladder_empirical_check,
    ratio as ratio_report,
    search_lower_bound,
    sweep_verify,
)

_REGIME_NAMES = [k.value for k in RegimeKind]


def _exponent_list(text: str) -> list[float]:
    return [parse_exponent(tok) for tok in text.split(",") if tok.strip()]


def _broadcast_exponents(text: str, m: int) -> list[float]:
    exps = _exponent_list(text)
    if len(exps) == 1:
        exps = exps * m
    if len(exps) != m:
        raise ValueError(f"expected 1 or {m} exponents; got {len(exps)}")
    return exps


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _fmt_exponent(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:g}"


def _resolve_format(args) -> str:
    if args.format:
        return args.format
    return "pretty" if sys.stdout.isatty() else "json"


def _emit(payload: dict, fmt: str, pretty_lines) -> None:
    if fmt == "json":
        print(json.dumps(payload))
    elif fmt == "pretty":
        for line in pretty_lines:
            print(line)
    else:
        raise ValueError(f"format {fmt!r} not supported for this command")


def _require_seed(args, why: str) -> int:
    if args.seed is None:
        raise ValueError(f"--seed is required: {why}")
    return args.seed


def _load_or_generate(args) -> MultilinearForm:
    has_file = args.form is not None
    has_gen = args.m is not None or args.n is not None
    if has_file == has_gen:
        raise ValueError("give exactly one form source: --form FILE or --m/--n")
    if has_file:
        return load_form(args.form)
    if args.m is None or args.n is None:
        raise ValueError("generator source needs both --m and --n")
    seed = _require_seed(args, "generated forms are randomized")
    return random_form(args.m, args.n, args.dist, seed)


def _slot_exponents(args, m: int) -> tuple[float, ...]:
    if args.p is None:
        raise ValueError("--p is required (comma list, scalar broadcasts, 'inf' allowed)")
    exps = _exponent_list(args.p)
    if len(exps) == 1:
        exps = exps * m
    if len(exps) != m:
        raise ValueError(f"--p must give 1 or {m} exponents; got {len(exps)}")
    return tuple(exps)


def _add_form_source(sub) -> None:
    sub.add_argument("--form", help="path to a JSON form file")
    sub.add_argument("--m", type=int, help="order of a generated form")
    sub.add_argument("--n", type=int, help="dimension of a generated form")
    sub.add_argument(
        "--dist",
        default="gaussian",
        choices=["gaussian", "rademacher_signs", "uniform"],
        help="coefficient distribution for generated forms",
    )


def _add_common(sub) -> None:
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--format", choices=["pretty", "json", "csv"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpforms",
        description="Operator norms of multilinear forms on l_p balls and "
        "summability-inequality checks.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("norm", help="estimate the operator norm of a form")
    _add_form_source(sub)
    _add_common(sub)
    sub.add_argument("--p", help="ball exponents, e.g. 4 or 4,4 or inf")
    sub.add_argument(
        "--estimator", default="ascent", choices=["ascent", "exact-inf", "bracket"]
    )
    sub.add_argument("--starts", type=int, default=32)
    sub.add_argument("--tol", type=float, default=1e-10)
    sub.add_argument("--max-iter", type=int, default=500)
    sub.add_argument("--resolution", type=int, default=4096)

    sub = subs.add_parser("mixed", help="mixed coefficient norms of a form")
    _add_form_source(sub)
    _add_common(sub)
    sub.add_argument("--rho", help="isotropic exponent (or 'inf')")
    sub.add_argument("--inner", help="inner exponent of the nested norm")
    sub.add_argument("--outer", help="outer exponent of the nested norm")
    sub.add_argument("--exclude", type=int, help="1-based slot singled out")

    sub = subs.add_parser("exponents", help="regime exponents or the ladder chain")
    _add_common(sub)
    sub.add_argument("--regime", choices=_REGIME_NAMES)
    sub.add_argument("--m", type=int)
    sub.add_argument("--p", help="exponents for the regime or the ladder")
    sub.add_argument("--ladder", action="store_true", help="compute the ladder chain")
    sub.add_argument("--q", help="target exponents of the ladder")
    sub.add_argument("--lambda0", help="base outer exponent of the ladder")

    sub = subs.add_parser("bounds", help="proven constants per applicable regime")
    _add_common(sub)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--p", required=True)
    sub.add_argument("--regime", choices=_REGIME_NAMES)

    sub = subs.add_parser("ratio", help="score a form against a regime")
    _add_form_source(sub)
    _add_common(sub)
    sub.add_argument("--p", help="ball exponents (defaults to inf for bohnenblust-hille)")
    sub.add_argument("--regime", required=True, choices=_REGIME_NAMES)
    sub.add_argument(
        "--oracle", default="auto", choices=["auto", "exact", "bracket", "ascent"]
    )
    sub.add_argument("--starts", type=int, default=32)
    sub.add_argument("--tol", type=float, default=1e-10)
    sub.add_argument("--max-iter", type=int, default=500)
    sub.add_argument("--resolution", type=int, default=4096)

    sub = subs.add_parser("search", help="hill-climb the ratio toward the constant")
    _add_common(sub)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--p", required=True)
    sub.add_argument("--regime", required=True, choices=_REGIME_NAMES)
    sub.add_argument("--budget", type=int, default=10_000)
    sub.add_argument("--ascent-starts", type=int, default=8)

    sub = subs.add_parser("sweep", help="verify a regime bound over a grid of cells")
    _add_common(sub)
    sub.add_argument("--m", required=True, help="comma list of orders")
    sub.add_argument("--n", required=True, help="comma list of dimensions")
    sub.add_argument("--p", required=True, help="comma list of scalar exponents")
    sub.add_argument("--regime", required=True, choices=_REGIME_NAMES)
    sub.add_argument("--samples", type=int, default=200)
    sub.add_argument("--search-budget", type=int, default=10_000)
    sub.add_argument("--ascent-starts", type=int, default=8)
    sub.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("LPFORMS_THREADS", "1")),
        help="cells run on a thread pool; 1 forces serial execution",
    )

    sub = subs.add_parser("verify", help="run a property suite; exit 1 on failure")
    _add_common(sub)
    sub.add_argument(
        "--suite",
        required=True,
        choices=["contraction", "khinchin", "ladder", "degenerate", "all"],
    )
    sub.add_argument("--m", type=int, default=2, help="array order / form order")
    sub.add_argument("--n", type=int, default=3)
    sub.add_argument("--samples", type=int, default=100)
    sub.add_argument("--p", default="4,4", help="ladder suite: source exponents")
    sub.add_argument("--q", default="inf,inf", help="ladder suite: target exponents")
    sub.add_argument("--lambda0", default="4/3")
    sub.add_argument("--s", default=None, help="ladder suite: inner exponent (default eta1)")
    return parser


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_norm(args) -> int:
    form = _load_or_generate(args)
    fmt = _resolve_format(args)
    if args.estimator == "ascent":
        exps = _slot_exponents(args, form.order)
        seed = _require_seed(args, "alternating ascent uses random starts")
        est = alternating_ascent(
            form, exps, starts=args.starts, tol=args.tol,
            max_iter=args.max_iter, seed=seed,
        )
        params = {
            "estimator": "ascent",
            "p": [exponent_to_json(x) for x in exps],
            "starts": args.starts,
            "tol": args.tol,
            "max_iter": args.max_iter,
            "seed": seed,
        }
    elif args.estimator == "exact-inf":
        est = opnorm_infinity_exact(form)
        params = {"estimator": "exact-inf"}
    else:
        exps = _slot_exponents(args, form.order)
        est = opnorm_grid_bracket(form, exps, resolution=args.resolution)
        params = {
            "estimator": "bracket",
            "p": [exponent_to_json(x) for x in exps],
            "resolution": args.resolution,
        }
    payload = {"form": {"m": form.order, "n": form.dim, "digest": form.digest()},
               "params": params, "estimate": est.to_dict()}
    lines = [f"form: m={form.order} n={form.dim} digest={form.digest()}",
             f"estimator params: {params}",
             f"norm value: {est.value!r}  status: {est.status.value}"]
    if est.lo is not None:
        lines.append(f"bracket: [{est.lo!r}, {est.hi!r}]")
    _emit(payload, fmt, lines)
    return 0


def _cmd_mixed(args) -> int:
    form = _load_or_generate(args)
    fmt = _resolve_format(args)
    if args.rho is not None:
        if args.inner or args.outer or args.exclude:
            raise ValueError("give either --rho or --inner/--outer/--exclude")
        rho = parse_exponent(args.rho)
        value = isotropic_mixed_sum(form, rho)
        payload = {"kind": "isotropic", "rho": exponent_to_json(rho), "value": value}
        lines = [f"isotropic mixed sum (rho={_fmt_exponent(rho)}): {value!r}"]
    else:
        if args.inner is None or args.outer is None or args.exclude is None:
            raise ValueError("nested norm needs --inner, --outer and --exclude")
        spec = MixedNormSpec(
            args.exclude, parse_exponent(args.inner), parse_exponent(args.outer)
        )
        value = partial_mixed_sum(form, spec)
        payload = {
            "kind": "partial",
            "excluded_slot": spec.excluded_slot,
            "inner": exponent_to_json(spec.inner),
            "outer": exponent_to_json(spec.outer),
            "value": value,
        }
        lines = [
            f"partial mixed sum (slot {spec.excluded_slot} out, "
            f"inner={_fmt_exponent(spec.inner)}, outer={_fmt_exponent(spec.outer)}): "
            f"{value!r}"
        ]
    payload["form"] = {"m": form.order, "n": form.dim, "digest": form.digest()}
    _emit(payload, fmt, lines)
    return 0


def _regime_row(regime) -> dict:
    exps = regime_exponents(regime)
    return {
        "regime": regime.kind.value,
        "m": regime.m,
        "p": [exponent_to_json(x) for x in regime.p],
        "inner": exponent_to_json(exps.inner),
        "outer": exponent_to_json(exps.outer),
        "aggregation": exps.policy.value,
        "constant": regime_constant(regime),
    }


def _pretty_regime_row(row: dict) -> str:
    ps = ",".join(str(x) for x in row["p"])
    if row["aggregation"] == AggregationPolicy.FULL.value:
        exps = f"rho={row['inner']}"
    else:
        exps = (f"inner={row['inner']} outer={row['outer']} "
                f"({row['aggregation']})")
    return (f"{row['regime']:<26} m={row['m']} p=({ps}): "
            f"{exps}  constant={row['constant']!r}")


def _cmd_exponents(args) -> int:
    fmt = _resolve_format(args)
    if args.ladder:
        if args.p is None or args.q is None or args.lambda0 is None:
            raise ValueError("--ladder needs --p, --q and --lambda0")
        result = ladder_exponents(
            _exponent_list(args.p), _exponent_list(args.q), parse_exponent(args.lambda0)
        )
        payload = result.to_dict()
        if result.admissible:
            chain = ", ".join(f"{x:.12g}" for x in result.lambda_chain)
            lines = [
                f"admissible: yes",
                f"lambda chain: {chain}",
                f"eta1 = {result.eta1:.12g}  eta2 = {result.eta2:.12g}",
            ]
        else:
            lines = ["admissible: no (sum of 1/p-1/q deficiencies >= 1/lambda0)"]
        _emit(payload, fmt, lines)
        return 0
    if args.regime is None or args.m is None or args.p is None:
        raise ValueError("regime exponents need --regime, --m and --p")
    regime = make_regime(args.regime, args.m, _broadcast_exponents(args.p, args.m))
    row = _regime_row(regime)
    _emit(row, fmt, [_pretty_regime_row(row)])
    return 0


def _cmd_bounds(args) -> int:
    fmt = _resolve_format(args)
    exps = _broadcast_exponents(args.p, args.m)
    if args.regime:
        regimes = [make_regime(args.regime, args.m, exps)]
    else:
        regimes = applicable_regimes(args.m, exps)
    rows = [_regime_row(r) for r in regimes]
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["regime", "m", "p", "inner", "outer", "aggregation", "constant"])
        for row in rows:
            writer.writerow([
                row["regime"], row["m"], ";".join(str(x) for x in row["p"]),
                row["inner"], row["outer"], row["aggregation"], repr(row["constant"]),
            ])
        sys.stdout.write(out.getvalue())
        return 0
    _emit({"rows": rows}, fmt, [_pretty_regime_row(r) for r in rows])
    return 0


def _cmd_ratio(args) -> int:
    form = _load_or_generate(args)
    fmt = _resolve_format(args)
    if args.p is None and args.regime == RegimeKind.BOHNENBLUST_HILLE.value:
        exps = (math.inf,) * form.order
    else:
        exps = _slot_exponents(args, form.order)
    regime = make_regime(args.regime, form.order, exps)
    seed = 0
    if args.oracle in ("auto", "ascent") and not all(math.isinf(x) for x in exps):
        seed = _require_seed(args, "the ascent denominator uses random starts")
    report = ratio_report(
        form, regime, oracle=args.oracle, starts=args.starts, tol=args.tol,
        max_iter=args.max_iter, seed=seed, bracket_resolution=args.resolution,
    )
    lines = [
        f"regime: {regime.describe()}",
        f"mixed value: {report.mixed_value!r}",
        f"norm: {report.norm_estimate.value!r} ({report.norm_estimate.status.value})",
        f"ratio: {report.ratio!r}",
        f"bound: {report.bound!r}  margin: {report.margin!r}",
    ]
    _emit(report.to_dict(), fmt, lines)
    return 0


def _cmd_search(args) -> int:
    fmt = _resolve_format(args)
    seed = _require_seed(args, "search is randomized")
    regime = make_regime(args.regime, args.m, _broadcast_exponents(args.p, args.m))
    report = search_lower_bound(
        regime, args.n, budget=args.budget, seed=seed,
        ascent_starts=args.ascent_starts,
    )
    lines = [
        f"regime: {regime.describe()}  n={args.n} budget={args.budget} seed={seed}",
        f"best ratio: {report.best.ratio!r}  bound: {report.best.bound!r}",
        f"certified: {report.certified}  certified ratio: {report.certified_ratio!r}",
        f"restarts: {report.restarts}  evaluations: {report.evaluations}",
        f"improvements: {len(report.trace)} (last at eval "
        f"{report.trace[-1][0] if report.trace else 0})",
    ]
    _emit(report.to_dict(), fmt, lines)
    return 0


def _cmd_sweep(args) -> int:
    fmt = _resolve_format(args)
    seed = _require_seed(args, "sweeps draw random forms")
    cells = []
    for m in _int_list(args.m):
        for n in _int_list(args.n):
            for p in _exponent_list(args.p):
                cells.append((make_regime(args.regime, m, p), n))
    report = sweep_verify(
        cells, samples=args.samples, seed=seed,
        search_budget=args.search_budget, ascent_starts=args.ascent_starts,
        threads=max(1, args.threads),
    )
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(CSV_COLUMNS)
        for cell in report.cells:
            writer.writerow(cell.csv_row())
        sys.stdout.write(out.getvalue())
    else:
        lines = [
            f"{'regime':<26}{'m':>3}{'n':>3}{'p':>8}{'max_ratio':>14}"
            f"{'bound':>12}{'margin':>12}  result"
        ]
        for cell in report.cells:
            row = cell.csv_row()
            lines.append(
                f"{row[0]:<26}{row[1]:>3}{row[2]:>3}{row[3]:>8}"
                f"{cell.max_ratio:>14.9f}{cell.bound:>12.9f}"
                f"{cell.margin:>12.3e}  {row[7]}"
            )
        lines.append(f"sweep: {'PASS' if report.passed else 'FAIL'}")
        _emit(report.to_dict(), fmt, lines)
    return 0 if report.passed else 1


def _suite_contraction(args, seed: int, check) -> dict:
    d, n = args.m, args.n
    failures = 0
    for i in range(args.samples):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        try:
            check(rng.standard_normal((n,) * d))
        except InvariantViolationError:
            failures += 1
    return {"d": d, "n": n, "samples": args.samples, "failures": failures,
            "pass": failures == 0}


def _suite_degenerate(args, seed: int) -> dict:
    m, n = args.m, args.n
    regime = make_regime(RegimeKind.DEGENERATE, m, float(m))
    worst = -math.inf
    for i in range(args.samples):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        form = MultilinearForm(m, n, rng.standard_normal((n,) * m))
        report = ratio_report(form, regime, starts=8, seed=0)
        worst = max(worst, report.ratio)
    return {"m": m, "n": n, "samples": args.samples, "max_ratio": worst,
            "pass": worst <= 1.0 + 1e-12}


def _suite_ladder(args, seed: int) -> dict:
    p = _exponent_list(args.p)
    q = _exponent_list(args.q)
    lam0 = parse_exponent(args.lambda0)
    ladder = ladder_exponents(p, q, lam0)
    if not ladder.admissible:
        raise RegimeError("ladder suite: configuration not admissible")
    s = parse_exponent(args.s) if args.s is not None else ladder.eta1
    report = ladder_empirical_check(
        p, q, lam0, s, n=args.n, samples=args.samples, seed=seed,
    )
    out = report.to_dict()
    return out


def _cmd_verify(args) -> int:
    fmt = _resolve_format(args)
    seed = _require_seed(args, "verification suites draw random instances")
    suites = (["contraction", "khinchin", "ladder", "degenerate"]
              if args.suite == "all" else [args.suite])
    results = {}
    for name in suites:
        if name == "contraction":
            results[name] = _suite_contraction(args, seed, contraction_check)
        elif name == "khinchin":
            results[name] = _suite_contraction(args, seed, khinchin_multiple_check)
        elif name == "degenerate":
            results[name] = _suite_degenerate(args, seed)
        else:
            results[name] = _suite_ladder(args, seed)
    passed = all(r["pass"] for r in results.values())
    payload = {"seed": seed, "suites": results, "pass": passed}
    lines = [f"{name}: {'PASS' if r['pass'] else 'FAIL'}" for name, r in results.items()]
    lines.append(f"verify: {'PASS' if passed else 'FAIL'}")
    _emit(payload, fmt, lines)
    return 0 if passed else 1


_COMMANDS = {
    "norm": _cmd_norm,
    "mixed": _cmd_mixed,
    "exponents": _cmd_exponents,
    "bounds": _cmd_bounds,
    "ratio": _cmd_ratio,
    "search": _cmd_search,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (RegimeError, CapacityError, DegenerateInputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
