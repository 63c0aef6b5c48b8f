"""Command-line interface.

Subcommands
-----------
region
    One bound region (outer, inner-theorem1 or inner-timeshare) as JSON or CSV.
simulate
    Monte Carlo estimate of a scheme's operating point.
verify
    Internal consistency checks: closed-form sums against truncated oracles,
    exhaustive enumeration against the analytic finite-K expectation, and the
    corner/series gap identity.
figure
    The five-curve region family at one of three preset parameter pairs.
schedule
    Per-user schedule of a scheme on a stored or built-in realization.

Exit codes: 0 on success, 1 when a verify check fails (or a simulation trips
an internal assertion), 2 on bad usage or invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import bounds, montecarlo
from .model import ActivityRealization, BUILTIN_REALIZATIONS, NetworkConfig
from .scheduler import PatternCondition, Scheme, schedule_scheme1, schedule_scheme2

_FIGURE_PARAMS = {2: (0.8, 0.6), 3: (0.8, 0.3), 4: (0.4, 0.3)}


def _budget(text: str) -> int | float:
    if text.strip().lower() == "inf":
        return math.inf
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}")


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load_realization(source: str) -> ActivityRealization:
    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        try:
            return BUILTIN_REALIZATIONS[name]
        except KeyError:
            known = ", ".join(sorted(BUILTIN_REALIZATIONS))
            raise ValueError(f"unknown builtin realization {name!r} (known: {known})")
    with open(source, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        return ActivityRealization.from_json_dict(doc)
    except KeyError as exc:
        raise ValueError(f"realization file {source!r} lacks key {exc}")


def cmd_region(args: argparse.Namespace) -> int:
    if args.kind == bounds.OUTER:
        region = bounds.outer_region(args.rho, args.rho_f, args.d)
    else:
        region = bounds.inner_region(args.rho, args.rho_f, args.d, kind=args.kind)
    if args.format == "csv":
        text = bounds.region_to_csv(region)
    else:
        text = _dump(bounds.region_to_json_dict(region))
    _emit(text, args.output)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = NetworkConfig(K=args.k, rho=args.rho, rho_f=args.rho_f, D=args.d, seed=args.seed)
    est = montecarlo.estimate_mg(
        cfg,
        Scheme(args.scheme),
        args.trials,
        condition=PatternCondition(args.pattern_condition),
    )
    _emit(_dump(est.to_json_dict()), args.output)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    rho, rho_f, D = args.rho, args.rho_f, args.d
    n_terms = args.truncation
    if not isinstance(n_terms, int) or n_terms < 1:
        raise ValueError(f"--truncation must be a positive integer, got {n_terms!r}")
    if not 1 <= args.enum_k <= 14:
        raise ValueError(f"--enum-k must lie in 1..14, got {args.enum_k!r}")
    tol_series = 1e-8
    tol_exact = 1e-12
    checks: list[dict] = []

    def record(name: str, ok: bool, **detail) -> None:
        checks.append({"name": name, "status": "pass" if ok else "fail", "detail": detail})

    def skip(name: str, reason: str) -> None:
        checks.append({"name": name, "status": "skipped", "detail": {"reason": reason}})

    def rel_err(a: float, b: float) -> float:
        scale = max(abs(a), abs(b))
        return abs(a - b) if scale == 0.0 else abs(a - b) / scale

    interior_rho = 0.0 < rho < 1.0
    even_budget = isinstance(D, int) and D >= 0 and D % 2 == 0

    # base series identities against direct partial sums
    if interior_rho:
        closed_xcx, _ = bounds.series_identities(rho, 0)
        oracle_xcx = bounds.first_sum_truncated(rho, n_terms) / 2.0
        err = rel_err(closed_xcx, oracle_xcx)
        record("xcx_identity", err <= tol_series,
               closed=closed_xcx, oracle=oracle_xcx, rel_err=err, tol=tol_series)
        m = min(n_terms, 10_000)
        _, closed_geo = bounds.series_identities(rho, m)
        oracle_geo = math.fsum(rho**x for x in range(m + 1))
        err = rel_err(closed_geo, oracle_geo)
        record("geometric_partial", err <= tol_exact,
               closed=closed_geo, oracle=oracle_geo, n=m, rel_err=err, tol=tol_exact)
        closed = bounds.first_sum_closed(rho)
        oracle = bounds.first_sum_truncated(rho, n_terms)
        err = rel_err(closed, oracle)
        record("first_sum", err <= tol_series,
               closed=closed, oracle=oracle, rel_err=err, tol=tol_series)
    else:
        for name in ("xcx_identity", "geometric_partial", "first_sum"):
            skip(name, "closed series need 0 < rho < 1")

    if interior_rho and even_budget:
        closed = bounds.second_sum_closed(rho, rho_f, D)
        oracle = bounds.second_sum_truncated(rho, rho_f, D, n_terms)
        err = rel_err(closed, oracle)
        record("second_sum", err <= tol_series,
               closed=closed, oracle=oracle, rel_err=err, tol=tol_series)
        if rho_f == 1.0:
            skip("third_sum", "closed form is singular at rho_f = 1")
        else:
            closed = bounds.third_sum_closed(rho, rho_f, D)
            oracle = bounds.third_sum_truncated(rho, rho_f, D, n_terms)
            err = rel_err(closed, oracle)
            record("third_sum", err <= tol_series,
                   closed=closed, oracle=oracle, rel_err=err, tol=tol_series)
    else:
        reason = "needs 0 < rho < 1 and an even D >= 0"
        skip("second_sum", reason)
        skip("third_sum", reason)

    # the assembled series equals the corner formula plus the exact gap term
    if 0.0 < rho <= 1.0 and even_budget and D >= 2:
        assembled = bounds.scheme1_slow_mg_series(rho, rho_f, D)
        corner = bounds.scheme1_corner(rho, rho_f, D).s_s
        gap = bounds.scheme1_corner_series_gap(rho, rho_f, D)
        err = abs(assembled - (corner + gap))
        record("corner_series_gap_identity", err <= tol_exact,
               assembled=assembled, corner=corner, gap=gap, abs_err=err, tol=tol_exact)
    else:
        skip("corner_series_gap_identity", "needs 0 < rho <= 1 and an even D >= 2")

    # exhaustive enumeration against the analytic finite-K expectation
    if D == math.inf:
        skip("enumeration_scheme1", "needs a finite D")
        skip("enumeration_scheme2", "needs a finite D")
    else:
        cfg = NetworkConfig(K=args.enum_k, rho=rho, rho_f=rho_f, D=D, seed=0)
        if even_budget and D >= 2:
            exact = bounds.exact_expectation(cfg, Scheme.TWO_PHASE)
            analytic = bounds.finite_k_expectation(cfg, Scheme.TWO_PHASE)
            err = max(abs(exact.s_f - analytic.s_f), abs(exact.s_s - analytic.s_s))
            record("enumeration_scheme1", err <= tol_exact,
                   exact=[exact.s_f, exact.s_s], analytic=[analytic.s_f, analytic.s_s],
                   K=args.enum_k, abs_err=err, tol=tol_exact)
        else:
            skip("enumeration_scheme1", "needs an even D >= 2")
        exact = bounds.exact_expectation(cfg, Scheme.SLOW_ONLY)
        analytic = bounds.finite_k_expectation(cfg, Scheme.SLOW_ONLY)
        err = max(abs(exact.s_f - analytic.s_f), abs(exact.s_s - analytic.s_s))
        record("enumeration_scheme2", err <= tol_exact,
               exact=[exact.s_f, exact.s_s], analytic=[analytic.s_f, analytic.s_s],
               K=args.enum_k, abs_err=err, tol=tol_exact)

    all_pass = all(c["status"] != "fail" for c in checks)
    report = {
        "rho": rho,
        "rho_f": rho_f,
        "D": "inf" if D == math.inf else D,
        "truncation": n_terms,
        "enum_k": args.enum_k,
        "checks": checks,
        "all_pass": all_pass,
    }
    _emit(_dump(report), args.output)
    return 0 if all_pass else 1


def cmd_figure(args: argparse.Namespace) -> int:
    rho, rho_f = _FIGURE_PARAMS[args.which]
    curves: list[dict] = []
    combined = bounds.outer_region(rho, rho_f, math.inf)
    curves.append({"label": "outer+inner D=inf", **bounds.region_to_json_dict(combined)})
    slopes: dict[str, float] = {}
    for D in (10, 4):
        outer = bounds.outer_region(rho, rho_f, D)
        curves.append({"label": f"outer D={D}", **bounds.region_to_json_dict(outer)})
        inner = bounds.inner_region(rho, rho_f, D, kind=bounds.INNER_TIMESHARE)
        doc = bounds.region_to_json_dict(inner)
        # legends quote the analytic diagonal slope, not the corner polyline's
        doc["M"] = bounds.compute_m(rho, rho_f, D)
        slopes[str(D)] = doc["M"]
        curves.append({"label": f"inner D={D}", **doc})
    if args.format == "csv":
        lines = ["label,s_f,s_s"]
        for curve in curves:
            for s_f, s_s in curve["vertices"]:
                lines.append(f"{curve['label']},{s_f:.12g},{s_s:.12g}")
        text = "\n".join(lines) + "\n"
    else:
        text = _dump({
            "which": args.which,
            "rho": rho,
            "rho_f": rho_f,
            "M_by_D": slopes,
            "curves": curves,
        })
    _emit(text, args.output)
    return 0


def cmd_schedule(args: argparse.Namespace) -> int:
    r = _load_realization(args.realization)
    scheme = Scheme(args.scheme)
    if scheme is Scheme.SLOW_ONLY:
        if args.phase is not None:
            raise ValueError("--phase applies to scheme 1 only")
        doc = schedule_scheme2(r, args.d).to_json_dict()
    else:
        phase1, phase2 = schedule_scheme1(r, args.d)
        if args.phase is None:
            doc = [phase1.to_json_dict(), phase2.to_json_dict()]
        else:
            doc = (phase1 if args.phase == 1 else phase2).to_json_dict()
    _emit(_dump(doc), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mgregion",
        description="MG regions and scheduling simulation for a random-activity line network",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def prob_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--rho", type=float, required=True, help="activity probability")
        p.add_argument("--rho-f", dest="rho_f", type=float, required=True,
                       help="fast-message probability given active")

    def output_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", metavar="PATH", help="write to PATH instead of stdout")

    p = sub.add_parser("region", help="one bound region as JSON or CSV")
    prob_args(p)
    p.add_argument("--d", type=_budget, required=True, help="cooperation budget, integer or 'inf'")
    p.add_argument("--kind", required=True,
                   choices=[bounds.OUTER, bounds.INNER_THEOREM1, bounds.INNER_TIMESHARE])
    p.add_argument("--format", choices=["json", "csv"], default="json")
    output_arg(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of a scheme's MG point")
    prob_args(p)
    p.add_argument("--d", type=int, required=True, help="cooperation budget (finite)")
    p.add_argument("--k", type=int, required=True, help="number of users")
    p.add_argument("--trials", type=int, required=True, help="number of sampled realizations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheme", type=int, choices=[1, 2], required=True)
    p.add_argument("--pattern-condition", dest="pattern_condition",
                   choices=["display", "prose"], default="display")
    output_arg(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="closed forms vs independent oracles")
    prob_args(p)
    p.add_argument("--d", type=_budget, required=True, help="cooperation budget, integer or 'inf'")
    p.add_argument("--truncation", type=int, default=100_000,
                   help="terms kept in the truncated series oracles")
    p.add_argument("--enum-k", dest="enum_k", type=int, default=10,
                   help="network size for the exhaustive enumeration check (<= 14)")
    output_arg(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure", help="five-curve region family at preset parameters")
    p.add_argument("--which", type=int, choices=sorted(_FIGURE_PARAMS), required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    output_arg(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("schedule", help="per-user schedule on one realization")
    p.add_argument("--realization", required=True,
                   help="JSON file path, or builtin:<name> (e.g. builtin:fig5)")
    p.add_argument("--d", type=int, required=True, help="cooperation budget (finite)")
    p.add_argument("--scheme", type=int, choices=[1, 2], required=True)
    p.add_argument("--phase", type=int, choices=[1, 2],
                   help="emit only this phase (scheme 1)")
    output_arg(p)
    p.set_defaults(func=cmd_schedule)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
