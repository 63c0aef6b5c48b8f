"""Monte Carlo estimates converging onto the closed forms.

Runs the two-phase scheduler at the benchmark operating point for a ladder of
network sizes and lines the estimates up against three references: the exact
finite-K expectation (what an unbiased simulation should hit at that K), the
asymptotic series value, and the region-vertex corner formula.  The corner
and the series differ by a small positive amount at this operating point;
the table makes that visible, and the discrepancy report at the end
quantifies it with standard-error units.
"""

from mgregion import (
    NetworkConfig,
    PatternCondition,
    Scheme,
    discrepancy_report,
    estimate_mg,
    finite_k_expectation,
    scheme1_corner,
    scheme1_corner_series_gap,
    scheme1_slow_mg_series,
)

RHO, RHO_F, D = 0.8, 0.6, 4
TRIALS = 4000


def main() -> None:
    corner = scheme1_corner(RHO, RHO_F, D)
    series = scheme1_slow_mg_series(RHO, RHO_F, D)
    print(f"two-phase scheme at rho={RHO}, rho_f={RHO_F}, D={D}, {TRIALS} trials per row")
    print(f"corner formula  s_s = {corner.s_s:.6f}")
    print(f"series value    s_s = {series:.6f}")
    print(f"corner + gap == series, gap = {scheme1_corner_series_gap(RHO, RHO_F, D):.6f}")
    print()
    header = f"{'K':>6} {'estimate':>10} {'stderr':>9} {'finite-K':>10} {'|est-exactK|':>13}"
    print(header)
    for K in (50, 200, 800, 3200):
        cfg = NetworkConfig(K=K, rho=RHO, rho_f=RHO_F, D=D, seed=2)
        est = estimate_mg(cfg, Scheme.TWO_PHASE, TRIALS)
        exact_k = finite_k_expectation(cfg, Scheme.TWO_PHASE)
        diff = abs(est.point.s_s - exact_k.s_s)
        print(
            f"{K:>6} {est.point.s_s:>10.6f} {est.stderr_s:>9.6f}"
            f" {exact_k.s_s:>10.6f} {diff:>13.6f}"
        )
    print()
    print("the finite-K column approaches the series value, not the corner:")
    big = finite_k_expectation(
        NetworkConfig(K=20000, rho=RHO, rho_f=RHO_F, D=D), Scheme.TWO_PHASE
    )
    print(f"  finite-K at K=20000: {big.s_s:.6f}  (series {series:.6f}, corner {corner.s_s:.6f})")
    print()

    print("discrepancy report, display vs prose pattern condition (K=1000):")
    report = discrepancy_report(RHO, RHO_F, D, K=1000, n_trials=4000, seed=2)
    refs = report["references"]
    for name in ("corner", "series", "finite_k_display"):
        print(f"  reference {name:<18} {refs[name]:.6f}")
    for cond in ("display", "prose"):
        est = report["estimates"][cond]
        print(
            f"  {cond:<8} s_s={est['s_s']:.6f}  s_f={est['s_f']:.6f}"
            f"  closest reference: {est['supports']}"
        )


if __name__ == "__main__":
    main()
