"""Check every closed-form series against a brute-force partial sum.

The bounds module rests on three geometric-flavored sums plus two textbook
base identities.  Each closed form is compared here against a 100000-term
truncation at a grid of operating points; the worst relative error is
printed per point.  The third sum's closed form divides by 1 - rho_f, so the
rho_f -> 1 edge is shown separately: the truncated sum stays finite and the
corner formula takes over exactly there.
"""

import math

from mgregion import (
    NetworkConfig,
    Scheme,
    exact_expectation,
    finite_k_expectation,
    first_sum_closed,
    first_sum_truncated,
    scheme1_corner,
    second_sum_closed,
    second_sum_truncated,
    series_identities,
    third_sum_closed,
    third_sum_truncated,
)

N_TERMS = 100_000


def rel(closed: float, oracle: float) -> float:
    return abs(closed - oracle) / abs(oracle)


def main() -> None:
    print(f"closed forms vs {N_TERMS}-term truncated sums")
    print(f"{'rho':>5} {'rho_f':>6} {'D':>3} {'first':>9} {'second':>9} {'third':>9}")
    for rho in (0.3, 0.6, 0.9):
        for rho_f, D in ((0.2, 4), (0.7, 2), (0.5, 10)):
            errs = (
                rel(first_sum_closed(rho), first_sum_truncated(rho, N_TERMS)),
                rel(second_sum_closed(rho, rho_f, D), second_sum_truncated(rho, rho_f, D, N_TERMS)),
                rel(third_sum_closed(rho, rho_f, D), third_sum_truncated(rho, rho_f, D, N_TERMS)),
            )
            print(
                f"{rho:>5} {rho_f:>6} {D:>3}"
                + "".join(f" {e:>9.1e}" for e in errs)
            )
    print()

    print("base identities at c = 0.77")
    xcx, geo = series_identities(0.77, 500)
    xcx_oracle = math.fsum(x * 0.77**x for x in range(1, 5000))
    geo_oracle = math.fsum(0.77**x for x in range(501))
    print(f"  sum x*c^x      closed {xcx:.12f}  oracle {xcx_oracle:.12f}")
    print(f"  sum_0^500 c^x  closed {geo:.12f}  oracle {geo_oracle:.12f}")
    print()

    print("the rho_f -> 1 edge of the third sum")
    for rho_f in (0.9, 0.99, 0.999):
        closed = third_sum_closed(0.8, rho_f, 4)
        print(f"  rho_f={rho_f:<6} closed {closed:.9f}")
    truncated = third_sum_truncated(0.8, 1.0, 4, N_TERMS)
    print(f"  rho_f=1.0    closed form singular; truncated sum {truncated:.9f}")
    corner = scheme1_corner(0.8, 1.0, 4)
    print(f"  corner formula handles the edge directly: s_s = {corner.s_s:.9f}")
    print()

    print("independent cross-check: exhaustive enumeration at K=9")
    cfg = NetworkConfig(K=9, rho=0.65, rho_f=0.45, D=2)
    for scheme in (Scheme.TWO_PHASE, Scheme.SLOW_ONLY):
        analytic = finite_k_expectation(cfg, scheme)
        exhaustive = exact_expectation(cfg, scheme)
        diff = max(abs(analytic.s_f - exhaustive.s_f), abs(analytic.s_s - exhaustive.s_s))
        print(f"  scheme {int(scheme)}: analytic == enumerated to {diff:.1e}")


if __name__ == "__main__":
    main()
