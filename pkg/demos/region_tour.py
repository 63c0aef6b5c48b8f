"""Walk through the achievable-region bounds at the three preset operating points.

For each (rho, rho_f, D) the outer bound and both inner bounds are printed as
vertex lists, together with the slope of the inner bound's diagonal side and
the gap the time-sharing corner leaves to the outer bound.  The last section
shows the two settings where inner and outer provably coincide: full activity
(rho = 1) and an unbounded cooperation budget (D = inf).
"""

import math

from mgregion import (
    INNER_THEOREM1,
    INNER_TIMESHARE,
    compute_m,
    inner_region,
    outer_region,
    region_contains,
    scheme1_corner,
    slow_mg_cap,
)

PRESETS = [
    (0.8, 0.6, 10),
    (0.8, 0.6, 4),
    (0.8, 0.3, 10),
    (0.8, 0.3, 4),
    (0.4, 0.3, 10),
    (0.4, 0.3, 4),
]


def describe(region) -> str:
    verts = ", ".join(f"({v.s_f:.4f}, {v.s_s:.4f})" for v in region.vertices)
    return f"{region.kind:<15} M={region.M:.4f}  [{verts}]"


def main() -> None:
    for rho, rho_f, D in PRESETS:
        cap = slow_mg_cap(rho, D)
        corner = scheme1_corner(rho, rho_f, D)
        print(f"rho={rho} rho_f={rho_f} D={D}")
        print(f"  slow-MG cap {cap:.4f}, two-phase corner ({corner.s_f}, {corner.s_s:.4f})")
        print(f"  diagonal slope M = {compute_m(rho, rho_f, D):.4f}")
        outer = outer_region(rho, rho_f, D)
        for region in (
            outer,
            inner_region(rho, rho_f, D, INNER_THEOREM1),
            inner_region(rho, rho_f, D, INNER_TIMESHARE),
        ):
            print("  " + describe(region))
        gap = outer.vertices[1].s_s - corner.s_s
        print(f"  outer-to-corner slow-MG gap at full fast load: {gap:.4f}")
        inside = region_contains(outer, corner)
        print(f"  corner inside outer region: {inside}")
        print()

    print("coincidence checks (inner == outer, vertex by vertex)")
    for rho, rho_f, D in ((1.0, 0.6, 4), (0.8, 0.6, math.inf)):
        outer = outer_region(rho, rho_f, D)
        inner = inner_region(rho, rho_f, D, INNER_TIMESHARE)
        worst = max(
            max(abs(a.s_f - b.s_f), abs(a.s_s - b.s_s))
            for a, b in zip(outer.vertices, inner.vertices)
        )
        label = "D=inf" if D == math.inf else f"rho={rho}"
        print(f"  {label:<8} max vertex difference {worst:.2e}")


if __name__ == "__main__":
    main()
