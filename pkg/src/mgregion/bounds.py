"""Closed-form MG bounds, series building blocks, and exact finite-K oracles.

All quantities are per-user multiplexing gains in the large-SNR sense, for
the line network of ``model``: activity probability ``rho``, fast-message
probability ``rho_f``, cooperation budget ``D``.

The achievable region in the (fast, slow) MG plane is described by three
polylines with vertices ``(0, cap) -> (s_f_max, mid) -> (s_f_max, 0)`` where
``s_f_max = rho * rho_f / 2``:

* the outer bound, with ``mid = cap - s_f_max``,
* an inner bound whose diagonal side has slope ``-M`` with ``M >= 1``
  (``mid = cap - M * s_f_max``), and
* the time-sharing inner bound through the two-phase scheme's corner.

``cap`` is the total-MG ceiling enforced by silencing (slow_mg_cap); the
slow-only scheme attains it, so the region collapses to the outer bound as
``rho -> 1`` or ``D -> inf``.

A note on the two-phase corner.  Two closed forms circulate for its slow
coordinate: the corner formula used by the region builders
(``scheme1_corner``), and the value obtained by assembling the underlying
subnet-length series term by term (``scheme1_slow_mg_series``).  They differ
by the sign of one term; the exact difference is
``scheme1_corner_series_gap``, small and positive (about 2.1e-3 at
rho=0.8, rho_f=0.6, D=4, vanishing as D grows or rho -> 1).  Exhaustive
enumeration and Monte Carlo both land on the series value, so the corner
formula is the conservative one; it is kept as the region vertex because it
is the reference value the region plots are defined by, and the gap identity
is checked by the verification command.
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple

import numpy as np

from .model import NetworkConfig, subnet_length_pmf
from .scheduler import PatternCondition, Scheme, realization_mg

__all__ = [
    "MgPoint",
    "MgRegion",
    "OUTER",
    "INNER_THEOREM1",
    "INNER_TIMESHARE",
    "compute_m",
    "slow_mg_cap",
    "scheme1_corner",
    "scheme1_slow_mg_series",
    "scheme1_corner_series_gap",
    "scheme2_point",
    "series_identities",
    "first_sum_closed",
    "second_sum_closed",
    "third_sum_closed",
    "first_sum_truncated",
    "second_sum_truncated",
    "third_sum_truncated",
    "finite_k_expectation",
    "exact_expectation",
    "inner_region",
    "outer_region",
    "region_contains",
    "region_to_json_dict",
    "region_to_csv",
]


class MgPoint(NamedTuple):
    """A (fast MG, slow MG) pair, both per user."""

    s_f: float
    s_s: float


OUTER = "outer"
INNER_THEOREM1 = "inner-theorem1"
INNER_TIMESHARE = "inner-timeshare"

_REGION_KINDS = (OUTER, INNER_THEOREM1, INNER_TIMESHARE)


class MgRegion(NamedTuple):
    """A polyline-bounded region of achievable (fast, slow) MG pairs.

    ``vertices`` runs from the slow-MG axis intercept ``(0, cap)`` through
    the diagonal side's far end down to the fast-MG axis.  ``M`` is the
    magnitude of the diagonal side's slope (1 for the outer bound).
    """

    kind: str
    rho: float
    rho_f: float
    D: int | float
    M: float
    cap: float
    vertices: tuple[MgPoint, ...]


def _check_unit(name: str, x: float, *, low_open: bool = False, high_open: bool = False) -> None:
    lo_ok = x > 0.0 if low_open else x >= 0.0
    hi_ok = x < 1.0 if high_open else x <= 1.0
    if not (lo_ok and hi_ok):
        lo, hi = "(" if low_open else "[", ")" if high_open else "]"
        raise ValueError(f"{name} must lie in {lo}0, 1{hi}, got {x!r}")


def _check_budget(D: int | float, *, even: bool, minimum: int, allow_inf: bool) -> None:
    if D == math.inf:
        if allow_inf:
            return
        raise ValueError("D must be finite here")
    if not isinstance(D, int) or D < minimum or (even and D % 2):
        kind = "an even" if even else "an"
        raise ValueError(f"D must be {kind} integer >= {minimum} or math.inf, got {D!r}")


def compute_m(rho: float, rho_f: float, D: int | float) -> float:
    """Slope magnitude of the inner bound's diagonal side.

    Each unit of fast MG costs M units of slow MG along that side; M >= 1
    with equality at rho = 1 or D = inf, where the inner and outer bounds
    meet.
    """
    _check_unit("rho", rho, low_open=True)
    _check_unit("rho_f", rho_f, low_open=True)
    _check_budget(D, even=True, minimum=0, allow_inf=True)
    if rho == 1.0 or D == math.inf:
        return 1.0
    q = 1.0 - rho_f
    p = D + 2
    t = rho**p * q ** (D // 2 + 1)
    shrink = (1.0 - rho) ** 2 / (rho * rho_f)
    return 1.0 + shrink * (
        rho**p / (1.0 - rho**p) + rho ** (D + 1) * q ** (D // 2) / (1.0 - t)
    )


def slow_mg_cap(rho: float, D: int | float) -> float:
    """Ceiling on the total (fast plus slow) per-user MG.

    The price of cutting subnets into segments of coordinable width: with
    budget D, one user in every D+2 must stay quiet.
    """
    _check_unit("rho", rho, low_open=True)
    _check_budget(D, even=False, minimum=0, allow_inf=True)
    if D == math.inf:
        return 1.0 if rho == 1.0 else rho
    p = D + 2
    if rho == 1.0:
        return (p - 1) / p
    return rho - (1.0 - rho) * rho**p / (1.0 - rho**p)


def scheme1_corner(rho: float, rho_f: float, D: int | float) -> MgPoint:
    """Corner operating point of the two-phase scheme.

    The fast coordinate ``rho * rho_f / 2`` is the largest fast MG either
    inner bound supports.  The slow coordinate is the reference corner
    formula used by the region builders; the scheme's exact large-K average
    is ``scheme1_slow_mg_series``, larger by ``scheme1_corner_series_gap``.
    """
    _check_unit("rho", rho, low_open=True)
    _check_unit("rho_f", rho_f)
    _check_budget(D, even=True, minimum=2, allow_inf=True)
    s_f = rho * rho_f / 2.0
    if D == math.inf:
        total = 1.0 if rho == 1.0 else rho
        return MgPoint(s_f, total - s_f)
    if rho == 1.0:
        return MgPoint(s_f, (D + 1) / (D + 2) - rho_f / 2.0)
    q = 1.0 - rho_f
    p = D + 2
    t = rho**p * q ** (D // 2 + 1)
    s_s = (
        rho
        - s_f
        - (1.0 - rho**2) * rho ** (D + 1) / (2.0 * (1.0 - rho**p))
        - (1.0 - rho) ** 2 * rho ** (D + 1) * q ** (D // 2) / (2.0 * (1.0 - t))
    )
    return MgPoint(s_f, s_s)


def scheme1_corner_series_gap(rho: float, rho_f: float, D: int | float) -> float:
    """Exact difference scheme1_slow_mg_series - scheme1_corner.s_s.

    The corner formula carries a minus sign on its last term where the
    term-by-term series assembly yields a plus, so the two differ by twice
    that term.  Always >= 0; zero at rho = 1, rho_f = 1, or D = inf.
    """
    _check_unit("rho", rho, low_open=True)
    _check_unit("rho_f", rho_f)
    _check_budget(D, even=True, minimum=2, allow_inf=True)
    if D == math.inf or rho == 1.0:
        return 0.0
    q = 1.0 - rho_f
    p = D + 2
    t = rho**p * q ** (D // 2 + 1)
    return (1.0 - rho) ** 2 * rho ** (D + 1) * q ** (D // 2) / (1.0 - t)


def scheme1_slow_mg_series(rho: float, rho_f: float, D: int | float) -> float:
    """Large-K expected slow MG of the two-phase scheme, assembled from the
    subnet-length series.

    This is the value exhaustive enumeration and simulation converge to.
    At rho = 1, rho_f = 1 or D = inf the gap term vanishes and the corner
    formula is already exact.
    """
    _check_unit("rho", rho, low_open=True)
    _check_unit("rho_f", rho_f)
    _check_budget(D, even=True, minimum=2, allow_inf=True)
    if D == math.inf or rho == 1.0 or rho_f == 1.0:
        return scheme1_corner(rho, rho_f, D).s_s
    first = first_sum_closed(rho)
    second = second_sum_closed(rho, rho_f, D)
    third = third_sum_closed(rho, rho_f, D)
    return (1.0 - rho) ** 2 / 2.0 * (first - second - third) - rho * rho_f / 2.0


def scheme2_point(rho: float, D: int | float) -> MgPoint:
    """Operating point of the slow-only scheme: no fast MG, cap-level slow MG."""
    return MgPoint(0.0, slow_mg_cap(rho, D))


def series_identities(c: float, n: int) -> tuple[float, float]:
    """Closed forms of the two base sums feeding every series here:
    ``sum_{x>=1} x c**x`` and ``sum_{x=0}^{n} c**x``.
    """
    _check_unit("c", c, low_open=True, high_open=True)
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    return c / (1.0 - c) ** 2, (1.0 - c ** (n + 1)) / (1.0 - c)


def first_sum_closed(rho: float) -> float:
    """``sum_{ell>=1} 2 ell rho**ell``: twice the mean-weighted length series."""
    _check_unit("rho", rho, low_open=True, high_open=True)
    return 2.0 * rho / (1.0 - rho) ** 2


def second_sum_closed(rho: float, rho_f: float, D: int) -> float:
    """``sum_{ell>=1} rho**ell * floor(ell/(D+2)) * (1 + (1-rho_f)**floor(ell/2))``."""
    _check_unit("rho", rho, low_open=True, high_open=True)
    _check_unit("rho_f", rho_f)
    _check_budget(D, even=True, minimum=0, allow_inf=False)
    q = 1.0 - rho_f
    p = D + 2
    t = rho**p * q ** (D // 2 + 1)
    return (1.0 + rho) * (
        rho**p / ((1.0 - rho**2) * (1.0 - rho**p)) + t / ((1.0 - q * rho**2) * (1.0 - t))
    )


def third_sum_closed(rho: float, rho_f: float, D: int) -> float:
    """``sum_{ell>=1} rho**ell * floor((ell+1)/(D+2)) * (1 - (1-rho_f)**floor(ell/2))``.

    Singular at rho_f = 1 (the closed form divides by 1 - rho_f even though
    the sum itself converges); callers on that edge should use the corner
    formula directly.
    """
    _check_unit("rho", rho, low_open=True, high_open=True)
    _check_unit("rho_f", rho_f, high_open=True)
    _check_budget(D, even=True, minimum=0, allow_inf=False)
    q = 1.0 - rho_f
    p = D + 2
    t = rho**p * q ** (D // 2 + 1)
    return rho**p / (rho * (1.0 - rho) * (1.0 - rho**p)) - (1.0 + rho * q) * t / (
        rho * q * (1.0 - q * rho**2) * (1.0 - t)
    )


def _term_grid(n_terms: int) -> np.ndarray:
    if not isinstance(n_terms, int) or n_terms < 1:
        raise ValueError(f"n_terms must be a positive integer, got {n_terms!r}")
    return np.arange(1, n_terms + 1, dtype=np.int64)


def first_sum_truncated(rho: float, n_terms: int = 100_000) -> float:
    """Direct partial sum matching first_sum_closed; numeric oracle."""
    _check_unit("rho", rho, low_open=True, high_open=True)
    ell = _term_grid(n_terms)
    return float(np.sum(2.0 * ell * rho**ell))


def second_sum_truncated(rho: float, rho_f: float, D: int, n_terms: int = 100_000) -> float:
    """Direct partial sum matching second_sum_closed; numeric oracle."""
    _check_unit("rho", rho, low_open=True, high_open=True)
    _check_unit("rho_f", rho_f)
    _check_budget(D, even=True, minimum=0, allow_inf=False)
    ell = _term_grid(n_terms)
    q = 1.0 - rho_f
    return float(np.sum(rho**ell * (ell // (D + 2)) * (1.0 + q ** (ell // 2))))


def third_sum_truncated(rho: float, rho_f: float, D: int, n_terms: int = 100_000) -> float:
    """Direct partial sum matching third_sum_closed; numeric oracle."""
    _check_unit("rho", rho, low_open=True, high_open=True)
    _check_unit("rho_f", rho_f)
    _check_budget(D, even=True, minimum=0, allow_inf=False)
    ell = _term_grid(n_terms)
    q = 1.0 - rho_f
    return float(np.sum(rho**ell * ((ell + 1) // (D + 2)) * (1.0 - q ** (ell // 2))))


def _phase_pair_weight(ell: int, rho_f: float, D: int, condition: PatternCondition) -> float:
    """Expected two-phase sum of non-silenced counts for one length-ell subnet.

    Averages the pattern choice over the fast flags inside the subnet.
    Exactly one phase's parity matches the subnet's first user, so the sum
    over both phases depends on the length alone, not the start position.
    """
    q = 1.0 - rho_f
    p = D + 2
    s_a = ell - ell // p
    s_b = ell - (ell + 1) // p
    q_half_down = q ** (ell // 2)  # no fast among the opposite-parity members
    if condition is PatternCondition.DISPLAY:
        # matching phase: always pattern A; other phase: A only if the
        # subnet has no fast user of that parity
        return s_a + q_half_down * s_a + (1.0 - q_half_down) * s_b
    # PROSE: the matching phase also needs the first user itself fast
    a_match = rho_f + q ** ((ell + 1) // 2)
    return (
        a_match * s_a
        + (1.0 - a_match) * s_b
        + q_half_down * s_a
        + (1.0 - q_half_down) * s_b
    )


def finite_k_expectation(
    cfg: NetworkConfig,
    scheme: Scheme,
    condition: PatternCondition = PatternCondition.DISPLAY,
) -> MgPoint:
    """Exact expected per-user (fast, slow) MG at finite K, in closed form.

    Sums over subnet start positions and lengths: a subnet starts at k when
    user k is active and user k-1 is not (user 0 counts as inactive), and
    its expected contribution depends only on its length.  Under the
    two-phase scheme with the DISPLAY condition no fast user is ever
    silenced, so the fast part is exactly ``rho * rho_f / 2`` at every K;
    the PROSE split has no closed per-subnet form and is not supported here
    (use exact_expectation or the Monte Carlo estimate for it).
    """
    scheme = Scheme(scheme)
    rho, rho_f, D, K = cfg.rho, cfg.rho_f, cfg.D, cfg.K
    if scheme is Scheme.TWO_PHASE:
        _check_budget(D, even=True, minimum=2, allow_inf=False)
        if condition is not PatternCondition.DISPLAY:
            raise ValueError(
                "finite_k_expectation supports the DISPLAY condition only; "
                "the PROSE fast/slow split has no closed per-subnet form"
            )

        def weight(ell: int) -> float:
            return 0.5 * _phase_pair_weight(ell, rho_f, D, condition)

    else:
        _check_budget(D, even=False, minimum=0, allow_inf=False)
        p = D + 2

        def weight(ell: int) -> float:
            return float(ell - ell // p)

    total = 0.0
    for k in range(1, K + 1):
        p_free = 1.0 if k == 1 else 1.0 - rho
        if p_free == 0.0:
            continue
        acc = 0.0
        for ell in range(1, K - k + 2):
            acc += subnet_length_pmf(ell, k, cfg) * weight(ell)
        total += p_free * acc
    if scheme is Scheme.TWO_PHASE:
        s_f = rho * rho_f / 2.0
        return MgPoint(s_f, total / K - s_f)
    return MgPoint(0.0, total / K)


class _Bits(NamedTuple):
    # minimal stand-in for ActivityRealization on the enumeration hot path
    active: tuple[int, ...]
    fast: tuple[int, ...]


def exact_expectation(
    cfg: NetworkConfig,
    scheme: Scheme,
    condition: PatternCondition = PatternCondition.DISPLAY,
) -> MgPoint:
    """Exhaustive expectation of realization_mg over every realization.

    Enumerates the per-user alternatives inactive / active-slow / active-fast
    with their probabilities (zero-probability branches pruned, so the
    rho_f in {0, 1} and rho = 1 corners stay cheap) and averages the
    scheduler's per-realization MG.  Independent of the series machinery by
    construction; limited to K <= 14.
    """
    scheme = Scheme(scheme)
    if cfg.K > 14:
        raise ValueError(f"exhaustive enumeration is limited to K <= 14, got K={cfg.K}")
    if cfg.D == math.inf:
        raise ValueError("exhaustive enumeration needs a finite D")
    states = [
        (1.0 - cfg.rho, 0, 0),
        (cfg.rho * (1.0 - cfg.rho_f), 1, 0),
        (cfg.rho * cfg.rho_f, 1, 1),
    ]
    alts = [s for s in states if s[0] > 0.0]
    fast_terms: list[float] = []
    slow_terms: list[float] = []
    for combo in itertools.product(alts, repeat=cfg.K):
        prob = 1.0
        for p, _, _ in combo:
            prob *= p
        r = _Bits(tuple(c[1] for c in combo), tuple(c[2] for c in combo))
        mg = realization_mg(r, cfg.D, scheme, condition)
        fast_terms.append(prob * mg.fast_sum)
        slow_terms.append(prob * mg.slow_sum)
    return MgPoint(math.fsum(fast_terms) / cfg.K, math.fsum(slow_terms) / cfg.K)


def outer_region(rho: float, rho_f: float, D: int | float) -> MgRegion:
    """The converse region: total MG capped, fast MG at most rho*rho_f/2."""
    _check_unit("rho_f", rho_f)
    cap = slow_mg_cap(rho, D)
    s_f_max = rho * rho_f / 2.0
    vertices = (
        MgPoint(0.0, cap),
        MgPoint(s_f_max, cap - s_f_max),
        MgPoint(s_f_max, 0.0),
    )
    return MgRegion(OUTER, rho, rho_f, D, 1.0, cap, vertices)


def inner_region(rho: float, rho_f: float, D: int | float, kind: str = INNER_TIMESHARE) -> MgRegion:
    """An achievable region polyline of the requested kind.

    ``inner-theorem1`` uses the diagonal of slope -compute_m(...); the
    ``inner-timeshare`` diagonal joins ``(0, cap)`` to the two-phase
    scheme's corner.  Both share the cap intercept and the fast-MG maximum.
    """
    if kind not in (INNER_THEOREM1, INNER_TIMESHARE):
        raise ValueError(
            f"kind must be {INNER_THEOREM1!r} or {INNER_TIMESHARE!r}, got {kind!r}"
        )
    _check_unit("rho_f", rho_f)
    cap = slow_mg_cap(rho, D)
    s_f_max = rho * rho_f / 2.0
    if kind == INNER_THEOREM1:
        m = compute_m(rho, rho_f, D)
        mid = cap - m * s_f_max
    else:
        mid = scheme1_corner(rho, rho_f, D).s_s
        m = (cap - mid) / s_f_max if s_f_max > 0.0 else 1.0
    vertices = (MgPoint(0.0, cap), MgPoint(s_f_max, mid), MgPoint(s_f_max, 0.0))
    return MgRegion(kind, rho, rho_f, D, m, cap, vertices)


def region_contains(region: MgRegion, p: MgPoint, tol: float = 1e-12) -> bool:
    """Whether the point lies in the region, with slack tol on every side."""
    v_top, v_mid, _ = region.vertices
    cap, s_f_max, mid = v_top.s_s, v_mid.s_f, v_mid.s_s
    if p.s_f < -tol or p.s_s < -tol or p.s_f > s_f_max + tol:
        return False
    if s_f_max <= 0.0:
        return p.s_s <= cap + tol
    slope = (cap - mid) / s_f_max
    return p.s_s + slope * p.s_f <= cap + tol


def region_to_json_dict(region: MgRegion) -> dict:
    return {
        "kind": region.kind,
        "rho": region.rho,
        "rho_f": region.rho_f,
        "D": "inf" if region.D == math.inf else region.D,
        "M": region.M,
        "cap": region.cap,
        "vertices": [[v.s_f, v.s_s] for v in region.vertices],
    }


def region_to_csv(region: MgRegion) -> str:
    lines = ["s_f,s_s"]
    lines += [f"{v.s_f:.12g},{v.s_s:.12g}" for v in region.vertices]
    return "\n".join(lines) + "\n"
