"""Monte Carlo estimation of the per-user (fast, slow) MG pair.

Trials are keyed by ``(cfg.seed, trial_index)`` through a counter-based
generator, so an estimate depends only on the configuration and the number
of trials, never on chunking or evaluation order.  The per-trial accounting
is a vectorized mirror of ``scheduler.realization_mg``: runs of active users
are extracted once per chunk with a padded diff/cumsum pass, then pattern
choices and non-silenced counts are computed for all subnets of all trials
at once.  Every trial is checked against the cooperation converse bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    MgPoint,
    finite_k_expectation,
    scheme1_corner,
    scheme1_corner_series_gap,
    scheme1_slow_mg_series,
    slow_mg_cap,
    compute_m,
)
from .model import NetworkConfig, _sample_bits
from .scheduler import PatternCondition, Scheme

__all__ = ["MgEstimate", "estimate_mg", "discrepancy_report"]

_CONVERSE_SLACK = 1e-9


@dataclass(frozen=True)
class MgEstimate:
    """A simulation estimate with its per-coordinate standard errors.

    ``target_s_f`` and ``target_s_s`` carry the matching closed-form values
    when one exists (the corner formula for the two-phase scheme under the
    DISPLAY condition, the cap for the slow-only scheme), else None.
    """

    point: MgPoint
    stderr_f: float | None
    stderr_s: float | None
    n_trials: int
    K: int
    scheme: Scheme
    seed: int
    condition: PatternCondition = PatternCondition.DISPLAY
    target_s_f: float | None = None
    target_s_s: float | None = None

    def to_json_dict(self) -> dict:
        doc: dict = {
            "scheme": int(self.scheme),
            "K": self.K,
            "n_trials": self.n_trials,
            "seed": self.seed,
            "pattern_condition": self.condition.value,
            "s_f": self.point.s_f,
            "s_s": self.point.s_s,
            "stderr_f": self.stderr_f,
            "stderr_s": self.stderr_s,
        }
        if self.target_s_s is not None:
            doc["target_s_s"] = self.target_s_s
        if self.target_s_f is not None:
            doc["target_s_f"] = self.target_s_f
        return doc


def _trial_matrix(cfg: NetworkConfig, t0: int, t1: int) -> tuple[np.ndarray, np.ndarray]:
    """Stack the (active, fast) draws of trials t0..t1-1 into boolean matrices."""
    n = t1 - t0
    active = np.empty((n, cfg.K), dtype=bool)
    fast = np.empty((n, cfg.K), dtype=bool)
    for i in range(n):
        active[i], fast[i] = _sample_bits(cfg, t0 + i)
    return active, fast


def _chunk_metrics(
    active: np.ndarray,
    fast: np.ndarray,
    D: int,
    scheme: Scheme,
    condition: PatternCondition,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-trial (fast_sum, total, converse_cap) for a stacked chunk.

    Rows are separated by one always-inactive padding column so runs never
    straddle trials; diff over the flattened mask yields every run at once.
    """
    n, K = active.shape
    width = K + 1
    padded = np.zeros((n, width), dtype=bool)
    padded[:, :K] = active
    flat = padded.ravel()
    delta = np.diff(flat.astype(np.int8), prepend=np.int8(0))
    starts = np.flatnonzero(delta == 1)
    ends = np.flatnonzero(delta == -1)  # padding guarantees one per start
    lengths = ends - starts
    rows = starts // width
    period = D + 2
    s_a = lengths - lengths // period
    caps = np.bincount(rows, weights=s_a.astype(np.float64), minlength=n)

    if scheme is Scheme.SLOW_ONLY:
        return np.zeros(n), caps.copy(), caps

    s_b = lengths - (lengths + 1) // period
    fpad = np.zeros((n, width), dtype=bool)
    fpad[:, :K] = fast
    fflat = fpad.ravel()
    # user k sits at flat column k-1, so odd users occupy even columns
    col_parity = np.zeros(width, dtype=bool)
    col_parity[0::2] = True
    odd_user = np.tile(col_parity, n)
    cum_odd = np.concatenate(([0], np.cumsum(fflat & odd_user)))
    cum_even = np.concatenate(([0], np.cumsum(fflat & ~odd_user)))
    n_odd = cum_odd[ends] - cum_odd[starts]
    n_even = cum_even[ends] - cum_even[starts]
    start_odd = odd_user[starts]
    if condition is PatternCondition.DISPLAY:
        a1 = start_odd | (n_odd == 0)
        a2 = ~start_odd | (n_even == 0)
    else:
        first_fast = fflat[starts]
        a1 = (first_fast & start_odd) | (n_odd == 0)
        a2 = (first_fast & ~start_odd) | (n_even == 0)
    counts = np.where(a1, s_a, s_b) + np.where(a2, s_a, s_b)
    totals = 0.5 * np.bincount(rows, weights=counts.astype(np.float64), minlength=n)

    if condition is PatternCondition.DISPLAY:
        fast_sums = 0.5 * fast.sum(axis=1).astype(np.float64)
    else:
        # a phase-parity fast user on a pattern-B offset loses its fast slot
        j = np.flatnonzero(fflat)
        run_id = np.searchsorted(starts, j, side="right") - 1
        rel = j - starts[run_id] + 1
        on_b_offset = (rel + 1) % period == 0
        is_odd = odd_user[j]
        lost = on_b_offset & np.where(is_odd, ~a1[run_id], ~a2[run_id])
        lost_per_trial = np.bincount(rows[run_id[lost]], minlength=n)
        fast_sums = 0.5 * (fast.sum(axis=1) - lost_per_trial)
    return fast_sums, totals, caps


def _targets(
    cfg: NetworkConfig, scheme: Scheme, condition: PatternCondition
) -> tuple[float | None, float | None]:
    if cfg.rho == 0.0:
        return None, None
    if scheme is Scheme.SLOW_ONLY:
        return 0.0, slow_mg_cap(cfg.rho, cfg.D)
    if condition is PatternCondition.DISPLAY:
        corner = scheme1_corner(cfg.rho, cfg.rho_f, cfg.D)
        return corner.s_f, corner.s_s
    return None, None


def estimate_mg(
    cfg: NetworkConfig,
    scheme: Scheme,
    n_trials: int,
    condition: PatternCondition = PatternCondition.DISPLAY,
    chunk_size: int = 8192,
) -> MgEstimate:
    """Estimate the per-user (fast, slow) MG pair over n_trials realizations.

    Deterministic in ``(cfg, scheme, n_trials, condition)``; ``chunk_size``
    only bounds memory.  Raises AssertionError if any sampled trial exceeded
    the converse bound (which would mean a scheduling bug, so it is checked
    on every trial).
    """
    scheme = Scheme(scheme)
    if not isinstance(n_trials, int) or n_trials < 1:
        raise ValueError(f"n_trials must be a positive integer, got {n_trials!r}")
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be positive, got {chunk_size!r}")
    if cfg.D == math.inf:
        raise ValueError("simulation needs a finite D")
    if scheme is Scheme.TWO_PHASE and (cfg.D < 2 or cfg.D % 2):
        raise ValueError(f"the two-phase scheme needs an even D >= 2, got {cfg.D!r}")
    # keep the flattened chunk around 2M cells whatever K is
    chunk_size = min(chunk_size, max(1, 2_000_000 // (cfg.K + 1)))

    fast_vals = np.empty(n_trials, dtype=np.float64)
    slow_vals = np.empty(n_trials, dtype=np.float64)
    for t0 in range(0, n_trials, chunk_size):
        t1 = min(t0 + chunk_size, n_trials)
        active, fast = _trial_matrix(cfg, t0, t1)
        fast_sums, totals, caps = _chunk_metrics(active, fast, cfg.D, scheme, condition)
        bad = totals > caps + _CONVERSE_SLACK
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise AssertionError(
                f"converse bound violated at trial {t0 + i}: "
                f"total {totals[i]} > cap {caps[i]}"
            )
        fast_vals[t0:t1] = fast_sums / cfg.K
        slow_vals[t0:t1] = (totals - fast_sums) / cfg.K

    point = MgPoint(float(np.mean(fast_vals)), float(np.mean(slow_vals)))
    if n_trials >= 2:
        root_n = math.sqrt(n_trials)
        stderr_f = float(np.std(fast_vals, ddof=1) / root_n)
        stderr_s = float(np.std(slow_vals, ddof=1) / root_n)
    else:
        stderr_f = stderr_s = None
    target_s_f, target_s_s = _targets(cfg, scheme, condition)
    return MgEstimate(
        point=point,
        stderr_f=stderr_f,
        stderr_s=stderr_s,
        n_trials=n_trials,
        K=cfg.K,
        scheme=scheme,
        seed=cfg.seed,
        condition=condition,
        target_s_f=target_s_f,
        target_s_s=target_s_s,
    )


def _estimate_block(est: MgEstimate, references: dict[str, float]) -> dict:
    block: dict = {
        "s_f": est.point.s_f,
        "s_s": est.point.s_s,
        "stderr_f": est.stderr_f,
        "stderr_s": est.stderr_s,
    }
    if est.stderr_s:
        z_scores = {
            name: (est.point.s_s - value) / est.stderr_s
            for name, value in references.items()
        }
        block["z_vs"] = z_scores
        block["supports"] = min(z_scores, key=lambda name: abs(z_scores[name]))
    return block


def discrepancy_report(
    rho: float,
    rho_f: float,
    D: int,
    K: int,
    n_trials: int,
    seed: int = 0,
) -> dict:
    """Simulate the two-phase scheme under both pattern conditions and line
    the estimates up against the closed forms.

    The references are the corner formula (region vertex), the term-by-term
    series value, the diagonal-side corner ``cap - M * rho * rho_f / 2``,
    and the exact finite-K expectation under the DISPLAY condition (the
    estimates run at finite K, so this is the value an unbiased simulation
    should straddle).  Each estimate reports a z-score against every
    reference and names the one it supports best.
    """
    cfg = NetworkConfig(K=K, rho=rho, rho_f=rho_f, D=D, seed=seed)
    references = {
        "corner": scheme1_corner(rho, rho_f, D).s_s,
        "series": scheme1_slow_mg_series(rho, rho_f, D),
        "inner_theorem1_mid": slow_mg_cap(rho, D) - compute_m(rho, rho_f, D) * rho * rho_f / 2.0,
        "finite_k_display": finite_k_expectation(cfg, Scheme.TWO_PHASE).s_s,
    }
    est_display = estimate_mg(cfg, Scheme.TWO_PHASE, n_trials, PatternCondition.DISPLAY)
    est_prose = estimate_mg(cfg, Scheme.TWO_PHASE, n_trials, PatternCondition.PROSE)
    return {
        "rho": rho,
        "rho_f": rho_f,
        "D": D,
        "K": K,
        "n_trials": n_trials,
        "seed": seed,
        "corner_series_gap": scheme1_corner_series_gap(rho, rho_f, D),
        "references": references,
        "estimates": {
            "display": _estimate_block(est_display, references),
            "prose": _estimate_block(est_prose, references),
        },
    }
