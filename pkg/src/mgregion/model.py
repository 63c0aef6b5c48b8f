"""Network model: configuration, random activity, and subnet decomposition.

The network is a line of K transmitter/receiver pairs in which each
transmitter is heard only by its own receiver and the next one up the line.
Every pair is independently active with probability ``rho``, and an active
pair carries a delay-sensitive ("fast") message on top of its delay-tolerant
("slow") one with probability ``rho_f``.  Because interference is only
adjacent, the inactive pairs cut the network into independent *subnets*,
maximal runs of consecutive active pairs, and everything downstream
(scheduling, bounds, simulation) is computed subnet by subnet.

Users are indexed 1..K everywhere, including serialized output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "NetworkConfig",
    "ActivityRealization",
    "Subnet",
    "SubnetDecomposition",
    "sample_activity",
    "decompose_subnets",
    "subnet_length_pmf",
    "BUILTIN_REALIZATIONS",
]


@dataclass(frozen=True)
class NetworkConfig:
    """Parameters of the random-activity network.

    Parameters
    ----------
    K : int
        Number of Tx/Rx pairs.
    rho : float
        Probability that a pair is active, independently of the others.
    rho_f : float
        Conditional probability that an active pair has a fast message.
    D : int or math.inf
        Cooperation budget (total number of conferencing rounds).  The
        closed-form bounds accept ``math.inf``; sampling and scheduling
        need a finite value.
    seed : int
        Master seed.  Trial ``t`` draws from a counter-based stream keyed
        by ``(seed, t)``, so the sample for a given trial index never
        depends on evaluation order or parallel layout.
    """

    K: int
    rho: float
    rho_f: float
    D: int | float
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.K, int) or self.K < 1:
            raise ValueError(f"K must be a positive integer, got {self.K!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not 0.0 <= self.rho_f <= 1.0:
            raise ValueError(f"rho_f must lie in [0, 1], got {self.rho_f!r}")
        if self.D != math.inf and (not isinstance(self.D, int) or self.D < 0):
            raise ValueError(
                f"D must be a nonnegative integer or math.inf, got {self.D!r}"
            )
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in an unsigned 64-bit int, got {self.seed!r}")


@dataclass(frozen=True)
class ActivityRealization:
    """One draw of the network's activity pattern.

    ``active[i]`` and ``fast[i]`` are 0/1 flags for user ``i + 1``.  A fast
    flag may only be set where the user is active.
    """

    active: tuple[int, ...]
    fast: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.active) != len(self.fast):
            raise ValueError("active and fast must have the same length")
        for a, f in zip(self.active, self.fast):
            if a not in (0, 1) or f not in (0, 1):
                raise ValueError("active and fast must be 0/1 vectors")
            if f and not a:
                raise ValueError("fast flags may only be set on active users")

    @property
    def K(self) -> int:
        return len(self.active)

    @property
    def active_users(self) -> tuple[int, ...]:
        """1-based indices of the active users."""
        return tuple(k for k, a in enumerate(self.active, start=1) if a)

    @property
    def fast_users(self) -> tuple[int, ...]:
        """1-based indices of the users with a fast message."""
        return tuple(k for k, f in enumerate(self.fast, start=1) if f)

    def to_json_dict(self) -> dict:
        return {"K": self.K, "active": list(self.active), "fast": list(self.fast)}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ActivityRealization":
        try:
            active = tuple(int(x) for x in doc["active"])
            fast = tuple(int(x) for x in doc["fast"])
        except KeyError as missing:
            raise ValueError(f"realization document lacks a {missing} field") from None
        if "K" in doc and doc["K"] != len(active):
            raise ValueError("K does not match the length of the active vector")
        return cls(active=active, fast=fast)


class Subnet(NamedTuple):
    """A maximal run of consecutive active users."""

    start: int  # 1-based index of the run's first user
    length: int


@dataclass(frozen=True)
class SubnetDecomposition:
    """The subnets of a realization, in increasing order of start index."""

    subnets: tuple[Subnet, ...]
    K: int

    def to_json_list(self) -> list[dict]:
        return [{"start": s.start, "len": s.length} for s in self.subnets]

    def reconstruct_active(self) -> tuple[int, ...]:
        """Rebuild the 0/1 activity vector; inverse of decompose_subnets."""
        bits = [0] * self.K
        for s in self.subnets:
            for k in range(s.start, s.start + s.length):
                bits[k - 1] = 1
        return tuple(bits)


def _trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    # Philox is counter based: putting the trial index in a high counter word
    # gives each trial a disjoint 2^128-draw block of the one keyed stream,
    # so trials are independent and order-insensitive by construction.
    bits = np.random.Philox(key=seed, counter=[0, 0, trial_index, 0])
    return np.random.Generator(bits)


def _sample_bits(cfg: NetworkConfig, trial_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean (active, fast) vectors for one trial; internal fast path."""
    rng = _trial_rng(cfg.seed, trial_index)
    active = rng.random(cfg.K) < cfg.rho
    fast = active & (rng.random(cfg.K) < cfg.rho_f)
    return active, fast


def sample_activity(cfg: NetworkConfig, trial_index: int = 0) -> ActivityRealization:
    """Draw the activity pattern of one trial.

    Deterministic in ``(cfg.seed, trial_index)``: the same pair always yields
    the same realization, whatever other trials were sampled before.
    """
    if not isinstance(trial_index, int) or trial_index < 0:
        raise ValueError(f"trial_index must be a nonnegative integer, got {trial_index!r}")
    active, fast = _sample_bits(cfg, trial_index)
    return ActivityRealization(
        active=tuple(int(a) for a in active),
        fast=tuple(int(f) for f in fast),
    )


def decompose_subnets(r: ActivityRealization) -> SubnetDecomposition:
    """Split a realization into its maximal runs of active users."""
    subnets: list[Subnet] = []
    K = len(r.active)
    k = 1
    while k <= K:
        if r.active[k - 1]:
            start = k
            while k <= K and r.active[k - 1]:
                k += 1
            subnets.append(Subnet(start, k - start))
        else:
            k += 1
    return SubnetDecomposition(subnets=tuple(subnets), K=K)


def subnet_length_pmf(ell: int, k: int, cfg: NetworkConfig) -> float:
    """Probability that the run of active users starting at user k has length ell.

    Conditioned on a run starting at k (user k active, user k-1 not, with
    user 0 counting as inactive), the run extends while users stay active:
    ``rho**ell * (1 - rho)`` when it ends at an inactive user, ``rho**ell``
    when it is cut off by the network edge, and 0 beyond the edge.
    """
    if not 1 <= k <= cfg.K:
        raise ValueError(f"k must lie in 1..K, got {k!r}")
    if ell < 0:
        raise ValueError(f"ell must be nonnegative, got {ell!r}")
    horizon = cfg.K - k + 1
    if ell > horizon:
        return 0.0
    if ell == horizon:
        return cfg.rho**ell
    return cfg.rho**ell * (1.0 - cfg.rho)


def _builtin_20_user_example() -> ActivityRealization:
    # 20 users; 9, 12 and 13 inactive; fast messages at 1, 3, 7, 11 and 15.
    inactive = {9, 12, 13}
    fast = {1, 3, 7, 11, 15}
    return ActivityRealization(
        active=tuple(0 if k in inactive else 1 for k in range(1, 21)),
        fast=tuple(1 if k in fast else 0 for k in range(1, 21)),
    )


BUILTIN_REALIZATIONS: dict[str, ActivityRealization] = {
    "fig5": _builtin_20_user_example(),
}
"""Named example realizations selectable from the command line."""
