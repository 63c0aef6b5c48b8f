"""Scheduling of one realization: silencing patterns, user states, MG counts.

Two achievability schemes are implemented.

* Scheme 1 (two phases): odd users get their fast chance in phase 1, even
  users in phase 2.  Within each phase every subnet deactivates a sparse set
  of users so that the remaining segments are at most D+1 wide and can be
  served with one Tx round and D-1 Rx rounds.  The deactivated set follows
  one of two periodic patterns:

  - pattern A silences subnet offsets D+2, 2(D+2), ... (even offsets when D
    is even),
  - pattern B silences offsets D+1, D+1+(D+2), ... (odd offsets).

  Pattern B exists to push the silenced positions off the fast users of the
  phase; it costs at most one extra silenced user.

* Scheme 2 (one phase, slow only): every subnet uses pattern A and all
  remaining users send slow messages.  Per realization its total meets the
  cooperation converse bound with equality.

Per-phase MG totals count one unit per non-silenced active user; the
scheme-1 figure of merit is the average of its two phase totals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import ActivityRealization, SubnetDecomposition, decompose_subnets

__all__ = [
    "Scheme",
    "PatternCondition",
    "INACTIVE",
    "SILENCED",
    "FAST",
    "SLOW",
    "SLOW_EDGE",
    "PhaseSchedule",
    "RealizationMg",
    "silenced_offsets",
    "pattern_for",
    "schedule_scheme1",
    "schedule_scheme2",
    "scheme1_subnet_sum",
    "realization_mg",
    "converse_sum_bound",
]


class Scheme(enum.IntEnum):
    """The two schemes; integer values match the CLI's --scheme flag."""

    TWO_PHASE = 1  # fast and slow traffic, two parity phases
    SLOW_ONLY = 2  # slow traffic only, single phase


class PatternCondition(enum.Enum):
    """Rule deciding which silencing pattern a subnet uses in a phase.

    DISPLAY
        Pattern A when the subnet's first user has the phase's parity, or
        when the subnet holds no fast user of that parity.
    PROSE
        Pattern A when the subnet's first user is itself a fast user of the
        phase's parity, or when the subnet holds no fast user of that parity.

    DISPLAY is the operative rule.  With an even budget D every pattern-A
    offset is even and every pattern-B offset is odd relative to the subnet
    start, so under DISPLAY a silenced user never has the phase's parity and
    fast users are never silenced.  Under PROSE they can be, which lowers the
    achieved fast MG; the variant is kept for the simulation-based
    discrepancy report.
    """

    DISPLAY = "display"
    PROSE = "prose"


INACTIVE = "inactive"
SILENCED = "silenced"
FAST = "fast"
SLOW = "slow"
SLOW_EDGE = "slow_edge"

_PATTERN_NONE = "none"


def _check_scheme1_budget(D: int) -> None:
    if not isinstance(D, int) or D < 2 or D % 2:
        raise ValueError(
            f"the two-phase scheme needs an even cooperation budget D >= 2, got {D!r}"
        )


def _check_scheme2_budget(D: int) -> None:
    if not isinstance(D, int) or D < 0:
        raise ValueError(f"the slow-only scheme needs an integer budget D >= 0, got {D!r}")


def silenced_offsets(length: int, pattern: str, D: int) -> tuple[int, ...]:
    """1-based offsets within a subnet that the given pattern deactivates.

    Pattern A silences every (D+2)-th user counted from the subnet start,
    pattern B starts at offset D+1 and repeats with the same period.
    Offsets beyond the subnet are dropped, so short subnets lose nobody.
    """
    if length < 1:
        raise ValueError(f"length must be positive, got {length!r}")
    period = D + 2
    if pattern == "A":
        return tuple(range(period, length + 1, period))
    if pattern == "B":
        return tuple(range(D + 1, length + 1, period))
    raise ValueError(f"unknown pattern {pattern!r}")


def _pattern(
    start: int,
    length: int,
    fast: tuple[int, ...],
    phase_parity: int,
    condition: PatternCondition,
) -> str:
    # no validation: callers have checked the budget and phase already
    has_phase_fast = False
    k = start + (start + phase_parity) % 2  # first member with the phase's parity
    while k < start + length:
        if fast[k - 1]:
            has_phase_fast = True
            break
        k += 2
    if not has_phase_fast:
        return "A"
    if condition is PatternCondition.DISPLAY:
        return "A" if start % 2 == phase_parity else "B"
    return "A" if (fast[start - 1] and start % 2 == phase_parity) else "B"


def pattern_for(
    subnet: tuple[int, int],
    phase: int,
    r: ActivityRealization,
    D: int,
    condition: PatternCondition = PatternCondition.DISPLAY,
) -> str:
    """Silencing pattern ("A" or "B") of one subnet in one phase of scheme 1."""
    _check_scheme1_budget(D)
    if phase not in (1, 2):
        raise ValueError(f"phase must be 1 or 2, got {phase!r}")
    start, length = subnet
    return _pattern(start, length, r.fast, phase % 2, condition)


@dataclass(frozen=True)
class PhaseSchedule:
    """What every user does during one phase.

    ``phase`` is 1 or 2 under the two-phase scheme and None under the
    slow-only scheme.  ``states[i]`` is the state string of user ``i + 1``;
    ``patterns[j]`` is "A", "B" or "none" for subnet ``j``.
    """

    phase: int | None
    D: int
    states: tuple[str, ...]
    subnets: SubnetDecomposition
    patterns: tuple[str, ...]

    def users_in_state(self, state: str) -> tuple[int, ...]:
        return tuple(k for k, s in enumerate(self.states, start=1) if s == state)

    def to_json_dict(self) -> dict:
        doc: dict = {
            "K": len(self.states),
            "D": self.D,
            "scheme": 2 if self.phase is None else 1,
        }
        if self.phase is not None:
            doc["phase"] = self.phase
        doc["users"] = [
            {"k": k, "state": s} for k, s in enumerate(self.states, start=1)
        ]
        doc["subnets"] = [
            {"start": sn.start, "len": sn.length, "pattern": p}
            for sn, p in zip(self.subnets.subnets, self.patterns)
        ]
        return doc


def _schedule_phase(
    r: ActivityRealization,
    D: int,
    phase: int,
    decomp: SubnetDecomposition,
    condition: PatternCondition,
) -> PhaseSchedule:
    phase_parity = phase % 2
    states: list[str] = [SLOW if a else INACTIVE for a in r.active]
    patterns: list[str] = []
    for sn in decomp.subnets:
        pattern = _pattern(sn.start, sn.length, r.fast, phase_parity, condition)
        patterns.append(pattern)
        silenced = {sn.start - 1 + off for off in silenced_offsets(sn.length, pattern, D)}
        # walk the subnet, closing a coordination segment at each silenced user
        segment: list[int] = []
        for k in range(sn.start, sn.start + sn.length + 1):
            in_segment = k < sn.start + sn.length and k not in silenced
            if in_segment:
                segment.append(k)
                continue
            if k in silenced:
                states[k - 1] = SILENCED
            for pos in segment:
                if r.fast[pos - 1] and pos % 2 == phase_parity:
                    states[pos - 1] = FAST
                elif pos == segment[0] or pos == segment[-1]:
                    states[pos - 1] = SLOW_EDGE
                else:
                    states[pos - 1] = SLOW
            segment = []
    return PhaseSchedule(
        phase=phase,
        D=D,
        states=tuple(states),
        subnets=decomp,
        patterns=tuple(patterns),
    )


def schedule_scheme1(
    r: ActivityRealization,
    D: int,
    condition: PatternCondition = PatternCondition.DISPLAY,
) -> tuple[PhaseSchedule, PhaseSchedule]:
    """Both phase schedules of the two-phase scheme."""
    _check_scheme1_budget(D)
    decomp = decompose_subnets(r)
    return (
        _schedule_phase(r, D, 1, decomp, condition),
        _schedule_phase(r, D, 2, decomp, condition),
    )


def schedule_scheme2(r: ActivityRealization, D: int) -> PhaseSchedule:
    """The single-phase schedule of the slow-only scheme."""
    _check_scheme2_budget(D)
    decomp = decompose_subnets(r)
    states: list[str] = [SLOW if a else INACTIVE for a in r.active]
    for sn in decomp.subnets:
        for off in range(D + 2, sn.length + 1, D + 2):
            states[sn.start + off - 2] = SILENCED
    return PhaseSchedule(
        phase=None,
        D=D,
        states=tuple(states),
        subnets=decomp,
        patterns=tuple(_PATTERN_NONE for _ in decomp.subnets),
    )


def scheme1_subnet_sum(ell: int, condition_a: bool, D: int) -> int:
    """Non-silenced users of a length-ell subnet in one phase of scheme 1.

    Pattern A keeps ``ell - floor(ell / (D+2))`` users.  Pattern B keeps
    ``ell - 1 - floor((ell - D - 1) / (D+2))`` users, which equals
    ``ell - floor((ell + 1) / (D+2))``; for ``ell <= D`` pattern B silences
    nobody and both patterns keep all ell users.
    """
    _check_scheme1_budget(D)
    if ell < 1:
        raise ValueError(f"ell must be positive, got {ell!r}")
    period = D + 2
    if condition_a:
        return ell - ell // period
    return ell - (ell + 1) // period


@dataclass(frozen=True)
class RealizationMg:
    """MG totals (not yet divided by K) achieved on one realization."""

    fast_sum: float
    slow_sum: float

    @property
    def total(self) -> float:
        return self.fast_sum + self.slow_sum


def realization_mg(
    r: ActivityRealization,
    D: int,
    scheme: Scheme,
    condition: PatternCondition = PatternCondition.DISPLAY,
) -> RealizationMg:
    """Fast and slow MG sums achieved on one realization by one scheme.

    Counts non-silenced users directly from the per-subnet pattern choices;
    agrees state-for-state with the schedules built by schedule_scheme1 and
    schedule_scheme2.
    """
    scheme = Scheme(scheme)
    decomp = decompose_subnets(r)
    if scheme is Scheme.SLOW_ONLY:
        _check_scheme2_budget(D)
        period = D + 2
        slow = sum(sn.length - sn.length // period for sn in decomp.subnets)
        return RealizationMg(fast_sum=0.0, slow_sum=float(slow))

    _check_scheme1_budget(D)
    total = 0
    scheduled_fast = 0
    for phase_parity in (1, 0):
        for sn in decomp.subnets:
            pattern = _pattern(sn.start, sn.length, r.fast, phase_parity, condition)
            total += scheme1_subnet_sum(sn.length, pattern == "A", D)
            if condition is PatternCondition.DISPLAY:
                continue
            if pattern == "B":
                # under PROSE a phase-parity fast user may sit on a silenced
                # (odd) offset; it then loses its fast slot for good
                silenced = {
                    sn.start - 1 + off
                    for off in silenced_offsets(sn.length, "B", D)
                }
                scheduled_fast -= sum(
                    1
                    for k in silenced
                    if r.fast[k - 1] and k % 2 == phase_parity
                )
    n_fast = sum(r.fast)
    scheduled_fast += n_fast  # every fast user not silenced in its own phase
    fast_sum = scheduled_fast / 2.0
    return RealizationMg(fast_sum=fast_sum, slow_sum=total / 2.0 - fast_sum)


def converse_sum_bound(r: ActivityRealization, D: int) -> int:
    """Upper bound on the total MG sum of any scheme with budget D.

    Equals the slow-only scheme's total; the two-phase scheme never exceeds
    it because pattern B silences at least as many users as pattern A.
    """
    if not isinstance(D, int) or D < 0:
        raise ValueError(f"D must be a nonnegative integer, got {D!r}")
    period = D + 2
    return sum(
        sn.length - sn.length // period for sn in decompose_subnets(r).subnets
    )
