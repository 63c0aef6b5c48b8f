"""Scheduler: patterns, silencing, per-user states, MG accounting."""

import itertools
import random
from typing import NamedTuple

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgregion import (
    FAST,
    INACTIVE,
    SILENCED,
    SLOW,
    SLOW_EDGE,
    ActivityRealization,
    BUILTIN_REALIZATIONS,
    PatternCondition,
    Scheme,
    converse_sum_bound,
    decompose_subnets,
    pattern_for,
    realization_mg,
    schedule_scheme1,
    schedule_scheme2,
    scheme1_subnet_sum,
    silenced_offsets,
)
from mgregion.scheduler import _pattern


class Bits(NamedTuple):
    # duck-typed stand-in, skips per-element validation on hot loops
    active: tuple[int, ...]
    fast: tuple[int, ...]


def random_realization(rng: random.Random, K: int) -> ActivityRealization:
    active = tuple(rng.randint(0, 1) for _ in range(K))
    fast = tuple(a and rng.randint(0, 1) for a in active)
    return ActivityRealization(active, fast)


budgets = st.sampled_from([2, 4, 6, 10])


@given(ell=st.integers(1, 300), D=budgets)
def test_silenced_offsets_parity_and_spacing(ell, D):
    offs_a = silenced_offsets(ell, "A", D)
    offs_b = silenced_offsets(ell, "B", D)
    assert all(o % 2 == 0 for o in offs_a)  # even offsets from the start
    assert all(o % 2 == 1 for o in offs_b)  # odd offsets (D even)
    for offs in (offs_a, offs_b):
        assert all(1 <= o <= ell for o in offs)
        assert all(b - a == D + 2 for a, b in zip(offs, offs[1:]))
    # every residual segment is short enough to coordinate with budget D
    for offs in (offs_a, offs_b):
        cuts = [0, *offs, ell + 1]
        assert all(b - a - 1 <= D + 1 for a, b in zip(cuts, cuts[1:]))


@given(ell=st.integers(1, 300), D=budgets)
def test_subnet_sum_matches_offsets(ell, D):
    assert scheme1_subnet_sum(ell, True, D) == ell - len(silenced_offsets(ell, "A", D))
    assert scheme1_subnet_sum(ell, False, D) == ell - len(silenced_offsets(ell, "B", D))
    extra = scheme1_subnet_sum(ell, True, D) - scheme1_subnet_sum(ell, False, D)
    assert extra in (0, 1)  # pattern B silences at most one more user


def test_pattern_for_fig5_cases():
    r = BUILTIN_REALIZATIONS["fig5"]
    subnets = [(s.start, s.length) for s in decompose_subnets(r).subnets]
    assert [pattern_for(s, 1, r, 6) for s in subnets] == ["A", "B", "B"]
    assert [pattern_for(s, 2, r, 6) for s in subnets] == ["A", "A", "A"]


def test_pattern_for_validation():
    r = ActivityRealization((1, 1), (0, 0))
    with pytest.raises(ValueError):
        pattern_for((1, 2), 1, r, 3)  # odd budget
    with pytest.raises(ValueError):
        pattern_for((1, 2), 1, r, 0)
    with pytest.raises(ValueError):
        pattern_for((1, 2), 3, r, 2)
    with pytest.raises(ValueError):
        silenced_offsets(3, "C", 2)
    with pytest.raises(ValueError):
        silenced_offsets(0, "A", 2)
    with pytest.raises(ValueError):
        scheme1_subnet_sum(0, True, 2)
    with pytest.raises(ValueError):
        schedule_scheme1(r, 4.0)
    with pytest.raises(ValueError):
        schedule_scheme2(r, -1)


@settings(max_examples=60)
@given(data=st.data(), K=st.integers(1, 35), D=budgets,
       condition=st.sampled_from(list(PatternCondition)))
def test_schedule_counts_match_subnet_sum(data, K, D, condition):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    r = random_realization(rng, K)
    decomp = decompose_subnets(r)
    for schedule in schedule_scheme1(r, D, condition):
        assert len(schedule.states) == K
        for sn, pattern in zip(decomp.subnets, schedule.patterns):
            members = schedule.states[sn.start - 1 : sn.start - 1 + sn.length]
            on = sum(1 for s in members if s != SILENCED)
            assert INACTIVE not in members
            assert on == scheme1_subnet_sum(sn.length, pattern == "A", D)
        # states outside subnets are inactive
        active_positions = {
            k for sn in decomp.subnets for k in range(sn.start, sn.start + sn.length)
        }
        for k, s in enumerate(schedule.states, start=1):
            assert (s == INACTIVE) == (k not in active_positions)


@settings(max_examples=60)
@given(data=st.data(), K=st.integers(1, 35), D=budgets,
       condition=st.sampled_from(list(PatternCondition)))
def test_accounting_matches_schedules(data, K, D, condition):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    r = random_realization(rng, K)
    phases = schedule_scheme1(r, D, condition)
    total = sum(
        sum(1 for s in p.states if s not in (INACTIVE, SILENCED)) for p in phases
    ) / 2
    fast = sum(sum(1 for s in p.states if s == FAST) for p in phases) / 2
    mg = realization_mg(r, D, Scheme.TWO_PHASE, condition)
    assert mg.total == total and mg.fast_sum == fast
    assert mg.total <= converse_sum_bound(r, D)
    single = schedule_scheme2(r, D)
    mg2 = realization_mg(r, D, Scheme.SLOW_ONLY)
    assert mg2.slow_sum == sum(1 for s in single.states if s == SLOW)
    assert mg2.fast_sum == 0.0
    assert mg2.slow_sum == converse_sum_bound(r, D)


def _phase_fast_silenced(active, fast, D, condition):
    """Count fast users silenced in the phase where they are fast-eligible."""
    decomp = decompose_subnets(Bits(active, fast))
    bad = 0
    for phase_parity in (1, 0):
        for sn in decomp.subnets:
            pat = _pattern(sn.start, sn.length, fast, phase_parity, condition)
            for off in silenced_offsets(sn.length, pat, D):
                k = sn.start - 1 + off
                if fast[k - 1] and k % 2 == phase_parity:
                    bad += 1
    return bad


@pytest.mark.parametrize("K", range(1, 9))
def test_display_never_silences_phase_fast_exhaustive_small(K):
    # full state-level check over all 3^K inactive/slow/fast assignments
    for bits in itertools.product((0, 1, 2), repeat=K):
        active = tuple(1 if b else 0 for b in bits)
        fast = tuple(1 if b == 2 else 0 for b in bits)
        r = ActivityRealization(active, fast)
        for D in (2, 4):
            for phase, schedule in zip((1, 2), schedule_scheme1(r, D)):
                for k in r.fast_users:
                    if k % 2 == phase % 2:
                        assert schedule.states[k - 1] == FAST


def test_display_never_silences_phase_fast_exhaustive_k12():
    for bits in itertools.product((0, 1, 2), repeat=12):
        active = tuple(1 if b else 0 for b in bits)
        fast = tuple(1 if b == 2 else 0 for b in bits)
        assert _phase_fast_silenced(active, fast, 4, PatternCondition.DISPLAY) == 0


def test_display_never_silences_phase_fast_random_large():
    rng = random.Random(2024)
    for _ in range(25):
        r = random_realization(rng, 1500)
        for D in (2, 6, 10):
            assert _phase_fast_silenced(r.active, r.fast, D, PatternCondition.DISPLAY) == 0


def test_prose_can_silence_a_fast_user():
    # length-3 subnet, slow first user, fast user on the odd offset D+1
    r = ActivityRealization((1, 1, 1), (0, 0, 1))
    display = realization_mg(r, 2, Scheme.TWO_PHASE, PatternCondition.DISPLAY)
    prose = realization_mg(r, 2, Scheme.TWO_PHASE, PatternCondition.PROSE)
    assert display.fast_sum == 0.5
    assert prose.fast_sum == 0.0  # user 3 lands on the pattern-B offset
    assert _phase_fast_silenced(r.active, r.fast, 2, PatternCondition.PROSE) == 1
    ph1 = schedule_scheme1(r, 2, PatternCondition.PROSE)[0]
    assert ph1.states == (SLOW_EDGE, SLOW_EDGE, SILENCED)


def test_scheme2_profile():
    r = ActivityRealization((1,) * 9, (0,) * 9)
    schedule = schedule_scheme2(r, 0)  # D = 0 keeps every second user
    assert schedule.phase is None
    assert schedule.patterns == ("none",)
    assert schedule.users_in_state(SILENCED) == (2, 4, 6, 8)
    assert schedule.users_in_state(SLOW) == (1, 3, 5, 7, 9)
    assert SLOW_EDGE not in schedule.states
    assert realization_mg(r, 0, Scheme.SLOW_ONLY).slow_sum == 5.0


def test_slow_edges_frame_each_segment():
    rng = random.Random(7)
    for _ in range(200):
        r = random_realization(rng, 30)
        for schedule in (*schedule_scheme1(r, 4), *schedule_scheme1(r, 2)):
            # walk transmitting stretches; non-fast boundary users are edges
            run: list[int] = []
            for k in range(1, 32):
                state = schedule.states[k - 1] if k <= 30 else INACTIVE
                if state in (FAST, SLOW, SLOW_EDGE):
                    run.append(k)
                    continue
                for pos in run:
                    s = schedule.states[pos - 1]
                    if pos in (run[0], run[-1]):
                        assert s in (FAST, SLOW_EDGE)
                    else:
                        assert s in (FAST, SLOW)
                run = []


def test_fig5_walkthrough_frozen():
    r = BUILTIN_REALIZATIONS["fig5"]
    ph1, ph2 = schedule_scheme1(r, 6)
    assert ph1.users_in_state(SILENCED) == (8, 20)
    assert ph1.users_in_state(FAST) == (1, 3, 7, 11, 15)
    assert ph1.users_in_state(SLOW_EDGE) == (10, 14, 19)
    assert ph1.users_in_state(SLOW) == (2, 4, 5, 6, 16, 17, 18)
    assert ph2.users_in_state(SILENCED) == (8,)
    assert ph2.users_in_state(FAST) == ()
    assert ph2.users_in_state(SLOW_EDGE) == (1, 7, 10, 11, 14, 20)
    mg = realization_mg(r, 6, Scheme.TWO_PHASE)
    assert (mg.fast_sum, mg.slow_sum, mg.total) == (2.5, 13.0, 15.5)
    assert realization_mg(r, 6, Scheme.SLOW_ONLY).slow_sum == 16.0
    assert converse_sum_bound(r, 6) == 16


def test_scheme_accepts_plain_ints():
    r = BUILTIN_REALIZATIONS["fig5"]
    assert realization_mg(r, 6, 1) == realization_mg(r, 6, Scheme.TWO_PHASE)
    assert realization_mg(r, 6, 2) == realization_mg(r, 6, Scheme.SLOW_ONLY)
    with pytest.raises(ValueError):
        realization_mg(r, 6, 3)


def test_phase_schedule_json_shape():
    r = BUILTIN_REALIZATIONS["fig5"]
    doc1 = schedule_scheme1(r, 6)[0].to_json_dict()
    assert doc1["scheme"] == 1 and doc1["phase"] == 1
    assert [u["k"] for u in doc1["users"]] == list(range(1, 21))
    assert {u["state"] for u in doc1["users"]} <= {
        INACTIVE, SILENCED, FAST, SLOW, SLOW_EDGE
    }
    assert [s["pattern"] for s in doc1["subnets"]] == ["A", "B", "B"]
    doc2 = schedule_scheme2(r, 6).to_json_dict()
    assert doc2["scheme"] == 2 and "phase" not in doc2
    assert [s["pattern"] for s in doc2["subnets"]] == ["none"] * 3
