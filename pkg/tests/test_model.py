"""Model layer: configuration, sampling determinism, subnets, length pmf."""

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgregion import (
    ActivityRealization,
    BUILTIN_REALIZATIONS,
    NetworkConfig,
    decompose_subnets,
    sample_activity,
    subnet_length_pmf,
)


def test_config_validation():
    with pytest.raises(ValueError):
        NetworkConfig(K=0, rho=0.5, rho_f=0.5, D=2)
    with pytest.raises(ValueError):
        NetworkConfig(K=4, rho=1.5, rho_f=0.5, D=2)
    with pytest.raises(ValueError):
        NetworkConfig(K=4, rho=0.5, rho_f=-0.1, D=2)
    with pytest.raises(ValueError):
        NetworkConfig(K=4, rho=0.5, rho_f=0.5, D=2.5)
    with pytest.raises(ValueError):
        NetworkConfig(K=4, rho=0.5, rho_f=0.5, D=-1)
    with pytest.raises(ValueError):
        NetworkConfig(K=4, rho=0.5, rho_f=0.5, D=2, seed=-3)
    NetworkConfig(K=4, rho=0.5, rho_f=0.5, D=math.inf)  # fine for the bounds


def test_realization_validation():
    with pytest.raises(ValueError):
        ActivityRealization((1, 0), (0, 1))  # fast flag on an inactive user
    with pytest.raises(ValueError):
        ActivityRealization((1, 0), (1,))
    with pytest.raises(ValueError):
        ActivityRealization((2, 0), (0, 0))


def test_sampling_is_deterministic_and_order_free():
    cfg = NetworkConfig(K=40, rho=0.7, rho_f=0.4, D=4, seed=123)
    r5 = sample_activity(cfg, 5)
    others = [sample_activity(cfg, t) for t in (9, 0, 5, 2)]
    assert sample_activity(cfg, 5) == r5
    assert others[2] == r5
    assert sample_activity(cfg, 6) != r5
    assert sample_activity(NetworkConfig(K=40, rho=0.7, rho_f=0.4, D=4, seed=124), 5) != r5
    with pytest.raises(ValueError):
        sample_activity(cfg, -1)


def test_sampling_respects_point_masses():
    r = sample_activity(NetworkConfig(K=64, rho=1.0, rho_f=1.0, D=4), 0)
    assert all(r.active) and all(r.fast)
    r = sample_activity(NetworkConfig(K=64, rho=0.0, rho_f=1.0, D=4), 0)
    assert not any(r.active)
    r = sample_activity(NetworkConfig(K=64, rho=1.0, rho_f=0.0, D=4), 0)
    assert all(r.active) and not any(r.fast)


def test_sampling_rates_are_plausible():
    cfg = NetworkConfig(K=2000, rho=0.8, rho_f=0.6, D=4, seed=9)
    r = sample_activity(cfg, 0)
    n_active = sum(r.active)
    assert abs(n_active / 2000 - 0.8) < 0.05
    assert abs(sum(r.fast) / n_active - 0.6) < 0.05
    assert set(r.fast_users) <= set(r.active_users)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=60))
def test_decomposition_roundtrip_and_maximality(bits):
    r = ActivityRealization(tuple(bits), tuple(0 for _ in bits))
    d = decompose_subnets(r)
    assert d.K == len(bits)
    assert d.reconstruct_active() == tuple(bits)
    for a, b in zip(d.subnets, d.subnets[1:]):
        assert a.start + a.length < b.start  # separated by an inactive user
    assert sum(s.length for s in d.subnets) == sum(bits)


def test_pmf_normalizes_including_empty_run():
    cfg = NetworkConfig(K=12, rho=0.37, rho_f=0.5, D=2)
    # length 0 is the no-run case with mass 1 - rho
    for k in (1, 5, 12):
        total = sum(subnet_length_pmf(ell, k, cfg) for ell in range(cfg.K - k + 2))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_pmf_edge_vs_interior():
    cfg = NetworkConfig(K=10, rho=0.5, rho_f=0.5, D=2)
    assert subnet_length_pmf(3, 2, cfg) == pytest.approx(0.5**3 * 0.5, abs=1e-15)
    assert subnet_length_pmf(9, 2, cfg) == pytest.approx(0.5**9, abs=1e-15)  # hits the edge
    assert subnet_length_pmf(10, 2, cfg) == 0.0
    with pytest.raises(ValueError):
        subnet_length_pmf(1, 0, cfg)
    with pytest.raises(ValueError):
        subnet_length_pmf(-1, 1, cfg)


def test_realization_json_roundtrip():
    r = BUILTIN_REALIZATIONS["fig5"]
    doc = json.loads(json.dumps(r.to_json_dict()))
    assert doc["K"] == 20
    assert ActivityRealization.from_json_dict(doc) == r
    doc["K"] = 19
    with pytest.raises(ValueError):
        ActivityRealization.from_json_dict(doc)


def test_builtin_fig5_contents():
    r = BUILTIN_REALIZATIONS["fig5"]
    assert r.K == 20
    assert r.active_users == tuple(k for k in range(1, 21) if k not in (9, 12, 13))
    assert r.fast_users == (1, 3, 7, 11, 15)
    d = decompose_subnets(r)
    assert d.to_json_list() == [
        {"start": 1, "len": 8},
        {"start": 10, "len": 2},
        {"start": 14, "len": 7},
    ]
