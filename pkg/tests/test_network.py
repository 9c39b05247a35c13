import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floc.config import ConfigError, NetworkConfig
from floc.network import ScheduleState, deploy, distance, distance_matrix, neighbors


@given(st.integers(1, 120), st.integers(0, 10**6))
@settings(max_examples=30)
def test_deploy_inside_area_and_reproducible(n, seed):
    cfg = NetworkConfig(node_count=n, seed=seed)
    a, b = deploy(cfg), deploy(cfg)
    assert [(x.x, x.y) for x in a] == [(x.x, x.y) for x in b]
    assert all(0 <= x.x <= 500 and 0 <= x.y <= 500 for x in a)
    assert [x.id for x in a] == list(range(n))


def test_sink_neighbours_get_more_energy():
    nodes = deploy(NetworkConfig(), sink=(250.0, 250.0))
    for n in nodes:
        near = distance(n.position, (250.0, 250.0)) <= 100.0
        assert n.battery == (5.0 if near else 3.0)


def test_constant_exposure():
    nodes = deploy(NetworkConfig(node_count=5), exposure=(0.7, 0.7))
    assert {n.exposure for n in nodes} == {0.7}


def test_deploy_rejects_bad_config():
    cfg = NetworkConfig()
    object.__setattr__(cfg, "node_count", 0)
    with pytest.raises(ConfigError):
        deploy(cfg)


def test_neighbours_sorted_alive_inclusive():
    nodes = deploy(NetworkConfig(node_count=30, seed=3))
    nodes[5].alive = False
    nb = neighbors(nodes[0], nodes, 150.0)
    assert nb == sorted(nb)
    assert 0 not in nb and 5 not in nb
    d = distance_matrix(nodes)
    assert all(d[0, j] <= 150.0 for j in nb)
    assert np.allclose(d, d.T) and np.all(np.diag(d) == 0)


def test_schedule_validation():
    ScheduleState(working_time=30.0, transitions=2).validate(60.0)
    with pytest.raises(ValueError):
        ScheduleState(working_time=90.0).validate(60.0)
    with pytest.raises(ValueError):
        ScheduleState(transitions=3).validate(60.0)
