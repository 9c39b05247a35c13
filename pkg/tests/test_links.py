import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from floc.config import RfTransferParams
from floc.links import (
    NO_ROUTE,
    OpportunisticGraph,
    data_routing_cost,
    energy_transfer,
    expected_optimal_hops,
    gain_degree,
    hop_estimate,
    link_connectivity,
    link_quality_factors,
    min_cost_route,
    min_max,
    shortest_path_tree,
    sink_time_frequency,
    time_frequency,
    windows_overlap,
)
from floc.network import SINK, ScheduleState

from routing_oracle import brute_force_min_cost, path_cost

RF = RfTransferParams()


def test_energy_transfer_hand_value():
    # 0.6 * 0.5 * 1 * (2^-2)^2
    assert energy_transfer(2.0, RF) == pytest.approx(0.01875, rel=1e-15)
    with pytest.raises(ValueError):
        energy_transfer(0.0, RF)


@given(st.floats(0.1, 200), st.floats(0.1, 200))
def test_energy_transfer_decreases_with_distance(a, b):
    lo, hi = sorted((a, b))
    assert energy_transfer(lo, RF) >= energy_transfer(hi, RF)


def test_gain_degree_sums_neighbours():
    assert gain_degree([], RF) == 0.0
    assert gain_degree([2.0, 4.0], RF) == pytest.approx(energy_transfer(2.0, RF) + energy_transfer(4.0, RF), rel=1e-15)


def test_routing_cost_and_empty_ends():
    assert data_routing_cost(1.0, 2.0, 2.0) == 0.25
    assert data_routing_cost(1.0, 0.0, 0.0) == math.inf


def test_time_frequency_full_activity_is_one():
    full = ScheduleState(working_time=60.0, transitions=2, max_transitions=2)
    half = ScheduleState(working_time=30.0, transitions=1, max_transitions=2)
    assert time_frequency(full, full, 60.0) == 1.0
    assert time_frequency(full, half, 60.0) == 0.25
    assert sink_time_frequency(half, 60.0) == 0.25
    with pytest.raises(ValueError):
        time_frequency(full, half, 0.0)


def test_link_connectivity_blend():
    assert link_connectivity(0.2, 0.6, 0.5) == pytest.approx(0.4)
    assert link_connectivity(0.2, 0.6, 1.0) == 0.2
    with pytest.raises(ValueError):
        link_connectivity(0.2, 0.6, 1.5)


def test_windows_overlap_strict():
    a = ScheduleState(working_time=10.0, window_start=0.0)
    b = ScheduleState(working_time=10.0, window_start=10.0)
    c = ScheduleState(working_time=10.0, window_start=5.0)
    assert not windows_overlap(a, b)
    assert windows_overlap(a, c)
    assert not windows_overlap(a, ScheduleState(working_time=0.0, window_start=2.0))


@st.composite
def graphs(draw):
    n = draw(st.integers(2, 8))
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                edges[(i, j)] = draw(st.floats(0.0, 10.0, allow_nan=False))
    src, dst = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
    return edges, src, dst


@given(graphs())
def test_min_cost_route_matches_exhaustive_search(case):
    costs, src, dst = case
    route = min_cost_route(OpportunisticGraph.from_costs(costs), src, dst)
    expected = 0.0 if src == dst else brute_force_min_cost(costs, src, dst)
    assert route.cost == expected
    if route.reachable and src != dst:
        assert route.path[0] == src and route.path[-1] == dst
        assert path_cost(costs, route.path) == route.cost


def test_unreachable_and_trivial_routes():
    g = OpportunisticGraph.from_costs({(0, 1): 1.0, (2, 3): 1.0})
    assert min_cost_route(g, 0, 3) is NO_ROUTE
    assert min_cost_route(g, 2, 2).cost == 0.0


def test_infinite_cost_edges_are_impassable():
    g = OpportunisticGraph.from_costs({(0, 1): math.inf, (1, 2): 1.0})
    assert not min_cost_route(g, 0, 2).reachable


def test_equal_costs_keep_lowest_id_predecessor():
    g = OpportunisticGraph.from_costs({(SINK, 1): 1.0, (SINK, 2): 1.0, (1, 3): 1.0, (2, 3): 1.0})
    _, pred = shortest_path_tree(g, SINK)
    assert pred[3] == 1


def test_tree_expands_only_allowed_intermediates():
    g = OpportunisticGraph.from_costs({(SINK, 1): 1.0, (1, 2): 1.0})
    dist, _ = shortest_path_tree(g, SINK, through={2})
    assert 1 in dist and 2 not in dist


def test_min_max_and_hops():
    assert min_max([3.0, 3.0]) == [0.5, 0.5]
    assert min_max([1.0, 2.0, 3.0]) == [0.0, 0.5, 1.0]
    assert hop_estimate(0.0, 100.0) == 1
    assert hop_estimate(250.0, 100.0) == 3
    assert expected_optimal_hops([10.0, 150.0, 350.0], 100.0) == [0.0, 1 / 3, 1.0]


def test_link_quality_isolated_scores_zero():
    q = link_quality_factors([[10.0], [], [40.0, 50.0]], RF, 1e-10)
    assert q[1] == 0.0
    assert q[0] == 1.0 and 0 <= q[2] < 1
