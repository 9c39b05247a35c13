"""RF energy transfer, opportunistic connection graph, link metrics and min-cost routing."""
from __future__ import annotations

import heapq
import math
from collections.abc import Container, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .config import RfTransferParams
from .network import SINK, ScheduleState


def energy_transfer(d: float, p: RfTransferParams) -> float:
    """Energy a neighbour at distance ``d`` can hand over by RF: eta1 mu P |beta1 d^-alpha1|^2."""
    if d <= 0:
        raise ValueError("energy transfer undefined at zero distance")
    gain = p.beta1 * d ** (-p.alpha1)
    return p.eta1 * p.mu * p.signal_power * gain**2


def gain_degree(distances: Iterable[float], p: RfTransferParams) -> float:
    """Total harvestable energy from awake neighbours at the given distances."""
    return math.fsum(energy_transfer(d, p) for d in distances)


def total_energy(gained: float, battery: float) -> float:
    return gained + battery


def data_routing_cost(e_c: float, et_i: float, et_j: float) -> float:
    """Link cost E_C / (E_T_i + E_T_j); infinite when both ends are empty."""
    denom = et_i + et_j
    if denom <= 0:
        return math.inf
    return e_c / denom


def _activity(s: ScheduleState, period: float) -> float:
    return (s.transitions / s.max_transitions) * (s.working_time / period)


def time_frequency(si: ScheduleState, sj: ScheduleState, period: float) -> float:
    if period <= 0 or si.max_transitions <= 0 or sj.max_transitions <= 0:
        raise ValueError("period and max transition count must be positive")
    return _activity(si, period) * _activity(sj, period)


def sink_time_frequency(si: ScheduleState, period: float) -> float:
    """Time-frequency towards the always-awake sink (its normalised working time is 1)."""
    if period <= 0 or si.max_transitions <= 0:
        raise ValueError("period and max transition count must be positive")
    return _activity(si, period) * 1.0


def link_connectivity(dr_cost: float, tf: float, alpha2: float) -> float:
    if not 0 <= alpha2 <= 1:
        raise ValueError("alpha2 must be in [0, 1]")
    return alpha2 * dr_cost + (1 - alpha2) * tf


def windows_overlap(a: ScheduleState, b: ScheduleState) -> bool:
    if a.working_time <= 0 or b.working_time <= 0:
        return False
    return max(a.window_start, b.window_start) < min(a.window_end, b.window_end)


def _edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass
class OpportunisticGraph:
    """Nodes, opportunistic connections and per-link weights.

    Edges are undirected and keyed by ``(min id, max id)``; the sink is node
    ``SINK`` (-1).
    """

    nodes: tuple[int, ...] = ()
    connections: set[tuple[int, int]] = field(default_factory=set)
    link_weight: dict[tuple[int, int], float] = field(default_factory=dict)
    routing_cost: dict[tuple[int, int], float] = field(default_factory=dict)
    adjacency: dict[int, list[int]] = field(default_factory=dict)

    def add_edge(self, i: int, j: int, cost: float, weight: float = 0.0) -> None:
        if cost < 0:
            raise ValueError("routing cost must be nonnegative")
        key = _edge(i, j)
        if key not in self.connections:
            self.connections.add(key)
            self.adjacency.setdefault(i, []).append(j)
            self.adjacency.setdefault(j, []).append(i)
        self.routing_cost[key] = cost
        self.link_weight[key] = weight

    def neighbors(self, i: int) -> list[int]:
        return sorted(self.adjacency.get(i, ()))

    def cost(self, i: int, j: int) -> float:
        return self.routing_cost[_edge(i, j)]

    def weight(self, i: int, j: int) -> float:
        return self.link_weight[_edge(i, j)]

    @classmethod
    def from_costs(cls, costs: Mapping[tuple[int, int], float]) -> OpportunisticGraph:
        g = cls()
        ids = set()
        for (i, j), c in sorted(costs.items()):
            g.add_edge(i, j, c)
            ids.update((i, j))
        g.nodes = tuple(sorted(ids))
        return g


@dataclass(frozen=True)
class Route:
    path: tuple[int, ...]
    cost: float

    @property
    def reachable(self) -> bool:
        return math.isfinite(self.cost)


NO_ROUTE = Route((), math.inf)


def shortest_path_tree(
    graph: OpportunisticGraph, root: int, through: Container[int] | None = None
) -> tuple[dict[int, float], dict[int, int]]:
    """Dijkstra over routing costs from ``root``.

    Only ``root`` and members of ``through`` (all nodes when None) are
    expanded, so other nodes can be leaves but never intermediates. Equal-cost
    alternatives keep the lowest-id predecessor.
    """
    dist = {root: 0.0}
    pred: dict[int, int] = {}
    done = set()
    heap = [(0.0, root)]
    while heap:
        du, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u != root and through is not None and u not in through:
            continue
        for v in graph.adjacency.get(u, ()):
            if v in done:
                continue
            alt = du + graph.routing_cost[_edge(u, v)]
            if alt == math.inf:
                continue
            old = dist.get(v, math.inf)
            if alt < old or (alt == old and u < pred.get(v, u)):
                dist[v] = alt
                pred[v] = u
                heapq.heappush(heap, (alt, v))
    return dist, pred


def path_to_root(pred: Mapping[int, int], node: int, root: int) -> tuple[int, ...]:
    """Walk predecessors from ``node`` back to the tree root."""
    path = [node]
    while path[-1] != root:
        path.append(pred[path[-1]])
    return tuple(path)


def min_cost_route(graph: OpportunisticGraph, src: int, dst: int) -> Route:
    """Least total routing-cost path from ``src`` to ``dst``; ``NO_ROUTE`` if unreachable."""
    if src == dst:
        return Route((), 0.0)
    dist, pred = shortest_path_tree(graph, src)
    if dst not in dist or not math.isfinite(dist[dst]):
        return NO_ROUTE
    return Route(tuple(reversed(path_to_root(pred, dst, src))), dist[dst])


def min_max(values: Sequence[float]) -> list[float]:
    """Scale into [0, 1]; a constant population maps to 0.5."""
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.5] * len(values)
    span = hi - lo
    return [min(max((v - lo) / span, 0.0), 1.0) for v in values]


def hop_estimate(d_to_sink: float, short_range: float) -> int:
    """Hops to the sink at short range, at least one."""
    return max(1, math.ceil(d_to_sink / short_range))


def expected_optimal_hops(d_to_sink: Sequence[float], short_range: float) -> list[float]:
    return min_max([hop_estimate(d, short_range) for d in d_to_sink])


def mean_snr(distances: Sequence[float], rf: RfTransferParams, noise_floor: float) -> float:
    if noise_floor <= 0:
        raise ValueError("noise_floor must be positive")
    if not distances:
        return 0.0
    snr = [rf.signal_power * rf.beta1**2 * d ** (-2 * rf.alpha1) / noise_floor for d in distances]
    return math.fsum(snr) / len(snr)


def link_quality_factors(
    neighbor_distances: Sequence[Sequence[float]], rf: RfTransferParams, noise_floor: float
) -> list[float]:
    """Normalised mean neighbour SNR per node; isolated nodes score 0."""
    raw = [mean_snr(ds, rf, noise_floor) for ds in neighbor_distances]
    scaled = min_max(raw)
    return [0.0 if not ds else s for ds, s in zip(neighbor_distances, scaled)]
