"""Round-based FLOC simulation.

Each round: draw awake windows, heat the nodes, build the opportunistic
graph, compute the six criteria, let every active node pick a role, form
clusters, move the data (and RF energy) to the sink, and tally metrics.
"""
from __future__ import annotations

import copy
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import energy as en
from . import hflts
from .config import Scenario
from .links import (
    OpportunisticGraph,
    data_routing_cost,
    energy_transfer,
    expected_optimal_hops,
    gain_degree,
    link_connectivity,
    link_quality_factors,
    path_to_root,
    shortest_path_tree,
    sink_time_frequency,
    time_frequency,
    windows_overlap,
)
from .network import SINK, NodeState, Role, ScheduleState, deploy, distance_matrix
from .thermal import failure_probability, relative_thermal_entropy, shannon_entropy, temperature_step

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoundMetrics:
    round: int
    active_node_ratio: float
    avg_energy_consumed: float
    packets_generated: int
    packets_delivered: int
    pdr: float
    mean_temperature: float
    alive_count: int
    cluster_heads: int
    ledger_residual: float


@dataclass
class RoundState:
    round: int
    nodes: list[NodeState]
    rng: np.random.Generator
    dist: np.ndarray  # pairwise node distances, fixed for a run
    d_sink: np.ndarray
    graph: OpportunisticGraph = field(default_factory=OpportunisticGraph)
    roles: dict[int, Role] = field(default_factory=dict)
    clusters: dict[int, list[int]] = field(default_factory=dict)
    relay_paths: dict[int, tuple[int, ...]] = field(default_factory=dict)


def initial_state(scenario: Scenario) -> RoundState:
    th = scenario.thermal
    exposure = (th.exposure_min, th.exposure_max) if th.exposure_mode == "random" else (th.exposure_constant,) * 2
    nodes = deploy(
        scenario.network,
        sink=scenario.sink,
        near_energy=scenario.initial_energy_sink_neighbors,
        far_energy=scenario.initial_energy_others,
        initial_temperature=th.initial_temperature,
        exposure=exposure,
    )
    sx, sy = scenario.sink
    d_sink = np.array([math.hypot(n.x - sx, n.y - sy) for n in nodes])
    rng = np.random.default_rng(np.random.SeedSequence(scenario.network.seed, spawn_key=(1,)))
    return RoundState(round=0, nodes=nodes, rng=rng, dist=distance_matrix(nodes), d_sink=d_sink)


class _Ledger:
    """Energy bookkeeping for one round."""

    def __init__(self, nodes: list[NodeState], eta1: float, cap: float):
        self.nodes = nodes
        self.eta1 = eta1
        self.cap = cap
        self.radio = []  # radio energy debits
        self.donated = []  # RF energy debited from donors
        self.credited = []  # RF energy added to node batteries
        self.absorbed = []  # RF energy delivered to the sink

    def debit(self, i: int, cost: float) -> bool:
        node = self.nodes[i]
        if not node.alive:
            return False
        if node.battery < cost:
            node.alive = False
            node.role = None
            return False
        node.battery -= cost
        self.radio.append(cost)
        return True

    def transfer(self, src: int, dst: int, d: float, rf) -> None:
        node = self.nodes[src]
        e = min(energy_transfer(d, rf), self.cap)
        cost = e / self.eta1
        if e <= 0 or not node.alive or node.battery < cost:
            return
        node.battery -= cost
        self.donated.append(cost)
        if dst == SINK:
            self.absorbed.append(e)
        else:
            self.nodes[dst].battery += e
            self.credited.append(e)

    @property
    def debits(self) -> float:
        return math.fsum(self.radio) + math.fsum(self.donated)

    @property
    def consumption(self) -> float:
        """Radio energy plus RF conversion loss."""
        return math.fsum(self.radio) + math.fsum(self.donated) - math.fsum(self.credited) - math.fsum(self.absorbed)


def _draw_schedules(nodes: list[NodeState], rng: np.random.Generator, scenario: Scenario) -> None:
    proto = scenario.protocol
    period = scenario.network.collection_period
    n = len(nodes)
    sleep_u = rng.random(n)
    frac = rng.uniform(proto.awake_min, proto.awake_max, n)
    start_u = rng.random(n)
    for i, node in enumerate(nodes):
        awake = bool(node.alive and sleep_u[i] >= proto.sleep_probability and frac[i] > 0)
        w = float(frac[i]) * period if awake else 0.0
        node.awake = awake
        node.schedule = ScheduleState(
            working_time=w,
            transitions=min(2, proto.max_transitions) if awake else 0,
            max_transitions=proto.max_transitions,
            window_start=float(start_u[i]) * (period - w),
        )


def _advance_temperature(nodes: list[NodeState], t: float, rng: np.random.Generator, scenario: Scenario) -> None:
    th = scenario.thermal
    period = scenario.network.collection_period
    fail_u = rng.random(len(nodes))
    for i, node in enumerate(nodes):
        if not node.alive:
            continue
        node.temperature = temperature_step(node.temperature, t, node.exposure, th, period)
        dead = node.temperature >= th.t_high
        if scenario.protocol.failure_mode == "bernoulli":
            dead = dead or fail_u[i] < failure_probability(node.temperature, th.t_high)
        if dead:
            node.alive = False
            node.awake = False
            node.role = None


def opportunistic_pairs(state: RoundState, nodes: list[NodeState], scenario: Scenario) -> list[tuple[int, int, float]]:
    """Active node pairs within short range whose awake windows overlap, as (i, j, d)."""
    active = [n.id for n in nodes if n.alive and n.awake]
    if not active:
        return []
    idx = np.array(active)
    sub = state.dist[np.ix_(idx, idx)]
    ii, jj = np.nonzero(np.triu(sub <= scenario.network.short_range, k=1))
    out = []
    for a, b in zip(ii.tolist(), jj.tolist()):
        i, j = active[a], active[b]
        if windows_overlap(nodes[i].schedule, nodes[j].schedule):
            out.append((i, j, float(sub[a, b])))
    return out


def build_graph(
    state: RoundState,
    nodes: list[NodeState],
    pairs: list[tuple[int, int, float]],
    e_total: dict[int, float],
    scenario: Scenario,
) -> OpportunisticGraph:
    """Opportunistic graph with routing costs and link connectivity, sink links included."""
    net = scenario.network
    l = scenario.energy.packet_bits
    alpha2 = scenario.protocol.alpha2
    active = [n.id for n in nodes if n.alive and n.awake]
    g = OpportunisticGraph(nodes=(SINK, *active))
    for i, j, d in pairs:
        cost = data_routing_cost(en.tx_energy(l, d, scenario.energy), e_total[i], e_total[j])
        tf = time_frequency(nodes[i].schedule, nodes[j].schedule, net.collection_period)
        g.add_edge(i, j, cost, link_connectivity(cost, tf, alpha2))
    for i in active:
        d = float(state.d_sink[i])
        if d <= net.short_range:
            # the sink has no battery; only the node's energy backs the link
            cost = data_routing_cost(en.tx_energy(l, d, scenario.energy), e_total[i], 0.0)
            tf = sink_time_frequency(nodes[i].schedule, net.collection_period)
            g.add_edge(i, SINK, cost, link_connectivity(cost, tf, alpha2))
    return g


def node_criteria(state, nodes, active, nbrs, gains, e_total, graph, scenario):
    """Raw criteria rows and status per active node.

    Row order: gain degree, energy welfare, relative thermal entropy, mean
    link connectivity, expected optimal hop, link quality.
    """
    if not active:
        return [], []
    th, proto, net = scenario.thermal, scenario.protocol, scenario.network
    entropy = {i: shannon_entropy(failure_probability(nodes[i].temperature, th.t_high)) for i in active}
    eoh = expected_optimal_hops([float(state.d_sink[i]) for i in active], net.short_range)
    lqr = link_quality_factors([[float(state.dist[i, j]) for j in nbrs[i]] for i in active], scenario.rf, proto.noise_floor)
    rows, statuses = [], []
    for k, i in enumerate(active):
        closed = [i, *nbrs[i]]
        best = max(e_total[j] for j in closed)
        ew = e_total[i] / best if best > 0 else 0.0
        incident = graph.neighbors(i)
        link = math.fsum(graph.weight(i, j) for j in incident) / len(incident) if incident else 0.0
        rows.append((gains[i], ew, relative_thermal_entropy(i, entropy, nbrs[i]), link, eoh[k], lqr[k]))
        threshold = math.fsum(gains[j] for j in closed) / len(closed)
        statuses.append(hflts.evaluate_status(gains[i], ew, threshold))
    return rows, statuses


def step_round(state: RoundState, scenario: Scenario) -> tuple[RoundState, RoundMetrics]:
    net, ep, th, proto = scenario.network, scenario.energy, scenario.thermal, scenario.protocol
    l = ep.packet_bits
    nodes = [replace(n, schedule=copy.copy(n.schedule)) for n in state.nodes]
    rng = copy.deepcopy(state.rng)
    battery_before = math.fsum(n.battery for n in nodes)
    t = th.start_time + state.round * net.collection_period

    # 1-2: schedules, heating and thermal failures
    _draw_schedules(nodes, rng, scenario)
    _advance_temperature(nodes, t, rng, scenario)
    for n in nodes:
        n.role = None

    # 3-4: connections, gain degree and total energy, then link costs
    active = [n.id for n in nodes if n.alive and n.awake]
    pairs = opportunistic_pairs(state, nodes, scenario)
    nbrs: dict[int, list[int]] = {i: [] for i in active}
    for i, j, _ in pairs:
        nbrs[i].append(j)
        nbrs[j].append(i)
    for i in active:
        nbrs[i].sort()
    gains = {i: gain_degree((float(state.dist[i, j]) for j in nbrs[i]), scenario.rf) for i in active}
    e_total = {i: gains[i] + nodes[i].battery for i in active}
    graph = build_graph(state, nodes, pairs, e_total, scenario)

    # 5: criteria, status and role per active node
    rows, statuses = node_criteria(state, nodes, active, nbrs, gains, e_total, graph, scenario)
    weights = scenario.weights.as_tuple() if proto.decision_mode == "weighted" else None
    roles: dict[int, Role] = {}
    for i, row, status in zip(active, hflts.standardize_population(rows), statuses):
        roles[i] = decide_cached(row, status, weights)
        nodes[i].role = roles[i]

    # 6: clustering
    heads = [i for i in active if roles[i] is Role.CH]
    clusters: dict[int, list[int]] = {h: [] for h in heads}
    direct: list[int] = []
    members = [i for i in active if roles[i] is Role.CM]
    for i in members:
        options = [j for j in graph.neighbors(i) if j in clusters]
        if options:
            ch = min(options, key=lambda j: (state.dist[i, j], j))
            clusters[ch].append(i)
        else:
            direct.append(i)

    # 7-8: data and energy flow
    ledger = _Ledger(nodes, scenario.rf.eta1, proto.transfer_cap)
    generated = delivered = 0

    def sense(i: int) -> bool:
        nonlocal generated
        node = nodes[i]
        if node.packets_sent >= ep.packet_count:
            return False
        node.packets_sent += 1
        generated += 1
        return ledger.debit(i, en.sense_energy(l, ep))

    relay_paths: dict[int, tuple[int, ...]] = {}
    if not heads and active:
        log.info("round %d: no cluster head elected, direct-to-sink fallback", state.round)
        for i in active:
            d = float(state.d_sink[i])
            if sense(i) and d <= net.long_range and ledger.debit(i, en.tx_energy(l, d, ep)):
                ledger.transfer(i, SINK, d, scenario.rf)
                delivered += 1
    else:
        inbox = {h: 0 for h in heads}
        for ch, cms in clusters.items():
            for i in cms:
                d = float(state.dist[i, ch])
                if not (sense(i) and ledger.debit(i, en.tx_energy(l, d, ep))):
                    continue
                ledger.transfer(i, ch, d, scenario.rf)
                if ledger.debit(ch, en.rx_energy(l, ep)):
                    inbox[ch] += 1
        for i in direct:
            d = float(state.d_sink[i])
            if graph.routing_cost.get((SINK, i)) is None:
                sense(i)  # generated, no way out
                continue
            if sense(i) and ledger.debit(i, en.tx_energy(l, d, ep)):
                ledger.transfer(i, SINK, d, scenario.rf)
                delivered += 1

        # head traffic follows least-cost routes over the whole awake graph; nodes
        # on a route carry it this round whatever role they picked
        dist_tree, pred = shortest_path_tree(graph, SINK)
        alive_count = sum(n.alive for n in nodes)
        for ch in heads:
            if not nodes[ch].alive:
                continue
            count = inbox[ch] + (1 if sense(ch) else 0)
            if not nodes[ch].alive or count == 0:
                continue
            if not ledger.debit(ch, count * l * ep.aggregation_energy):
                continue
            if ch not in dist_tree:
                continue
            path = path_to_root(pred, ch, SINK)
            relay_paths[ch] = path
            if ep.ch_forwarding_interpretation == "per_cluster":
                fwd = count / ep.r_compression
            else:
                fwd = alive_count / ep.r_compression
            ok = True
            for a, b in zip(path, path[1:]):
                d = float(state.d_sink[a]) if b == SINK else float(state.dist[a, b])
                if not ledger.debit(a, fwd * en.tx_energy(l, d, ep)):
                    ok = False
                    break
                ledger.transfer(a, b, d, scenario.rf)
                if b != SINK and not ledger.debit(b, fwd * en.rx_energy(l, ep)):
                    ok = False
                    break
            if ok:
                delivered += count

    # 9: metrics
    battery_after = math.fsum(n.battery for n in nodes)
    residual = (battery_after - battery_before) + math.fsum(ledger.absorbed) + ledger.consumption
    n_total = net.node_count
    metrics = RoundMetrics(
        round=state.round,
        active_node_ratio=len(active) / n_total,
        avg_energy_consumed=ledger.debits / n_total,
        packets_generated=generated,
        packets_delivered=delivered,
        pdr=delivered / generated if generated else 1.0,
        mean_temperature=math.fsum(n.temperature for n in nodes) / n_total,
        alive_count=sum(n.alive for n in nodes),
        cluster_heads=len(heads),
        ledger_residual=residual,
    )
    new_state = RoundState(
        round=state.round + 1,
        nodes=nodes,
        rng=rng,
        dist=state.dist,
        d_sink=state.d_sink,
        graph=graph,
        roles=roles,
        clusters=clusters,
        relay_paths=relay_paths,
    )
    return new_state, metrics


_DECISIONS: dict = {}


def decide_cached(row, status, weights):
    """Role for a standardised criteria row; memoised on the row's term anchors.

    The pipeline only sees which terms cover each value, so rows sharing
    anchors share a decision. Weighted mode is not cached.
    """
    if weights is not None:
        return hflts.decide_role(row, status, weights).role
    key = (tuple(hflts.anchors(v) for v in row), status)
    role = _DECISIONS.get(key)
    if role is None:
        role = _DECISIONS[key] = hflts.decide_role(row, status).role
    return role


def run(scenario: Scenario, rounds: int | None = None) -> list[RoundMetrics]:
    """Simulate up to ``rounds`` rounds (scenario default), stopping once every node is dead."""
    total = scenario.network.rounds if rounds is None else rounds
    state = initial_state(scenario)
    series = []
    for _ in range(total):
        if not any(n.alive for n in state.nodes):
            break
        state, m = step_round(state, scenario)
        series.append(m)
    return series
