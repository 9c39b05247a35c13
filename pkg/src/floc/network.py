"""Node state, random deployment and neighbour discovery."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import ConfigError, NetworkConfig

SINK = -1  # node id reserved for the sink


class Role(str, Enum):
    CH = "CH"
    CM = "CM"
    RELAY = "Relay"


@dataclass
class ScheduleState:
    working_time: float = 0.0  # W_V, seconds awake in this period
    transitions: int = 0  # F_ST
    max_transitions: int = 2  # F_ST_max
    window_start: float = 0.0  # offset of the awake window inside the period

    @property
    def window_end(self) -> float:
        return self.window_start + self.working_time

    def validate(self, period: float) -> None:
        if not 0 <= self.working_time <= period:
            raise ValueError("working_time must lie in [0, T_CP]")
        if not 0 <= self.transitions <= self.max_transitions:
            raise ValueError("transitions must lie in [0, max_transitions]")


@dataclass
class NodeState:
    id: int
    x: float
    y: float
    battery: float
    temperature: float
    exposure: float = 1.0  # fraction of direct sun this node receives
    role: Role | None = None
    alive: bool = True
    awake: bool = False
    schedule: ScheduleState = field(default_factory=ScheduleState)
    packets_sent: int = 0

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def deploy(
    config: NetworkConfig,
    *,
    sink: tuple[float, float] | None = None,
    near_energy: float = 5.0,
    far_energy: float = 3.0,
    initial_temperature: float = 25.0,
    exposure: tuple[float, float] = (0.5, 1.0),
) -> list[NodeState]:
    """Place ``node_count`` nodes i.i.d. uniformly on the square.

    Nodes within ``short_range`` of the sink start with ``near_energy``; the
    rest with ``far_energy``. Sun exposure is drawn uniformly from the
    ``exposure`` interval (pass ``(a, a)`` for a constant). The result depends
    only on ``config`` and its seed.
    """
    if config.area_side <= 0 or config.node_count <= 0:
        raise ConfigError("deployment needs a positive area and node count")
    if sink is None:
        sink = (config.area_side / 2, config.area_side / 2)
    rng = np.random.default_rng(config.seed)
    xy = rng.uniform(0.0, config.area_side, size=(config.node_count, 2))
    lo, hi = exposure
    alphas = rng.uniform(lo, hi, size=config.node_count) if hi > lo else np.full(config.node_count, lo)
    nodes = []
    for i in range(config.node_count):
        x, y = float(xy[i, 0]), float(xy[i, 1])
        near = distance((x, y), sink) <= config.short_range
        nodes.append(
            NodeState(
                id=i,
                x=x,
                y=y,
                battery=near_energy if near else far_energy,
                temperature=initial_temperature,
                exposure=float(alphas[i]),
            )
        )
    return nodes


def neighbors(node: NodeState, all_nodes: list[NodeState], radius: float) -> list[int]:
    """Ids of alive nodes other than ``node`` within ``radius`` (inclusive), sorted."""
    out = [
        other.id
        for other in all_nodes
        if other.alive and other.id != node.id and distance(node.position, other.position) <= radius
    ]
    return sorted(out)


def distance_matrix(nodes: list[NodeState]) -> np.ndarray:
    xy = np.array([[n.x, n.y] for n in nodes], dtype=float).reshape(-1, 2)
    diff = xy[:, None, :] - xy[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])
