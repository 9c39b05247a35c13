"""First-order radio energy accounting for members and cluster heads."""
from __future__ import annotations

from dataclasses import dataclass

from .config import EnergyParams


def _check(l: float, d: float = 0.0) -> None:
    if l <= 0:
        raise ValueError(f"bit count must be positive, got {l}")
    if d < 0:
        raise ValueError(f"distance must be nonnegative, got {d}")


def tx_energy_branches(l: float, d: float, p: EnergyParams) -> tuple[float, float]:
    """Both branches of the transmit energy at distance ``d``: (free space, multipath).

    With a derived d0 the multipath amplifier is written as
    ``eps_fs * l * d0**2 * (d / d0)**4``, algebraically equal to
    ``eps_mp * l * d**4`` but evaluated so both branches coincide bit-for-bit
    at d0. An explicit ``d0_override`` uses ``eps_mp`` directly.
    """
    _check(l, d)
    base = p.e_elec * l
    free = base + p.eps_fs * l * d**2
    if p.d0_override is None:
        d0 = p.d0
        multi = base + p.eps_fs * l * d0**2 * (d / d0) ** 4
    else:
        multi = base + p.eps_mp * l * d**4
    return free, multi


def tx_energy(l: float, d: float, p: EnergyParams) -> float:
    """Energy to send ``l`` bits over ``d`` meters (free space below d0, multipath from d0)."""
    free, multi = tx_energy_branches(l, d, p)
    return free if d < p.d0 else multi


def rx_energy(l: float, p: EnergyParams) -> float:
    _check(l)
    return p.e_elec * l


def sense_energy(l: float, p: EnergyParams) -> float:
    _check(l)
    return p.e_elec * l


def cm_round_energy(l: float, d_to_ch: float, p: EnergyParams) -> float:
    """Sense plus free-space transmit to the cluster head."""
    _check(l, d_to_ch)
    return 2 * p.e_elec * l + p.eps_fs * l * d_to_ch**2


@dataclass(frozen=True)
class ClusterEnergyContext:
    total_nodes: int  # N
    cluster_count: int  # N_C

    def __post_init__(self):
        if self.cluster_count <= 0:
            raise ValueError("cluster_count must be positive")
        if self.cluster_count > self.total_nodes:
            raise ValueError("cluster_count cannot exceed total_nodes")


def forwarded_packets(ctx: ClusterEnergyContext, p: EnergyParams) -> float:
    """Packet multiplier of the CH forwarding term.

    ``literal`` uses N / r exactly as the CH energy expression is written;
    ``per_cluster`` uses N / (N_C r), i.e. only the head's own cluster.
    """
    if p.ch_forwarding_interpretation == "per_cluster":
        return ctx.total_nodes / (ctx.cluster_count * p.r_compression)
    return ctx.total_nodes / p.r_compression


def ch_round_energy(ctx: ClusterEnergyContext, l: float, d_to_next: float, p: EnergyParams) -> float:
    """Cluster head energy per round: sense, receive members, aggregate, forward.

    The forwarding amplifier term is always the d^4 (multipath) one, as in the
    closed form of the CH expression.
    """
    _check(l, d_to_next)
    size = ctx.total_nodes / ctx.cluster_count
    fwd = forwarded_packets(ctx, p)
    return (
        p.e_elec * l
        + (size - 1) * p.e_elec * l
        + size * l * p.aggregation_energy
        + fwd * p.e_elec * l
        + fwd * p.eps_mp * l * d_to_next**4
    )
