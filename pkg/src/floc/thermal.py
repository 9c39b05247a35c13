"""Diurnal heating of sensor nodes, thermal failure probability and thermal entropy."""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping

from .config import ThermalParams

KELVIN = 273.15


def solar_radiation(t: float, p: ThermalParams) -> float:
    """Gaussian daily radiation curve; zero outside the day [0, 2*rho]."""
    if t < 0 or t > 2 * p.rho:
        return 0.0
    return p.s_max * math.exp(-((t - p.rho) ** 2) / (2 * p.sigma**2))


def temperature_delta(temp: float, t: float, exposure: float, p: ThermalParams, dt: float) -> float:
    radiative = p.eta * (temp + KELVIN) ** 4
    return (solar_radiation(t, p) * exposure - radiative) * p.area_sen * dt / (p.c_p * p.mass)


def temperature_step(temp: float, t: float, exposure: float, p: ThermalParams, dt: float) -> float:
    """Advance a node's temperature (deg C) over ``dt`` seconds starting at time ``t``.

    Net radiative loss never cools the node: the outer max keeps the
    temperature where it was.
    """
    if not 0 <= exposure <= 1:
        raise ValueError("exposure must be in [0, 1]")
    return max(temp + temperature_delta(temp, t, exposure, p, dt), temp)


def failure_probability(temp: float, t_high: float) -> float:
    if t_high <= 0:
        raise ValueError("t_high must be positive")
    return min(max(temp, 0.0) / t_high, 1.0)


def shannon_entropy(p: float) -> float:
    """-p log2 p, with 0 at p = 0."""
    if not 0 <= p <= 1:
        raise ValueError(f"probability out of range: {p}")
    if p == 0:
        return 0.0
    return -p * math.log2(p)


def relative_thermal_entropy(node: int, entropies: Mapping[int, float], nbr: Iterable[int]) -> float:
    """Share of the closed neighbourhood's entropy carried by ``node``.

    ``nbr`` is the neighbourhood; ``node`` is added if absent. An all-zero
    neighbourhood gives 0.
    """
    members = set(nbr)
    members.add(node)
    own = entropies[node]
    if own == 0:
        return 0.0
    # ratios to own first: equal entropies then sum to exactly k + 1
    return 1.0 / math.fsum(entropies[j] / own for j in sorted(members))
