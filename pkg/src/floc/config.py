"""Scenario configuration: physical constants, protocol knobs and the flat scenario file.

Defaults are the reference parameter set of the protocol. Scenario files are flat TOML (``key = value`` per line); every key maps
to exactly one dataclass field, and unknown keys are rejected.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    """Invalid scenario or parameter set."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


@dataclass(frozen=True)
class NetworkConfig:
    area_side: float = 500.0  # M, meters
    node_count: int = 80  # N
    short_range: float = 100.0  # R_S, meters
    long_range: float = 200.0  # R_L, meters
    seed: int = 1
    rounds: int = 500
    collection_period: float = 60.0  # T_CP, seconds; one round

    def __post_init__(self):
        _require(self.area_side > 0, "area_side must be > 0")
        _require(self.node_count > 0, "node_count must be > 0")
        _require(self.short_range > 0, "short_range must be > 0")
        _require(self.long_range >= self.short_range, "long_range must be >= short_range")
        _require(self.rounds >= 0, "rounds must be >= 0")
        _require(self.collection_period > 0, "collection_period must be > 0")

    @property
    def node_density(self) -> float:
        """Nodes per square meter."""
        return self.node_count / self.area_side**2


@dataclass(frozen=True)
class EnergyParams:
    e_elec: float = 50e-9  # J/bit
    eps_fs: float = 50e-9  # J/bit/m^2
    eps_mp: float = 10e-12  # J/bit/m^4
    d0_override: float | None = None  # meters; None -> sqrt(eps_fs/eps_mp)
    r_cc: float = 100.0  # communication-to-computation ratio
    r_compression: float = 0.25
    packet_bits: int = 8000
    packet_count: int = 1024  # per-node packet budget
    ch_forwarding_interpretation: str = "literal"  # or "per_cluster"

    def __post_init__(self):
        for name in ("e_elec", "eps_fs", "eps_mp", "r_cc", "packet_bits", "packet_count"):
            _require(getattr(self, name) > 0, f"{name} must be > 0")
        _require(0 < self.r_compression <= 1, "r_compression must be in (0, 1]")
        _require(self.d0_override is None or self.d0_override > 0, "d0_override must be > 0")
        _require(
            self.ch_forwarding_interpretation in ("literal", "per_cluster"),
            "ch_forwarding_interpretation must be 'literal' or 'per_cluster'",
        )

    @property
    def d0(self) -> float:
        if self.d0_override is not None:
            return self.d0_override
        return math.sqrt(self.eps_fs / self.eps_mp)

    @property
    def aggregation_energy(self) -> float:
        """E_A, joules per bit."""
        return self.e_elec / self.r_cc


@dataclass(frozen=True)
class ThermalParams:
    s_max: float = 1000.0  # W/m^2 peak solar radiation
    rho: float = 15000.0  # s, time of the peak
    sigma: float = 5000.0  # s, spread of the daily curve
    area_sen: float = 20e-4  # m^2
    eta: float = 5.670374419e-8  # W/m^2/K^4, applied to kelvin temperature
    c_p: float = 0.5  # J/(g K)
    mass: float = 50.0  # g
    t_high: float = 80.0  # deg C, node fails at or above this
    initial_temperature: float = 25.0  # deg C
    start_time: float = 0.0  # s, time of day at round 0
    exposure_mode: str = "random"  # "random" -> U[exposure_min, exposure_max]; "constant"
    exposure_min: float = 0.5
    exposure_max: float = 1.0
    exposure_constant: float = 1.0

    def __post_init__(self):
        for name in ("s_max", "rho", "sigma", "area_sen", "c_p", "mass", "t_high"):
            _require(getattr(self, name) > 0, f"{name} must be > 0")
        _require(self.eta >= 0, "eta must be >= 0")
        _require(self.initial_temperature < self.t_high, "initial_temperature must be below t_high")
        _require(self.exposure_mode in ("random", "constant"), "exposure_mode must be 'random' or 'constant'")
        _require(0 <= self.exposure_min <= self.exposure_max <= 1, "need 0 <= exposure_min <= exposure_max <= 1")
        _require(0 <= self.exposure_constant <= 1, "exposure_constant must be in [0, 1]")


@dataclass(frozen=True)
class RfTransferParams:
    eta1: float = 0.6  # conversion efficiency
    mu: float = 0.5  # power-splitting ratio
    beta1: float = 1.0  # propagation constant
    alpha1: float = 2.0  # path-loss exponent (n_p)
    signal_power: float = 1.0  # P_j

    def __post_init__(self):
        _require(0 < self.eta1 < 1, "eta1 must be in (0, 1)")
        _require(0 < self.mu < 1, "mu must be in (0, 1)")
        _require(self.beta1 > 0, "beta1 must be > 0")
        _require(self.alpha1 >= 2, "alpha1 must be >= 2")
        _require(self.signal_power > 0, "signal_power must be > 0")


CRITERIA = ("gain_degree", "energy_welfare", "thermal_entropy", "link_connectivity", "eoh", "lqr")


@dataclass(frozen=True)
class CriteriaWeights:
    gain_degree: float = 1 / 6
    energy_welfare: float = 1 / 6
    thermal_entropy: float = 1 / 6
    link_connectivity: float = 1 / 6
    eoh: float = 1 / 6
    lqr: float = 1 / 6

    def __post_init__(self):
        ws = self.as_tuple()
        _require(all(w >= 0 for w in ws), "criteria weights must be nonnegative")
        _require(abs(math.fsum(ws) - 1.0) < 1e-9, "criteria weights must sum to 1")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, c) for c in CRITERIA)


@dataclass(frozen=True)
class ProtocolParams:
    """Knobs the simulator needs that have no value in the protocol description."""

    alpha2: float = 0.5  # routing-cost vs time-frequency weight in link connectivity
    noise_floor: float = 1e-10  # for the SNR-based link quality factor
    transfer_cap: float = 1e-3  # J, max RF energy moved per hop per round
    awake_min: float = 0.2  # fraction of T_CP
    awake_max: float = 1.0
    sleep_probability: float = 0.1  # chance an alive node skips a whole period
    max_transitions: int = 2  # F_ST_max
    decision_mode: str = "interval"  # or "weighted"
    failure_mode: str = "threshold"  # or "bernoulli"

    def __post_init__(self):
        _require(0 <= self.alpha2 <= 1, "alpha2 must be in [0, 1]")
        _require(self.noise_floor > 0, "noise_floor must be > 0")
        _require(self.transfer_cap >= 0, "transfer_cap must be >= 0")
        _require(0 <= self.awake_min <= self.awake_max <= 1, "need 0 <= awake_min <= awake_max <= 1")
        _require(0 <= self.sleep_probability <= 1, "sleep_probability must be in [0, 1]")
        _require(self.max_transitions > 0, "max_transitions must be > 0")
        _require(self.decision_mode in ("interval", "weighted"), "decision_mode must be 'interval' or 'weighted'")
        _require(self.failure_mode in ("threshold", "bernoulli"), "failure_mode must be 'threshold' or 'bernoulli'")


@dataclass(frozen=True)
class Scenario:
    network: NetworkConfig = field(default_factory=NetworkConfig)
    energy: EnergyParams = field(default_factory=EnergyParams)
    thermal: ThermalParams = field(default_factory=ThermalParams)
    rf: RfTransferParams = field(default_factory=RfTransferParams)
    weights: CriteriaWeights = field(default_factory=CriteriaWeights)
    protocol: ProtocolParams = field(default_factory=ProtocolParams)
    sink_position: tuple[float, float] | None = None  # None -> centre of the square
    initial_energy_sink_neighbors: float = 5.0
    initial_energy_others: float = 3.0

    def __post_init__(self):
        _require(self.initial_energy_sink_neighbors > 0, "initial_energy_sink_neighbors must be > 0")
        _require(self.initial_energy_others > 0, "initial_energy_others must be > 0")
        if self.sink_position is not None:
            _require(len(self.sink_position) == 2, "sink_position must be (x, y)")

    @property
    def sink(self) -> tuple[float, float]:
        if self.sink_position is None:
            half = self.network.area_side / 2
            return (half, half)
        return (float(self.sink_position[0]), float(self.sink_position[1]))

    def with_overrides(self, values: dict[str, Any]) -> Scenario:
        """Return a copy with flat scenario keys replaced."""
        grouped: dict[str, dict[str, Any]] = {}
        top: dict[str, Any] = {}
        for key, value in values.items():
            if key not in SCENARIO_KEYS:
                raise ConfigError(f"unknown scenario key: {key!r}")
            section, name = SCENARIO_KEYS[key]
            value = _coerce(key, value)
            if section is None:
                top[name] = value
            else:
                grouped.setdefault(section, {})[name] = value
        try:
            parts = {sec: replace(getattr(self, sec), **kw) for sec, kw in grouped.items()}
            return replace(self, **parts, **top)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def _section_keys(section: str, cls) -> dict[str, tuple[str | None, str]]:
    return {f.name: (section, f.name) for f in fields(cls)}


SCENARIO_KEYS: dict[str, tuple[str | None, str]] = {
    **_section_keys("network", NetworkConfig),
    **_section_keys("energy", EnergyParams),
    **_section_keys("thermal", ThermalParams),
    **_section_keys("rf", RfTransferParams),
    **_section_keys("protocol", ProtocolParams),
    **{f"w_{c}": ("weights", c) for c in CRITERIA},
    "sink_position": (None, "sink_position"),
    "initial_energy_sink_neighbors": (None, "initial_energy_sink_neighbors"),
    "initial_energy_others": (None, "initial_energy_others"),
    # table-style aliases
    "n_p": ("rf", "alpha1"),
    "d0": ("energy", "d0_override"),
}

_INT_KEYS = {"node_count", "seed", "rounds", "packet_bits", "packet_count", "max_transitions"}
_OPTIONAL_KEYS = {"d0_override", "d0"}
_STR_KEYS = {"ch_forwarding_interpretation", "exposure_mode", "decision_mode", "failure_mode"}


def _coerce(key: str, value: Any) -> Any:
    try:
        if key == "sink_position":
            return None if value is None else (float(value[0]), float(value[1]))
        if value is None and key in _OPTIONAL_KEYS:
            return None
        if key in _STR_KEYS:
            if not isinstance(value, str):
                raise TypeError
            return value
        if isinstance(value, bool) or isinstance(value, str):
            raise TypeError
        if key in _INT_KEYS:
            if float(value) != int(value):
                raise TypeError
            return int(value)
        return float(value)
    except (TypeError, ValueError, IndexError):
        raise ConfigError(f"bad value for {key!r}: {value!r}") from None


def load_scenario(path: str | Path, base: Scenario | None = None) -> Scenario:
    """Read a flat TOML scenario file on top of ``base`` (defaults if omitted)."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed scenario {path}: {exc}") from exc
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"scenario files are flat; table [{key}] not allowed")
    return (base or Scenario()).with_overrides(data)


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, (section, name) in SCENARIO_KEYS.items():
        if key in ("n_p", "d0"):
            continue
        obj = scenario if section is None else getattr(scenario, section)
        out[key] = getattr(obj, name)
    return out
