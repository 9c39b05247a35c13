import pytest

from floc.config import (
    SCENARIO_KEYS,
    ConfigError,
    CriteriaWeights,
    EnergyParams,
    NetworkConfig,
    Scenario,
    ThermalParams,
    load_scenario,
    scenario_to_dict,
)


def test_defaults():
    sc = Scenario()
    assert sc.network.node_count == 80
    assert sc.network.area_side == 500.0
    assert sc.energy.e_elec == 50e-9
    assert sc.energy.aggregation_energy == pytest.approx(50e-9 / 100)
    assert sc.sink == (250.0, 250.0)
    assert sum(CriteriaWeights().as_tuple()) == pytest.approx(1.0)


@pytest.mark.parametrize("call", [
    lambda: NetworkConfig(node_count=0),
    lambda: NetworkConfig(area_side=-1.0),
    lambda: NetworkConfig(short_range=300.0, long_range=200.0),
    lambda: EnergyParams(r_compression=0.0),
    lambda: EnergyParams(ch_forwarding_interpretation="both"),
    lambda: ThermalParams(initial_temperature=90.0),
    lambda: ThermalParams(exposure_min=0.8, exposure_max=0.2),
])
def test_invalid_values_raise(call):
    with pytest.raises(ConfigError):
        call()


def test_overrides_route_to_sections():
    sc = Scenario().with_overrides({"s_max": 1400, "node_count": 60, "n_p": 3, "sink_position": [10, 20]})
    assert sc.thermal.s_max == 1400.0
    assert sc.network.node_count == 60
    assert sc.rf.alpha1 == 3.0
    assert sc.sink == (10.0, 20.0)


def test_weight_overrides_must_sum_to_one():
    w = {f"w_{c}": 0.1 for c in ("gain_degree", "energy_welfare", "thermal_entropy", "link_connectivity", "eoh")}
    sc = Scenario().with_overrides({**w, "w_lqr": 0.5})
    assert sc.weights.lqr == 0.5
    with pytest.raises(ConfigError):
        Scenario().with_overrides({"w_lqr": 0.5})


@pytest.mark.parametrize("over", [{"nope": 1}, {"node_count": 2.5}, {"s_max": "hot"}, {"exposure_mode": 3}])
def test_bad_overrides(over):
    with pytest.raises(ConfigError):
        Scenario().with_overrides(over)


def test_load_flat_toml(tmp_path):
    f = tmp_path / "a.scn"
    f.write_text('node_count = 60\ns_max = 1200.0\nch_forwarding_interpretation = "per_cluster"\n')
    sc = load_scenario(f)
    assert sc.network.node_count == 60
    assert sc.energy.ch_forwarding_interpretation == "per_cluster"


@pytest.mark.parametrize("text", ["[network]\nnode_count = 3\n", "node_count = \n", "bogus = 1\n"])
def test_load_rejects_bad_files(tmp_path, text):
    f = tmp_path / "b.scn"
    f.write_text(text)
    with pytest.raises(ConfigError):
        load_scenario(f)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "none.scn")


def test_dict_round_trip():
    sc = Scenario().with_overrides({"seed": 7, "alpha2": 0.3})
    assert Scenario().with_overrides(scenario_to_dict(sc)) == sc
    assert set(scenario_to_dict(sc)) <= set(SCENARIO_KEYS)
