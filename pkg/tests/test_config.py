import pytest

from spdckit.config import (GridSettings, HomSettings, SimulationSettings,
                            config_from_dict, load_config)
from spdckit.errors import ConfigError


def test_empty_config_gives_defaults():
    cfg = config_from_dict({})
    dev = cfg.device("A")
    assert dev.geometry == "counter_propagating"
    assert dev.poling_period_um == 1.18
    assert dev.qpm_order == 3
    assert dev.length_mm == 5.0
    assert cfg.pump.kind == "pulsed"
    assert cfg.pump.center_nm == 774.0
    assert cfg.pump.fwhm_nm == 1.1
    assert set(cfg.detectors) == {"signal", "idler", "out1", "out2"}
    assert cfg.grids == GridSettings()
    assert cfg.simulation == SimulationSettings()
    assert cfg.hom == HomSettings()
    assert cfg.output_dir == "out"


def test_unknown_keys_rejected_each_level():
    with pytest.raises(ConfigError):
        config_from_dict({"devices": {}})
    with pytest.raises(ConfigError):
        config_from_dict({"device": {"A": {"period_um": 1.18}}})
    with pytest.raises(ConfigError):
        config_from_dict({"pump": {"colour": "blue"}})
    with pytest.raises(ConfigError):
        config_from_dict({"detectors": {"signal": {"darkness": 1}}})
    with pytest.raises(ConfigError):
        config_from_dict({"grids": {"sfg_m": 4}})
    with pytest.raises(ConfigError):
        config_from_dict({"simulation": {"speed": 9}})
    with pytest.raises(ConfigError):
        config_from_dict({"hom": {"colour": 1}})
    with pytest.raises(ConfigError):
        config_from_dict({"output": {"folder": "x"}})


def test_device_section_overrides():
    cfg = config_from_dict({"device": {
        "A": {},
        "B": {"index_offset": 4.0e-4, "length_mm": 2.5,
              "geometry": "co_propagating", "qpm_order": 1},
    }})
    b = cfg.device("B")
    assert b.index_offset == 4.0e-4
    assert b.length_mm == 2.5
    assert b.geometry == "co_propagating"
    assert b.label == "B"
    with pytest.raises(ConfigError):
        cfg.device("C")


def test_no_devices_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"device": {}})


def test_bad_geometry_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"device": {"A": {"geometry": "sideways"}}})


def test_ripple_section():
    cfg = config_from_dict({"device": {"A": {"ripple": {
        "amplitude": 0.05, "period_nm": 0.8, "variable": "signal"}}}})
    rip = cfg.device("A").ripple
    assert rip.amplitude == 0.05
    assert rip.period_nm == 0.8
    assert rip.variable == "signal"
    with pytest.raises(ConfigError):
        config_from_dict({"device": {"A": {"ripple": {"wavelength": 1}}}})


def test_cw_pump():
    cfg = config_from_dict({"pump": {"kind": "cw", "center_nm": 775.0}})
    assert cfg.pump.kind == "cw"
    assert cfg.pump.fwhm_nm is None


def test_pair_values_validated():
    with pytest.raises(ConfigError):
        config_from_dict({"grids": {"sfg_signal_nm": [1540.0]}})
    with pytest.raises(ConfigError):
        config_from_dict({"hom": {"delay_range_ps": [0.0, 1.0, 2.0]}})
    cfg = config_from_dict({"hom": {"delay_range_ps": [-5.0, 5.0]}})
    assert cfg.hom.delay_range_ps == (-5.0, 5.0)


def test_scalar_settings_reject_non_numbers():
    with pytest.raises(ConfigError):
        config_from_dict({"simulation": {"pulses": True}})
    with pytest.raises(ConfigError):
        config_from_dict({"simulation": {"pulses": "many"}})
    cfg = config_from_dict({"simulation": {"pulses": 5000, "seed": 7}})
    assert cfg.simulation.pulses == 5000
    assert cfg.simulation.seed == 7


def test_dispersion_table_files(tmp_path):
    for band, lams in (("tel", (1400.0, 1500.0, 1600.0, 1700.0)),
                       ("pmp", (700.0, 750.0, 800.0, 850.0))):
        lines = ["wavelength_nm,n_eff"]
        lines += [f"{lam},2.1" for lam in lams]
        (tmp_path / f"{band}.csv").write_text("\n".join(lines) + "\n")
    cfg = config_from_dict({"device": {"A": {"dispersion_file": {
        "telecom": "tel.csv", "pump": "pmp.csv"}}}}, base=tmp_path)
    dev = cfg.device("A")
    assert dev.dispersion.telecom.n_eff(1550.0) == pytest.approx(2.1, abs=1e-12)
    assert dev.dispersion.pump.n_eff(775.0) == pytest.approx(2.1, abs=1e-12)


def test_dispersion_file_missing_named(tmp_path):
    with pytest.raises(ConfigError) as exc:
        config_from_dict({"device": {"A": {"dispersion_file": {
            "telecom": "gone.csv", "pump": "gone.csv"}}}}, base=tmp_path)
    assert "gone.csv" in str(exc.value)


def test_dispersion_file_needs_both_bands(tmp_path):
    with pytest.raises(ConfigError):
        config_from_dict({"device": {"A": {"dispersion_file": {
            "telecom": "t.csv"}}}}, base=tmp_path)


def test_dispersion_exclusive_with_file(tmp_path):
    with pytest.raises(ConfigError):
        config_from_dict({"device": {"A": {
            "dispersion": "bundled",
            "dispersion_file": {"telecom": "t.csv", "pump": "p.csv"}}}},
            base=tmp_path)
    with pytest.raises(ConfigError):
        config_from_dict({"device": {"A": {"dispersion": "mystery"}}})


def test_detector_overrides():
    cfg = config_from_dict({"detectors": {"signal": {
        "efficiency": 0.6, "dead_time_ps": 0.0}}})
    det = cfg.detectors["signal"]
    assert det.efficiency == 0.6
    assert det.dead_time_ps == 0.0
    assert det.jitter_sigma_ps == 10.0
    assert cfg.detectors["idler"].efficiency == 0.8


def test_output_directory():
    cfg = config_from_dict({"output": {"directory": "results"}})
    assert cfg.output_dir == "results"


def test_load_config_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("\n".join([
        "[pump]",
        'kind = "pulsed"',
        "center_nm = 775.0",
        "fwhm_nm = 0.5",
        "",
        "[simulation]",
        "pulses = 1234",
    ]) + "\n")
    cfg = load_config(path)
    assert cfg.pump.center_nm == 775.0
    assert cfg.pump.fwhm_nm == 0.5
    assert cfg.simulation.pulses == 1234


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.toml")


def test_load_config_bad_toml(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[pump\nkind = pulsed ==\n")
    with pytest.raises(ConfigError):
        load_config(path)
