"""TOML run configuration for the command line tool.

One file declares the devices (named A, B, ...), the pump, grid
windows, detector models and simulation settings.  Flags on the
command line override individual values; the loader only validates and
never computes physics.  Unknown keys are rejected so typos fail loudly
instead of silently running defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dispersion import WaveguideDispersion, bundled_waveguide, load_table_csv
from .errors import ConfigError
from .jsa import PumpSpec
from .phasematch import GEOMETRIES, DeviceSpec, PmfRipple
from .presets import (DEFAULT_DUTY_CYCLE, DEFAULT_LENGTH_MM,
                      DEFAULT_POLING_PERIOD_UM, DEFAULT_PUMP_CENTER_NM,
                      DEFAULT_PUMP_FWHM_NM, DEFAULT_QPM_ORDER,
                      DEFAULT_REPETITION_MHZ)
from .tagsim import DEFAULT_DISPERSION_PS_PER_NM, DetectorModel


@dataclass(frozen=True)
class GridSettings:
    sfg_signal_nm: tuple = (1540.0, 1560.0)
    sfg_idler_nm: tuple = (1540.0, 1560.0)
    sfg_n: int = 256
    jsa_signal_nm: tuple = (1538.0, 1554.0)
    jsa_idler_nm: tuple = (1548.5, 1551.5)
    jsa_n: int = 256
    reconstruct_n: int = 64


@dataclass(frozen=True)
class SimulationSettings:
    pulses: int = 1_000_000
    seed: int = 0
    mean_pairs_per_pulse: float = 0.003
    dispersion_ps_per_nm: float = DEFAULT_DISPERSION_PS_PER_NM
    lambda_ref_signal_nm: float = 1545.954046947251
    lambda_ref_idler_nm: float = 1550.053146656898


@dataclass(frozen=True)
class HomSettings:
    delay_range_ps: tuple = (-60.0, 60.0)
    delay_n: int = 241
    pump_range_nm: tuple = (774.85, 775.15)
    pump_n: int = 121
    pump_nm: float = 775.0
    detuning_range_nm: float = 2.0
    quad_points: int = 4097


@dataclass(frozen=True)
class RunConfig:
    devices: dict
    pump: PumpSpec
    detectors: dict
    grids: GridSettings = field(default_factory=GridSettings)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    hom: HomSettings = field(default_factory=HomSettings)
    output_dir: str = "out"

    def device(self, name: str) -> DeviceSpec:
        if name not in self.devices:
            raise ConfigError(f"no device {name!r}; configured: {sorted(self.devices)}")
        return self.devices[name]


def _reject_unknown(section: dict, allowed, where: str):
    extra = set(section) - set(allowed)
    if extra:
        raise ConfigError(f"unknown key(s) {sorted(extra)} in [{where}]")


def _pair(section, key, where):
    v = section[key]
    if not (isinstance(v, list) and len(v) == 2):
        raise ConfigError(f"[{where}] {key} must be a two-element list")
    return float(v[0]), float(v[1])


def _load_dispersion(section: dict, base: Path, where: str) -> WaveguideDispersion:
    named = section.get("dispersion")
    files = section.get("dispersion_file")
    if named is not None and files is not None:
        raise ConfigError(f"[{where}] give dispersion or dispersion_file, not both")
    if files is not None:
        if not (isinstance(files, dict) and set(files) == {"telecom", "pump"}):
            raise ConfigError(
                f"[{where}] dispersion_file needs telecom and pump entries")
        models = {}
        for band in ("telecom", "pump"):
            path = base / str(files[band])
            if not path.is_file():
                raise ConfigError(f"[{where}] dispersion file not found: {path}")
            models[band] = load_table_csv(path, label=f"{where}:{band}")
        return WaveguideDispersion(telecom=models["telecom"], pump=models["pump"])
    if named in (None, "bundled"):
        return bundled_waveguide()
    raise ConfigError(f"[{where}] unknown dispersion {named!r}")


_DEVICE_KEYS = ("geometry", "poling_period_um", "qpm_order", "duty_cycle",
                "length_mm", "index_offset", "dispersion", "dispersion_file",
                "ripple")
_RIPPLE_KEYS = ("amplitude", "period_nm", "phase_rad", "variable")


def _load_device(name: str, section: dict, base: Path) -> DeviceSpec:
    where = f"device.{name}"
    _reject_unknown(section, _DEVICE_KEYS, where)
    geometry = section.get("geometry", "counter_propagating")
    if geometry not in GEOMETRIES:
        raise ConfigError(f"[{where}] geometry must be one of {GEOMETRIES}")
    ripple = None
    if "ripple" in section:
        rs = section["ripple"]
        _reject_unknown(rs, _RIPPLE_KEYS, f"{where}.ripple")
        ripple = PmfRipple(amplitude=float(rs.get("amplitude", 0.0)),
                           period_nm=float(rs["period_nm"]),
                           phase_rad=float(rs.get("phase_rad", 0.0)),
                           variable=str(rs.get("variable", "pump")))
    try:
        return DeviceSpec(
            geometry=geometry,
            poling_period_um=float(section.get("poling_period_um",
                                               DEFAULT_POLING_PERIOD_UM)),
            qpm_order=int(section.get("qpm_order", DEFAULT_QPM_ORDER)),
            duty_cycle=float(section.get("duty_cycle", DEFAULT_DUTY_CYCLE)),
            length_mm=float(section.get("length_mm", DEFAULT_LENGTH_MM)),
            dispersion=_load_dispersion(section, base, where),
            index_offset=float(section.get("index_offset", 0.0)),
            ripple=ripple, label=name)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{where}] {exc}") from exc


_PUMP_KEYS = ("kind", "center_nm", "fwhm_nm", "repetition_mhz", "average_power_mw")


def _load_pump(section: dict) -> PumpSpec:
    _reject_unknown(section, _PUMP_KEYS, "pump")
    kwargs = {
        "kind": section.get("kind", "pulsed"),
        "center_nm": float(section.get("center_nm", DEFAULT_PUMP_CENTER_NM)),
        "repetition_mhz": float(section.get("repetition_mhz", DEFAULT_REPETITION_MHZ)),
    }
    if "fwhm_nm" in section:
        kwargs["fwhm_nm"] = float(section["fwhm_nm"])
    elif kwargs["kind"] == "pulsed":
        kwargs["fwhm_nm"] = DEFAULT_PUMP_FWHM_NM
    if "average_power_mw" in section:
        kwargs["average_power_mw"] = float(section["average_power_mw"])
    return PumpSpec(**kwargs)


_DET_KEYS = ("efficiency", "jitter_sigma_ps", "dark_count_hz", "dead_time_ps")


def _load_detector(name: str, section: dict) -> DetectorModel:
    _reject_unknown(section, _DET_KEYS, f"detectors.{name}")
    return DetectorModel(
        efficiency=float(section.get("efficiency", 0.8)),
        jitter_sigma_ps=float(section.get("jitter_sigma_ps", 10.0)),
        dark_count_hz=float(section.get("dark_count_hz", 100.0)),
        dead_time_ps=float(section.get("dead_time_ps", 50000.0)))


def _settings(cls, section: dict, where: str, pairs=()):
    fields = cls.__dataclass_fields__
    _reject_unknown(section, fields, where)
    kwargs = {}
    for key, value in section.items():
        if key in pairs:
            kwargs[key] = _pair(section, key, where)
        elif isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"[{where}] {key} must be a number")
        else:
            kwargs[key] = type(fields[key].default)(value)
    return cls(**kwargs)


_TOP_KEYS = ("device", "pump", "detectors", "grids", "simulation", "hom", "output")


def load_config(path) -> RunConfig:
    """Parse and validate a TOML run configuration.

    Relative dispersion-table paths resolve against the file's
    directory.  Missing sections fall back to the package defaults; a
    missing [device] table yields the single calibrated device A.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(raw, base=path.parent)


def config_from_dict(raw: dict, base=".") -> RunConfig:
    base = Path(base)
    _reject_unknown(raw, _TOP_KEYS, "top level")

    device_tables = raw.get("device", {"A": {}})
    if not device_tables:
        raise ConfigError("[device] declares no devices")
    devices = {name: _load_device(name, sec, base)
               for name, sec in device_tables.items()}

    pump = _load_pump(raw.get("pump", {}))

    det_tables = raw.get("detectors", {})
    detectors = {name: _load_detector(name, sec) for name, sec in det_tables.items()}
    for name in ("signal", "idler", "out1", "out2"):
        detectors.setdefault(name, DetectorModel())

    grids = _settings(GridSettings, raw.get("grids", {}), "grids",
                      pairs=("sfg_signal_nm", "sfg_idler_nm",
                             "jsa_signal_nm", "jsa_idler_nm"))
    sim = _settings(SimulationSettings, raw.get("simulation", {}), "simulation")
    hom = _settings(HomSettings, raw.get("hom", {}), "hom",
                    pairs=("delay_range_ps", "pump_range_nm"))

    out = raw.get("output", {})
    _reject_unknown(out, ("directory",), "output")
    return RunConfig(devices=devices, pump=pump, detectors=detectors,
                     grids=grids, simulation=sim, hom=hom,
                     output_dir=str(out.get("directory", "out")))
