"""Bundled device and pump presets used by the demos and the test suite.

The default source is a 5 mm, third-order poled waveguide with a
1.18 um period on the calibrated bundled dispersion; it is degenerate
at a 775.0 nm pump.  Helpers derive the companion devices: a copy with
its phase matching shifted by a small index offset, and a first-order
co-propagating device whose period is computed from the same calibrated
indices so both geometries are degenerate at the same pump.
"""

from __future__ import annotations

from .dispersion import WaveguideDispersion, bundled_waveguide
from .jsa import PumpSpec
from .phasematch import DeviceSpec

DEFAULT_POLING_PERIOD_UM = 1.18
DEFAULT_QPM_ORDER = 3
DEFAULT_DUTY_CYCLE = 0.5
DEFAULT_LENGTH_MM = 5.0

# pulsed pump defaults: mode-locked oscillator filtered to 1.1 nm
DEFAULT_PUMP_CENTER_NM = 774.0
DEFAULT_PUMP_FWHM_NM = 1.1
DEFAULT_REPETITION_MHZ = 80.0

DEGENERATE_PUMP_NM = 775.0


def default_device(label: str = "A", index_offset: float = 0.0,
                   length_mm: float = DEFAULT_LENGTH_MM,
                   dispersion: WaveguideDispersion | None = None,
                   ripple=None) -> DeviceSpec:
    """The bundled counter-propagating source."""
    return DeviceSpec(geometry="counter_propagating",
                      poling_period_um=DEFAULT_POLING_PERIOD_UM,
                      qpm_order=DEFAULT_QPM_ORDER,
                      duty_cycle=DEFAULT_DUTY_CYCLE,
                      length_mm=length_mm,
                      dispersion=dispersion or bundled_waveguide(),
                      index_offset=index_offset,
                      ripple=ripple,
                      label=label)


def offset_for_pump_shift(shift_nm: float,
                          dispersion: WaveguideDispersion | None = None) -> float:
    """Device index offset that moves the degenerate pump of the default
    counter-propagating device by shift_nm.

    At degeneracy the signal and idler momenta cancel, so the root
    condition reduces to n_p(lam_p) + offset = m*lam_p/period.
    """
    wg = dispersion or bundled_waveguide()
    lam_p = DEGENERATE_PUMP_NM + float(shift_nm)
    target = DEFAULT_QPM_ORDER * (lam_p * 1e-3) / DEFAULT_POLING_PERIOD_UM
    return target - wg.pump.n_eff(lam_p)


def shifted_device(shift_nm: float = 0.15, label: str = "B",
                   dispersion: WaveguideDispersion | None = None) -> DeviceSpec:
    """Nominally identical source whose degenerate pump sits shift_nm away."""
    wg = dispersion or bundled_waveguide()
    return default_device(label=label, dispersion=wg,
                          index_offset=offset_for_pump_shift(shift_nm, wg))


def co_propagating_device(label: str = "CO", length_mm: float = DEFAULT_LENGTH_MM,
                          dispersion: WaveguideDispersion | None = None) -> DeviceSpec:
    """First-order co-propagating comparison device, degenerate at the
    same 775.0 nm pump as the bundled counter-propagating source."""
    from .constants import TWO_PI
    wg = dispersion or bundled_waveguide()
    k_p = wg.pump.propagation_constant(DEGENERATE_PUMP_NM)
    k_s = wg.telecom.propagation_constant(2 * DEGENERATE_PUMP_NM)
    period = TWO_PI / (k_p - 2.0 * k_s)
    return DeviceSpec(geometry="co_propagating", poling_period_um=float(period),
                      qpm_order=1, duty_cycle=DEFAULT_DUTY_CYCLE,
                      length_mm=length_mm, dispersion=wg, label=label)


def default_pump() -> PumpSpec:
    return PumpSpec(kind="pulsed", center_nm=DEFAULT_PUMP_CENTER_NM,
                    fwhm_nm=DEFAULT_PUMP_FWHM_NM,
                    repetition_mhz=DEFAULT_REPETITION_MHZ)


def degenerate_pump() -> PumpSpec:
    """Pulsed pump parked exactly on the degeneracy point."""
    return PumpSpec(kind="pulsed", center_nm=DEGENERATE_PUMP_NM,
                    fwhm_nm=DEFAULT_PUMP_FWHM_NM,
                    repetition_mhz=DEFAULT_REPETITION_MHZ)
