"""Quasi-phase-matching of a single poled waveguide device.

Geometry convention: the pump and the signal propagate forward, and in
the counter-propagating geometry the idler travels backward, so its
momentum enters the mismatch with the opposite sign:

    counter_propagating:  dk = k_p - k_s + k_i - 2*pi*m/poling_period
    co_propagating:       dk = k_p - k_s - k_i - 2*pi*m/poling_period

k = 2*pi*n_eff(lam)/lam in rad/um, m the grating order.  Pump, signal
and idler wavelengths obey 1/lam_p = 1/lam_s + 1/lam_i.  The phase
matching function is the unnormalised sinc of dk*L/2; build_jsa in the
jsa module attaches the exp(i*dk*L/2) propagation phase, everything
here is real.

An optional multiplicative ripple on the phase matching function models
weak cavity effects from reflective couplers; it is off by default and
takes no part in any calibrated value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .constants import TWO_PI
from .dispersion import WaveguideDispersion
from .errors import EmptySupportError, InputError, NoRootError
from .gridio import Grid2D

GEOMETRIES = ("counter_propagating", "co_propagating")

# raw sinc^2 below this ceiling counts as "no phase matching in range"
_SUPPORT_THRESHOLD = 1e-3


@dataclass(frozen=True, eq=False)
class PmfRipple:
    """Multiplicative ripple 1 + amplitude*cos(2*pi*x/period + phase) on the
    phase matching amplitude; x is the wavelength named by variable."""

    amplitude: float
    period_nm: float
    phase_rad: float = 0.0
    variable: str = "pump"  # pump | signal | idler

    def __post_init__(self):
        if not abs(self.amplitude) < 1.0:
            raise InputError("ripple amplitude must satisfy |a| < 1")
        if self.period_nm <= 0:
            raise InputError("ripple period must be positive")
        if self.variable not in ("pump", "signal", "idler"):
            raise InputError(f"unknown ripple variable {self.variable!r}")


@dataclass(frozen=True, eq=False)
class DeviceSpec:
    """One poled waveguide source.

    index_offset is a per-device additive index detuning applied to all
    three fields on top of the dispersion model; it models slightly
    shifted phase matching between nominally identical sources.
    """

    geometry: str
    poling_period_um: float
    qpm_order: int
    duty_cycle: float
    length_mm: float
    dispersion: WaveguideDispersion
    index_offset: float = 0.0
    ripple: PmfRipple | None = None
    label: str = "A"
    _telecom: object = field(default=None, repr=False, compare=False)
    _pump: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise InputError(f"geometry must be one of {GEOMETRIES}")
        if not self.poling_period_um > 0:
            raise InputError("poling period must be positive")
        if not (isinstance(self.qpm_order, int) and self.qpm_order >= 1):
            raise InputError("qpm order must be an integer >= 1")
        if not 0.0 <= self.duty_cycle <= 1.0:
            raise InputError("duty cycle must lie in [0, 1]")
        if not self.length_mm > 0:
            raise InputError("device length must be positive")
        effective = self.dispersion.with_offset(self.index_offset) \
            if self.index_offset else self.dispersion
        object.__setattr__(self, "_telecom", effective.telecom)
        object.__setattr__(self, "_pump", effective.pump)

    @property
    def length_um(self) -> float:
        return self.length_mm * 1e3

    @property
    def grating_momentum(self) -> float:
        """Grating wavevector 2*pi*m/poling_period in rad/um."""
        return TWO_PI * self.qpm_order / self.poling_period_um


def pump_wavelength_nm(signal_nm, idler_nm):
    """Energy-conserving pump wavelength 1/lam_p = 1/lam_s + 1/lam_i."""
    signal_nm = np.asarray(signal_nm, dtype=float)
    idler_nm = np.asarray(idler_nm, dtype=float)
    out = 1.0 / (1.0 / signal_nm + 1.0 / idler_nm)
    return float(out) if out.ndim == 0 else out


def delta_k(device: DeviceSpec, signal_nm, idler_nm):
    """Phase mismatch dk in rad/um at (signal, idler); pump from energy
    conservation.  Accepts broadcastable arrays."""
    lam_p = pump_wavelength_nm(signal_nm, idler_nm)
    k_p = device._pump.propagation_constant(lam_p)
    k_s = device._telecom.propagation_constant(signal_nm)
    k_i = device._telecom.propagation_constant(idler_nm)
    if device.geometry == "counter_propagating":
        dk = k_p - k_s + k_i - device.grating_momentum
    else:
        dk = k_p - k_s - k_i - device.grating_momentum
    return dk


def _sinc(x):
    # unnormalised sinc: sin(x)/x with sinc(0) = 1
    return np.sinc(np.asarray(x) / np.pi)


def _ripple_factor(device: DeviceSpec, signal_nm, idler_nm):
    rip = device.ripple
    if rip is None:
        return 1.0
    if rip.variable == "pump":
        x = pump_wavelength_nm(signal_nm, idler_nm)
    elif rip.variable == "signal":
        x = np.asarray(signal_nm, dtype=float)
    else:
        x = np.asarray(idler_nm, dtype=float)
    return 1.0 + rip.amplitude * np.cos(TWO_PI * x / rip.period_nm + rip.phase_rad)


def pmf_amplitude(device: DeviceSpec, signal_nm, idler_nm):
    """Real phase matching amplitude sinc(dk*L/2), ripple applied if set.

    Ripple off, the value lies in [min(sinc) ~ -0.2172, 1].
    """
    arg = 0.5 * delta_k(device, signal_nm, idler_nm) * device.length_um
    amp = _sinc(arg) * _ripple_factor(device, signal_nm, idler_nm)
    return float(amp) if np.ndim(amp) == 0 else amp


def pmf_intensity(device: DeviceSpec, signal_nm, idler_nm):
    amp = pmf_amplitude(device, signal_nm, idler_nm)
    return amp * amp


def sfg_map(device: DeviceSpec, signal_range_nm, idler_range_nm, grid_n) -> Grid2D:
    """Phase matching intensity on a uniform signal x idler grid.

    Mirrors a sum-frequency-generation scan of the device: rows are the
    signal axis, columns the idler axis.  grid_n may be one int or a
    (n_signal, n_idler) pair.
    """
    if np.isscalar(grid_n):
        n_s = n_i = int(grid_n)
    else:
        n_s, n_i = (int(n) for n in grid_n)
    if n_s < 2 or n_i < 2:
        raise InputError("grid_n must be >= 2 per axis")
    sig = np.linspace(float(signal_range_nm[0]), float(signal_range_nm[1]), n_s)
    idl = np.linspace(float(idler_range_nm[0]), float(idler_range_nm[1]), n_i)
    intensity = pmf_intensity(device, sig[:, None], idl[None, :])
    return Grid2D(row_axis=sig, col_axis=idl, values=intensity,
                  row_label="signal_nm", col_label="idler_nm", kind="intensity")


class MarginalSpectra(NamedTuple):
    signal_wavelength_nm: np.ndarray
    signal: np.ndarray
    idler_wavelength_nm: np.ndarray
    idler: np.ndarray


def marginal_spectra_cw(device: DeviceSpec, pump_nm: float,
                        detuning_range_nm: float, grid_n: int) -> MarginalSpectra:
    """Signal and idler spectra under a monochromatic pump, unit peak.

    Each spectrum is sampled on its own uniform axis centred on the
    degenerate wavelength 2*pump_nm, the partner wavelength following
    from energy conservation; the idler spectrum carries the
    |dlam_s/dlam_i| change-of-variables factor before normalisation.
    """
    if grid_n < 2:
        raise InputError("grid_n must be >= 2")
    centre = 2.0 * float(pump_nm)
    axis = np.linspace(centre - detuning_range_nm, centre + detuning_range_nm,
                       int(grid_n))

    sig_axis = axis
    idl_of_sig = 1.0 / (1.0 / pump_nm - 1.0 / sig_axis)
    signal = pmf_intensity(device, sig_axis, idl_of_sig)

    idl_axis = axis.copy()
    sig_of_idl = 1.0 / (1.0 / pump_nm - 1.0 / idl_axis)
    jac = (sig_of_idl / idl_axis) ** 2
    idler = pmf_intensity(device, sig_of_idl, idl_axis) * jac

    peak_s, peak_i = float(np.max(signal)), float(np.max(idler))
    if peak_s < _SUPPORT_THRESHOLD or peak_i < _SUPPORT_THRESHOLD:
        raise EmptySupportError(
            f"no phase matching within +-{detuning_range_nm} nm of {centre} nm "
            f"(max sinc^2 = {max(peak_s, peak_i):.3g})")
    return MarginalSpectra(sig_axis, signal / peak_s, idl_axis, idler / peak_i)


def _sin_pi(x: float) -> float:
    # sin(pi*x) with the argument reduced to [-0.5, 0.5] first, so integer
    # x gives exactly 0.0 and half-integer x exactly +-1.0
    k = round(x)
    s = math.sin(math.pi * (x - k))
    return -s if k % 2 else s


def qpm_effective_nonlinearity(order: int, duty_cycle: float) -> float:
    """Relative nonlinear amplitude (2/(pi*m))*sin(pi*m*D) of a square
    poling grating of order m and duty cycle D; 1st order, D=0.5 gives
    the textbook 2/pi."""
    if not (isinstance(order, (int, np.integer)) and order >= 1):
        raise InputError("order must be an integer >= 1")
    if not 0.0 <= duty_cycle <= 1.0:
        raise InputError("duty cycle must lie in [0, 1]")
    m = int(order)
    return (2.0 / (math.pi * m)) * _sin_pi(m * duty_cycle)


def _degenerate_mismatch(device: DeviceSpec, pump_nm):
    return delta_k(device, 2.0 * np.asarray(pump_nm, dtype=float),
                   2.0 * np.asarray(pump_nm, dtype=float))


def find_degenerate_pump(device: DeviceSpec, pump_range_nm=None,
                         scan_points: int = 512) -> float:
    """Pump wavelength at which the device is exactly degenerate
    (dk(2*lam_p, 2*lam_p) = 0), found by bracketing scan plus bisection.

    The scan covers pump_range_nm, defaulting to the overlap of the pump
    mode validity range with half the telecom one.  Raises NoRootError
    when the mismatch never changes sign there.
    """
    p_lo, p_hi = device._pump.valid_range_nm
    t_lo, t_hi = device._telecom.valid_range_nm
    lo = max(p_lo, t_lo / 2.0)
    hi = min(p_hi, t_hi / 2.0)
    if pump_range_nm is not None:
        lo = max(lo, float(pump_range_nm[0]))
        hi = min(hi, float(pump_range_nm[1]))
    if not lo < hi:
        raise InputError("empty pump search range")

    grid = np.linspace(lo, hi, int(scan_points))
    g = _degenerate_mismatch(device, grid)
    sign_change = np.nonzero(np.diff(np.signbit(g)))[0]
    exact = np.nonzero(g == 0.0)[0]
    if exact.size:
        return float(grid[exact[0]])
    if sign_change.size == 0:
        raise NoRootError(
            f"no degenerate phase matching for pump in [{lo:.6g}, {hi:.6g}] nm")

    a, b = float(grid[sign_change[0]]), float(grid[sign_change[0] + 1])
    ga = float(_degenerate_mismatch(device, a))
    # bisect until the interval is far below the 1e-6 nm contract so the
    # residual mismatch lands under 1e-9 rad/um
    while b - a > 1e-10:
        mid = 0.5 * (a + b)
        gm = float(_degenerate_mismatch(device, mid))
        if gm == 0.0:
            return mid
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    return 0.5 * (a + b)
