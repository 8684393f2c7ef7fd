"""Hong-Ou-Mandel interference, in the time and frequency domains.

Monochromatic pump: photon pairs leave at frequencies omega_deg +- Omega
with the pair amplitude A(Omega) given by the phase matching function
along the energy conservation line.  The normalised coincidence rate of
the two outputs of a balanced splitter versus relative delay tau is

    N(tau) = 1 - Re[ int A(Omega) conj(A(-Omega)) e^(2i*Omega*tau) dOmega
                     / int |A(Omega)|^2 dOmega ]

evaluated by Riemann quadrature on a symmetric detuning grid.  N is 1
far from the dip, 0 at a perfect dip, and may exceed 1 (anti-bunching)
when the pump is detuned from the degeneracy point; the raw coincidence
probability is N/2.

Two independently heralded sources interfere according to their reduced
spectral density matrices:

    N(tau) = 1 - Re sum_{w,w'} rho_A(w,w') rho_B(w',w) e^(i(w-w')tau)

with the grid weights folded in, so N(0) = 1 - tr(rho_A rho_B).
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np

from .constants import C_NM_PER_PS, PS_PER_MM, TWO_PI
from .errors import AxisMismatchError, EmptyCurveError, EmptySupportError, InputError, NotNormalizedError
from .gridio import Grid2D
from .jsa import DensityMatrix
from .phasematch import DeviceSpec, pmf_amplitude

_SUPPORT_THRESHOLD = 1e-3


@dataclass(eq=False)
class HomCurve:
    """Normalised coincidence rate against one scan axis.

    x_kind is "delay_ps", "path_mm" or "pump_nm".
    """

    x: np.ndarray
    values: np.ndarray
    x_kind: str = "delay_ps"

    def __post_init__(self):
        self.x = np.atleast_1d(np.asarray(self.x, dtype=float))
        self.values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if self.x.shape != self.values.shape:
            raise InputError("x and values must be congruent")


def visibility(curve: HomCurve) -> float:
    """1 - min(N), clipped to [0, 1]; warns when clipping fires."""
    if curve.values.size == 0:
        raise EmptyCurveError("curve has no samples")
    v = 1.0 - float(np.min(curve.values))
    if v < 0.0 or v > 1.0:
        warnings.warn(f"visibility {v:.3g} outside [0, 1], clipping", stacklevel=2)
        v = min(max(v, 0.0), 1.0)
    return v


def delay_to_path_mm(delay_ps, offset_mm: float = 0.0):
    """Free-space path difference for a given delay; optional axis offset."""
    return np.asarray(delay_ps, dtype=float) / PS_PER_MM + offset_mm


def path_to_delay_ps(path_mm, offset_mm: float = 0.0):
    return (np.asarray(path_mm, dtype=float) - offset_mm) * PS_PER_MM


def curve_with_path_axis(curve: HomCurve, offset_mm: float = 0.0) -> HomCurve:
    if curve.x_kind != "delay_ps":
        raise InputError("curve axis is not a delay")
    return HomCurve(x=delay_to_path_mm(curve.x, offset_mm),
                    values=curve.values.copy(), x_kind="path_mm")


def _pair_amplitude_cw(device: DeviceSpec, pump_nm: float,
                       detuning_range_nm: float, quad_points: int):
    """A(Omega) sampled on a symmetric detuning grid (rad/ps)."""
    if quad_points < 16:
        raise InputError("quad_points must be >= 16")
    n = int(quad_points) | 1          # odd count keeps the grid symmetric
    lam_deg = 2.0 * float(pump_nm)
    omega_deg = TWO_PI * C_NM_PER_PS / lam_deg
    d_omega = TWO_PI * C_NM_PER_PS * detuning_range_nm / lam_deg ** 2
    omega = np.linspace(-d_omega, d_omega, n)
    lam_s = TWO_PI * C_NM_PER_PS / (omega_deg + omega)
    lam_i = TWO_PI * C_NM_PER_PS / (omega_deg - omega)
    amp = pmf_amplitude(device, lam_s, lam_i)
    if float(np.max(amp * amp)) < _SUPPORT_THRESHOLD:
        raise EmptySupportError(
            f"no phase matching within +-{detuning_range_nm} nm of {lam_deg} nm")
    return omega, amp


def hom_cw_dip(device: DeviceSpec, pump_nm: float, delays_ps,
               detuning_range_nm: float = 2.0,
               quad_points: int = 4097) -> HomCurve:
    """Normalised coincidence dip of one pair source on a balanced splitter.

    detuning_range_nm bounds the quadrature grid around the degenerate
    wavelength 2*pump_nm; it must cover the phase matching ridge.
    """
    delays = np.atleast_1d(np.asarray(delays_ps, dtype=float))
    omega, amp = _pair_amplitude_cw(device, pump_nm, detuning_range_nm, quad_points)
    overlap = amp * np.conj(amp[::-1])          # A(Omega) conj(A(-Omega))
    denom = float(np.sum(np.abs(amp) ** 2))
    values = np.empty(delays.size)
    for j, tau in enumerate(delays):
        values[j] = 1.0 - float(np.sum(overlap * np.exp(2j * omega * tau)).real) / denom
    return HomCurve(x=delays, values=values, x_kind="delay_ps")


def hom_map(device: DeviceSpec, pump_range_nm, delay_range_ps,
            n_pump: int, n_delay: int, detuning_range_nm: float = 2.0,
            quad_points: int = 4097) -> Grid2D:
    """Dip-versus-pump-wavelength map; rows pump, columns delay."""
    if n_pump < 2 or n_delay < 2:
        raise InputError("map needs >= 2 samples per axis")
    pumps = np.linspace(float(pump_range_nm[0]), float(pump_range_nm[1]), int(n_pump))
    delays = np.linspace(float(delay_range_ps[0]), float(delay_range_ps[1]), int(n_delay))
    rows = np.empty((pumps.size, delays.size))
    for j, lp in enumerate(pumps):
        rows[j] = hom_cw_dip(device, float(lp), delays,
                             detuning_range_nm=detuning_range_nm,
                             quad_points=quad_points).values
    return Grid2D(row_axis=pumps, col_axis=delays, values=rows,
                  row_label="pump_nm", col_label="delay_ps", kind="hom")


def hom_spectral_slice(map_grid: Grid2D, delay_ps: float) -> HomCurve:
    """Column of a dip map at the delay sample nearest delay_ps; the
    frequency-domain dip profile.  No interpolation."""
    if map_grid.col_label != "delay_ps" or map_grid.row_label != "pump_nm":
        raise InputError("expected a pump x delay map")
    idx = int(np.argmin(np.abs(map_grid.col_axis - float(delay_ps))))
    return HomCurve(x=map_grid.row_axis.copy(), values=map_grid.values[:, idx].copy(),
                    x_kind="pump_nm")


def heralded_two_source_hom(dm_a: DensityMatrix, dm_b: DensityMatrix,
                            delays_ps) -> HomCurve:
    """Interference of two independently heralded photons.

    Both density matrices must share one wavelength axis and be
    trace-normalised.  Identical pure states dip to 0; identical mixed
    states dip to 1 - tr(rho^2).
    """
    if dm_a.wavelength_nm.shape != dm_b.wavelength_nm.shape or \
            np.max(np.abs(dm_a.wavelength_nm - dm_b.wavelength_nm)) > 1e-9:
        raise AxisMismatchError("density matrices live on different axes")
    for name, dm in (("A", dm_a), ("B", dm_b)):
        if abs(dm.trace() - 1.0) > 1e-8:
            raise NotNormalizedError(f"source {name} trace = {dm.trace():.6g}")
    delays = np.atleast_1d(np.asarray(delays_ps, dtype=float))
    omega = TWO_PI * C_NM_PER_PS / dm_a.wavelength_nm
    cross = dm_a.matrix * dm_b.matrix.T        # rho_A(w,w') rho_B(w',w)
    w2 = dm_a.step ** 2
    values = np.empty(delays.size)
    for j, tau in enumerate(delays):
        phase = np.exp(1j * omega * tau)
        values[j] = 1.0 - w2 * float((phase * (cross @ np.conj(phase))).sum().real)
    return HomCurve(x=delays, values=values, x_kind="delay_ps")
