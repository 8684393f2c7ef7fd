"""Joint spectral amplitudes and their Schmidt structure.

The two-photon amplitude on a uniform wavelength grid is

    f(lam_s, lam_i) = alpha(lam_p) * sinc(dk*L/2) * exp(i*dk*L/2)

with alpha a Gaussian pump envelope (unit peak, sigma from the FWHM),
lam_p fixed by energy conservation and dk from the phasematch module.
Amplitudes are normalised so that sum |f|^2 dlam_s dlam_i = 1; all
inner products below are plain Riemann sums with the axis steps as
weights.

Schmidt data come from an SVD of the weighted values matrix.  The
purity derived from the Schmidt coefficients and the trace of the
squared heralded density matrix are computed along deliberately
independent code paths so they can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (CwHasNoEnvelopeError, EmptySupportError, InputError,
                     NegativeIntensityError, NotNormalizedError)
from .gridio import Grid2D, _check_axis
from .phasematch import DeviceSpec, delta_k, pmf_amplitude, pump_wavelength_nm

_FWHM_TO_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))
NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PumpSpec:
    """Pump field: monochromatic ("cw") or Gaussian pulsed.

    fwhm_nm is the intensity FWHM of the pulsed spectrum; rep rate and
    average power are carried for bookkeeping and the tag simulator.
    """

    kind: str
    center_nm: float
    fwhm_nm: float | None = None
    repetition_mhz: float | None = None
    average_power_mw: float | None = None

    def __post_init__(self):
        if self.kind not in ("cw", "pulsed"):
            raise InputError("pump kind must be 'cw' or 'pulsed'")
        if not self.center_nm > 0:
            raise InputError("pump centre wavelength must be positive")
        if self.kind == "pulsed":
            if self.fwhm_nm is None or not self.fwhm_nm > 0:
                raise InputError("pulsed pump needs fwhm_nm > 0")
            if self.repetition_mhz is not None and not self.repetition_mhz > 0:
                raise InputError("repetition rate must be positive")

    @property
    def sigma_nm(self) -> float:
        if self.kind != "pulsed":
            raise CwHasNoEnvelopeError("cw pump has no spectral envelope")
        return self.fwhm_nm / _FWHM_TO_SIGMA

    @property
    def repetition_period_ps(self) -> float:
        if self.repetition_mhz is None:
            raise InputError("pump has no repetition rate")
        return 1e6 / self.repetition_mhz


def pump_envelope(pump: PumpSpec, wavelength_nm):
    """Gaussian amplitude envelope alpha(lam_p), unit peak at the centre."""
    if pump.kind != "pulsed":
        raise CwHasNoEnvelopeError("cw pump has no spectral envelope")
    lam = np.asarray(wavelength_nm, dtype=float)
    sig = pump.sigma_nm
    out = np.exp(-((lam - pump.center_nm) ** 2) / (2.0 * sig * sig))
    return float(out) if np.ndim(wavelength_nm) == 0 else out


@dataclass(eq=False)
class JointAmplitude:
    """Complex two-photon amplitude on a uniform signal x idler grid."""

    signal_nm: np.ndarray
    idler_nm: np.ndarray
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.signal_nm = _check_axis(self.signal_nm, "signal")
        self.idler_nm = _check_axis(self.idler_nm, "idler")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.signal_nm.size, self.idler_nm.size):
            raise InputError("values shape does not match axes")

    @property
    def signal_step(self) -> float:
        return float(self.signal_nm[1] - self.signal_nm[0])

    @property
    def idler_step(self) -> float:
        return float(self.idler_nm[1] - self.idler_nm[0])

    @property
    def weight(self) -> float:
        return self.signal_step * self.idler_step

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.weight)

    def intensity(self) -> Grid2D:
        return Grid2D(row_axis=self.signal_nm, col_axis=self.idler_nm,
                      values=np.abs(self.values) ** 2, kind="intensity")

    def marginals(self):
        """(signal, idler) intensity densities, integrated over the partner."""
        jsi = np.abs(self.values) ** 2
        return jsi.sum(axis=1) * self.idler_step, jsi.sum(axis=0) * self.signal_step


def build_jsa(device: DeviceSpec, pump: PumpSpec, signal_range_nm,
              idler_range_nm, grid_n) -> JointAmplitude:
    """Normalised joint spectral amplitude of a pulsed-pump source.

    grid_n is one int or a (n_signal, n_idler) pair.  Raises
    EmptySupportError when the pump envelope and the phase matching
    ridge miss each other everywhere on the grid.
    """
    if np.isscalar(grid_n):
        n_s = n_i = int(grid_n)
    else:
        n_s, n_i = (int(n) for n in grid_n)
    if n_s < 2 or n_i < 2:
        raise InputError("grid_n must be >= 2 per axis")
    sig = np.linspace(float(signal_range_nm[0]), float(signal_range_nm[1]), n_s)
    idl = np.linspace(float(idler_range_nm[0]), float(idler_range_nm[1]), n_i)

    lam_p = pump_wavelength_nm(sig[:, None], idl[None, :])
    alpha = pump_envelope(pump, lam_p)
    dk = delta_k(device, sig[:, None], idl[None, :])
    phase = np.exp(0.5j * dk * device.length_um)
    values = alpha * pmf_amplitude(device, sig[:, None], idl[None, :]) * phase

    peak = float(np.max(np.abs(values)))
    if peak < 1e-12:
        raise EmptySupportError("pump envelope and phase matching do not overlap")
    values = values / math.sqrt(np.sum(np.abs(values) ** 2)
                                * (sig[1] - sig[0]) * (idl[1] - idl[0]))
    return JointAmplitude(signal_nm=sig, idler_nm=idl, values=values,
                          normalized=True)


@dataclass(eq=False)
class SchmidtDecomposition:
    """Schmidt data of a normalised joint amplitude.

    coefficients are the normalised squared singular values (descending,
    summing to one).  Mode matrices hold one mode per column,
    orthonormal under the grid inner product sum u_a conj(u_b) dlam.
    The phase convention makes the first non-negligible entry of each
    signal mode real and positive.
    """

    coefficients: np.ndarray
    signal_modes: np.ndarray
    idler_modes: np.ndarray
    signal_nm: np.ndarray
    idler_nm: np.ndarray

    @property
    def signal_step(self) -> float:
        return float(self.signal_nm[1] - self.signal_nm[0])

    @property
    def idler_step(self) -> float:
        return float(self.idler_nm[1] - self.idler_nm[0])


def schmidt_decompose(jsa: JointAmplitude) -> SchmidtDecomposition:
    """SVD of the weighted amplitude matrix; requires unit norm."""
    if not jsa.normalized or abs(jsa.norm_squared() - 1.0) > 1e-8:
        raise NotNormalizedError(
            f"joint amplitude norm^2 = {jsa.norm_squared():.6g}, expected 1")
    ws, wi = jsa.signal_step, jsa.idler_step
    weighted = jsa.values * math.sqrt(ws * wi)
    u, s, vh = np.linalg.svd(weighted, full_matrices=False)
    lam = s ** 2 / float(np.sum(s ** 2))

    sig_modes = u / math.sqrt(ws)
    idl_modes = vh.T / math.sqrt(wi)   # column k pairs with sig_modes[:, k]
    # deterministic phase: first entry above threshold of each signal
    # mode made real positive, compensated on the idler side
    for k in range(sig_modes.shape[1]):
        col = sig_modes[:, k]
        big = np.nonzero(np.abs(col) > 1e-9 * np.max(np.abs(col)))[0]
        if big.size == 0:
            continue
        ph = col[big[0]] / abs(col[big[0]])
        sig_modes[:, k] = col / ph
        idl_modes[:, k] = idl_modes[:, k] * ph
    return SchmidtDecomposition(coefficients=lam, signal_modes=sig_modes,
                                idler_modes=idl_modes,
                                signal_nm=jsa.signal_nm.copy(),
                                idler_nm=jsa.idler_nm.copy())


def reconstruct_jsa(schmidt: SchmidtDecomposition) -> np.ndarray:
    """Values matrix rebuilt from the Schmidt triple (for residual checks)."""
    s = np.sqrt(schmidt.coefficients)
    return (schmidt.signal_modes * s) @ schmidt.idler_modes.T


def purity(schmidt: SchmidtDecomposition) -> float:
    """Heralded single-photon purity sum lam_k^2."""
    lam = np.asarray(schmidt.coefficients, dtype=float)
    return float(np.sum(lam ** 2))


def schmidt_number(schmidt: SchmidtDecomposition) -> float:
    """Effective mode count K = 1/sum lam_k^2."""
    return 1.0 / purity(schmidt)


def synthetic_schmidt(coefficients, grid_n: int | None = None) -> SchmidtDecomposition:
    """Decomposition with prescribed coefficients and trivial flat-top
    modes, for detector-level studies that only need mode statistics."""
    lam = np.asarray(coefficients, dtype=float)
    if lam.ndim != 1 or lam.size == 0 or np.any(lam < 0) or np.sum(lam) <= 0:
        raise InputError("coefficients must be non-negative with positive sum")
    lam = np.sort(lam)[::-1] / np.sum(lam)
    n = int(grid_n) if grid_n is not None else max(lam.size, 8)
    if n < lam.size:
        raise InputError("grid_n smaller than the number of modes")
    axis = 1550.0 + np.arange(n) * 0.1
    modes = np.eye(n, lam.size) / math.sqrt(0.1)
    return SchmidtDecomposition(coefficients=lam, signal_modes=modes,
                                idler_modes=modes.copy(),
                                signal_nm=axis, idler_nm=axis.copy())


@dataclass(eq=False)
class DensityMatrix:
    """Single-photon spectral density matrix on a wavelength axis,
    trace-normalised under the grid weight."""

    wavelength_nm: np.ndarray
    matrix: np.ndarray

    @property
    def step(self) -> float:
        return float(self.wavelength_nm[1] - self.wavelength_nm[0])

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)) * self.step)


def heralded_density_matrix(jsa: JointAmplitude, herald_arm: str = "idler") -> DensityMatrix:
    """Reduced state of the kept photon after a non-resolving herald.

    herald_arm "idler" traces over the idler and returns a matrix on the
    signal axis; "signal" the other way round.
    """
    if herald_arm not in ("signal", "idler"):
        raise InputError("herald_arm must be 'signal' or 'idler'")
    if not jsa.normalized or abs(jsa.norm_squared() - 1.0) > 1e-8:
        raise NotNormalizedError("joint amplitude must be normalised")
    f = jsa.values
    if herald_arm == "idler":
        rho = (f @ f.conj().T) * jsa.idler_step
        axis = jsa.signal_nm.copy()
        step = jsa.signal_step
    else:
        rho = (f.T @ f.conj()) * jsa.signal_step
        axis = jsa.idler_nm.copy()
        step = jsa.idler_step
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.real(np.trace(rho)) * step)
    return DensityMatrix(wavelength_nm=axis, matrix=rho / tr)


def density_matrix_purity(dm: DensityMatrix) -> float:
    """trace(rho^2) under the grid weight; no SVD involved, so this is an
    independent cross-check of the Schmidt-path purity."""
    return float(np.sum(np.abs(dm.matrix) ** 2) * dm.step ** 2)


def jsa_from_jsi(jsi: Grid2D) -> JointAmplitude:
    """Phase-less amplitude estimate f = +sqrt(JSI), normalised.

    Accepts any real non-negative grid (intensity or counts); entries
    below -1e-12 of the peak raise, smaller negatives are clipped.
    """
    values = np.asarray(jsi.values, dtype=float)
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    if peak == 0.0:
        raise EmptySupportError("intensity grid is identically zero")
    if np.any(values < -1e-12 * peak):
        raise NegativeIntensityError("intensity grid has negative entries")
    amp = np.sqrt(np.clip(values, 0.0, None)).astype(complex)
    ws = jsi.row_axis[1] - jsi.row_axis[0]
    wi = jsi.col_axis[1] - jsi.col_axis[0]
    amp /= math.sqrt(np.sum(np.abs(amp) ** 2) * ws * wi)
    return JointAmplitude(signal_nm=jsi.row_axis.copy(), idler_nm=jsi.col_axis.copy(),
                          values=amp, normalized=True)
