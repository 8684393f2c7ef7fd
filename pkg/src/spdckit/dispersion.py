"""Effective-index dispersion models for the waveguide modes.

Two model kinds are supported:

* ``sellmeier`` -- n^2(lam) = a1 + a2/(lam^2 - a3^2) + a4/(lam^2 - a5^2)
  - a6*lam^2 with lam in um, plus an additive index offset.  The bundled
  coefficient sets are bulk values for 5% MgO-doped lithium niobate
  (ordinary and extraordinary axes at room temperature).
* ``table`` -- cubic interpolation through measured (wavelength, n_eff)
  samples, at least four points, strictly increasing wavelengths.
  Requests outside the tabulated span are a hard error; the model never
  extrapolates.

The additive ``index_offset`` is the calibration knob that turns a bulk
Sellmeier curve into an effective waveguide index.  The bundled
waveguide model carries one offset per mode, fitted (not measured) so
that the default third-order poled device is exactly degenerate at a
775.0 nm pump.  All evaluation routines accept scalars or numpy arrays.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .constants import TWO_PI
from .errors import InputError, MalformedTableError, OutOfRangeError

# Bulk Sellmeier coefficients for 5% MgO-doped congruent lithium niobate
# at room temperature, lam in um: (a1, a2, a3, a4, a5, a6).
MGO_LN_EXTRAORDINARY = (5.756, 0.0983, 0.2020, 189.32, 12.52, 1.32e-2)
MGO_LN_ORDINARY = (5.653, 0.1185, 0.2091, 89.61, 10.85, 1.97e-2)

# Mode offsets of the bundled thin-film waveguide model.  The pump value
# is fixed by requiring k_p(775.0 nm) to equal the third-order grating
# momentum 2*pi*3/1.18um of the default device; the telecom value is a
# confinement correction chosen inside the narrow band where the pump
# and telecom group indices nearly coincide (flat phase-matching ridge)
# while the co-propagating comparison device still gets a positive
# poling period.  Calibrated, not measured.
BUNDLED_TELECOM_OFFSET = -0.165
BUNDLED_PUMP_OFFSET = -0.20019963503994953

BUNDLED_TELECOM_RANGE_NM = (1400.0, 1700.0)
BUNDLED_PUMP_RANGE_NM = (700.0, 850.0)

_MIN_TABLE_POINTS = 4


@dataclass(frozen=True, eq=False)
class DispersionModel:
    """One guided mode: effective index versus vacuum wavelength.

    kind is "sellmeier" or "table".  index_offset is added to the base
    curve on every evaluation.  valid_range_nm bounds all queries.
    """

    kind: str
    valid_range_nm: tuple[float, float]
    index_offset: float = 0.0
    label: str = ""
    sellmeier_coefficients: tuple[float, ...] | None = None
    table_wavelength_nm: np.ndarray | None = field(default=None, repr=False)
    table_n_eff: np.ndarray | None = field(default=None, repr=False)
    _spline: CubicSpline | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = self.valid_range_nm
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise InputError(f"invalid wavelength range {self.valid_range_nm}")
        if self.kind == "sellmeier":
            if self.sellmeier_coefficients is None or len(self.sellmeier_coefficients) != 6:
                raise InputError("sellmeier model needs 6 coefficients")
        elif self.kind == "table":
            w = np.asarray(self.table_wavelength_nm, dtype=float)
            n = np.asarray(self.table_n_eff, dtype=float)
            if w.ndim != 1 or w.shape != n.shape:
                raise MalformedTableError("table columns must be 1-D and congruent")
            if w.size < _MIN_TABLE_POINTS:
                raise MalformedTableError(
                    f"table needs >= {_MIN_TABLE_POINTS} points, got {w.size}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(n))):
                raise MalformedTableError("table contains non-finite entries")
            if np.any(np.diff(w) <= 0):
                raise MalformedTableError("table wavelengths must increase strictly")
            object.__setattr__(self, "table_wavelength_nm", w)
            object.__setattr__(self, "table_n_eff", n)
            object.__setattr__(self, "_spline", CubicSpline(w, n))
        else:
            raise InputError(f"unknown dispersion kind {self.kind!r}")
        self._check_physical()

    def _check_physical(self):
        lo, hi = self.valid_range_nm
        probe = np.linspace(lo, hi, 64)
        if np.any(self.n_eff(probe) <= 1.0):
            raise InputError(
                f"model {self.label or self.kind!r} gives n_eff <= 1 inside its range")

    def _bounds_check(self, wavelength_nm):
        # snap float round-off within 1e-9 nm of the bounds, error beyond
        lam = np.asarray(wavelength_nm, dtype=float)
        lo, hi = self.valid_range_nm
        atol = 1e-9
        if np.any(lam < lo - atol) or np.any(lam > hi + atol) or not np.all(np.isfinite(lam)):
            bad = lam[~((lam >= lo - atol) & (lam <= hi + atol))]
            first = float(bad.flat[0]) if bad.size else float("nan")
            raise OutOfRangeError(
                f"wavelength {first:.6g} nm outside [{lo:.6g}, {hi:.6g}] nm "
                f"of model {self.label or self.kind!r}")
        return np.clip(lam, lo, hi)

    def n_eff(self, wavelength_nm):
        """Effective index at the given vacuum wavelength(s) in nm."""
        lam = self._bounds_check(wavelength_nm)
        if self.kind == "sellmeier":
            a1, a2, a3, a4, a5, a6 = self.sellmeier_coefficients
            l2 = (lam * 1e-3) ** 2
            base = np.sqrt(a1 + a2 / (l2 - a3 ** 2) + a4 / (l2 - a5 ** 2) - a6 * l2)
        else:
            base = self._spline(lam)
        out = base + self.index_offset
        return float(out) if np.isscalar(wavelength_nm) else out

    def propagation_constant(self, wavelength_nm):
        """Mode propagation constant k = 2*pi*n_eff/lam in rad/um."""
        n = self.n_eff(wavelength_nm)
        lam_um = np.asarray(wavelength_nm, dtype=float) * 1e-3
        k = TWO_PI * n / lam_um
        return float(k) if np.isscalar(wavelength_nm) else k

    def group_index(self, wavelength_nm, step_nm: float = 0.1):
        """Group index n_g = n - lam*dn/dlam, central difference of width step_nm.

        Both stencil points must stay inside the validity range.
        """
        lam = np.asarray(wavelength_nm, dtype=float)
        dn = (self.n_eff(lam + step_nm) - self.n_eff(lam - step_nm)) / (2.0 * step_nm)
        ng = self.n_eff(lam) - lam * dn
        return float(ng) if np.isscalar(wavelength_nm) else ng

    def with_offset(self, extra_offset: float) -> "DispersionModel":
        """Copy of this model with extra_offset added on top of index_offset."""
        return replace(self, index_offset=self.index_offset + float(extra_offset),
                       _spline=None)


def sellmeier_model(coefficients, valid_range_nm, index_offset=0.0, label="") -> DispersionModel:
    return DispersionModel(kind="sellmeier", valid_range_nm=tuple(valid_range_nm),
                           index_offset=float(index_offset), label=label,
                           sellmeier_coefficients=tuple(float(c) for c in coefficients))


def table_model(wavelength_nm, n_eff, index_offset=0.0, label="") -> DispersionModel:
    w = np.asarray(wavelength_nm, dtype=float)
    return DispersionModel(kind="table", valid_range_nm=(float(w[0]), float(w[-1])),
                           index_offset=float(index_offset), label=label,
                           table_wavelength_nm=w, table_n_eff=n_eff)


def load_table_csv(path, index_offset=0.0, label="") -> DispersionModel:
    """Read a "wavelength_nm,n_eff" CSV into a table model."""
    path = Path(path)
    wavelengths, indices = [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:2]] != ["wavelength_nm", "n_eff"]:
            raise MalformedTableError(f"{path}: expected header 'wavelength_nm,n_eff'")
        for row in reader:
            if not row or not row[0].strip():
                continue
            try:
                wavelengths.append(float(row[0]))
                indices.append(float(row[1]))
            except (IndexError, ValueError) as exc:
                raise MalformedTableError(f"{path}: bad row {row!r}") from exc
    return table_model(wavelengths, indices, index_offset=index_offset,
                       label=label or path.name)


@dataclass(frozen=True, eq=False)
class WaveguideDispersion:
    """Dispersion of one waveguide: the telecom mode carries signal and
    idler, the pump mode the second harmonic band."""

    telecom: DispersionModel
    pump: DispersionModel

    def mode(self, name: str) -> DispersionModel:
        try:
            return {"telecom": self.telecom, "pump": self.pump}[name]
        except KeyError:
            raise InputError(f"unknown mode {name!r}, expected 'telecom' or 'pump'") from None

    def with_offset(self, extra_offset: float) -> "WaveguideDispersion":
        """Shift both modes by the same additive index offset."""
        return WaveguideDispersion(telecom=self.telecom.with_offset(extra_offset),
                                   pump=self.pump.with_offset(extra_offset))


def bundled_waveguide() -> WaveguideDispersion:
    """Calibrated thin-film waveguide model shipped with the package.

    Extraordinary bulk Sellmeier curves with fitted per-mode offsets;
    see the module docstring for what the offsets pin down.
    """
    telecom = sellmeier_model(MGO_LN_EXTRAORDINARY, BUNDLED_TELECOM_RANGE_NM,
                              index_offset=BUNDLED_TELECOM_OFFSET,
                              label="bundled-telecom")
    pump = sellmeier_model(MGO_LN_EXTRAORDINARY, BUNDLED_PUMP_RANGE_NM,
                           index_offset=BUNDLED_PUMP_OFFSET,
                           label="bundled-pump")
    return WaveguideDispersion(telecom=telecom, pump=pump)
