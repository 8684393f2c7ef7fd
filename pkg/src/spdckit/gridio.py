"""2-D wavelength grids and their on-disk CSV representation.

Grid CSV contract: a (n_rows+1) x (n_cols+1) comma-separated matrix
whose first row is the column axis (leading cell empty) and whose first
column is the row axis.  Cells use the shortest exact float64 notation,
so a read-back reproduces the grid bit for bit.  A JSON ``.meta``
sidecar records axis labels, the grid kind and
whether the payload is the real or imaginary part of a complex grid
(complex grids are written as a ``_re``/``_im`` CSV pair).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError, NegativeIntensityError

_AXIS_UNIFORM_RTOL = 1e-9


def _check_axis(axis, name):
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size < 2:
        raise InputError(f"{name} axis must be 1-D with >= 2 points")
    steps = np.diff(axis)
    if np.any(steps <= 0):
        raise InputError(f"{name} axis must increase strictly")
    if np.any(np.abs(steps - steps[0]) > _AXIS_UNIFORM_RTOL * abs(steps[0])):
        raise InputError(f"{name} axis must be uniform")
    return axis


@dataclass(eq=False)
class Grid2D:
    """Rectangular values grid over two uniform ascending axes.

    values[j, k] belongs to (row_axis[j], col_axis[k]).  kind marks the
    payload: "intensity" and "counts" must be non-negative.
    """

    row_axis: np.ndarray
    col_axis: np.ndarray
    values: np.ndarray
    row_label: str = "signal_nm"
    col_label: str = "idler_nm"
    kind: str = "intensity"

    def __post_init__(self):
        self.row_axis = _check_axis(self.row_axis, self.row_label)
        self.col_axis = _check_axis(self.col_axis, self.col_label)
        self.values = np.asarray(self.values)
        if self.values.shape != (self.row_axis.size, self.col_axis.size):
            raise InputError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.row_axis.size}, {self.col_axis.size})")
        if self.kind in ("intensity", "counts") and np.any(self.values.real < 0):
            raise NegativeIntensityError(f"negative entries in {self.kind} grid")

    @property
    def row_step(self) -> float:
        return float(self.row_axis[1] - self.row_axis[0])

    @property
    def col_step(self) -> float:
        return float(self.col_axis[1] - self.col_axis[0])


def _meta_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta")


def _cell(x) -> str:
    # shortest exact float64 form; CSV round trips bit for bit
    return repr(float(x))


def _write_matrix(path: Path, grid: Grid2D, values) -> None:
    with path.open("w", newline="") as fh:
        fh.write("," + ",".join(_cell(c) for c in grid.col_axis) + "\n")
        for r, row in zip(grid.row_axis, values):
            fh.write(_cell(r) + "," + ",".join(_cell(v) for v in row) + "\n")


def _write_meta(path: Path, grid: Grid2D, complex_pair: bool) -> None:
    meta = {
        "col_label": grid.col_label,
        "complex_pair": complex_pair,
        "kind": grid.kind,
        "row_label": grid.row_label,
        "shape": [int(grid.row_axis.size), int(grid.col_axis.size)],
    }
    _meta_path(path).write_text(json.dumps(meta, sort_keys=True, indent=1) + "\n")


def write_grid_csv(path, grid: Grid2D) -> Path:
    """Write a real-valued grid plus its .meta sidecar; returns the CSV path."""
    path = Path(path)
    if np.iscomplexobj(grid.values):
        raise InputError("complex grid: use write_complex_grid_csv")
    _write_matrix(path, grid, grid.values)
    _write_meta(path, grid, complex_pair=False)
    return path


def write_complex_grid_csv(stem, grid: Grid2D) -> tuple[Path, Path]:
    """Write a complex grid as <stem>_re.csv and <stem>_im.csv plus metadata."""
    stem = Path(stem)
    values = np.asarray(grid.values)
    re_path = stem.with_name(stem.name + "_re.csv")
    im_path = stem.with_name(stem.name + "_im.csv")
    _write_matrix(re_path, grid, values.real)
    _write_matrix(im_path, grid, values.imag)
    _write_meta(re_path, grid, complex_pair=True)
    _write_meta(im_path, grid, complex_pair=True)
    return re_path, im_path


def _read_matrix(path: Path):
    raw = np.genfromtxt(path, delimiter=",", dtype=float)
    if raw.ndim != 2 or raw.shape[0] < 2 or raw.shape[1] < 2:
        raise InputError(f"{path}: not a grid CSV")
    return raw[0, 1:], raw[1:, 0], raw[1:, 1:]


def read_grid_csv(path) -> Grid2D:
    """Read a grid CSV written by write_grid_csv (meta sidecar optional)."""
    path = Path(path)
    cols, rows, values = _read_matrix(path)
    meta = {}
    mp = _meta_path(path)
    if mp.exists():
        meta = json.loads(mp.read_text())
    return Grid2D(row_axis=rows, col_axis=cols, values=values,
                  row_label=meta.get("row_label", "signal_nm"),
                  col_label=meta.get("col_label", "idler_nm"),
                  kind=meta.get("kind", "intensity"))


def read_complex_grid_csv(stem) -> Grid2D:
    stem = Path(stem)
    re_path = stem.with_name(stem.name + "_re.csv")
    im_path = stem.with_name(stem.name + "_im.csv")
    cols, rows, re_vals = _read_matrix(re_path)
    _, _, im_vals = _read_matrix(im_path)
    meta = {}
    mp = _meta_path(re_path)
    if mp.exists():
        meta = json.loads(mp.read_text())
    return Grid2D(row_axis=rows, col_axis=cols, values=re_vals + 1j * im_vals,
                  row_label=meta.get("row_label", "signal_nm"),
                  col_label=meta.get("col_label", "idler_nm"),
                  kind=meta.get("kind", "amplitude"))
