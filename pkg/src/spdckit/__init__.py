"""Simulation and analysis toolkit for quasi-phase-matched
counter-propagating photon-pair sources: phase-matching maps, joint
spectra and Schmidt purities, two-photon interference, and synthetic
time-tag generation with the matching estimators."""

from .analysis import (CoincidenceHistogram, car, fidelity, g2_from_histogram,
                       histogram_coincidences, reconstruct_jsi,
                       wavelengths_from_tags)
from .config import RunConfig, load_config
from .dispersion import (DispersionModel, WaveguideDispersion, bundled_waveguide,
                         load_table_csv, sellmeier_model, table_model)
from .errors import ToolkitError
from .gridio import Grid2D, read_grid_csv, write_grid_csv
from .interference import (HomCurve, curve_with_path_axis, delay_to_path_mm,
                           heralded_two_source_hom, hom_cw_dip, hom_map,
                           hom_spectral_slice, path_to_delay_ps, visibility)
from .jsa import (DensityMatrix, JointAmplitude, PumpSpec, SchmidtDecomposition,
                  build_jsa, density_matrix_purity, heralded_density_matrix,
                  jsa_from_jsi, pump_envelope, purity, reconstruct_jsa,
                  schmidt_decompose, schmidt_number, synthetic_schmidt)
from .phasematch import (DeviceSpec, PmfRipple, delta_k, find_degenerate_pump,
                         marginal_spectra_cw, pmf_amplitude, pmf_intensity,
                         pump_wavelength_nm, qpm_effective_nonlinearity, sfg_map)
from .presets import (co_propagating_device, default_device, default_pump,
                      degenerate_pump, offset_for_pump_shift, shifted_device)
from .tagio import export_tags_csv, read_tags, write_tags
from .tagsim import (DetectorModel, SourceBrightness, TimeTagStream,
                     simulate_g2_tags, simulate_pair_tags)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
