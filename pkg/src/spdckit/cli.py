"""Command line front end.

One subcommand per pipeline; a TOML config supplies defaults and flags
override single values.  Results land as CSV (plus optional SVG) in the
output directory, and each subcommand prints one machine-readable
summary of key=value pairs.  Exit codes: 0 success, 2 configuration or
input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .analysis import (car, fidelity, g2_from_histogram, histogram_coincidences,
                       reconstruct_jsi)
from .config import RunConfig, config_from_dict, load_config
from .errors import NumericsError, ToolkitError
from .gridio import read_grid_csv, write_complex_grid_csv, write_grid_csv
from .interference import (heralded_two_source_hom, hom_cw_dip, hom_map,
                           hom_spectral_slice, visibility)
from .jsa import (build_jsa, heralded_density_matrix, jsa_from_jsi, purity,
                  schmidt_decompose, schmidt_number)
from .phasematch import find_degenerate_pump, marginal_spectra_cw, sfg_map
from .tagsim import SourceBrightness, simulate_g2_tags, simulate_pair_tags
from .tagio import export_tags_csv, read_tags, write_tags

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def _summary(**pairs):
    print(" ".join(f"{k}={_fmt(v)}" for k, v in pairs.items()))


def _outdir(cfg: RunConfig, args) -> Path:
    out = Path(args.out_dir if args.out_dir else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid_n(args, fallback: int) -> int:
    return args.grid if args.grid else fallback


def _jsa_for(cfg: RunConfig, name: str, grid_n: int):
    dev = cfg.device(name)
    return build_jsa(dev, cfg.pump, cfg.grids.jsa_signal_nm,
                     cfg.grids.jsa_idler_nm, grid_n)


def _amplitude_grid(jsa):
    from .gridio import Grid2D
    return Grid2D(row_axis=jsa.signal_nm, col_axis=jsa.idler_nm,
                  values=jsa.values, row_label="signal_nm",
                  col_label="idler_nm", kind="amplitude")


def cmd_sfg_map(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    dev = cfg.device(args.device)
    grid = sfg_map(dev, cfg.grids.sfg_signal_nm, cfg.grids.sfg_idler_nm,
                   _grid_n(args, cfg.grids.sfg_n))
    path = write_grid_csv(out / f"sfg_{args.device}.csv", grid)
    peak = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    if args.svg:
        from .render import render_grid_svg
        render_grid_svg(grid, out / f"sfg_{args.device}.svg",
                        f"phase matching, device {args.device}")
    _summary(wrote=path, rows=grid.values.shape[0], cols=grid.values.shape[1],
             peak_signal_nm=float(grid.row_axis[peak[0]]),
             peak_idler_nm=float(grid.col_axis[peak[1]]),
             degenerate_pump_nm=find_degenerate_pump(dev))
    return EXIT_OK


def cmd_jsa(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    jsa = _jsa_for(cfg, args.device, _grid_n(args, cfg.grids.jsa_n))
    re_path, im_path = write_complex_grid_csv(out / f"jsa_{args.device}",
                                              _amplitude_grid(jsa))
    jsi = jsa.intensity()
    jsi_path = write_grid_csv(out / f"jsi_{args.device}.csv", jsi)
    if args.svg:
        from .render import render_grid_svg
        render_grid_svg(jsi, out / f"jsi_{args.device}.svg",
                        f"joint spectral intensity, device {args.device}")
    _summary(wrote_re=re_path, wrote_im=im_path, wrote_jsi=jsi_path,
             norm=jsa.norm_squared())
    return EXIT_OK


def cmd_schmidt(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    jsa = _jsa_for(cfg, args.device, _grid_n(args, cfg.grids.jsa_n))
    dec = schmidt_decompose(jsa)
    amp_only = schmidt_decompose(jsa_from_jsi(jsa.intensity()))
    n_show = min(args.modes, dec.coefficients.size)
    path = out / f"schmidt_{args.device}.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("mode,coefficient\n")
        for k in range(n_show):
            fh.write(f"{k},{dec.coefficients[k]:.12g}\n")
    _summary(wrote=path, purity=purity(dec), schmidt_number=schmidt_number(dec),
             purity_amplitude_only=purity(amp_only))
    return EXIT_OK


def cmd_marginals(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    dev = cfg.device(args.device)
    pump_nm = args.pump_nm if args.pump_nm else cfg.hom.pump_nm
    spectra = marginal_spectra_cw(dev, pump_nm, cfg.hom.detuning_range_nm,
                                  _grid_n(args, cfg.grids.sfg_n))
    path = out / f"marginals_{args.device}.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("signal_nm,signal,idler_nm,idler\n")
        for row in zip(spectra.signal_wavelength_nm, spectra.signal,
                       spectra.idler_wavelength_nm, spectra.idler):
            fh.write(",".join(format(v, ".12g") for v in row) + "\n")
    _summary(wrote=path, pump_nm=pump_nm,
             signal_peak_nm=float(spectra.signal_wavelength_nm[np.argmax(spectra.signal)]),
             idler_peak_nm=float(spectra.idler_wavelength_nm[np.argmax(spectra.idler)]))
    return EXIT_OK


def _write_curve(path, x_name, curve):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{x_name},coincidence\n")
        for x, v in zip(curve.x, curve.values):
            fh.write(f"{x:.12g},{v:.12g}\n")
    return path


def cmd_hom(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    dev = cfg.device(args.device)
    pump_nm = args.pump_nm if args.pump_nm else cfg.hom.pump_nm
    delays = np.linspace(cfg.hom.delay_range_ps[0], cfg.hom.delay_range_ps[1],
                         cfg.hom.delay_n)
    curve = hom_cw_dip(dev, pump_nm, delays,
                       detuning_range_nm=cfg.hom.detuning_range_nm,
                       quad_points=cfg.hom.quad_points)
    path = _write_curve(out / f"hom_{args.device}.csv", "delay_ps", curve)
    if args.svg:
        from .render import render_curve_svg
        render_curve_svg(curve.x, curve.values, out / f"hom_{args.device}.svg",
                         "delay_ps", "normalized coincidence")
    _summary(wrote=path, pump_nm=pump_nm, visibility=visibility(curve))
    return EXIT_OK


def cmd_hom_map(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    dev = cfg.device(args.device)
    grid = hom_map(dev, cfg.hom.pump_range_nm, cfg.hom.delay_range_ps,
                   cfg.hom.pump_n, cfg.hom.delay_n,
                   detuning_range_nm=cfg.hom.detuning_range_nm,
                   quad_points=cfg.hom.quad_points)
    path = write_grid_csv(out / f"hom_map_{args.device}.csv", grid)
    slice0 = hom_spectral_slice(grid, 0.0)
    slice_path = _write_curve(out / f"hom_slice_{args.device}.csv", "pump_nm", slice0)
    if args.svg:
        from .render import render_grid_svg
        render_grid_svg(grid, out / f"hom_map_{args.device}.svg",
                        f"coincidence vs pump and delay, device {args.device}")
    _summary(wrote=path, wrote_slice=slice_path,
             max_value=float(np.max(grid.values)),
             min_value=float(np.min(grid.values)),
             cells_above_one=int(np.sum(grid.values > 1.0)))
    return EXIT_OK


def cmd_hom2src(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    n = _grid_n(args, cfg.grids.jsa_n)
    jsa_a = _jsa_for(cfg, args.device_a, n)
    jsa_b = _jsa_for(cfg, args.device_b, n)
    delays = np.linspace(cfg.hom.delay_range_ps[0], cfg.hom.delay_range_ps[1],
                         cfg.hom.delay_n)
    results = {}
    for arm, herald in (("signal", "idler"), ("idler", "signal")):
        dm_a = heralded_density_matrix(jsa_a, herald_arm=herald)
        dm_b = heralded_density_matrix(jsa_b, herald_arm=herald)
        curve = heralded_two_source_hom(dm_a, dm_b, delays)
        _write_curve(out / f"hom2src_{arm}_{args.device_a}{args.device_b}.csv",
                     "delay_ps", curve)
        results[arm] = visibility(curve)
    _summary(device_a=args.device_a, device_b=args.device_b,
             visibility_signal=results["signal"], visibility_idler=results["idler"])
    return EXIT_OK


def _brightness(cfg: RunConfig, args) -> SourceBrightness:
    mu = args.mu if args.mu is not None else cfg.simulation.mean_pairs_per_pulse
    return SourceBrightness(mu)


def _sim_common(cfg: RunConfig, args):
    pulses = args.pulses if args.pulses else cfg.simulation.pulses
    seed = args.seed if args.seed is not None else cfg.simulation.seed
    return pulses, seed


def cmd_simulate_tags(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    jsa = _jsa_for(cfg, args.device, _grid_n(args, cfg.grids.jsa_n))
    dec = schmidt_decompose(jsa)
    pulses, seed = _sim_common(cfg, args)
    period = int(round(cfg.pump.repetition_period_ps))
    if args.mode == "pairs":
        stream = simulate_pair_tags(
            dec, _brightness(cfg, args), pulses,
            detectors={"signal": cfg.detectors["signal"],
                       "idler": cfg.detectors["idler"]},
            dispersion_ps_per_nm={"signal": cfg.simulation.dispersion_ps_per_nm,
                                  "idler": cfg.simulation.dispersion_ps_per_nm},
            lambda_ref_nm={"signal": cfg.simulation.lambda_ref_signal_nm,
                           "idler": cfg.simulation.lambda_ref_idler_nm},
            repetition_period_ps=period, seed=seed)
    else:
        stream = simulate_g2_tags(
            dec, _brightness(cfg, args), pulses,
            splitter_ratio=args.splitter_ratio,
            detectors={"out1": cfg.detectors["out1"],
                       "out2": cfg.detectors["out2"]},
            repetition_period_ps=period, seed=seed)
    path = out / f"tags_{args.mode}_{args.device}.cptt"
    write_tags(path, stream)
    if args.csv:
        export_tags_csv(path.with_suffix(".csv"), stream)
    counts = {name: int(stream.times_for(name).size)
              for name in stream.channel_names}
    _summary(wrote=path, pulses=pulses, seed=seed, events=len(stream),
             **{f"events_{k}": v for k, v in counts.items()})
    return EXIT_OK


def _load_stream(cfg: RunConfig, args):
    if args.tags:
        return read_tags(args.tags)
    raise ToolkitError("no tag file given; pass --tags PATH")


def cmd_reconstruct_jsi(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    stream = _load_stream(cfg, args)
    n = _grid_n(args, cfg.grids.reconstruct_n)
    d = cfg.simulation.dispersion_ps_per_nm
    grid = reconstruct_jsi(
        stream, cfg.grids.jsa_signal_nm, cfg.grids.jsa_idler_nm, n,
        {"signal": d, "idler": d},
        {"signal": cfg.simulation.lambda_ref_signal_nm,
         "idler": cfg.simulation.lambda_ref_idler_nm})
    path = write_grid_csv(out / "reconstructed_jsi.csv", grid)
    if args.svg:
        from .render import render_grid_svg
        render_grid_svg(grid, out / "reconstructed_jsi.svg", "reconstructed JSI")
    extras = {}
    if args.reference:
        extras["fidelity"] = fidelity(grid, read_grid_csv(args.reference))
    amp = schmidt_decompose(jsa_from_jsi(grid))
    _summary(wrote=path, pairs=int(grid.values.sum()),
             purity_amplitude_only=purity(amp), **extras)
    return EXIT_OK


def cmd_g2(cfg: RunConfig, args) -> int:
    stream = _load_stream(cfg, args)
    period = float(stream.clock_period_ps)
    span = (args.n_side + 1) * period
    hist = histogram_coincidences(stream, "out1", "out2", args.bin_ps, span)
    g2_zero, err = g2_from_histogram(hist, period, n_side_peaks=args.n_side)
    _summary(g2_zero=g2_zero, err=err, purity=g2_zero - 1.0)
    return EXIT_OK


def cmd_car(cfg: RunConfig, args) -> int:
    stream = _load_stream(cfg, args)
    value = car(stream, window_ps=args.window_ps)
    _summary(car=value, window_ps=args.window_ps)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdckit",
        description="Counter-propagating photon-pair source toolkit")
    parser.add_argument("-c", "--config", help="TOML run configuration")
    parser.add_argument("--out-dir", help="output directory (default from config)")
    parser.add_argument("--svg", action="store_true",
                        help="also render SVG plots next to the CSV files")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        return p

    for name, func, desc in (
            ("sfg-map", cmd_sfg_map, "phase-matching intensity map of one device"),
            ("jsa", cmd_jsa, "joint spectral amplitude and intensity grids"),
            ("schmidt", cmd_schmidt, "Schmidt coefficients and purity"),
            ("marginals", cmd_marginals, "CW signal/idler marginal spectra")):
        p = add(name, func, help=desc)
        p.add_argument("--device", default="A")
        p.add_argument("--grid", type=int, help="override grid point count")
        if name == "marginals":
            p.add_argument("--pump-nm", type=float, help="CW pump wavelength")
        if name == "schmidt":
            p.add_argument("--modes", type=int, default=16,
                           help="coefficients written to CSV")

    p = add("hom", cmd_hom, help="CW two-photon interference dip versus delay")
    p.add_argument("--device", default="A")
    p.add_argument("--pump-nm", type=float, help="CW pump wavelength")

    p = add("hom-map", cmd_hom_map, help="dip map versus pump wavelength and delay")
    p.add_argument("--device", default="A")

    p = add("hom2src", cmd_hom2src,
            help="two-source heralded interference visibilities")
    p.add_argument("--device-a", default="A")
    p.add_argument("--device-b", default="B")
    p.add_argument("--grid", type=int)

    p = add("simulate-tags", cmd_simulate_tags, help="Monte-Carlo tag stream")
    p.add_argument("--device", default="A")
    p.add_argument("--mode", choices=("pairs", "g2"), default="pairs")
    p.add_argument("--pulses", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mu", type=float, help="mean pairs per pulse")
    p.add_argument("--splitter-ratio", type=float, default=0.5)
    p.add_argument("--grid", type=int)
    p.add_argument("--csv", action="store_true", help="also export debug CSV")

    p = add("reconstruct-jsi", cmd_reconstruct_jsi,
            help="joint spectrum from a dispersed tag stream")
    p.add_argument("--tags", required=True)
    p.add_argument("--grid", type=int)
    p.add_argument("--reference", help="CSV grid to score fidelity against")

    p = add("g2", cmd_g2, help="unheralded g2(0) and purity from g2-mode tags")
    p.add_argument("--tags", required=True)
    p.add_argument("--n-side", type=int, default=5)
    p.add_argument("--bin-ps", type=float, default=100.0)

    p = add("car", cmd_car, help="coincidence-to-accidental ratio from pair tags")
    p.add_argument("--tags", required=True)
    p.add_argument("--window-ps", type=float, default=1000.0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else config_from_dict({})
        return args.func(cfg, args)
    except NumericsError as exc:
        print(f"spdckit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except ToolkitError as exc:
        print(f"spdckit: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"spdckit: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
