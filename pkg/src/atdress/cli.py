"""Command-line front end.

    atdress spectrum  --delta 0 --rabi 15 --model both --grid -30:30:3001 --out run1
    atdress pulse     --delta 50 --rabi 15 --cooperativity 25 --optimize-carrier 46:52 --out run2
    atdress figures   --which all --out figs
    atdress couplings

Exit codes: 0 success, 2 usage error, 3 physics or configuration error.
Set ATDRESS_THREADS to evaluate spectra on several threads.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import angular, output
from .errors import InvalidArgument, NotFoundError, PoleError, SchemeError, WindowTooSmallError
from .propagation import MediumConfig, best_operating_point, run_pulse, sweep_operating_points
from .scheme import (FULL, LAMBDA, build_scheme, config_dict, parse_config,
                     resolve_config, scheme_amplitudes, validate)
from .susceptibility import DopplerConfig, parse_grid, spectrum

EXIT_OK, EXIT_USAGE, EXIT_PHYSICS = 0, 2, 3
PHYSICS_ERRORS = (InvalidArgument, SchemeError, PoleError, NotFoundError, WindowTooSmallError)

DEFAULT_FWHMS = (2.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)
FIGURE_IDS = ("2", "3", "4", "5")


class UsageError(Exception):
    pass


def _grid(text):
    try:
        return list(parse_grid(text))
    except InvalidArgument as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text):
    parts = text.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected min:max[:count], got {text!r}") from None
    if len(values) == 2:
        values.append(49)
    if len(values) != 3 or not values[0] < values[1] or values[2] < 2 or values[2] != int(values[2]):
        raise argparse.ArgumentTypeError(f"expected min:max[:count] with min < max, got {text!r}")
    return [values[0], values[1], int(values[2])]


def _floats(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values or any(not v > 0 for v in values):
        raise argparse.ArgumentTypeError("values must be positive")
    return values


def _scheme_flags(p):
    g = p.add_argument_group("scheme")
    g.add_argument("--config", help="key = value configuration file")
    g.add_argument("--delta", type=float, help="control detuning (gamma)")
    g.add_argument("--rabi", type=float, help="control Rabi frequency 2|V_n| (gamma)")
    g.add_argument("--splitting", type=float, help="excited hyperfine splitting (gamma)")
    g.add_argument("--nuclear-spin", help="nuclear spin I, e.g. 7/2")
    g.add_argument("--ground-F", help="ground hyperfine level of the populated sublevel")
    g.add_argument("--excited-F-low", help="lower excited hyperfine level")
    g.add_argument("--excited-F-high", help="upper excited hyperfine level")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--manifest", help="re-run exactly from a previously written manifest.json")


def build_parser():
    parser = argparse.ArgumentParser(prog="atdress", description=__doc__.split("\n")[0] or None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="probe susceptibility spectrum")
    _scheme_flags(p)
    p.add_argument("--model", choices=("full", "lambda", "both", "off"))
    p.add_argument("--grid", type=_grid, default=None, help="min:max:count (default -30:30:4001)")
    p.add_argument("--doppler-width", type=float, default=0.0, help="rms k.v in gamma")
    p.add_argument("--doppler-order", type=int, default=64)
    p.add_argument("--counterpropagating", action="store_true")

    p = sub.add_parser("pulse", help="Gaussian pulse through the dressed slab")
    _scheme_flags(p)
    p.add_argument("--model", choices=("full", "lambda"))
    p.add_argument("--cooperativity", type=float, default=25.0)
    p.add_argument("--carrier", type=float, help="carrier detuning (gamma)")
    p.add_argument("--fwhm", type=float, help="intensity FWHM of the input pulse (1/gamma)")
    p.add_argument("--optimize-carrier", type=_range, metavar="MIN:MAX[:COUNT]")
    p.add_argument("--fwhm-candidates", type=_floats, default=list(DEFAULT_FWHMS),
                   help="comma-separated durations swept with --optimize-carrier")
    p.add_argument("--samples", type=int, default=2 ** 14)

    p = sub.add_parser("figures", help="data bundles for the headline scenarios")
    p.add_argument("--which", required=True)
    p.add_argument("--splitting", type=float)
    p.add_argument("--out", default=".")

    p = sub.add_parser("couplings", help="angular coupling table of the scheme")
    _scheme_flags(p)
    p.add_argument("--model", choices=("full", "lambda"))
    p.add_argument("--json", action="store_true", help="print JSON instead of the table")
    return parser


def _scheme_config(args):
    layers = []
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                layers.append(parse_config(fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    model = getattr(args, "model", None)
    layers.append({
        "control_detuning_gamma": args.delta,
        "rabi_gamma": args.rabi,
        "hyperfine_splitting_gamma": args.splitting,
        "nuclear_spin": args.nuclear_spin,
        "ground_F": args.ground_F,
        "excited_F_low": args.excited_F_low,
        "excited_F_high": args.excited_F_high,
        "model": model if model in (FULL, LAMBDA) else None,
    })
    return config_dict(*resolve_config(*layers))


def _objects(cfg, model=None, rabi=None):
    keys = ("nuclear_spin", "ground_F", "excited_F_low", "excited_F_high",
            "hyperfine_splitting_gamma", "control_detuning_gamma", "rabi_gamma", "model")
    sub = {k: cfg[k] for k in keys}
    if model is not None:
        sub["model"] = model
    if rabi is not None:
        sub["rabi_gamma"] = rabi
    level, control, model = resolve_config(sub)
    scheme = build_scheme(level, control, model)
    problems = [v for v in validate(scheme) if v.code != "coupling-mismatch"]
    if problems:
        raise SchemeError("; ".join(f"{v.code}: {v.message}" for v in problems))
    return scheme


def _finish(out, command, cfg, files):
    for name, text in files.items():
        output.atomic_write(os.path.join(out, name), text)
    output.atomic_write(os.path.join(out, "manifest.json"), output.dumps(output.manifest(command, cfg)))
    return sorted(files) + ["manifest.json"]


# -- spectrum -------------------------------------------------------------------------------


def spectrum_data(cfg):
    """Detuning grid and the chi arrays of a spectrum run, keyed by model label."""
    mode = cfg["mode"]
    doppler = DopplerConfig(cfg["doppler_width"] > 0, cfg["doppler_width"], cfg["doppler_order"],
                            not cfg["counterpropagating"])
    models = {"both": [("full", FULL, None), ("lambda", LAMBDA, None)],
              "off": [("off", FULL, 0.0)],
              FULL: [(FULL, FULL, None)],
              LAMBDA: [(LAMBDA, LAMBDA, None)]}[mode]
    chis, x, meta = {}, None, {}
    for label, model, rabi in models:
        scheme = _objects(cfg, model, rabi)
        spec = spectrum(cfg["grid"], scheme, doppler=doppler)
        x, chis[label] = spec.detunings, spec.chi
        meta[label] = spec.metadata
    return x, chis, meta


def run_spectrum(cfg, out):
    x, chis, meta = spectrum_data(cfg)
    text = output.spectrum_csv(x, chis, {"config": cfg, "config_digest": output.digest(cfg),
                                         "models": meta})
    return _finish(out, "spectrum", cfg, {"spectrum.csv": text})


# -- pulse ----------------------------------------------------------------------------------


def _trace_csv(pulse, out_pulse, meta):
    rows = np.column_stack([pulse.t, np.abs(pulse.envelope), np.abs(out_pulse.envelope),
                            out_pulse.envelope.real, out_pulse.envelope.imag])
    return output.csv_text("pulse-trace", meta, ["t_gamma", "abs_in", "abs_out", "re_out", "im_out"],
                           rows)


def _sweep_csv(rows, meta):
    cols = ["carrier_gamma", "fwhm_gamma", "transmission", "centroid_delay_gamma",
            "fractional_delay", "proxy_efficiency"]
    data = [[r.carrier_detuning, r.fwhm, r.transmission, r.centroid_delay, r.fractional_delay,
             r.proxy_efficiency] for r in rows]
    return output.csv_text("pulse-sweep", meta, cols, data)


def pulse_files(cfg):
    scheme = _objects(cfg)
    medium = MediumConfig(cfg["cooperativity"], scheme)
    files, sweep = {}, None
    if cfg["optimize_carrier"]:
        lo, hi, count = cfg["optimize_carrier"]
        fwhms = [cfg["fwhm"]] if cfg["fwhm"] else cfg["fwhm_candidates"]
        rows = sweep_operating_points(medium, np.linspace(lo, hi, count), fwhms, cfg["samples"])
        best = best_operating_point(rows)
        if best is None:
            raise WindowTooSmallError("no swept operating point fits its time window; "
                                      "increase --samples or narrow the carrier range")
        carrier, fwhm = best.carrier_detuning, best.fwhm
        sweep = rows
    else:
        carrier, fwhm = cfg["carrier"], cfg["fwhm"]
    pulse, out_pulse, metrics = run_pulse(medium, carrier, fwhm, cfg["samples"])
    record = {"config": cfg, "config_digest": output.digest(cfg), "carrier_detuning": carrier,
              "fwhm": fwhm, "metrics": metrics.as_dict()}
    meta = {"config_digest": output.digest(cfg), "carrier_detuning": carrier, "fwhm": fwhm}
    files["pulse_trace.csv"] = _trace_csv(pulse, out_pulse, meta)
    files["pulse_metrics.json"] = output.dumps(record)
    if sweep is not None:
        files["sweep.csv"] = _sweep_csv(sweep, {"config_digest": output.digest(cfg)})
    return files


def run_pulse_cmd(cfg, out):
    return _finish(out, "pulse", cfg, pulse_files(cfg))


# -- figures --------------------------------------------------------------------------------

RECIPES = {
    "2": "plot chi_im_* and chi_re_* against delta_bar_gamma from spectrum.csv; insert.csv zooms on the EIT dip",
    "3": "plot chi_im_*/chi_re_* from spectrum.csv (full range) and zoom.csv (AT resonance near delta_bar = -50)",
    "4": "plot chi_im_*/chi_re_* from spectrum.csv (full range) and zoom.csv (AT resonance near delta_bar = +50)",
    "5": "plot abs_in and abs_out against t_gamma for each traces/carrier_*.csv; sweep.csv lists T and delay per carrier",
}


def _figure_cfg(fig, splitting):
    delta = {"2": 0.0, "3": -50.0, "4": 50.0, "5": 50.0}[fig]
    cfg = config_dict(*resolve_config({"control_detuning_gamma": delta, "rabi_gamma": 15.0,
                                       "hyperfine_splitting_gamma": splitting}))
    cfg.update({"figure": fig, "doppler_width": 0.0, "doppler_order": 64,
                "counterpropagating": False, "mode": "figure"})
    return cfg


def figure_files(cfg):
    fig = cfg["figure"]
    files = {}
    if fig in ("2", "3", "4"):
        grids = {"2": {"spectrum.csv": [-30.0, 30.0, 6001], "insert.csv": [-4.0, 2.0, 6001]},
                 "3": {"spectrum.csv": [-80.0, 320.0, 40001], "zoom.csv": [-55.0, -45.0, 10001]},
                 "4": {"spectrum.csv": [-80.0, 320.0, 40001], "zoom.csv": [45.0, 55.0, 10001]}}[fig]
        for name, grid in grids.items():
            chis, meta = {}, {}
            for label, model, rabi in (("full", FULL, None), ("lambda", LAMBDA, None),
                                       ("off", FULL, 0.0)):
                spec = spectrum(grid, _objects(cfg, model, rabi))
                chis[label], meta[label] = spec.chi, spec.metadata
            files[name] = output.spectrum_csv(spec.detunings, chis, {
                "config": cfg, "config_digest": output.digest(cfg), "models": meta,
                "recipe": RECIPES[fig]})
        return files
    scheme = _objects(cfg)
    medium = MediumConfig(cfg["cooperativity"], scheme)
    carriers = np.linspace(*cfg["carriers"])
    rows = sweep_operating_points(medium, carriers, cfg["fwhm_candidates"], cfg["samples"])
    best = best_operating_point(rows, transmission_range=(0.83, 0.97)) or best_operating_point(rows)
    files["sweep.csv"] = _sweep_csv(rows, {"config_digest": output.digest(cfg), "recipe": RECIPES[fig]})
    meta = {"config_digest": output.digest(cfg), "recipe": RECIPES[fig]}
    for carrier in cfg["trace_carriers"]:
        pulse, out_pulse, metrics = run_pulse(medium, carrier, best.fwhm, cfg["samples"])
        files[f"traces/carrier_{carrier:+.2f}.csv"] = _trace_csv(
            pulse, out_pulse, dict(meta, carrier_detuning=carrier, fwhm=best.fwhm,
                                   metrics=metrics.as_dict()))
    pulse, out_pulse, metrics = run_pulse(medium, best.carrier_detuning, best.fwhm, cfg["samples"])
    files["pulse_metrics.json"] = output.dumps({
        "config": cfg, "config_digest": output.digest(cfg), "carrier_detuning": best.carrier_detuning,
        "fwhm": best.fwhm, "metrics": metrics.as_dict()})
    files["traces/best.csv"] = _trace_csv(pulse, out_pulse, dict(meta, carrier_detuning=best.carrier_detuning,
                                                                 fwhm=best.fwhm))
    return files


def run_figures(which, splitting, out):
    figs = FIGURE_IDS if which == "all" else (which,)
    written = []
    for fig in figs:
        cfg = _figure_cfg(fig, splitting)
        if fig == "5":
            cfg.update({"cooperativity": 25.0, "carriers": [46.0, 50.0, 33],
                        "fwhm_candidates": [4.0, 6.0, 8.0, 12.0], "samples": 2 ** 13,
                        "trace_carriers": [47.0, 48.0, 48.5, 49.0]})
        folder = os.path.join(out, f"fig{fig}")
        written += [os.path.join(f"fig{fig}", f) for f in _finish(folder, "figures", cfg, figure_files(cfg))]
    return written


# -- couplings ------------------------------------------------------------------------------


def couplings_record(cfg):
    scheme = _objects(cfg)
    level = scheme.level
    amps = scheme_amplitudes(level)
    kw = dict(I=level.nuclear_spin, Jg=level.Jg, Je=level.Je)
    Me = angular.HalfInt(level.ground_F.twice_value - 2)
    ground = [level.ground_F]
    other = angular.HalfInt(abs(level.Jg.twice_value - level.nuclear_spin.twice_value))
    while other.twice_value <= level.Jg.twice_value + level.nuclear_spin.twice_value:
        if other != level.ground_F:
            ground.append(other)
        other = angular.HalfInt(other.twice_value + 2)
    ground.sort()
    completeness = {}
    for label, Fe in (("n", level.excited_F_low), ("np", level.excited_F_high)):
        total = 0.0
        for Fg in ground:
            for tM in range(-Fg.twice_value, Fg.twice_value + 1, 2):
                for q in (-1, 0, 1):
                    total += angular.dipole_amplitude(Fg, angular.HalfInt(tM), Fe, Me, q, **kw) ** 2
        completeness[label] = total
    strengths = {f"{Fg}->{Fe}": angular.relative_line_strength(Fg, Fe, **kw)
                 for Fg in ground for Fe in (level.excited_F_low, level.excited_F_high)}
    return {
        "convention": angular.WIGNER_CONVENTION,
        "states": {"m": f"F={level.ground_F} M={level.ground_F}",
                   "mp": f"F={level.ground_F} M={angular.HalfInt(level.ground_F.twice_value - 4)}",
                   "n": f"F'={level.excited_F_low} M'={Me}",
                   "np": f"F'={level.excited_F_high} M'={Me}"},
        "amplitudes": amps,
        "couplings": {"V_n": scheme.V_n.real, "V_np": scheme.V_np.real,
                      "V_np_over_V_n": amps["control_np"] / amps["control_n"],
                      "c_n": scheme.c_n.real, "c_np": scheme.c_np.real,
                      "rabi_gamma": scheme.control.rabi, "model": scheme.model},
        "line_strengths": strengths,
        "completeness": completeness,
        "config": cfg,
    }


def couplings_table(rec):
    lines = [f"Wigner-Eckart convention: {rec['convention']}", ""]
    for k, v in rec["states"].items():
        lines.append(f"  |{k}> = {v}")
    lines += ["", f"{'quantity':<22}{'value':>22}"]
    for k, v in rec["amplitudes"].items():
        lines.append(f"{'amp ' + k:<22}{v:>22.15f}")
    for k, v in rec["couplings"].items():
        if isinstance(v, float):
            lines.append(f"{k:<22}{v:>22.15f}")
    lines += ["", "relative line strengths (sum over Fg = 1 for each Fe)"]
    for k, v in rec["line_strengths"].items():
        lines.append(f"  {k:<20}{v:>22.15f}")
    lines += ["", "completeness (sum over Fg, Mg, q of amplitude^2)"]
    for k, v in rec["completeness"].items():
        lines.append(f"  {k:<20}{v:>22.15f}")
    return "\n".join(lines) + "\n"


# -- entry point ----------------------------------------------------------------------------


def _load_manifest(path, command):
    try:
        with open(path) as fh:
            man = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read manifest: {exc}") from None
    if man.get("command") != command:
        raise UsageError(f"manifest was written by {man.get('command')!r}, not {command!r}")
    return man["config"]


def _dispatch(args):
    if args.command == "figures":
        if args.which not in FIGURE_IDS + ("all",):
            raise UsageError(f"unknown figure {args.which!r}; choose 2, 3, 4, 5 or all")
        for path in run_figures(args.which, args.splitting, args.out):
            print(os.path.join(args.out, path))
        return EXIT_OK

    if args.manifest:
        cfg = _load_manifest(args.manifest, args.command)
    else:
        cfg = _scheme_config(args)
        if args.command == "spectrum":
            cfg.update({"mode": args.model or cfg["model"],
                        "grid": args.grid or [-30.0, 30.0, 4001],
                        "doppler_width": args.doppler_width, "doppler_order": args.doppler_order,
                        "counterpropagating": args.counterpropagating})
        elif args.command == "pulse":
            if args.optimize_carrier is None and (args.carrier is None or args.fwhm is None):
                raise UsageError("pulse needs --carrier and --fwhm, or --optimize-carrier")
            cfg.update({"cooperativity": args.cooperativity, "carrier": args.carrier,
                        "fwhm": args.fwhm, "optimize_carrier": args.optimize_carrier,
                        "fwhm_candidates": args.fwhm_candidates, "samples": args.samples})

    if args.command == "spectrum":
        written = run_spectrum(cfg, args.out)
    elif args.command == "pulse":
        written = run_pulse_cmd(cfg, args.out)
    else:
        rec = couplings_record(cfg)
        sys.stdout.write(output.dumps(rec) if args.json else couplings_table(rec))
        if args.out != ".":
            _finish(args.out, "couplings", cfg, {"couplings.json": output.dumps(rec)})
        return EXIT_OK
    for name in written:
        print(os.path.join(args.out, name))
    return EXIT_OK


def _glue_negative_values(argv):
    """Turn ``--grid -30:30:3001`` into ``--grid=-30:30:3001`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt is not None
                and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ".")):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _dispatch(args)
    except UsageError as exc:
        print(f"atdress: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PHYSICS_ERRORS as exc:
        hint = " (hint: increase the time window or samples)" if isinstance(exc, WindowTooSmallError) else ""
        print(f"atdress: {type(exc).__name__}: {exc}{hint}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
