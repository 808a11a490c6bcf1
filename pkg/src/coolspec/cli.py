"""Command-line interface.

Subcommands: spectrum, snr, oracle, reproduce, validate-config.

Every output table is UTF-8 CSV with a '#'-prefixed manifest block, a
header row, then numeric rows at 17 significant digits, so doubles round
trip losslessly and re-running a command reproduces the table bit for bit
(a sidecar .manifest.json carries the volatile wall-clock metadata).

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 oracle
statistical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, format_config, load_config
from .errors import (ConfigError, CoolspecError, EmptyGrid, MissingForce,
                     NumericalError, UnknownFigure, ValidationError)
from .oracle import (OracleConfig, band_average_reference, fft_bin_frequencies,
                     simulate)
from .params import (ForcePulse, MeasurementWindow, ModelParams, Scheme,
                     without_feedback)
from .snr import (averaged_snr, nonstationary_noise, nonstationary_signal,
                  nonstationary_snr, stationary_snr)
from .spectra import (nonstationary_spectrum, stationary_spectrum,
                      stationary_variances)

Z_LIMIT = 3.0


def build_grid(omega_min: float, omega_max: float, points: int,
               log: bool) -> np.ndarray:
    if points <= 0:
        raise EmptyGrid(f"grid needs at least one point, got points={points}")
    if not omega_max > omega_min:
        raise EmptyGrid(f"need omega_max > omega_min, got "
                        f"[{omega_min}, {omega_max}]")
    if log:
        if omega_min <= 0:
            raise EmptyGrid("log grid requires omega_min > 0")
        return np.geomspace(omega_min, omega_max, points)
    return np.linspace(omega_min, omega_max, points)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_table(path: Path, manifest: dict, header: list[str],
                columns: list[np.ndarray]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# manifest: coolspec v{__version__}"]
    for key, value in manifest.items():
        if key == "config":
            for cfg_line in value.rstrip("\n").splitlines():
                lines.append(f"# config: {cfg_line}")
        else:
            lines.append(f"# {key} = {value}")
    lines.append(",".join(header))
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    sidecar = dict(manifest)
    sidecar.update({"artifact_version": __version__,
                    "output": str(path),
                    "wall_clock_utc": time.strftime(
                        "%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                    "elapsed_s": None})
    path.with_suffix(path.suffix + ".manifest.json").write_text(
        json.dumps(sidecar, indent=2, default=str) + "\n", encoding="utf-8")


def _base_manifest(args, run: RunConfig, command: str) -> dict:
    grid = (f"{'log' if args.log_grid else 'linear'} "
            f"omega_min={args.omega_min!r} omega_max={args.omega_max!r} "
            f"points={args.points}")
    return {"command": command, "mode": getattr(args, "mode", ""),
            "grid": grid, "config": format_config(run)}


def cmd_spectrum(args) -> int:
    run = load_config(args.config)
    grid = build_grid(args.omega_min, args.omega_max, args.points,
                      args.log_grid)
    manifest = _base_manifest(args, run, "spectrum")
    if args.mode == "stationary":
        values = stationary_spectrum(grid, run.params)
    else:
        if run.window is None:
            raise ConfigError("nonstationary spectrum needs a [window] block")
        initial = stationary_variances(run.params)
        values = nonstationary_spectrum(grid, run.window.duration, initial,
                                        without_feedback(run.params))
        manifest["q_var_init"] = _fmt(initial.q_var)
        manifest["p_var_init"] = _fmt(initial.p_var)
        manifest["qp_sym_init"] = _fmt(initial.qp_sym)
    out = Path(args.out) / f"spectrum_{args.mode}.csv"
    write_table(out, manifest, ["omega", "value"], [grid, values])
    print(out)
    return 0


def cmd_snr(args) -> int:
    run = load_config(args.config)
    if run.force is None:
        raise MissingForce("snr needs a [force] block in the config")
    if run.window is None:
        raise ConfigError("snr needs a [window] block in the config")
    grid = build_grid(args.omega_min, args.omega_max, args.points,
                      args.log_grid)
    manifest = _base_manifest(args, run, "snr")
    t_meas = run.window.duration
    if args.mode == "stationary":
        values = stationary_snr(grid, run.force, t_meas, run.params)
    elif args.mode == "nonstationary":
        values = nonstationary_snr(grid, run.force, t_meas, run.params)
    else:
        if "cooling_time" not in run.window_keys:
            raise ConfigError("averaged snr needs window.cooling_time")
        values = averaged_snr(grid, run.force, run.window, run.params)
    out = Path(args.out) / f"snr_{args.mode}.csv"
    write_table(out, manifest, ["omega", "value"], [grid, values])
    print(out)
    return 0


def cmd_oracle(args) -> int:
    run = load_config(args.config)
    seed = args.seed if args.seed is not None else np.random.SeedSequence().entropy
    config = OracleConfig(params=run.params, dt=args.dt, n_steps=args.steps,
                          n_traj=args.ensemble, seed=int(seed),
                          omega_min=args.omega_min, omega_max=args.omega_max,
                          n_bands=args.points)
    result = simulate(config)
    freqs = fft_bin_frequencies(config)
    analytic_fine = stationary_spectrum(freqs, run.params)
    analytic = band_average_reference(freqs, analytic_fine, args.omega_min,
                                      args.omega_max, args.points)
    z = (result.values - analytic) / result.errors
    manifest = _base_manifest(args, run, "oracle")
    manifest.update({"seed": int(seed), "dt": args.dt, "steps": args.steps,
                     "ensemble": args.ensemble,
                     "q_var_est": _fmt(result.q_var),
                     "q_var_stderr": _fmt(result.q_var_err),
                     "p_var_est": _fmt(result.p_var),
                     "p_var_stderr": _fmt(result.p_var_err),
                     "max_abs_z": _fmt(float(np.max(np.abs(z))))})
    out = Path(args.out) / "oracle_periodogram.csv"
    write_table(out, manifest, ["omega", "value", "stderr", "analytic", "z"],
                [result.grid, result.values, result.errors, analytic, z])
    max_z = float(np.max(np.abs(z)))
    print(f"{out}\nmax |z| over {z.size} bands: {max_z:.3f}")
    if max_z >= Z_LIMIT:
        print("oracle disagrees with the analytic spectrum", file=sys.stderr)
        return 4
    return 0


def cmd_validate_config(args) -> int:
    run = load_config(args.config)
    sys.stdout.write(format_config(run))
    return 0


# --- figure reproduction -------------------------------------------------

def _fig_params(quality_factor, gain, scheme=Scheme.COLD_DAMPING):
    return ModelParams(quality_factor=quality_factor, input_power=10.0,
                       gain=gain, scheme=scheme if gain else Scheme.NO_FEEDBACK,
                       detection_efficiency=0.8, temperature=1e5)


_RESONANT_PULSE_Q1E5 = ForcePulse(amplitude=1.0, duration=10.0,
                                  arrival_time=30.0, carrier=1.0)


def _emit_curves(outdir: Path, figure: str, curves: dict[str, tuple],
                 xlabel: str, ylabel: str, logy: bool = True,
                 extra_manifest: dict | None = None) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    plot_lines = ['set datafile separator ","', "set key outside",
                  f'set xlabel "{xlabel}"', f'set ylabel "{ylabel}"']
    if logy:
        plot_lines.append("set logscale y")
    plots = []
    for name, (grid, values) in curves.items():
        path = outdir / f"{figure}_{name}.csv"
        manifest = {"command": "reproduce", "figure": figure, "curve": name}
        manifest.update(extra_manifest or {})
        write_table(path, manifest, ["omega", "value"],
                    [np.asarray(grid), np.asarray(values)])
        plots.append(f'"{path.name}" using 1:2 with lines title "{name}"')
    plot_lines.append("plot " + ", \\\n     ".join(plots))
    (outdir / f"{figure}.gp").write_text("\n".join(plot_lines) + "\n",
                                         encoding="utf-8")


def _reproduce_snrsta(outdir: Path) -> None:
    grid = np.linspace(0.05, 2.0, 79)
    t_meas = 10.0 / 1e-5
    curves = {}
    for gain in (0.0, 1e4, 1e5):
        params = _fig_params(1e5, gain)
        label = f"g{gain:g}".replace("+", "")
        curves[label] = (grid, stationary_snr(grid, None, t_meas, params))
    _emit_curves(outdir, "snrsta", curves, "omega", "stationary SNR",
                 extra_manifest={"flat_force_transform": "1",
                                 "gamma_Tm": "10"})


def _reproduce_nonstatm(outdir: Path) -> None:
    params = _fig_params(1e4, 1e3)
    initial = stationary_variances(params)
    free = _fig_params(1e4, 0.0)
    grid = np.linspace(0.5, 1.5, 201)
    curves = {}
    for gtm in (1e-1, 1e-2, 1e-3, 1e-4):
        t_meas = gtm / params.gamma
        curves[f"gTm{gtm:g}"] = (
            grid, nonstationary_spectrum(grid, t_meas, initial, free))
    _emit_curves(outdir, "nonstatm", curves, "omega", "noise spectrum",
                 extra_manifest={"Q": "1e4", "zeta": "10", "g": "1e3",
                                 "temperature": "1e5", "eta": "0.8"})


def _reproduce_nonstag(outdir: Path, which: str) -> None:
    gtm = 1e-3 if which == "a" else 1e-1
    grid = np.linspace(0.5, 1.5, 201)
    free = _fig_params(1e4, 0.0)
    t_meas = gtm / free.gamma
    curves = {}
    for gain in (1.0, 10.0, 1e2, 1e3):
        params = _fig_params(1e4, gain)
        initial = stationary_variances(params)
        curves[f"g{gain:g}"] = (
            grid, nonstationary_spectrum(grid, t_meas, initial, free))
    _emit_curves(outdir, f"nonstag-{which}", curves, "omega",
                 "noise spectrum",
                 extra_manifest={"Q": "1e4", "zeta": "10",
                                 "gamma_Tm": f"{gtm:g}",
                                 "temperature": "1e5", "eta": "0.8"})


def _reproduce_snrnontot_a(outdir: Path) -> None:
    pulse = _RESONANT_PULSE_Q1E5
    grid = np.linspace(0.5, 1.5, 101)
    cooled = _fig_params(1e5, 2e3)
    free = _fig_params(1e5, 0.0)
    t_meas = 1e-3 / free.gamma
    signal = nonstationary_signal(grid, pulse, t_meas, free)
    snr_cooled = signal / nonstationary_noise(grid, t_meas, cooled)
    snr_free = signal / nonstationary_noise(grid, t_meas, free)
    snr_stat = stationary_snr(grid, pulse, 10.0 / free.gamma, free)
    _emit_curves(outdir, "snrnontot-a",
                 {"cooled_gTm1e-3": (grid, snr_cooled),
                  "uncooled_gTm1e-3": (grid, snr_free),
                  "stationary_gTm10": (grid, snr_stat)},
                 "omega", "SNR",
                 extra_manifest={"Q": "1e5", "g": "2e3",
                                 "pulse": "sigma=10 t1=30 carrier=1"})


def _reproduce_snrnontot_b(outdir: Path) -> None:
    pulse = _RESONANT_PULSE_Q1E5
    cooled = _fig_params(1e5, 2e3)
    free = _fig_params(1e5, 0.0)
    init_cooled = stationary_variances(cooled)
    init_free = stationary_variances(free)
    gtms = np.geomspace(1e-4, 10.0, 16)
    snr_c, snr_u = [], []
    for gtm in gtms:
        t_meas = gtm / free.gamma
        signal = nonstationary_signal(1.0, pulse, t_meas, free)
        snr_c.append(signal / nonstationary_noise(1.0, t_meas, cooled,
                                                  init_cooled))
        snr_u.append(signal / nonstationary_noise(1.0, t_meas, free,
                                                  init_free))
    _emit_curves(outdir, "snrnontot-b",
                 {"cooled": (gtms, np.array(snr_c)),
                  "uncooled": (gtms, np.array(snr_u))},
                 "gamma*Tm", "SNR at resonance",
                 extra_manifest={"Q": "1e5", "g": "2e3"})


def _reproduce_snrme2(outdir: Path) -> None:
    pulse = ForcePulse(amplitude=1.0, duration=10.0, arrival_time=0.0,
                       carrier=1.0)
    cooled = _fig_params(1e5, 2e3)
    free = _fig_params(1e5, 0.0)
    t_meas = 1e-3 / free.gamma
    window = MeasurementWindow(duration=t_meas, cooling_time=1e-3 * t_meas)
    baseline_window = MeasurementWindow(duration=t_meas, cooling_time=0.0)
    grid = np.linspace(0.5, 1.5, 33)
    avg_cooled = averaged_snr(grid, pulse, window, cooled)
    avg_free = averaged_snr(grid, pulse, baseline_window, free)
    _emit_curves(outdir, "snrme2",
                 {"cyclic_cooling": (grid, avg_cooled),
                  "no_feedback": (grid, avg_free)},
                 "omega", "time-averaged SNR",
                 extra_manifest={"Q": "1e5", "g": "2e3", "gamma_Tm": "1e-3",
                                 "Tcool_over_Tm": "1e-3"})


_FIGURES = {
    "snrsta": _reproduce_snrsta,
    "nonstatm": _reproduce_nonstatm,
    "nonstag-a": lambda out: _reproduce_nonstag(out, "a"),
    "nonstag-b": lambda out: _reproduce_nonstag(out, "b"),
    "snrnontot-a": _reproduce_snrnontot_a,
    "snrnontot-b": _reproduce_snrnontot_b,
    "snrme2": _reproduce_snrme2,
}


def cmd_reproduce(args) -> int:
    if args.figure not in _FIGURES:
        raise UnknownFigure(f"unknown figure '{args.figure}'; choose from "
                            f"{', '.join(sorted(_FIGURES))}")
    outdir = Path(args.out) / args.figure
    _FIGURES[args.figure](outdir)
    print(outdir)
    return 0


def _add_grid_args(sp, points_default=201):
    sp.add_argument("--omega-min", type=float, default=0.0)
    sp.add_argument("--omega-max", type=float, default=2.0)
    sp.add_argument("--points", type=int, default=points_default)
    sp.add_argument("--log-grid", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coolspec",
        description="Noise spectra and impulsive-force SNR of a "
                    "feedback-cooled optomechanical cavity")
    parser.add_argument("--version", action="version",
                        version=f"coolspec {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("spectrum", help="position-noise spectrum table")
    sp.add_argument("--config", required=True)
    sp.add_argument("--mode", choices=["stationary", "nonstationary"],
                    default="stationary")
    sp.add_argument("--out", default=".")
    _add_grid_args(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("snr", help="signal-to-noise ratio table")
    sp.add_argument("--config", required=True)
    sp.add_argument("--mode",
                    choices=["stationary", "nonstationary", "averaged"],
                    default="stationary")
    sp.add_argument("--out", default=".")
    _add_grid_args(sp, points_default=101)
    sp.set_defaults(func=cmd_snr)

    sp = sub.add_parser("oracle", help="stochastic cross-validation run")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=".")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--ensemble", type=int, default=256)
    sp.add_argument("--steps", type=int, default=1 << 20)
    sp.add_argument("--dt", type=float, default=0.02)
    _add_grid_args(sp, points_default=25)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("reproduce", help="emit a named figure dataset")
    sp.add_argument("figure")
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("validate-config", help="parse and echo a config")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=cmd_validate_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except CoolspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
