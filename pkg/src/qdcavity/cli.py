"""Command line entry point: ``qdcavity <command> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import analysis, experiments
from .hilbert import build_operators
from .io import (ConfigError, human_value, load_config, write_envelope_csv,
                 write_spectrum_csv, write_sweep, write_trace_csv)
from .params import SystemParams, angular_to_ghz, ghz_to_angular, reference_params
from .quantum import hamiltonian, evolve_master, check_truncation
from .trace import max_normalized_deviation

log = logging.getLogger("qdcavity")

FIGURES = ("1", "2", "3a", "3b", "3c", "3d", "4", "5")


def _add_system_flags(p, defaults=(25.0, 29.0, 1.0)):
    g, kappa, gamma = defaults
    p.add_argument("--g", type=float, default=g, help="coupling g/2pi in GHz (%(default)s)")
    p.add_argument("--kappa", type=float, default=kappa,
                   help="cavity field decay kappa/2pi in GHz (%(default)s)")
    p.add_argument("--gamma", type=float, default=gamma,
                   help="dipole decay gamma/2pi in GHz (%(default)s)")
    p.add_argument("--gamma-d", type=float, default=0.0,
                   help="pure dephasing gamma_d/2pi in GHz (%(default)s)")
    p.add_argument("--delta", type=float, default=0.0,
                   help="dot-cavity detuning delta/2pi in GHz (%(default)s)")


def _system_from_flags(args) -> SystemParams:
    # laser on the bare cavity; the dot moves with delta
    return SystemParams.from_ghz(g=args.g, kappa=args.kappa, gamma=args.gamma,
                                 gamma_d=args.gamma_d, delta_c=0.0, delta_a=-args.delta)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdcavity",
        description="Pulse-driven quantum dot / cavity dynamics: master equation and "
                    "mean-field models.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the selected models for one configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output prefix (overrides [run] output)")

    p = sub.add_parser("sweep", help="run the [sweep] block of a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output prefix (overrides [run] output)")
    p.add_argument("--jobs", type=int, help="worker processes (overrides [run] n_jobs)")

    p = sub.add_parser("spectrum", help="weak-probe transmission spectrum")
    _add_system_flags(p)
    p.add_argument("--span", type=float, default=100.0, help="half width in GHz")
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--out", default="spectrum.csv")

    p = sub.add_parser("eigen", help="polariton eigenfrequencies and splitting")
    _add_system_flags(p)

    p = sub.add_parser("fig", help="regenerate the data for one figure")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--out", default="figures", help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--g", type=float, help="override g/2pi in GHz")
    p.add_argument("--kappa", type=float, help="override kappa/2pi in GHz")
    p.add_argument("--gamma", type=float, help="override gamma/2pi in GHz")
    p.add_argument("--omega0", type=float, help="override peak drive /2pi in GHz")
    p.add_argument("--fwhm", type=float, help="override pulse FWHM in ps")
    p.add_argument("--n-max", type=int, default=20)

    sub.add_parser("check", help="run the invariant and convergence checks")
    return parser


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    prefix = args.out or cfg.output
    grid = cfg.grid or experiments.default_grid(cfg.system, cfg.pulse)
    for model in cfg.models:
        trace = experiments.run_model(model, cfg.system, cfg.pulse, grid, cfg.n_max,
                                      cfg.drive_norm)
        path = f"{prefix}_{model}.csv"
        write_trace_csv(trace, path)
        summary = experiments.summarize(trace, cfg.system, cfg.pulse)
        sep = summary["peak_separation"]
        print(f"{model:9s} peak <a^dag a> = {summary['peak_photon']:.6g}  "
              f"peak separation = {'none' if sep is None else f'{sep:.3f} ps'}  -> {path}")
    write_envelope_csv(grid.times, cfg.pulse, f"{prefix}_pulse.csv")
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.sweep_spec()
    jobs = args.jobs if args.jobs is not None else cfg.n_jobs
    result = experiments.run_sweep(spec, n_jobs=jobs)
    paths = write_sweep(result, args.out or cfg.output)
    _print_summary(result)
    print(f"wrote {len(paths)} files")
    return 0


def cmd_spectrum(args) -> int:
    params = _system_from_flags(args)
    detunings = ghz_to_angular(np.linspace(-args.span, args.span, args.points))
    spectrum = analysis.transmission_spectrum(params, detunings)
    write_spectrum_csv(spectrum, args.out)
    y = spectrum.transmission
    interior = np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1
    peaks = ", ".join(f"{angular_to_ghz(spectrum.detunings[i]):.3f}" for i in interior)
    print(f"transmission peaks at {peaks or 'none'} GHz -> {args.out}")
    return 0


def cmd_eigen(args) -> int:
    params = _system_from_flags(args)
    pair = analysis.polariton_eigenvalues(params)
    for name, w in (("omega_+", pair.omega_plus), ("omega_-", pair.omega_minus)):
        print(f"{name}/2pi = {angular_to_ghz(w.real):+.4f} {angular_to_ghz(w.imag):+.4f}i GHz")
    split = angular_to_ghz(pair.splitting.real)
    print(f"splitting: {split:.2f} GHz")
    print(f"beat period: {pair.beat_period:.2f} ps")
    print(f"strong coupling: {'yes' if pair.strong_coupling else 'no'}")
    return 0


def _print_summary(result):
    spec = result.spec
    for value in spec.values:
        shown, unit = human_value(spec.swept_parameter, value)
        for model in spec.models:
            s = result.summaries[(value, model)]
            sep = s["peak_separation"]
            print(f"{spec.swept_parameter}={shown:9.4g} {unit:3s} {model:9s} "
                  f"separation={'none' if sep is None else f'{sep:7.3f} ps'}  "
                  f"contrast={s['oscillation_contrast']:.4f}  "
                  f"peak_flux={s['peak_output_flux']:.4g}")


def cmd_fig(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    overrides = {k: getattr(args, k) for k in ("g", "kappa", "gamma")
                 if getattr(args, k) is not None}
    params = reference_params(**overrides)
    _, pulse = experiments.fig1_defaults()
    if args.omega0 is not None:
        pulse = pulse.replace(omega0=ghz_to_angular(args.omega0))
    if args.fwhm is not None:
        pulse = pulse.replace(fwhm=args.fwhm)
    fig = args.figure

    if fig == "1":
        result = experiments.run_fig1(params, pulse, n_max=args.n_max, n_jobs=args.jobs)
        value = result.spec.values[0]
        for model in result.spec.models:
            write_trace_csv(result.trace(value, model), out / f"fig1_{model}.csv")
        times = result.trace(value, "quantum").times
        write_envelope_csv(times, pulse, out / "fig1_pulse.csv")
        print(f"max pairwise normalized deviation: {experiments.fig1_max_deviation(result):.3e}")
        _print_summary(result)
    elif fig == "2":
        comparison, coherence = experiments.run_fig2(params, pulse, n_jobs=args.jobs)
        write_sweep(comparison, out / "fig2")
        write_sweep(coherence, out / "fig2_coherence")
        for v, d in zip(comparison.spec.values, experiments.drive_deviation(comparison)):
            print(f"omega0/2pi={angular_to_ghz(v):8.3f} GHz  quantum vs nonlinear max dev={d:.4f}")
        for v, c in zip(coherence.spec.values, coherence.summary("coherence_integral")):
            print(f"omega0/2pi={angular_to_ghz(v):8.3f} GHz  coherence integral={c:.5g}")
    elif fig.startswith("3"):
        panel = {"3a": "g", "3b": "kappa", "3c": "delta", "3d": "gamma_d"}[fig]
        result = experiments.run_fig3(panel, n_jobs=args.jobs, n_max=args.n_max)
        write_sweep(result, out / f"fig{fig}")
        _print_summary(result)
    elif fig == "4":
        result = experiments.run_fig4(params=params, omega0=pulse.omega0, n_max=args.n_max,
                                      n_jobs=args.jobs)
        write_sweep(result, out / "fig4")
        _print_summary(result)
    else:
        result = experiments.run_fig5(n_max=args.n_max, n_jobs=args.jobs)
        write_sweep(result, out / "fig5")
        _print_summary(result)
    print(f"data written to {out}/")
    return 0


def cmd_check(args) -> int:
    results = []

    def report(name, ok, detail):
        results.append(ok)
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")

    params = reference_params()
    pair = analysis.polariton_eigenvalues(params)
    split = angular_to_ghz(pair.splitting.real)
    report("polariton splitting", abs(split - 41.42) < 0.01, f"{split:.4f} GHz")

    lossless = params.replace(kappa=0.0, gamma=0.0, delta_a=ghz_to_angular(-7.0))
    ops = build_operators(1)
    h = hamiltonian(ops, lossless, 0.0)
    block = h[np.ix_([1, 2], [1, 2])]  # |0,e>, |1,g>
    exact = np.linalg.eigvalsh(block)
    pair0 = analysis.polariton_eigenvalues(lossless)
    formula = np.sort([pair0.omega_minus.real, pair0.omega_plus.real])
    err = float(np.max(np.abs(exact - formula)))
    report("eigenvalues vs single-excitation block", err < 1e-10, f"max diff {err:.2e}")

    _, pulse = experiments.fig1_defaults()
    grid = experiments.default_grid(params, pulse)
    trace = evolve_master(build_operators(20), params, pulse, grid)
    report("density matrix invariants", True,
           f"|Tr-1|<={trace.trace_error.max():.1e}, herm<={trace.hermiticity_error.max():.1e}, "
           f"min eig>={trace.min_eigenvalue.min():.1e}")

    strong = pulse.replace(omega0=ghz_to_angular(2.0))
    diff = check_truncation(params, strong, grid, n_max=20)
    report("Fock truncation 20 vs 24 at 2 GHz", diff < 1e-6, f"{diff:.2e}")

    bare = params.replace(g=0.0)
    q = evolve_master(build_operators(4), bare, pulse, grid)
    ref = analysis.bare_cavity_field(bare, pulse, grid.times)
    err = float(np.max(np.abs(q.mean_a - ref)))
    report("empty-cavity closed form", err < 1e-8, f"max |<a> - exact| = {err:.2e}")

    lin = experiments.run_model("linear", params, pulse, grid)
    dev = max_normalized_deviation(trace, lin)
    report("quantum vs linear at weak drive", dev < 0.05, f"{dev:.2e}")
    return 0 if all(results) else 1


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "eigen": cmd_eigen,
    "fig": cmd_fig,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"qdcavity {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
