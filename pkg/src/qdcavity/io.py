"""Run configuration files and CSV output.

Config format: ``[section]`` headers followed by ``key = value`` lines;
``#`` or ``;`` start a comment line.  Every key is unit-suffixed and
humans-first (GHz ordinary frequency, ps)::

    [system]
    g_ghz = 25
    kappa_ghz = 29
    gamma_ghz = 1

    [pulse]
    omega0_ghz = 1
    fwhm_ps = 5

    [run]
    models = quantum, linear, nonlinear

Sections and keys (defaults in parentheses; no default means required):

``[system]``  g_ghz, kappa_ghz, gamma_ghz (0), gamma_d_ghz (0),
              delta_c_ghz (0), delta_a_ghz (0)
``[pulse]``   omega0_ghz, fwhm_ps, t_center_ps (0)
``[grid]``    t_start_ps, t_end_ps, dt_ps (whole section optional; all three
              keys needed if present)
``[run]``     models (quantum, linear, nonlinear), n_max (20),
              drive_norm (hamiltonian), output (run), n_jobs (1)
``[sweep]``   parameter (g | kappa | delta | gamma_d | fwhm | omega0),
              values (comma separated; GHz, or ps for fwhm)

Unknown sections or keys, duplicates and out-of-domain values are errors
that name the line.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .experiments import MODELS, SWEEPABLE, SweepResult, SweepSpec
from .params import (PulseSpec, SystemParams, TimeGrid, angular_to_ghz,
                     ghz_to_angular)
from .semiclassical import DRIVE_NORMS
from .trace import TimeTrace

TRACE_HEADER = ("t_ps", "cavity_photon", "qd_population", "re_a", "im_a",
                "re_sigma", "im_sigma", "sigma_z", "re_adag_sigma", "im_adag_sigma")


class ConfigError(ValueError):
    pass


# key -> (kind, required, default); kinds: rate (GHz, >= 0), detuning (GHz),
# time (ps), positive_time (ps, > 0)
_SCHEMA = {
    "system": {
        "g_ghz": ("rate", True, None),
        "kappa_ghz": ("rate", True, None),
        "gamma_ghz": ("rate", False, 0.0),
        "gamma_d_ghz": ("rate", False, 0.0),
        "delta_c_ghz": ("detuning", False, 0.0),
        "delta_a_ghz": ("detuning", False, 0.0),
    },
    "pulse": {
        "omega0_ghz": ("rate", True, None),
        "fwhm_ps": ("positive_time", True, None),
        "t_center_ps": ("time", False, 0.0),
    },
    "grid": {
        "t_start_ps": ("time", True, None),
        "t_end_ps": ("time", True, None),
        "dt_ps": ("positive_time", True, None),
    },
    "run": {
        "models": ("models", False, ("quantum", "linear", "nonlinear")),
        "n_max": ("n_max", False, 20),
        "drive_norm": ("drive_norm", False, "hamiltonian"),
        "output": ("text", False, "run"),
        "n_jobs": ("n_jobs", False, 1),
    },
    "sweep": {
        "parameter": ("parameter", True, None),
        "values": ("values", True, None),
    },
}
_OPTIONAL_SECTIONS = ("grid", "sweep")


@dataclass(frozen=True)
class SweepBlock:
    parameter: str
    values: Tuple[float, ...]  # internal units


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams
    pulse: PulseSpec
    grid: Optional[TimeGrid] = None
    models: Tuple[str, ...] = ("quantum", "linear", "nonlinear")
    n_max: int = 20
    drive_norm: str = "hamiltonian"
    output: str = "run"
    n_jobs: int = 1
    sweep: Optional[SweepBlock] = None

    def sweep_spec(self) -> SweepSpec:
        if self.sweep is None:
            raise ConfigError("config has no [sweep] section")
        return SweepSpec(self.sweep.parameter, self.sweep.values, self.system, self.pulse,
                         self.grid, self.models, self.n_max, self.drive_norm)


def _convert(kind, raw, where):
    def number():
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"{where}: expected a number, got {raw!r}") from None
        if not math.isfinite(value):
            raise ConfigError(f"{where}: value must be finite, got {raw!r}")
        return value

    if kind in ("rate", "detuning", "time", "positive_time"):
        value = number()
        if kind == "rate" and value < 0:
            raise ConfigError(f"{where}: must be >= 0, got {raw}")
        if kind == "positive_time" and value <= 0:
            raise ConfigError(f"{where}: must be > 0, got {raw}")
        return value
    if kind in ("n_max", "n_jobs"):
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"{where}: expected an integer, got {raw!r}") from None
        if value < 1:
            raise ConfigError(f"{where}: must be >= 1, got {raw}")
        return value
    if kind == "models":
        models = tuple(m.strip() for m in raw.split(",") if m.strip())
        bad = [m for m in models if m not in MODELS]
        if bad or not models:
            raise ConfigError(f"{where}: unknown model(s) {bad}; choose from {MODELS}")
        return models
    if kind == "drive_norm":
        if raw not in DRIVE_NORMS:
            raise ConfigError(f"{where}: must be one of {DRIVE_NORMS}, got {raw!r}")
        return raw
    if kind == "parameter":
        if raw not in SWEEPABLE:
            raise ConfigError(f"{where}: must be one of {SWEEPABLE}, got {raw!r}")
        return raw
    if kind == "values":
        parts = [p.strip() for p in raw.split(",") if p.strip()]
        if not parts:
            raise ConfigError(f"{where}: empty value list")
        return tuple(_convert("detuning", p, where) for p in parts)
    return raw


def parse_config(text: str) -> RunConfig:
    """Parse and validate a run configuration (see module docstring)."""
    seen = {}  # (section, key) -> line number
    raw = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {stripped!r}")
            section = stripped[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            raw.setdefault(section, {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside of any [section]")
        key, value = (s.strip() for s in stripped.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [{section}]")
        if (section, key) in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in [{section}] "
                              f"(first set on line {seen[section, key]})")
        seen[section, key] = lineno
        kind = _SCHEMA[section][key][0]
        raw[section][key] = _convert(kind, value, f"line {lineno}: [{section}] {key}")

    values = {}
    for name, keys in _SCHEMA.items():
        if name not in raw:
            if name in _OPTIONAL_SECTIONS:
                continue
            raw[name] = {}
        values[name] = {}
        for key, (_, required, default) in keys.items():
            if key in raw[name]:
                values[name][key] = raw[name][key]
            elif required:
                raise ConfigError(f"missing required key {key!r} in [{name}]")
            else:
                values[name][key] = default

    s = values["system"]
    system = SystemParams.from_ghz(
        g=s["g_ghz"], kappa=s["kappa_ghz"], gamma=s["gamma_ghz"], gamma_d=s["gamma_d_ghz"],
        delta_c=s["delta_c_ghz"], delta_a=s["delta_a_ghz"])
    p = values["pulse"]
    pulse = PulseSpec.from_ghz(omega0=p["omega0_ghz"], fwhm=p["fwhm_ps"],
                               t_center=p["t_center_ps"])
    grid = None
    if "grid" in values:
        g = values["grid"]
        if g["t_end_ps"] <= g["t_start_ps"]:
            raise ConfigError(f"line {seen['grid', 't_end_ps']}: [grid] t_end_ps must "
                              f"exceed t_start_ps")
        grid = TimeGrid(g["t_start_ps"], g["t_end_ps"], g["dt_ps"])
    sweep = None
    if "sweep" in values:
        w = values["sweep"]
        vals = w["values"]
        if w["parameter"] != "fwhm":
            vals = tuple(ghz_to_angular(v) for v in vals)
        sweep = SweepBlock(w["parameter"], vals)
    r = values["run"]
    cfg = RunConfig(system=system, pulse=pulse, grid=grid, models=r["models"],
                    n_max=r["n_max"], drive_norm=r["drive_norm"], output=r["output"],
                    n_jobs=r["n_jobs"], sweep=sweep)
    if sweep is not None:
        try:
            cfg.sweep_spec()
        except ValueError as exc:
            raise ConfigError(f"line {seen['sweep', 'values']}: [sweep] values: {exc}") from None
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return parse_config(text)


def format_config(cfg: RunConfig) -> str:
    """Serialize ``cfg`` in the format read by :func:`parse_config`."""
    s, p = cfg.system, cfg.pulse
    lines = [
        "[system]",
        f"g_ghz = {angular_to_ghz(s.g)!r}",
        f"kappa_ghz = {angular_to_ghz(s.kappa)!r}",
        f"gamma_ghz = {angular_to_ghz(s.gamma)!r}",
        f"gamma_d_ghz = {angular_to_ghz(s.gamma_d)!r}",
        f"delta_c_ghz = {angular_to_ghz(s.delta_c)!r}",
        f"delta_a_ghz = {angular_to_ghz(s.delta_a)!r}",
        "",
        "[pulse]",
        f"omega0_ghz = {angular_to_ghz(p.omega0)!r}",
        f"fwhm_ps = {p.fwhm!r}",
        f"t_center_ps = {p.t_center!r}",
        "",
    ]
    if cfg.grid is not None:
        lines += ["[grid]", f"t_start_ps = {cfg.grid.t_start!r}",
                  f"t_end_ps = {cfg.grid.t_end!r}", f"dt_ps = {cfg.grid.dt!r}", ""]
    lines += [
        "[run]",
        f"models = {', '.join(cfg.models)}",
        f"n_max = {cfg.n_max}",
        f"drive_norm = {cfg.drive_norm}",
        f"output = {cfg.output}",
        f"n_jobs = {cfg.n_jobs}",
        "",
    ]
    if cfg.sweep is not None:
        vals = cfg.sweep.values
        if cfg.sweep.parameter != "fwhm":
            vals = tuple(angular_to_ghz(v) for v in vals)
        lines += ["[sweep]", f"parameter = {cfg.sweep.parameter}",
                  "values = " + ", ".join(repr(float(v)) for v in vals), ""]
    return "\n".join(lines)


def _open_for_write(path):
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_trace_csv(trace: TimeTrace, path) -> None:
    """One row per sample; floats written with ``repr`` so they round-trip exactly."""
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for i in range(len(trace)):
            a, s, c = trace.mean_a[i], trace.mean_sigma[i], trace.cross_coherence[i]
            row = (trace.times[i], trace.cavity_photon[i], trace.qd_population[i],
                   a.real, a.imag, s.real, s.imag, trace.mean_sigma_z[i], c.real, c.imag)
            writer.writerow([repr(float(x)) for x in row])


def read_trace_csv(path, model: str = "quantum") -> TimeTrace:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != TRACE_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = np.array([[float(x) for x in row] for row in reader], dtype=float)
    if rows.size == 0:
        return TimeTrace.empty(model)
    return TimeTrace(
        times=rows[:, 0],
        cavity_photon=rows[:, 1],
        qd_population=rows[:, 2],
        mean_a=rows[:, 3] + 1j * rows[:, 4],
        mean_sigma=rows[:, 5] + 1j * rows[:, 6],
        mean_sigma_z=rows[:, 7],
        cross_coherence=rows[:, 8] + 1j * rows[:, 9],
        model=model,
    )


def write_envelope_csv(times, pulse: PulseSpec, path) -> None:
    """Pulse envelope p(t) and drive Omega(t)/2pi in GHz."""
    times = np.asarray(times, dtype=float)
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("t_ps", "envelope", "drive_ghz"))
        for t, p in zip(times, pulse.envelope(times)):
            writer.writerow((repr(float(t)), repr(float(p)),
                             repr(float(angular_to_ghz(pulse.omega0 * p)))))


def write_spectrum_csv(spectrum, path) -> None:
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("detuning_ghz", "transmission"))
        for d, t in zip(spectrum.detunings, spectrum.transmission):
            writer.writerow((repr(float(angular_to_ghz(d))), repr(float(t))))


def human_value(parameter: str, value: float) -> Tuple[float, str]:
    """Swept value in the units a config file uses."""
    if parameter == "fwhm":
        return value, "ps"
    return float(angular_to_ghz(value)), "GHz"


SUMMARY_KEYS = ("peak_separation", "oscillation_contrast", "peak_photon",
                "peak_output_flux", "coherence_integral")


def write_summary_csv(result: SweepResult, path) -> None:
    spec = result.spec
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("parameter", "value", "unit", "model",
                         "peak_separation_ps", "oscillation_contrast", "peak_photon",
                         "peak_output_flux", "coherence_integral"))
        for value in spec.values:
            shown, unit = human_value(spec.swept_parameter, value)
            for model in spec.models:
                summary = result.summaries[(value, model)]
                cells = ["" if summary[k] is None else repr(float(summary[k]))
                         for k in SUMMARY_KEYS]
                writer.writerow([spec.swept_parameter, repr(shown), unit, model] + cells)


def write_sweep(result: SweepResult, prefix) -> list:
    """Write every trace plus a summary; returns the paths written."""
    prefix = str(prefix)
    spec = result.spec
    paths = []
    for i, value in enumerate(spec.values):
        for model in spec.models:
            path = f"{prefix}_{spec.swept_parameter}{i:02d}_{model}.csv"
            write_trace_csv(result.trace(value, model), path)
            paths.append(path)
    path = f"{prefix}_summary.csv"
    write_summary_csv(result, path)
    paths.append(path)
    return paths
