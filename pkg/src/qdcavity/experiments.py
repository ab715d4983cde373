"""Drivers that regenerate the figure data sets.

Every run is a :class:`SweepSpec`: one swept parameter, a list of values,
and a set of models.  Sweep points are independent jobs and may be spread
over worker processes; results are keyed by ``(value, model)`` so the
assembly does not depend on completion order.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import analysis
from .hilbert import build_operators
from .params import (PulseSpec, SystemParams, TimeGrid, ghz_to_angular,
                     reference_params)
from .quantum import evolve_master
from .semiclassical import (ClassicalOscParams, evolve_classical,
                            evolve_linear, evolve_nonlinear)
from .trace import TimeTrace, max_normalized_deviation

log = logging.getLogger(__name__)

MODELS = ("quantum", "linear", "nonlinear", "classical")
SWEEPABLE = ("g", "kappa", "delta", "gamma_d", "fwhm", "omega0")

# optical carrier for the classical oscillator model (~300 THz); only the
# ratio G / (2 omega0) enters the envelope equations
CLASSICAL_CARRIER = ghz_to_angular(3.0e5)

FIG3_PANELS = {
    # panel: (swept, base rates in GHz, default values in GHz)
    "g": ("g", dict(kappa=20.0), np.linspace(10.0, 40.0, 20)),
    "kappa": ("kappa", dict(g=20.0), np.linspace(10.0, 30.0, 20)),
    "delta": ("delta", dict(g=20.0, kappa=20.0), np.linspace(0.0, 95.0, 20)),
    "gamma_d": ("gamma_d", dict(g=20.0, kappa=20.0), np.linspace(0.0, 20.0, 20)),
}
FIG3_OMEGA0_GHZ = 2.0
FIG2_OMEGA0_GHZ = (1.0, 60.0, 300.0)
FIG2_COHERENCE_GHZ = tuple(np.geomspace(0.5, 100.0, 10))
FIG4_FWHM_PS = (5.0, 10.0, 20.0, 30.0, 40.0, 50.0)


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep.

    ``values`` are in internal units: rad/ps for rates, detunings and
    ``omega0``; ps for ``fwhm``.  ``n_max=None`` picks a Fock cutoff per
    point from the expected photon number (see :func:`auto_n_max`).
    """

    swept_parameter: str
    values: Tuple[float, ...]
    base_params: SystemParams
    base_pulse: PulseSpec
    grid: Optional[TimeGrid] = None
    models: Tuple[str, ...] = ("quantum",)
    n_max: Optional[int] = 20
    drive_norm: str = "hamiltonian"

    def __post_init__(self):
        if self.swept_parameter not in SWEEPABLE:
            raise ValueError(f"swept_parameter must be one of {SWEEPABLE}, "
                             f"got {self.swept_parameter!r}")
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "models", tuple(self.models))
        if not values:
            raise ValueError("values must be non-empty")
        steps = np.diff(values)
        if len(values) > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError("values must be strictly monotone")
        unknown = set(self.models) - set(MODELS)
        if unknown or not self.models:
            raise ValueError(f"models must be a non-empty subset of {MODELS}")
        for v in values:
            self.point(v)  # raises on out-of-domain values

    def point(self, value: float) -> Tuple[SystemParams, PulseSpec, TimeGrid]:
        params, pulse = self.base_params, self.base_pulse
        name = self.swept_parameter
        if name == "delta":
            params = params.with_delta(value)
        elif name in ("g", "kappa", "gamma_d"):
            params = params.replace(**{name: value})
        elif name == "fwhm":
            pulse = pulse.replace(fwhm=value)
        else:
            pulse = pulse.replace(omega0=value)
        grid = self.grid if self.grid is not None else default_grid(params, pulse)
        return params, pulse, grid


@dataclass(eq=False)
class SweepResult:
    spec: SweepSpec
    traces: Dict[Tuple[float, str], TimeTrace]
    summaries: Dict[Tuple[float, str], dict]
    envelopes: Dict[float, np.ndarray] = field(default_factory=dict)

    def trace(self, value: float, model: str = "quantum") -> TimeTrace:
        return self.traces[(float(value), model)]

    def summary(self, key: str, model: str = "quantum") -> list:
        """Summary entry ``key`` for every swept value, in sweep order."""
        return [self.summaries[(v, model)][key] for v in self.spec.values]


def default_grid(params: SystemParams, pulse: PulseSpec, dt: float = 0.1) -> TimeGrid:
    """[-20, 200] ps, widened to cover 4 FWHM before the pulse and 10/kappa after it."""
    t_end = 200.0
    if params.kappa > 0:
        t_end = max(t_end, math.ceil(pulse.t_center + 10.0 / params.kappa))
    return TimeGrid.for_pulse(pulse, t_end=t_end, dt=dt)


def _bare_cavity_peak_photons(params: SystemParams, pulse: PulseSpec) -> float:
    # g = 0 response is an upper estimate once the dot saturates
    grid = default_grid(params, pulse, dt=0.5)
    bare = evolve_linear(params.replace(g=0.0), pulse, grid)
    return float(np.max(bare.cavity_photon))


def auto_n_max(params: SystemParams, pulse: PulseSpec, floor: int = 20) -> int:
    """Fock cutoff covering the coherent-state tail of the peak photon number."""
    n = _bare_cavity_peak_photons(params, pulse)
    return max(floor, int(math.ceil(n + 6.0 * math.sqrt(n) + 10.0)))


def summarize(trace: TimeTrace, params: SystemParams, pulse: PulseSpec) -> dict:
    peak = float(np.max(trace.cavity_photon)) if len(trace) else 0.0
    out = {
        "peak_separation": analysis.peak_separation(trace),
        "oscillation_contrast": analysis.oscillation_contrast(trace),
        "peak_photon": peak,
        "peak_output_flux": 2.0 * params.kappa * peak,
        "coherence_integral": None,
    }
    if trace.model != "classical" and pulse.omega0 > 0:
        out["coherence_integral"] = analysis.coherence_integral(trace, pulse.omega0)
    return out


def run_model(model: str, params: SystemParams, pulse: PulseSpec, grid: TimeGrid,
              n_max: Optional[int] = 20, drive_norm: str = "hamiltonian") -> TimeTrace:
    if model == "quantum":
        n = auto_n_max(params, pulse) if n_max is None else n_max
        return evolve_master(build_operators(n), params, pulse, grid)
    if model == "linear":
        return evolve_linear(params, pulse, grid, drive_norm=drive_norm)
    if model == "nonlinear":
        return evolve_nonlinear(params, pulse, grid, drive_norm=drive_norm)
    if model == "classical":
        osc = ClassicalOscParams.from_system(params, CLASSICAL_CARRIER)
        return evolve_classical(osc, pulse, grid).as_trace()
    raise ValueError(f"unknown model {model!r}")


def _job(args):
    spec, value, model = args
    params, pulse, grid = spec.point(value)
    trace = run_model(model, params, pulse, grid, spec.n_max, spec.drive_norm)
    return value, model, trace, summarize(trace, params, pulse)


def run_sweep(spec: SweepSpec, n_jobs: int = 1) -> SweepResult:
    """Run every ``(value, model)`` pair of ``spec``; ``n_jobs > 1`` uses worker processes."""
    jobs = [(spec, v, m) for v in spec.values for m in spec.models]
    if n_jobs is None or n_jobs <= 1 or len(jobs) == 1:
        results = map(_job, jobs)
        return _assemble(spec, results)
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return _assemble(spec, pool.map(_job, jobs))


def _assemble(spec: SweepSpec, results) -> SweepResult:
    traces, summaries, envelopes = {}, {}, {}
    for value, model, trace, summary in results:
        log.info("%s=%.6g %s done", spec.swept_parameter, value, model)
        traces[(value, model)] = trace
        summaries[(value, model)] = summary
    for value in spec.values:
        _, pulse, grid = spec.point(value)
        envelopes[value] = pulse.envelope(grid.times)
    return SweepResult(spec=spec, traces=traces, summaries=summaries, envelopes=envelopes)


def fig1_defaults() -> Tuple[SystemParams, PulseSpec]:
    return reference_params(), PulseSpec.from_ghz(omega0=1.0, fwhm=5.0)


def run_fig1(params: Optional[SystemParams] = None, pulse: Optional[PulseSpec] = None,
             grid: Optional[TimeGrid] = None, n_max: int = 20, n_jobs: int = 1) -> SweepResult:
    """Quantum, linear and nonlinear outputs for one weak pulse."""
    d_params, d_pulse = fig1_defaults()
    params = params or d_params
    pulse = pulse or d_pulse
    spec = SweepSpec("omega0", (pulse.omega0,), params, pulse, grid,
                     models=("quantum", "linear", "nonlinear"), n_max=n_max)
    return run_sweep(spec, n_jobs)


def fig1_max_deviation(result: SweepResult) -> float:
    value = result.spec.values[0]
    models = result.spec.models
    return max(max_normalized_deviation(result.trace(value, a), result.trace(value, b))
               for i, a in enumerate(models) for b in models[i + 1:])


def run_fig2(params: Optional[SystemParams] = None, pulse: Optional[PulseSpec] = None,
             grid: Optional[TimeGrid] = None,
             omega0_list: Sequence[float] = tuple(ghz_to_angular(f) for f in FIG2_OMEGA0_GHZ),
             coherence_omega0: Optional[Sequence[float]] = tuple(
                 ghz_to_angular(f) for f in FIG2_COHERENCE_GHZ),
             n_jobs: int = 1) -> Tuple[SweepResult, Optional[SweepResult]]:
    """Quantum vs nonlinear at several drives, plus the coherence-vs-drive curve.

    Returns ``(comparison, coherence)``; the Fock cutoff grows with the
    drive.  ``coherence`` is ``None`` when ``coherence_omega0`` is empty.
    """
    d_params, d_pulse = fig1_defaults()
    params = params or d_params
    pulse = pulse or d_pulse
    comparison = run_sweep(SweepSpec("omega0", tuple(omega0_list), params, pulse, grid,
                                     models=("quantum", "nonlinear"), n_max=None), n_jobs)
    coherence = None
    if coherence_omega0:
        coherence = run_sweep(SweepSpec("omega0", tuple(coherence_omega0), params, pulse,
                                        grid, models=("quantum",), n_max=None), n_jobs)
    return comparison, coherence


def drive_deviation(result: SweepResult) -> list:
    """Max normalized quantum-vs-nonlinear deviation per drive."""
    return [max_normalized_deviation(result.trace(v, "quantum"), result.trace(v, "nonlinear"))
            for v in result.spec.values]


def fig3_spec(panel: str, values_ghz: Optional[Sequence[float]] = None,
              gamma_ghz: float = 1.0, n_max: int = 20) -> SweepSpec:
    """Sweep for one ``fig 3x`` panel; ``values_ghz`` in GHz, defaulting to 20 points."""
    if panel not in FIG3_PANELS:
        raise ValueError(f"panel must be one of {tuple(FIG3_PANELS)}, got {panel!r}")
    swept, base, default_values = FIG3_PANELS[panel]
    rates = dict(g=20.0, kappa=20.0, gamma=gamma_ghz)
    rates.update(base)
    params = SystemParams.from_ghz(**rates)
    pulse = PulseSpec.from_ghz(omega0=FIG3_OMEGA0_GHZ, fwhm=5.0)
    values = default_values if values_ghz is None else values_ghz
    return SweepSpec(swept, tuple(ghz_to_angular(float(v)) for v in values), params, pulse,
                     models=("quantum",), n_max=n_max)


def run_fig3(panel: str, values_ghz: Optional[Sequence[float]] = None,
             n_jobs: int = 1, **kwargs) -> SweepResult:
    return run_sweep(fig3_spec(panel, values_ghz, **kwargs), n_jobs)


def run_fig4(fwhm_list: Sequence[float] = FIG4_FWHM_PS, params: Optional[SystemParams] = None,
             omega0: Optional[float] = None, n_max: int = 20, n_jobs: int = 1) -> SweepResult:
    """Quantum output for several pulse lengths (ps) at the ``fig 1`` parameters."""
    d_params, d_pulse = fig1_defaults()
    pulse = d_pulse if omega0 is None else d_pulse.replace(omega0=omega0)
    spec = SweepSpec("fwhm", tuple(fwhm_list), params or d_params, pulse,
                     models=("quantum",), n_max=n_max)
    return run_sweep(spec, n_jobs)


# laser powers (nW) of the three 40 ps runs; the drive scales as sqrt(power)
FIG5_POWERS_NW = (0.1, 0.23, 1.0)
FIG5_BASE_OMEGA0_GHZ = 1.5


def run_fig5(base_omega0_ghz: float = FIG5_BASE_OMEGA0_GHZ, fwhm: float = 40.0,
             n_max: int = 20, n_jobs: int = 1) -> SweepResult:
    """40 ps pulses at drives scaling as sqrt(power) across the three measured powers."""
    drives = tuple(ghz_to_angular(base_omega0_ghz * math.sqrt(p / FIG5_POWERS_NW[0]))
                   for p in FIG5_POWERS_NW)
    d_params, d_pulse = fig1_defaults()
    spec = SweepSpec("omega0", drives, d_params, d_pulse.replace(fwhm=fwhm),
                     models=("quantum",), n_max=n_max)
    return run_sweep(spec, n_jobs)
