"""Pulse-driven quantum dot / cavity dynamics.

Lindblad master equation on a truncated Fock space, linear and nonlinear
mean-field models, a classical coupled-oscillator envelope model, and the
analysis and sweep drivers built on them.  Internal units are ps and
rad/ps; configuration files and the CLI speak GHz (f = w/2pi) and ps.
"""
from .analysis import (PolaritonPair, coherence_integral, oscillation_contrast, peak_separation,
                       polariton_eigenvalues, pulse_spectrum_overlap, transmission_spectrum)
from .experiments import SweepResult, SweepSpec, run_sweep
from .hilbert import OperatorSet, build_operators
from .params import PulseSpec, SystemParams, TimeGrid, ghz_to_angular, reference_params
from .quantum import InvariantViolation, check_truncation, evolve_master
from .semiclassical import (ClassicalOscParams, evolve_classical, evolve_linear,
                            evolve_nonlinear)
from .trace import TimeTrace

__version__ = "0.1.0"

__all__ = [
    "ClassicalOscParams", "InvariantViolation", "OperatorSet", "PolaritonPair", "PulseSpec",
    "SweepResult", "SweepSpec", "SystemParams", "TimeGrid", "TimeTrace", "build_operators",
    "check_truncation", "coherence_integral", "evolve_classical", "evolve_linear",
    "evolve_master", "evolve_nonlinear", "ghz_to_angular", "oscillation_contrast",
    "reference_params", "peak_separation", "polariton_eigenvalues", "pulse_spectrum_overlap",
    "run_sweep", "transmission_spectrum",
]
