"""Sampled observables shared by every model."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

TRACE_FIELDS = (
    "times",
    "cavity_photon",
    "qd_population",
    "mean_a",
    "mean_sigma",
    "mean_sigma_z",
    "cross_coherence",
)


@dataclass(eq=False)
class TimeTrace:
    """Observables on a time grid (ps).

    ``cavity_photon`` is <a^dag a>, the quantity reported as cavity output;
    the output flux is ``2*kappa`` times it, a constant dropped once traces
    are peak-normalized.  ``cross_coherence`` is <a^dag sigma>.

    Quantum runs also carry per-sample state diagnostics (``trace_error``,
    ``hermiticity_error``, ``min_eigenvalue``); semiclassical runs leave
    them as ``None``.
    """

    times: np.ndarray
    cavity_photon: np.ndarray
    qd_population: np.ndarray
    mean_a: np.ndarray
    mean_sigma: np.ndarray
    mean_sigma_z: np.ndarray
    cross_coherence: np.ndarray
    model: str = "quantum"
    trace_error: Optional[np.ndarray] = field(default=None, repr=False)
    hermiticity_error: Optional[np.ndarray] = field(default=None, repr=False)
    min_eigenvalue: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self):
        return len(self.times)

    def normalized_output(self) -> np.ndarray:
        """``cavity_photon`` divided by its maximum (all zeros stay zero)."""
        peak = float(np.max(self.cavity_photon)) if len(self) else 0.0
        if peak <= 0:
            return np.zeros_like(self.cavity_photon)
        return self.cavity_photon / peak

    @classmethod
    def empty(cls, model="quantum") -> "TimeTrace":
        real = np.zeros(0)
        cplx = np.zeros(0, dtype=complex)
        return cls(real, real, real, cplx, cplx, real, cplx, model=model)


def max_normalized_deviation(first: TimeTrace, second: TimeTrace) -> float:
    """Max over the grid of the difference between peak-normalized outputs."""
    if first.times.shape != second.times.shape or not np.allclose(first.times, second.times):
        raise ValueError("traces are sampled on different grids")
    return float(np.max(np.abs(first.normalized_output() - second.normalized_output())))
