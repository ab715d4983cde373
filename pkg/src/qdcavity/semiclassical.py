"""Mean-field models: linear closure, factorized nonlinear closure and the
classical coupled-oscillator envelope model.

All models integrate with the same Dormand-Prince scheme and tolerances
as the master equation so that cross-model comparisons are fair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .integrate import dopri5
from .params import PulseSpec, SystemParams, TimeGrid
from .quantum import ATOL, RTOL
from .trace import TimeTrace

DRIVE_NORMS = ("hamiltonian", "paper_meanfield")


def drive_factor(params: SystemParams, drive_norm: str = "hamiltonian") -> float:
    """Scale applied to Omega(t) in the mean-field cavity equation.

    ``"hamiltonian"`` (default) is what the rotating-frame Hamiltonian
    implies, ``d<a>/dt = ... - Omega(t)``.  ``"paper_meanfield"`` uses the
    alternative normalization ``- sqrt(kappa) Omega(t)`` for comparison.
    """
    if drive_norm == "hamiltonian":
        return 1.0
    if drive_norm == "paper_meanfield":
        return math.sqrt(params.kappa)
    raise ValueError(f"drive_norm must be one of {DRIVE_NORMS}, got {drive_norm!r}")


@dataclass(frozen=True)
class MeanFieldState:
    mean_a: complex = 0j
    mean_sigma: complex = 0j
    mean_sigma_z: float = -1.0

    def as_array(self) -> np.ndarray:
        return np.array([self.mean_a, self.mean_sigma, self.mean_sigma_z], dtype=complex)


def _sample(fun, y0, grid: TimeGrid, pulse: PulseSpec) -> np.ndarray:
    # max_step keeps the integrator from stepping over the pulse while the
    # state is still exactly zero
    out = [y for _, y in dopri5(fun, y0, grid.times, rtol=RTOL, atol=ATOL,
                                max_step=0.5 * pulse.sigma)]
    return np.stack(out)


def evolve_linear(params: SystemParams, pulse: PulseSpec, grid: TimeGrid,
                  drive_norm: str = "hamiltonian") -> TimeTrace:
    """Linear closure <sigma_z> = -1: two coupled damped modes.

    ``d<a>/dt = -(kappa + i dc)<a> + g<s> - Omega``,
    ``d<s>/dt = -(gamma + gamma_d + i da)<s> - g<a>``.
    """
    scale = drive_factor(params, drive_norm)
    gen = np.array([
        [-(params.kappa + 1j * params.delta_c), params.g],
        [-params.g, -(params.gamma + params.gamma_d + 1j * params.delta_a)],
    ])
    force = np.array([-scale, 0.0])

    def rhs(t, y):
        return gen @ y + pulse.drive(t) * force

    y = _sample(rhs, np.zeros(2, dtype=complex), grid, pulse)
    a, s = y[:, 0], y[:, 1]
    return TimeTrace(
        times=grid.times,
        cavity_photon=np.abs(a) ** 2,
        qd_population=np.abs(s) ** 2,
        mean_a=a,
        mean_sigma=s,
        mean_sigma_z=np.full(a.shape, -1.0),
        cross_coherence=np.conj(a) * s,
        model="linear",
    )


def evolve_nonlinear(params: SystemParams, pulse: PulseSpec, grid: TimeGrid,
                     drive_norm: str = "hamiltonian",
                     initial: MeanFieldState = MeanFieldState()) -> TimeTrace:
    """Factorized closure <a s_z> = <a><s_z>, <a^dag s> = <a>*<s>.

    The dot population is reported as ``(1 + <s_z>)/2``.
    """
    scale = drive_factor(params, drive_norm)
    k = params.kappa + 1j * params.delta_c
    r = params.gamma + params.gamma_d + 1j * params.delta_a
    g, gamma = params.g, params.gamma

    def rhs(t, y):
        a, s, sz = y
        ascs = a.conjugate() * s
        return np.array([
            -k * a + g * s - scale * pulse.drive(t),
            -r * s + g * a * sz,
            -2 * gamma * (sz + 1) - 4 * g * ascs.real,
        ])

    y = _sample(rhs, initial.as_array(), grid, pulse)
    a, s, sz = y[:, 0], y[:, 1], y[:, 2].real
    return TimeTrace(
        times=grid.times,
        cavity_photon=np.abs(a) ** 2,
        qd_population=0.5 * (1 + sz),
        mean_a=a,
        mean_sigma=s,
        mean_sigma_z=sz,
        cross_coherence=np.conj(a) * s,
        model="nonlinear",
    )


@dataclass(frozen=True)
class ClassicalOscParams:
    """Two coupled classical oscillators sharing the carrier ``omega0``.

    ``coupling_G`` has units of frequency squared; the envelope equations
    only see ``coupling_G / (2 omega0)``.
    """

    gamma1: float
    gamma2: float
    coupling_G: float
    omega0: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "coupling_G"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.omega0 > 0:
            raise ValueError("omega0 must be > 0")

    @classmethod
    def from_system(cls, params: SystemParams, omega0: float) -> "ClassicalOscParams":
        """Mapping gamma1 = 2 kappa, gamma2 = 2 gamma, G = 2 omega0 g."""
        return cls(gamma1=2 * params.kappa, gamma2=2 * params.gamma,
                   coupling_G=2 * omega0 * params.g, omega0=omega0)


@dataclass(eq=False)
class ClassicalEnvelope:
    times: np.ndarray
    x1_env: np.ndarray
    x2_env: np.ndarray

    def as_trace(self) -> TimeTrace:
        """View X1 as the cavity field, so trace analysis applies unchanged."""
        return TimeTrace(
            times=self.times,
            cavity_photon=np.abs(self.x1_env) ** 2,
            qd_population=np.abs(self.x2_env) ** 2,
            mean_a=self.x1_env,
            mean_sigma=self.x2_env,
            mean_sigma_z=np.full(self.times.shape, np.nan),
            cross_coherence=np.conj(self.x1_env) * self.x2_env,
            model="classical",
        )


def evolve_classical(osc: ClassicalOscParams, pulse: PulseSpec, grid: TimeGrid,
                     initial=(0j, 0j)) -> ClassicalEnvelope:
    """Slowly varying envelopes X1 (driven) and X2 of the coupled oscillators.

    ``dX1/dt = -(G1/2 + c) X1 + c X2 + Omega(t)``,
    ``dX2/dt = -(G2/2 + c) X2 + c X1`` with ``c = G / (2 i omega0)``.
    """
    c = osc.coupling_G / (2j * osc.omega0)
    gen = np.array([
        [-(osc.gamma1 / 2 + c), c],
        [c, -(osc.gamma2 / 2 + c)],
    ])

    def rhs(t, y):
        out = gen @ y
        out[0] += pulse.drive(t)
        return out

    y = _sample(rhs, np.array(initial, dtype=complex), grid, pulse)
    return ClassicalEnvelope(times=grid.times, x1_env=y[:, 0], x2_env=y[:, 1])
