"""Lindblad master-equation engine for the pulse-driven dot-cavity system."""
from __future__ import annotations

import logging

import numpy as np

from .hilbert import OperatorSet, build_operators
from .integrate import dopri5
from .params import PulseSpec, SystemParams, TimeGrid
from .trace import TimeTrace

log = logging.getLogger(__name__)

RTOL = 1e-8
ATOL = 1e-10

TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = 1e-7


class InvariantViolation(RuntimeError):
    """The density matrix left the physical set beyond tolerance."""


def hamiltonian(ops: OperatorSet, params: SystemParams, drive: float) -> np.ndarray:
    """Rotating-frame Hamiltonian at drive strength ``drive = Omega(t)``.

    ``H = dc a^dag a + da s^dag s + i g (a^dag s - a s^dag) + i drive (a - a^dag)``
    """
    coupling = ops.a_dag @ ops.sigma - ops.a @ ops.sigma_dag
    return (params.delta_c * ops.n_photon
            + params.delta_a * ops.n_dot
            + 1j * params.g * coupling
            + 1j * drive * (ops.a - ops.a_dag))


def lindblad_dissipator(collapse: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``D rho D^dag - (D^dag D rho + rho D^dag D) / 2``."""
    collapse = np.asarray(collapse)
    rho = np.asarray(rho)
    if collapse.shape != rho.shape:
        raise ValueError(f"shape mismatch: {collapse.shape} vs {rho.shape}")
    d_dag = collapse.conj().T
    dd = d_dag @ collapse
    return collapse @ rho @ d_dag - 0.5 * (dd @ rho + rho @ dd)


def _channels(ops: OperatorSet, params: SystemParams):
    return [(2 * params.kappa, ops.a),
            (2 * params.gamma, ops.sigma),
            (2 * params.gamma_d, ops.n_dot)]


def master_rhs(ops: OperatorSet, params: SystemParams, drive: float,
               rho: np.ndarray) -> np.ndarray:
    """``-i[H, rho] + 2k L[a] + 2g L[s] + 2gd L[s^dag s]`` evaluated directly."""
    H = hamiltonian(ops, params, drive)
    out = -1j * (H @ rho - rho @ H)
    for rate, collapse in _channels(ops, params):
        if rate:
            out = out + rate * lindblad_dissipator(collapse, rho)
    return out


class MasterEquation:
    """Precomputed right-hand side for repeated evaluation during integration.

    Uses the non-Hermitian effective Hamiltonian form ``M + M^dag`` with
    ``M = -i H_eff rho + (1/2) sum_k r_k D_k rho D_k^dag`` and
    ``H_eff = H - (i/2) sum_k r_k D_k^dag D_k``.  This equals
    :func:`master_rhs` for Hermitian rho only, so rho is projected onto its
    Hermitian part first; otherwise rounding noise in the anti-Hermitian
    part would be amplified instead of conserved.
    """

    def __init__(self, ops: OperatorSet, params: SystemParams, pulse: PulseSpec):
        self.ops = ops
        self.params = params
        self.pulse = pulse
        h0 = hamiltonian(ops, params, 0.0)
        self.h_drive = 1j * (ops.a - ops.a_dag)
        self.jumps = []
        decay = np.zeros_like(h0)
        for rate, collapse in _channels(ops, params):
            if rate:
                self.jumps.append((rate, collapse, collapse.conj().T.copy()))
                decay += rate * collapse.conj().T @ collapse
        self.h_eff0 = h0 - 0.5j * decay

    def __call__(self, t: float, rho: np.ndarray) -> np.ndarray:
        rho = 0.5 * (rho + rho.conj().T)
        h_eff = self.h_eff0 + self.pulse.drive(t) * self.h_drive
        half = -1j * (h_eff @ rho)
        for rate, d, d_dag in self.jumps:
            half += (0.5 * rate) * (d @ rho @ d_dag)
        return half + half.conj().T


def _check_grid(params: SystemParams, pulse: PulseSpec, grid: TimeGrid):
    if grid.t_start > pulse.t_center - 4 * pulse.fwhm + 1e-9:
        raise ValueError(
            f"grid starts at {grid.t_start} ps, after t_center - 4*fwhm = "
            f"{pulse.t_center - 4 * pulse.fwhm} ps; the pulse would be truncated")
    if params.kappa > 0 and grid.t_end < pulse.t_center + 10 / params.kappa - 1e-9:
        raise ValueError(
            f"grid ends at {grid.t_end} ps, before t_center + 10/kappa = "
            f"{pulse.t_center + 10 / params.kappa:.4g} ps")


def evolve_master(ops: OperatorSet, params: SystemParams, pulse: PulseSpec,
                  grid: TimeGrid, *, rtol=RTOL, atol=ATOL, rho0=None,
                  check_grid=True) -> TimeTrace:
    """Integrate the master equation from ``|0, g>`` and sample observables.

    Trace, Hermiticity and positivity of rho are checked at every output
    sample; a violation raises :class:`InvariantViolation`.
    """
    if check_grid:
        _check_grid(params, pulse, grid)
    times = grid.times
    rhs = MasterEquation(ops, params, pulse)
    rho0 = ops.ground_state() if rho0 is None else np.asarray(rho0, dtype=complex)

    # transposed operators so that <O> = sum(rho * O^T)
    observables = {
        "cavity_photon": ops.n_photon.T,
        "qd_population": ops.n_dot.T,
        "mean_a": ops.a.T,
        "mean_sigma": ops.sigma.T,
        "mean_sigma_z": ops.sigma_z.T,
        "cross_coherence": (ops.a_dag @ ops.sigma).T,
    }
    values = {name: np.empty(times.size, dtype=complex) for name in observables}
    trace_err = np.empty(times.size)
    herm_err = np.empty(times.size)
    min_eig = np.empty(times.size)
    max_step = 0.5 * pulse.sigma
    for i, (t, rho) in enumerate(dopri5(rhs, rho0, times, rtol=rtol, atol=atol,
                                        max_step=max_step)):
        for name, op_t in observables.items():
            values[name][i] = np.sum(rho * op_t)
        trace_err[i] = abs(np.trace(rho) - 1.0)
        herm_err[i] = np.max(np.abs(rho - rho.conj().T))
        min_eig[i] = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if trace_err[i] > TRACE_TOL or herm_err[i] > HERMITICITY_TOL or min_eig[i] < -POSITIVITY_TOL:
            raise InvariantViolation(
                f"density matrix invariant violated at t={t:.4f} ps: "
                f"|Tr rho - 1|={trace_err[i]:.2e}, |rho - rho^dag|={herm_err[i]:.2e}, "
                f"min eig={min_eig[i]:.2e}")

    return TimeTrace(
        times=times,
        cavity_photon=values["cavity_photon"].real,
        qd_population=values["qd_population"].real,
        mean_a=values["mean_a"],
        mean_sigma=values["mean_sigma"],
        mean_sigma_z=values["mean_sigma_z"].real,
        cross_coherence=values["cross_coherence"],
        model="quantum",
        trace_error=trace_err,
        hermiticity_error=herm_err,
        min_eigenvalue=min_eig,
    )


def check_truncation(params: SystemParams, pulse: PulseSpec, grid: TimeGrid,
                     n_max: int = 20, extra: int = 4) -> float:
    """Max over the grid of |<a^dag a>| change when the Fock cutoff grows by ``extra``."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if pulse.omega0 == 0:
        return 0.0
    small = evolve_master(build_operators(n_max), params, pulse, grid)
    large = evolve_master(build_operators(n_max + extra), params, pulse, grid)
    diff = float(np.max(np.abs(small.cavity_photon - large.cavity_photon)))
    log.debug("truncation n_max=%d vs %d: %.3e", n_max, n_max + extra, diff)
    return diff
