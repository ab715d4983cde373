import numpy as np
import pytest

from conftest import random_density_matrix
from qdcavity.analysis import bare_cavity_field, peak_separation, prominent_maxima
from qdcavity.experiments import auto_n_max, default_grid
from qdcavity.hilbert import build_operators
from qdcavity.params import PulseSpec, SystemParams, TimeGrid, ghz_to_angular
from qdcavity.quantum import (MasterEquation, check_truncation, evolve_master,
                              hamiltonian, lindblad_dissipator, master_rhs)

# frozen from the quadrature oracle in oracles.py (linear model, 5 ps pulse)
FROZEN_SEPARATION_5PS = 13.22852


def test_hamiltonian_vanishes_without_coupling_or_drive():
    ops = build_operators(4)
    H = hamiltonian(ops, SystemParams(g=0.0, kappa=0.1), 0.0)
    assert np.array_equal(H, np.zeros_like(H))


def test_single_excitation_block_eigenvalues():
    ops = build_operators(1)
    g = 0.37
    H = hamiltonian(ops, SystemParams(g=g, kappa=0.0), 0.0)
    block = [ops.basis_index(1, False), ops.basis_index(0, True)]
    sub = H[np.ix_(block, block)]
    assert np.allclose(np.linalg.eigvalsh(sub), [-g, g], atol=1e-14)


def test_hamiltonian_hermitian(rng):
    ops = build_operators(6)
    for _ in range(5):
        p = SystemParams(g=rng.uniform(0, 1), kappa=0.1, delta_c=rng.normal(),
                         delta_a=rng.normal())
        H = hamiltonian(ops, p, rng.normal())
        assert np.max(np.abs(H - H.conj().T)) < 1e-12


def test_dissipator_zero_collapse():
    ops = build_operators(2)
    rho = ops.ground_state()
    assert np.array_equal(lindblad_dissipator(np.zeros_like(rho), rho), np.zeros_like(rho))


def test_dissipator_photon_loss_hand_evaluation():
    ops = build_operators(2)
    one_g = np.zeros(ops.dim)
    one_g[ops.basis_index(1, False)] = 1
    zero_g = np.zeros(ops.dim)
    zero_g[ops.basis_index(0, False)] = 1
    rho = np.outer(one_g, one_g).astype(complex)
    expected = np.outer(zero_g, zero_g) - rho
    assert np.allclose(lindblad_dissipator(ops.a, rho), expected, atol=1e-15)


def test_dissipator_traceless(rng):
    dim = 6
    for _ in range(5):
        D = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = random_density_matrix(rng, dim)
        assert abs(np.trace(lindblad_dissipator(D, rho))) < 1e-12


def test_dissipator_shape_mismatch():
    with pytest.raises(ValueError, match="shape"):
        lindblad_dissipator(np.eye(2), np.eye(3))


def test_ground_state_stationary(ref):
    ops = build_operators(3)
    out = master_rhs(ops, ref.replace(gamma_d=0.2), 0.0, ops.ground_state())
    assert np.max(np.abs(out)) == 0.0


def test_master_rhs_traceless_and_matches_fast_form(rng, ref):
    ops = build_operators(4)
    params = ref.replace(gamma_d=0.05, delta_c=0.03, delta_a=-0.02)
    pulse = PulseSpec.from_ghz(omega0=3.0, fwhm=5.0)
    fast = MasterEquation(ops, params, pulse)
    for t in (-3.0, 0.0, 1.7):
        rho = random_density_matrix(rng, ops.dim)
        direct = master_rhs(ops, params, pulse.drive(t), rho)
        assert abs(np.trace(direct)) < 1e-12
        assert np.allclose(fast(t, rho), direct, atol=1e-13)


def test_pure_dephasing_closed_form():
    ops = build_operators(1)
    gd = ghz_to_angular(5.0)
    params = SystemParams(g=0.0, kappa=0.0, gamma=0.0, gamma_d=gd)
    psi = np.zeros(ops.dim, dtype=complex)
    psi[ops.basis_index(0, False)] = psi[ops.basis_index(0, True)] = 1 / np.sqrt(2)
    grid = TimeGrid(0.0, 50.0, 0.5)
    trace = evolve_master(ops, params, PulseSpec(0.0, 5.0), grid,
                          rho0=np.outer(psi, psi.conj()), check_grid=False)
    assert np.allclose(trace.mean_sigma, 0.5 * np.exp(-gd * grid.times), atol=1e-9)
    assert np.allclose(trace.qd_population, 0.5, atol=1e-12)


def test_no_drive_gives_zero_trace(ref, ops20):
    pulse = PulseSpec(0.0, 5.0)
    trace = evolve_master(ops20, ref, pulse, default_grid(ref, pulse))
    assert np.max(np.abs(trace.cavity_photon)) == 0.0
    assert np.max(np.abs(trace.qd_population)) == 0.0


def test_empty_cavity_matches_closed_form(ref, ops20, weak_pulse):
    params = ref.replace(g=0.0)
    grid = default_grid(params, weak_pulse)
    trace = evolve_master(ops20, params, weak_pulse, grid)
    exact = bare_cavity_field(params, weak_pulse, grid.times)
    assert np.max(np.abs(trace.mean_a - exact)) < 1e-8
    assert np.max(np.abs(trace.cavity_photon - np.abs(trace.mean_a) ** 2)) < 1e-8


def test_reference_trace_oscillates(ref_quantum):
    assert prominent_maxima(ref_quantum).size >= 2
    assert peak_separation(ref_quantum) == pytest.approx(FROZEN_SEPARATION_5PS, abs=0.05)


def test_invariants_recorded_at_every_sample(ref_quantum):
    tr = ref_quantum
    assert np.all(tr.trace_error < 1e-8)
    assert np.all(tr.hermiticity_error < 1e-10)
    assert np.all(tr.min_eigenvalue > -1e-7)
    assert np.all(tr.cavity_photon >= -1e-8)
    assert np.all((tr.qd_population >= -1e-8) & (tr.qd_population <= 1 + 1e-8))
    assert np.all(np.abs(tr.mean_sigma_z) <= 1 + 1e-8)


def test_detuning_mirror_symmetry(ref):
    ops = build_operators(6)
    pulse = PulseSpec.from_ghz(omega0=1.0, fwhm=5.0)
    d = ghz_to_angular(30.0)
    plus = ref.replace(delta_c=d / 2, delta_a=-d / 2)
    minus = ref.replace(delta_c=-d / 2, delta_a=d / 2)
    grid = default_grid(ref, pulse)
    a = evolve_master(ops, plus, pulse, grid)
    b = evolve_master(ops, minus, pulse, grid)
    assert np.max(np.abs(a.cavity_photon - b.cavity_photon)) < 1e-6


def test_strong_drive_saturates_dot(ref):
    # at 50 GHz the pulse-window average of <s_z> is about -0.79; 100 GHz clears -0.5
    pulse = PulseSpec.from_ghz(omega0=100.0, fwhm=5.0)
    grid = default_grid(ref, pulse)
    trace = evolve_master(build_operators(auto_n_max(ref, pulse)), ref, pulse, grid)
    window = np.abs(grid.times - pulse.t_center) <= pulse.fwhm
    assert np.max(trace.qd_population) <= 1.0 + 1e-8
    assert np.mean(trace.mean_sigma_z[window]) > -0.5


def test_truncation_zero_without_drive(ref):
    pulse = PulseSpec(0.0, 5.0)
    assert check_truncation(ref, pulse, default_grid(ref, pulse), n_max=5) == 0.0


def test_truncation_converged_at_low_drive(ref, weak_pulse, ref_grid):
    assert check_truncation(ref, weak_pulse, ref_grid, n_max=5) < 1e-6


def test_truncation_rejects_tiny_cutoff(ref, weak_pulse, ref_grid):
    with pytest.raises(ValueError):
        check_truncation(ref, weak_pulse, ref_grid, n_max=1)


def test_grid_must_cover_pulse_and_tail(ref, weak_pulse):
    ops = build_operators(2)
    with pytest.raises(ValueError, match="t_center - 4"):
        evolve_master(ops, ref, weak_pulse, TimeGrid(-5.0, 200.0, 0.1))
    with pytest.raises(ValueError, match="10/kappa"):
        evolve_master(ops, ref, weak_pulse, TimeGrid(-20.0, 30.0, 0.1))
