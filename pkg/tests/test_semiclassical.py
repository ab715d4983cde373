import math

import numpy as np
import pytest

from qdcavity.analysis import bare_cavity_field, peak_separation
from qdcavity.experiments import CLASSICAL_CARRIER, default_grid
from qdcavity.params import PulseSpec, SystemParams, TimeGrid, ghz_to_angular
from qdcavity.semiclassical import (ClassicalOscParams, MeanFieldState, drive_factor,
                                    evolve_classical, evolve_linear, evolve_nonlinear)
from qdcavity.trace import max_normalized_deviation


def test_linear_without_drive_is_zero(ref, ref_grid):
    trace = evolve_linear(ref, PulseSpec(0.0, 5.0), ref_grid)
    assert np.max(np.abs(trace.mean_a)) == 0.0
    assert np.max(np.abs(trace.mean_sigma)) == 0.0


def test_linear_superposition(ref, weak_pulse, ref_grid):
    one = evolve_linear(ref, weak_pulse, ref_grid)
    three = evolve_linear(ref, weak_pulse.replace(omega0=3 * weak_pulse.omega0), ref_grid)
    scale = np.max(np.abs(three.mean_a))
    assert np.max(np.abs(three.mean_a - 3 * one.mean_a)) < 1e-7 * scale
    assert np.max(np.abs(three.mean_sigma - 3 * one.mean_sigma)) < 1e-7 * scale
    assert np.allclose(three.normalized_output(), one.normalized_output(), atol=1e-7)


def test_linear_empty_cavity_closed_form(ref, weak_pulse, ref_grid):
    params = ref.replace(g=0.0)
    trace = evolve_linear(params, weak_pulse, ref_grid)
    exact = bare_cavity_field(params, weak_pulse, ref_grid.times)
    assert np.max(np.abs(trace.mean_a - exact)) < 1e-8


def test_linear_trace_fields(ref, weak_pulse, ref_grid):
    tr = evolve_linear(ref, weak_pulse, ref_grid)
    assert np.all(tr.mean_sigma_z == -1.0)
    assert np.array_equal(tr.cavity_photon, np.abs(tr.mean_a) ** 2)
    assert np.array_equal(tr.cross_coherence, np.conj(tr.mean_a) * tr.mean_sigma)


def test_linear_matches_quantum_at_low_drive(ref, weak_pulse, ref_grid, ref_quantum):
    linear = evolve_linear(ref, weak_pulse, ref_grid)
    assert max_normalized_deviation(linear, ref_quantum) < 0.05


def test_nonlinear_matches_quantum_at_low_drive(ref, weak_pulse, ref_grid, ref_quantum):
    nonlinear = evolve_nonlinear(ref, weak_pulse, ref_grid)
    assert max_normalized_deviation(nonlinear, ref_quantum) < 0.05


def test_nonlinear_reduces_to_linear(ref):
    pulse = PulseSpec.from_ghz(omega0=0.01, fwhm=5.0)
    grid = default_grid(ref, pulse)
    lin = evolve_linear(ref, pulse, grid)
    non = evolve_nonlinear(ref, pulse, grid)
    assert max_normalized_deviation(lin, non) < 1e-4


def test_nonlinear_bounds_and_saturation(ref):
    pulse = PulseSpec.from_ghz(omega0=60.0, fwhm=5.0)
    grid = default_grid(ref, pulse)
    tr = evolve_nonlinear(ref, pulse, grid)
    assert np.all(tr.mean_sigma_z >= -1 - 1e-6) and np.all(tr.mean_sigma_z <= 1 + 1e-6)
    assert np.all(np.abs(tr.mean_sigma) <= 1 + 1e-6)
    # driven up from -1 during the pulse, back toward -1 once it is over
    peak = int(np.argmax(tr.mean_sigma_z))
    assert tr.mean_sigma_z[peak] > -0.5
    assert abs(grid.times[peak] - pulse.t_center) < 2 * pulse.fwhm
    tail = tr.mean_sigma_z[grid.times > pulse.t_center + 3 * pulse.fwhm]
    assert np.all(np.diff(tail) <= 1e-10)
    assert tail[-1] + 1 < 0.1 * (tail[0] + 1)


def test_nonlinear_free_relaxation_rate():
    gamma = ghz_to_angular(2.0)
    params = SystemParams(g=0.0, kappa=ghz_to_angular(29.0), gamma=gamma)
    grid = TimeGrid(0.0, 100.0, 0.5)
    tr = evolve_nonlinear(params, PulseSpec(0.0, 5.0, t_center=50.0), grid,
                          initial=MeanFieldState(mean_sigma_z=0.0))
    assert np.allclose(tr.mean_sigma_z + 1, np.exp(-2 * gamma * grid.times), atol=1e-9)


def test_drive_norm(ref, weak_pulse, ref_grid):
    assert drive_factor(ref) == 1.0
    assert drive_factor(ref, "paper_meanfield") == pytest.approx(math.sqrt(ref.kappa))
    with pytest.raises(ValueError, match="drive_norm"):
        drive_factor(ref, "other")
    a = evolve_linear(ref, weak_pulse, ref_grid)
    b = evolve_linear(ref, weak_pulse, ref_grid, drive_norm="paper_meanfield")
    assert np.max(np.abs(b.mean_a - math.sqrt(ref.kappa) * a.mean_a)) < 1e-8


def test_classical_params_validation():
    with pytest.raises(ValueError):
        ClassicalOscParams(-1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        ClassicalOscParams(1.0, 0.0, 0.0, 0.0)
    osc = ClassicalOscParams.from_system(SystemParams(g=0.2, kappa=0.1, gamma=0.01), 100.0)
    assert osc.coupling_G / (2 * osc.omega0) == pytest.approx(0.2)
    assert (osc.gamma1, osc.gamma2) == (0.2, 0.02)


def test_classical_decoupled(weak_pulse, ref_grid):
    osc = ClassicalOscParams(gamma1=0.3, gamma2=0.05, coupling_G=0.0, omega0=10.0)
    env = evolve_classical(osc, weak_pulse, ref_grid)
    assert np.max(np.abs(env.x2_env)) == 0.0
    # dX1/dt = -(G1/2) X1 + Omega is the bare cavity with the drive sign flipped
    exact = -bare_cavity_field(SystemParams(g=0.0, kappa=0.15), weak_pulse, ref_grid.times)
    assert np.max(np.abs(env.x1_env - exact)) < 1e-8


def test_classical_impulsive_beat():
    g = 0.2
    osc = ClassicalOscParams(0.0, 0.0, coupling_G=2 * 50.0 * g, omega0=50.0)
    grid = TimeGrid(0.0, 60.0, 0.1)
    env = evolve_classical(osc, PulseSpec(0.0, 5.0, t_center=30.0), grid, initial=(1.0, 0.0))
    assert np.allclose(np.abs(env.x1_env) ** 2, np.cos(g * grid.times) ** 2, atol=1e-8)


def test_classical_mapping_reproduces_linear_peak_spacing(ref, weak_pulse, ref_grid):
    osc = ClassicalOscParams.from_system(ref, CLASSICAL_CARRIER)
    env = evolve_classical(osc, weak_pulse, ref_grid).as_trace()
    lin = evolve_linear(ref, weak_pulse, ref_grid)
    ref = peak_separation(lin)
    assert peak_separation(env) == pytest.approx(ref, rel=0.05)


def test_classical_energy_decays_after_pulse(ref, weak_pulse, ref_grid):
    osc = ClassicalOscParams.from_system(ref, CLASSICAL_CARRIER)
    env = evolve_classical(osc, weak_pulse, ref_grid)
    energy = np.abs(env.x1_env) ** 2 + np.abs(env.x2_env) ** 2
    after = ref_grid.times > weak_pulse.t_center + 3 * weak_pulse.fwhm
    rate = np.gradient(energy, ref_grid.times)[after]
    assert np.all(rate <= 1e-8)
    assert np.all(np.isfinite(env.x1_env))
    assert np.abs(env.x1_env[-1]) < 1e-6 * np.max(np.abs(env.x1_env))
