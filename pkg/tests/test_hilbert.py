import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qdcavity.hilbert import build_operators, kron


def kron_by_definition(x, y):
    n, m = x.shape[0], y.shape[0]
    out = np.zeros((n * m, n * m), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    out[i * m + k, j * m + l] = x[i, j] * y[k, l]
    return out


def test_kron_identities():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    assert np.array_equal(kron(np.diag([1, 2]), np.eye(2)), np.diag([1, 1, 2, 2]))


def test_kron_matches_index_definition(rng):
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    y = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.allclose(kron(x, y), kron_by_definition(x, y), rtol=1e-15, atol=1e-15)


def test_kron_rejects_non_square():
    with pytest.raises(ValueError):
        kron(np.ones((2, 3)), np.eye(2))


small_ints = arrays(np.int64, (2, 2), elements=st.integers(-5, 5))


@settings(max_examples=30, deadline=None)
@given(small_ints, small_ints, small_ints)
def test_kron_associative_exactly(x, y, z):
    assert np.array_equal(kron(kron(x, y), z), kron(x, kron(y, z)))


def test_n_max_one_has_two_unit_entries():
    ops = build_operators(1)
    assert ops.dim == 4
    nz = ops.a[ops.a != 0]
    assert nz.size == 2 and np.all(nz == 1)
    # <0,s| a |1,s> for both dot states
    assert ops.a[ops.basis_index(0, False), ops.basis_index(1, False)] == 1
    assert ops.a[ops.basis_index(0, True), ops.basis_index(1, True)] == 1


def test_n_max_twenty_photon_number_spectrum():
    ops = build_operators(20)
    assert ops.dim == 42
    evals = np.linalg.eigvalsh(ops.n_photon)
    assert np.allclose(evals, np.repeat(np.arange(21), 2), atol=1e-12)


@pytest.mark.parametrize("n_max", [1, 3, 7])
def test_truncated_commutator(n_max):
    ops = build_operators(n_max)
    comm = ops.a @ ops.a_dag - ops.a_dag @ ops.a
    expected = np.eye(n_max + 1)
    expected[-1, -1] = -n_max
    # sqrt(n)*sqrt(n) may be off by one ulp
    assert np.max(np.abs(comm - np.kron(expected, np.eye(2)))) <= 4 * np.finfo(float).eps * n_max


def test_dot_operator_identities():
    ops = build_operators(4)
    s, sd = ops.sigma, ops.sigma_dag
    assert np.array_equal(sd, s.conj().T)
    assert np.array_equal(ops.a_dag, ops.a.conj().T)
    assert np.array_equal(sd @ s + s @ sd, ops.identity)
    assert np.array_equal(ops.sigma_z, sd @ s - s @ sd)
    assert np.array_equal(s @ s, np.zeros_like(s))
    # sigma_z = |e><e| - |g><g| on every photon block
    assert np.array_equal(np.diag(ops.sigma_z).real, np.tile([-1.0, 1.0], 5))


def test_hermitian_observables():
    ops = build_operators(6)
    for op in (ops.sigma_z, ops.n_photon, ops.n_dot):
        assert np.max(np.abs(op - op.conj().T)) == 0


def test_operators_are_read_only():
    ops = build_operators(2)
    with pytest.raises(ValueError):
        ops.a[0, 0] = 1.0


@pytest.mark.parametrize("bad", [0, -1, 2.5, True])
def test_rejects_bad_truncation(bad):
    with pytest.raises(ValueError):
        build_operators(bad)
