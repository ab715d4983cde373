"""Truncated Fock (x) two-level Hilbert space and its operators.

Ordering convention: photon index is the slow index, dot index the fast
one, so composite basis state ``|n, s>`` sits at position ``2*n + s`` with
``s = 0`` the ground state ``|g>`` and ``s = 1`` the excited state ``|e>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def kron(lhs, rhs) -> np.ndarray:
    """Kronecker product ``lhs (x) rhs``; ``rhs`` carries the fast index.

    ``out[i*m + k, j*m + l] = lhs[i, j] * rhs[k, l]`` with ``m = rhs.shape[0]``.
    """
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    for name, mat in (("lhs", lhs), ("rhs", rhs)):
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"{name} must be a square matrix, got shape {mat.shape}")
    return np.kron(lhs, rhs).astype(complex, copy=False)


def destroy(n_levels: int) -> np.ndarray:
    """Annihilation operator on ``n_levels`` Fock states, ``<n-1|a|n> = sqrt(n)``."""
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), k=1).astype(complex)


@dataclass(frozen=True, eq=False)
class OperatorSet:
    n_max: int
    a: np.ndarray
    a_dag: np.ndarray
    sigma: np.ndarray
    sigma_dag: np.ndarray
    sigma_z: np.ndarray
    identity: np.ndarray

    @property
    def dim(self) -> int:
        return self.identity.shape[0]

    @property
    def n_photon(self) -> np.ndarray:
        return self.a_dag @ self.a

    @property
    def n_dot(self) -> np.ndarray:
        return self.sigma_dag @ self.sigma

    def ground_state(self) -> np.ndarray:
        """Density matrix of ``|0, g>``."""
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        rho[0, 0] = 1.0
        return rho

    def basis_index(self, n: int, excited: bool) -> int:
        return 2 * n + int(excited)


def build_operators(n_max: int = 20) -> OperatorSet:
    """Operators on the space with photon numbers ``0..n_max`` and one two-level dot.

    The returned arrays are read-only so an ``OperatorSet`` can be shared
    between sweep workers.
    """
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max!r}")
    n_max = int(n_max)
    n_fock = n_max + 1
    eye_fock = np.eye(n_fock)
    eye_dot = np.eye(2)
    sigma_2 = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e|

    a = kron(destroy(n_fock), eye_dot)
    sigma = kron(eye_fock, sigma_2)
    sigma_dag = sigma.conj().T.copy()
    mats = dict(
        a=a,
        a_dag=a.conj().T.copy(),
        sigma=sigma,
        sigma_dag=sigma_dag,
        sigma_z=sigma_dag @ sigma - sigma @ sigma_dag,
        identity=kron(eye_fock, eye_dot),
    )
    for m in mats.values():
        m.flags.writeable = False
    return OperatorSet(n_max=n_max, **mats)
