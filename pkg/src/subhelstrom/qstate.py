"""Qubit state constructors: angle-parametrized pure states and Bloch-vector states."""

from __future__ import annotations

import numpy as np

from . import linalg

BLOCH_NORM_TOL = 1e-12
STATE_TRACE_TOL = 1e-12
STATE_PSD_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def pure_from_angle(theta: float) -> np.ndarray:
    """(cos theta, sin theta) in the computational basis."""
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


def orthogonal_complement(theta: float) -> np.ndarray:
    """(sin theta, -cos theta); exactly orthogonal to pure_from_angle(theta)."""
    return np.array([np.sin(theta), -np.cos(theta)], dtype=complex)


def primed_basis(x: float, y: float) -> tuple[np.ndarray, np.ndarray]:
    """Rotated orthonormal basis (cos x |0> + e^{iy} sin x |1>, sin x |0> - e^{iy} cos x |1>)."""
    phase = np.exp(1j * y)
    zero_p = np.array([np.cos(x), phase * np.sin(x)])
    one_p = np.array([np.sin(x), -phase * np.cos(x)])
    return zero_p, one_p


def projector(psi: np.ndarray) -> np.ndarray:
    """Rank-1 projector |psi><psi|."""
    v = np.asarray(psi, dtype=complex)
    return np.outer(v, v.conj())


def canonical_phase(psi: np.ndarray) -> np.ndarray:
    """Rescale a state vector so its first nonzero amplitude is real nonnegative.

    Only for comparisons; constructors keep their literal signs.
    """
    v = np.asarray(psi, dtype=complex)
    for amp in v:
        if abs(amp) > 1e-14:
            return v * (np.conj(amp) / abs(amp))
    return v


def assert_normalized(psi: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"state vector is not normalized: |psi| = {nrm:.12f}")
    return v


def assert_density_matrix(rho: np.ndarray, name: str = "state") -> np.ndarray:
    """Validate Hermiticity, unit trace and positive semidefiniteness."""
    m = linalg.require_hermitian(rho, name=name)
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > STATE_TRACE_TOL:
        raise ValueError(f"{name} has trace {tr:.12f}, expected 1")
    w = linalg.hermitian_eigenvalues(m)
    if w[0] < -STATE_PSD_TOL:
        raise ValueError(f"{name} has negative eigenvalue {w[0]:.3e}")
    return m


def bloch_to_density(r) -> np.ndarray:
    """(I + r . sigma) / 2 for a Bloch vector of norm <= 1."""
    vec = np.asarray(r, dtype=float)
    if vec.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {vec.shape}")
    nrm = float(np.linalg.norm(vec))
    if nrm > 1.0 + BLOCH_NORM_TOL:
        raise ValueError(f"Bloch vector norm {nrm:.12f} exceeds 1")
    rho = 0.5 * (I2 + vec[0] * PAULI_X + vec[1] * PAULI_Y + vec[2] * PAULI_Z)
    return rho


def density_to_bloch(rho: np.ndarray) -> np.ndarray:
    """Bloch components Tr(rho sigma_i); inverse of bloch_to_density."""
    m = assert_density_matrix(rho)
    return np.array([float(np.trace(m @ p).real) for p in PAULIS])
