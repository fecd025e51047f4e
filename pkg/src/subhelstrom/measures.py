"""Distinguishability and entanglement functionals.

Trace distance, the optimal-measurement error/success probabilities for
equiprobable binary discrimination, the success probability of an explicit
(not necessarily positive) measurement pair, and two-qubit pure-state
concurrence.
"""

from __future__ import annotations

import numpy as np

from . import linalg, qstate

COMPLETENESS_TOL = 1e-10
PROBABILITY_TOL = 1e-9


def _check_same_shape(rho: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r = np.asarray(rho, dtype=complex)
    s = np.asarray(sigma, dtype=complex)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    return r, s


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of rho - sigma."""
    r, s = _check_same_shape(rho, sigma)
    return 0.5 * linalg.trace_norm(r - s)


def helstrom_error(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Minimum error probability 1/2 - ||rho - sigma||_1 / 4 at equal priors."""
    r, s = _check_same_shape(rho, sigma)
    return 0.5 - 0.25 * linalg.trace_norm(r - s)


def helstrom_success(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Optimal guessing probability; equals 1 - helstrom_error exactly."""
    return 1.0 - helstrom_error(rho, sigma)


def success_probability(
    rho: np.ndarray,
    sigma: np.ndarray,
    m0: np.ndarray,
    m1: np.ndarray,
    p0: float = 0.5,
    p1: float = 0.5,
) -> float:
    """p0 Tr(rho m0) + p1 Tr(sigma m1) for a complete measurement pair.

    Positivity of m0/m1 is not required (use is_povm_pair to test it), but
    m0 + m1 must resolve the identity and the resulting value must be a
    probability; violations beyond tolerance raise instead of clamping.
    """
    r, s = _check_same_shape(rho, sigma)
    a, b = _check_same_shape(m0, m1)
    if a.shape != r.shape:
        raise ValueError(f"dimension mismatch: states {r.shape} vs measurement {a.shape}")
    eye = np.eye(a.shape[0], dtype=complex)
    dev = float(np.max(np.abs(a + b - eye)))
    if dev > COMPLETENESS_TOL:
        raise ValueError(f"measurement pair is not complete: max |m0 + m1 - I| = {dev:.3e}")
    if abs(p0 + p1 - 1.0) > PROBABILITY_TOL:
        raise ValueError(f"priors must sum to 1, got {p0} + {p1}")
    p = p0 * float(np.trace(r @ a).real) + p1 * float(np.trace(s @ b).real)
    if p < -PROBABILITY_TOL or p > 1.0 + PROBABILITY_TOL:
        raise ValueError(f"success probability {p:.12e} outside [0, 1] beyond tolerance")
    return float(min(max(p, 0.0), 1.0))


def is_povm_pair(m0: np.ndarray, m1: np.ndarray) -> bool:
    """True iff m0, m1 are PSD and resolve the identity (a genuine two-outcome POVM)."""
    a, b = _check_same_shape(m0, m1)
    eye = np.eye(a.shape[0], dtype=complex)
    if float(np.max(np.abs(a + b - eye))) > COMPLETENESS_TOL:
        return False
    for m in (a, b):
        w = linalg.hermitian_eigenvalues(linalg.require_hermitian(m))
        if w[0] < -qstate.STATE_PSD_TOL:
            return False
    return True


def concurrence_pure(psi: np.ndarray) -> float:
    """|<psi|psi~>| with |psi~> = (sigma_y x sigma_y) |psi*| for a two-qubit pure state."""
    v = np.asarray(psi, dtype=complex)
    if v.shape != (4,):
        raise ValueError(f"expected a 4-amplitude state vector, got shape {v.shape}")
    qstate.assert_normalized(v)
    flip = linalg.tensor_product(qstate.PAULI_Y, qstate.PAULI_Y)
    psi_tilde = flip @ v.conj()
    return float(abs(np.vdot(v, psi_tilde)))


def schmidt_concurrence(lam: float) -> float:
    """2 sqrt(lam (1 - lam)) for a Schmidt coefficient in [0, 1]."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"Schmidt coefficient must lie in [0, 1], got {lam}")
    return 2.0 * float(np.sqrt(lam * (1.0 - lam)))
