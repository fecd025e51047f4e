"""Dense complex linear algebra for 2x2 and 4x4 Hermitian operators.

Everything here is a pure function of its inputs and never mutates them,
so concurrent use from multiple workers is safe.  The eigensolver is a
cyclic Jacobi iteration for complex Hermitian matrices; for the tiny
dimensions used in this package it is both simple and exact enough
(off-diagonal Frobenius norm driven below 1e-13).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
JACOBI_OFFDIAG_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
DEGENERACY_TOL = 1e-8


class NumericalError(RuntimeError):
    """An iterative kernel failed to converge."""


@dataclass(frozen=True)
class EigenSystem:
    """Full spectrum of a Hermitian matrix: ascending values, orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray


def _as_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    return m


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL, name: str = "matrix") -> np.ndarray:
    """Return the input as a complex array, raising if it is not Hermitian within tol."""
    m = _as_square(a, name)
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ValueError(f"{name} is not Hermitian: max |A - A^dag| = {dev:.3e} > {tol:.0e}")
    return m


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2x2 operators, first factor major."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"tensor_product expects 2x2 inputs, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def partial_trace(rho_ab: np.ndarray, trace_out: str) -> np.ndarray:
    """Trace a 4x4 two-qubit operator over the named subsystem ('A' or 'B').

    partial_trace(X, "A") is Tr_A(X), the marginal on B, and vice versa.
    """
    m = _as_square(rho_ab, "rho_ab")
    if m.shape != (4, 4):
        raise ValueError(f"partial_trace expects a 4x4 input, got {m.shape}")
    t = m.reshape(2, 2, 2, 2)
    if trace_out == "A":
        return np.einsum("abad->bd", t)
    if trace_out == "B":
        return np.einsum("abcb->ac", t)
    raise ValueError(f"trace_out must be 'A' or 'B', got {trace_out!r}")


def _offdiag_norm(a: np.ndarray) -> np.ndarray:
    off = a.copy()
    idx = np.arange(a.shape[-1])
    off[..., idx, idx] = 0.0
    return np.sqrt(np.sum(np.abs(off) ** 2, axis=(-2, -1)))


def _jacobi_diagonalize(h: np.ndarray, want_vectors: bool):
    """Cyclic complex Jacobi rotations on a stack (n, d, d) of Hermitian matrices.

    Returns (diagonal values (n, d) unsorted, accumulated rotations or None).
    """
    n, d, _ = h.shape
    a = h.astype(complex).copy()
    a = 0.5 * (a + a.conj().transpose(0, 2, 1))
    vecs = np.tile(np.eye(d, dtype=complex), (n, 1, 1)) if want_vectors else None
    pairs = [(p, q) for p in range(d - 1) for q in range(p + 1, d)]
    for _ in range(JACOBI_MAX_SWEEPS):
        if np.all(_offdiag_norm(a) <= JACOBI_OFFDIAG_TOL):
            break
        for p, q in pairs:
            apq = a[:, p, q]
            r = np.abs(apq)
            active = r > 1e-300
            if not np.any(active):
                continue
            safe_r = np.where(active, r, 1.0)
            phase = np.where(active, apq / safe_r, 1.0)
            tau = np.where(active, (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe_r), 0.0)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            c = np.where(active, c, 1.0)
            s = np.where(active, s, 0.0)
            rot = np.tile(np.eye(d, dtype=complex), (n, 1, 1))
            rot[:, p, p] = c
            rot[:, p, q] = s
            rot[:, q, p] = -s * np.conj(phase)
            rot[:, q, q] = c * np.conj(phase)
            a = rot.conj().transpose(0, 2, 1) @ a @ rot
            if want_vectors:
                vecs = vecs @ rot
        a = 0.5 * (a + a.conj().transpose(0, 2, 1))
    else:
        raise NumericalError(
            f"Jacobi diagonalization did not converge within {JACOBI_MAX_SWEEPS} sweeps"
        )
    values = np.einsum("nii->ni", a).real.copy()
    return values, vecs


def _gram_schmidt_clusters(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Re-orthonormalize eigenvector columns within degenerate clusters, in index order."""
    v = vectors.copy()
    d = len(values)
    start = 0
    for k in range(1, d + 1):
        if k == d or values[k] - values[k - 1] > DEGENERACY_TOL:
            for j in range(start, k):
                col = v[:, j]
                for i in range(start, j):
                    col = col - v[:, i] * np.vdot(v[:, i], col)
                nrm = np.linalg.norm(col)
                if nrm < 1e-14:
                    raise NumericalError("degenerate eigenvector cluster collapsed")
                v[:, j] = col / nrm
            start = k
    return v


def hermitian_eigensystem(h: np.ndarray) -> EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    m = require_hermitian(h)
    values, vectors = _jacobi_diagonalize(m[np.newaxis], want_vectors=True)
    w = values[0]
    v = vectors[0]
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    v = _gram_schmidt_clusters(w, v)
    return EigenSystem(values=w, vectors=v)


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    m = require_hermitian(h)
    values, _ = _jacobi_diagonalize(m[np.newaxis], want_vectors=False)
    return np.sort(values[0])


def hermitian_eigenvalues_batch(h: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues for a stack (n, d, d) of Hermitian matrices.

    Inputs are symmetrized defensively; per-matrix Hermiticity is the
    caller's responsibility on this hot path.
    """
    stack = np.asarray(h, dtype=complex)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError(f"expected a stack (n, d, d), got shape {stack.shape}")
    values, _ = _jacobi_diagonalize(stack, want_vectors=False)
    return np.sort(values, axis=1)


def trace_norm(a: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    return float(np.sum(np.abs(hermitian_eigenvalues(a))))


def trace_norm_batch(stack: np.ndarray) -> np.ndarray:
    """Trace norms of a stack (n, d, d) of Hermitian operators."""
    return np.sum(np.abs(hermitian_eigenvalues_batch(stack)), axis=1)


def trace_norm_2x2_batch(stack: np.ndarray) -> np.ndarray:
    """Closed-form trace norms of a stack (n, 2, 2) of Hermitian operators.

    Exact two-dimensional eigenvalues, kept as a fast path for feasibility
    scans; agrees with the Jacobi route to machine precision.
    """
    m = np.asarray(stack, dtype=complex)
    if m.ndim != 3 or m.shape[1:] != (2, 2):
        raise ValueError(f"expected a stack (n, 2, 2), got shape {m.shape}")
    tr = (m[:, 0, 0] + m[:, 1, 1]).real
    disc = np.sqrt((m[:, 0, 0] - m[:, 1, 1]).real ** 2 + 4.0 * np.abs(m[:, 0, 1]) ** 2)
    lo = 0.5 * (tr - disc)
    hi = 0.5 * (tr + disc)
    return np.abs(lo) + np.abs(hi)
