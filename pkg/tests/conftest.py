"""Shared random-object helpers for the test suite."""

import numpy as np


def rand_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def rand_pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def rand_state(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def rand_bloch(rng):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v * rng.random() ** (1.0 / 3.0)


def ptrace_oracle(m, trace_out):
    """Index-arithmetic partial trace, independent of the library implementation."""
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                if trace_out == "A":
                    out[i, j] += m[2 * k + i, 2 * k + j]
                else:
                    out[i, j] += m[2 * i + k, 2 * j + k]
    return out
