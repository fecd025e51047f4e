"""Monte Carlo check of the joint discrimination protocol.

Builds the optimal projective measurement on the extended states (projectors
onto the positive and negative eigenspaces of rho_AB - sigma_AB) and
estimates the empirical error rate by sampling outcomes with Born
probabilities.  Randomness comes from a counter-based generator (Philox)
keyed by the seed: the trial stream is a pure function of (seed, trial
index), so any parallel partition of trials can reproduce the serial
stream exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, measures
from .scenarios import JointStatePair

TIE_EPSILON = 1e-10
BORN_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementPair:
    """Complementary projectors: m0 guesses the first state, m1 the second."""

    m0: np.ndarray
    m1: np.ndarray


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    errors: int
    empirical_error: float
    standard_error: float
    analytic_error: float
    z_score: float
    seed: int


def projectors_for(rho: np.ndarray, sigma: np.ndarray) -> MeasurementPair:
    """Projectors onto the positive and non-positive eigenspaces of rho - sigma.

    Eigenvalues within TIE_EPSILON of zero count as non-positive; they
    contribute nothing to the success probability, but a fixed convention
    keeps the construction deterministic.
    """
    es = linalg.hermitian_eigensystem(np.asarray(rho) - np.asarray(sigma))
    dim = len(es.values)
    m0 = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        if es.values[k] > TIE_EPSILON:
            v = es.vectors[:, k]
            m0 += np.outer(v, v.conj())
    m1 = np.eye(dim, dtype=complex) - m0
    return MeasurementPair(m0=m0, m1=m1)


def helstrom_projectors(pair: JointStatePair) -> MeasurementPair:
    """Optimal projective measurement for a joint-state pair."""
    return projectors_for(pair.rho_ab, pair.sigma_ab)


def _born_pair(state: np.ndarray, mp: MeasurementPair) -> tuple[float, float]:
    """Outcome probabilities (p_m0, p_m1), clamped and renormalized within tolerance."""
    probs = [float(np.trace(state @ m).real) for m in (mp.m0, mp.m1)]
    for p in probs:
        if p < -BORN_TOL or p > 1.0 + BORN_TOL:
            raise linalg.NumericalError(f"Born probability {p:.12e} outside [0, 1]")
    probs = [max(p, 0.0) for p in probs]
    total = probs[0] + probs[1]
    if abs(total - 1.0) > BORN_TOL:
        raise linalg.NumericalError(f"Born probabilities sum to {total:.12e}")
    return probs[0] / total, probs[1] / total


def simulate(pair: JointStatePair, trials: int, seed: int) -> SimulationReport:
    """Estimate the discrimination error rate empirically.

    Each trial prepares one of the two joint states with probability 1/2,
    samples the projective outcome by inverse CDF over the two Born
    probabilities, and counts misidentifications.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    mp = helstrom_projectors(pair)
    q_rho, _ = _born_pair(pair.rho_ab, mp)
    q_sigma, _ = _born_pair(pair.sigma_ab, mp)

    gen = np.random.Generator(np.random.Philox(key=seed))
    u = gen.random((trials, 2))
    prepared_sigma = u[:, 0] >= 0.5
    # guessing "sigma" (outcome m1) on a rho trial or "rho" (outcome m0) on a
    # sigma trial is an error
    wrong = np.where(prepared_sigma, u[:, 1] < q_sigma, u[:, 1] >= q_rho)
    errors = int(np.count_nonzero(wrong))

    empirical = errors / trials
    std_err = float(np.sqrt(empirical * (1.0 - empirical) / trials))
    analytic = measures.helstrom_error(pair.rho_ab, pair.sigma_ab)
    if std_err > 0.0:
        z = (empirical - analytic) / std_err
    else:
        z = 0.0 if abs(empirical - analytic) < 1e-12 else float("inf")
    return SimulationReport(
        trials=trials,
        errors=errors,
        empirical_error=empirical,
        standard_error=std_err,
        analytic_error=analytic,
        z_score=float(z),
        seed=seed,
    )
