"""Closed-form privacy parameters and amplification rules.

Everything here is stateless arithmetic on (epsilon, delta) records:

* guarantees inherited from encoding a dataset into a quantum state,
* noise calibration for the measure-then-perturb pipeline,
* amplification by l2-norm (Born-rule) subsampling,
* per-channel epsilon curves and amplification through contractive
  post-processing.

Infinite epsilon is represented by ``math.inf``; every formula degrades to
the sentinel instead of overflowing, and it serializes as the string "inf".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import InsufficientNeighborhoodError, ValidationError

INF = math.inf


@dataclass(frozen=True)
class DpParams:
    """Classical privacy record (epsilon, delta)."""

    epsilon: float
    delta: float = 0.0

    def __post_init__(self):
        if not (self.epsilon >= 0):
            raise ValidationError("epsilon must be >= 0")
        if not 0.0 <= self.delta <= 1.0:
            raise ValidationError("delta must lie in [0, 1]")


@dataclass(frozen=True)
class QdpParams:
    """Quantum privacy record (tau, epsilon, delta); tau is the trace-distance
    neighborhood radius."""

    tau: float
    epsilon: float
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValidationError("tau must lie in [0, 1]")
        if not (self.epsilon >= 0):
            raise ValidationError("epsilon must be >= 0")
        if not 0.0 <= self.delta <= 1.0:
            raise ValidationError("delta must lie in [0, 1]")


EpsilonCurve = Callable[[float], float]


def validate_curve(curve: EpsilonCurve, grid_points: int = 33, tol: float = 1e-12) -> None:
    """Spot-check that an epsilon curve is monotone nondecreasing on [0, 1]."""
    previous = None
    for k in range(grid_points):
        tau = k / (grid_points - 1)
        value = curve(tau)
        if previous is not None and value < previous - tol:
            raise ValidationError("epsilon curve is not monotone nondecreasing")
        previous = value


def _check_kappa(kappa_hat: float) -> float:
    kappa_hat = float(kappa_hat)
    if not 0.0 <= kappa_hat <= 1.0:
        raise ValidationError("kappa_hat must lie in [0, 1]")
    return kappa_hat


def encoding_adp_delta(kappa_hat: float) -> DpParams:
    """Approximate-DP guarantee of publishing only the encoded state.

    Any pipeline reading nothing but the encoding is (0, sqrt(1 - kappa_hat))
    differentially private, since neighboring encodings sit within that trace
    distance of each other.
    """
    kappa_hat = _check_kappa(kappa_hat)
    return DpParams(0.0, math.sqrt(1.0 - kappa_hat))


def quantum_to_classical(q: QdpParams, kappa_hat: float) -> DpParams:
    """Transfer a quantum guarantee on the encoding to a classical one.

    Requires the quantum neighborhood to cover the worst adjacent-encoding
    distance sqrt(1 - kappa_hat); the (epsilon, delta) pair carries over
    unchanged.
    """
    kappa_hat = _check_kappa(kappa_hat)
    needed = math.sqrt(1.0 - kappa_hat)
    if q.tau < needed - 1e-12:
        raise InsufficientNeighborhoodError(
            f"guarantee holds only at trace distance {q.tau}, need {needed}"
        )
    return DpParams(q.epsilon, q.delta)


def encoding_laplace_scale(kappa_hat: float, t: float, eps: float) -> float:
    """Laplace scale (sqrt(1 - kappa_hat) + t) / eps for the mean-output pipeline."""
    kappa_hat = _check_kappa(kappa_hat)
    if t < 0:
        raise ValidationError("t must be >= 0")
    if not eps > 0:
        raise ValidationError("eps must be > 0")
    return (math.sqrt(1.0 - kappa_hat) + t) / eps


def encoding_gaussian_variance(kappa_hat: float, t: float, eps: float, delta: float) -> float:
    """Gaussian variance 2 ln(1.25/delta) (sqrt(1 - kappa_hat) + t)^2 / eps^2."""
    kappa_hat = _check_kappa(kappa_hat)
    if t < 0:
        raise ValidationError("t must be >= 0")
    if not eps > 0:
        raise ValidationError("eps must be > 0")
    if not 0.0 < delta < 1.25:
        raise ValidationError("delta must lie in (0, 1.25)")
    return 2.0 * math.log(1.25 / delta) * (math.sqrt(1.0 - kappa_hat) + t) ** 2 / eps ** 2


@dataclass(frozen=True)
class ConcentrationFailure:
    """Probability that the two measured means drift apart by more than t.

    ``nominal`` uses exponent -m t^2; ``hoeffding`` is the standard two-sided
    bound for a deviation of t/2 per mean (exponent -m t^2 / 2) and is the
    value quoted in reports, since it never overclaims confidence.
    """

    nominal: float
    hoeffding: float


def mean_concentration_failure(m: int, t: float) -> ConcentrationFailure:
    if m < 1:
        raise ValidationError("m must be >= 1")
    if t < 0:
        raise ValidationError("t must be >= 0")
    return ConcentrationFailure(
        nominal=min(1.0, 4.0 * math.exp(-m * t * t)),
        hoeffding=min(1.0, 4.0 * math.exp(-m * t * t / 2.0)),
    )


def subsample_amplify(base: DpParams, gamma: float, m: int) -> DpParams:
    """Amplification by m Born-rule draws from a vector with peak weight gamma.

    Returns (ln(1 + (e^eps - 1) * gamma * m), delta * gamma * m). Requires
    gamma * m <= 1 so the union-bound mass is a probability.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValidationError("gamma must lie in (0, 1]")
    if m < 1:
        raise ValidationError("m must be >= 1")
    mass = gamma * m
    if mass > 1.0 + 1e-12:
        raise ValidationError(f"gamma * m = {mass} exceeds 1; the bound degenerates")
    if base.epsilon == INF:
        eps_prime = INF
    else:
        eps_prime = math.log1p((math.exp(base.epsilon) - 1.0) * mass)
    return DpParams(eps_prime, base.delta * mass)


def subsample_adp(gamma: float, m: int) -> DpParams:
    """Unconditional guarantee of the sampling step alone: (0, gamma * m)."""
    if not 0.0 < gamma <= 1.0:
        raise ValidationError("gamma must lie in (0, 1]")
    if m < 1:
        raise ValidationError("m must be >= 1")
    mass = gamma * m
    if mass > 1.0 + 1e-12:
        raise ValidationError(f"gamma * m = {mass} exceeds 1; the bound degenerates")
    return DpParams(0.0, mass)


def postprocess_amplify(curve: EpsilonCurve, gamma: float, tau: float) -> QdpParams:
    """Pre-composing with a gamma-contractive channel shrinks the neighborhood.

    If the downstream operation satisfies (d, curve(d), 0) for every d, the
    composition satisfies (tau, curve(gamma * tau), 0).
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValidationError("gamma must lie in [0, 1]")
    if not 0.0 <= tau <= 1.0:
        raise ValidationError("tau must lie in [0, 1]")
    validate_curve(curve)
    return QdpParams(tau, float(curve(gamma * tau)), 0.0)


def eps_depolarizing(p: float, d: float, dim: int = 2) -> float:
    """Pure-QDP epsilon of the depolarizing channel: ln(1 + ((1-p)/p) d D)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError("p must lie in [0, 1]")
    if not 0.0 <= d <= 1.0:
        raise ValidationError("d must lie in [0, 1]")
    if dim < 2:
        raise ValidationError("dim must be >= 2")
    if d == 0.0:
        return 0.0
    if p == 0.0:
        return INF
    return math.log1p((1.0 - p) / p * d * dim)


def eps_pad(gamma: float, lam: float, d: float) -> float:
    """Quoted pure-QDP epsilon of phase-amplitude damping.

    ln(1 + 2 d s / (1 - s)) with s = sqrt(1-gamma) sqrt(1-lambda). This is the
    equatorial (coherence) ratio only; the empirical auditor checks whether it
    actually dominates the channel, and on much of the parameter range the
    polar population ratio exceeds it.
    """
    if not 0.0 <= gamma <= 1.0 or not 0.0 <= lam <= 1.0:
        raise ValidationError("gamma and lambda must lie in [0, 1]")
    if not 0.0 <= d <= 1.0:
        raise ValidationError("d must lie in [0, 1]")
    if d == 0.0:
        return 0.0
    s = math.sqrt(1.0 - gamma) * math.sqrt(1.0 - lam)
    if s >= 1.0:
        return INF
    if s == 0.0:
        return 0.0
    return math.log1p(2.0 * d * s / (1.0 - s))


def eps_unital_dobrushin(gamma: float, d: float) -> float:
    """Quoted pure-QDP epsilon ln(1 + 2 d gamma) for a gamma-contractive
    unital qubit channel; audited empirically, not trusted."""
    if not 0.0 <= gamma <= 1.0:
        raise ValidationError("gamma must lie in [0, 1]")
    if not 0.0 <= d <= 1.0:
        raise ValidationError("d must lie in [0, 1]")
    return math.log1p(2.0 * d * gamma)


def eps_pad_dep(p: float, gamma: float, lam: float, d: float) -> float:
    """Quoted epsilon (1-p) * eps_pad(gamma, lambda, d) for phase-amplitude
    damping applied after depolarizing; p = 1 collapses to 0."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError("p must lie in [0, 1]")
    if p == 1.0:
        return 0.0
    return (1.0 - p) * eps_pad(gamma, lam, d)


def depolarizing_curve(p: float, dim: int = 2) -> EpsilonCurve:
    return lambda d: eps_depolarizing(p, d, dim)


def pad_curve(gamma: float, lam: float) -> EpsilonCurve:
    return lambda d: eps_pad(gamma, lam, d)


def unital_dobrushin_curve(gamma: float) -> EpsilonCurve:
    return lambda d: eps_unital_dobrushin(gamma, d)
