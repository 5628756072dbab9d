"""Randomized mechanisms driven by an explicit, reproducible random stream.

All randomness flows through :class:`RandomStream`, a counter-based Philox
generator keyed by (seed, substream). Uniform doubles come from the fixed
construction (raw64 >> 11) * 2**-53, Laplace draws use the branch-symmetric
inverse CDF on one uniform, and Gaussian draws use Box-Muller on two
uniforms, so identical seeds reproduce identical outputs across platforms.
Concurrent trials should use disjoint substreams from ``substream``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import INF, DpParams
from .encodings import Dataset, EncodingSpec, encode
from .errors import ValidationError
from .linalg import Povm, povm_probabilities


class RandomStream:
    """Counter-based pseudo-random stream with deterministic substreams."""

    def __init__(self, seed: int, stream: int = 0):
        if not 0 <= int(seed) < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        self.seed = int(seed)
        self.stream = int(stream)
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "RandomStream":
        """Independent stream derived from the same master seed."""
        return RandomStream(self.seed, self.stream + 1 + int(index))

    def uniform(self, size=None):
        """Uniform doubles in [0, 1) from the fixed 53-bit construction."""
        return self._gen.random(size)

    def laplace(self, scale: float, size=None):
        """Laplace(0, scale) via the symmetric inverse CDF; scale 0 gives 0."""
        if scale < 0:
            raise ValidationError("scale must be >= 0")
        u = self.uniform(size)
        if scale == 0.0:
            return np.zeros_like(u) if size is not None else 0.0
        centered = u - 0.5
        draw = -scale * np.sign(centered) * np.log1p(-2.0 * np.abs(centered))
        return draw if size is not None else float(draw)

    def gaussian(self, variance: float, size=None):
        """N(0, variance) via Box-Muller; variance 0 gives 0."""
        if variance < 0:
            raise ValidationError("variance must be >= 0")
        n = 1 if size is None else int(np.prod(size))
        u = self.uniform(2 * n)
        if variance == 0.0:
            return np.zeros(size) if size is not None else 0.0
        z = np.sqrt(-2.0 * np.log1p(-u[:n])) * np.cos(2.0 * np.pi * u[n:])
        z = math.sqrt(variance) * z
        if size is None:
            return float(z[0])
        return z.reshape(size)

    def bernoulli(self, prob: float, size=None):
        if not 0.0 <= prob <= 1.0:
            raise ValidationError("probability must lie in [0, 1]")
        u = self.uniform(size)
        draw = (u < prob).astype(np.int64)
        return draw if size is not None else int(draw)


@dataclass(frozen=True)
class NoiseSpec:
    """Output perturbation: none, laplace(scale), or gaussian(variance)."""

    kind: str
    scale: float = 0.0
    variance: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "laplace", "gaussian"):
            raise ValidationError(f"unknown noise kind {self.kind!r}")
        if self.scale < 0 or self.variance < 0:
            raise ValidationError("noise parameters must be >= 0")


def sample_noise(spec: NoiseSpec, stream: RandomStream) -> float:
    """One draw from the configured noise distribution."""
    if spec.kind == "none":
        return 0.0
    if spec.kind == "laplace":
        return stream.laplace(spec.scale)
    return stream.gaussian(spec.variance)


def gaussian_variance(sensitivity: float, eps: float, delta: float) -> float:
    """Calibrated variance 2 ln(1.25/delta) sensitivity^2 / eps^2."""
    if not 0.0 < delta < 1.0:
        raise ValidationError("gaussian noise requires delta in (0, 1)")
    if not eps > 0:
        raise ValidationError("eps must be > 0")
    return 2.0 * math.log(1.25 / delta) * sensitivity ** 2 / eps ** 2


def laplace_density_ratio_bound(sensitivity: float, scale: float) -> float:
    """Worst-case density ratio exp(sensitivity / scale) of a shifted Laplace."""
    if sensitivity < 0 or scale <= 0:
        raise ValidationError("need sensitivity >= 0 and scale > 0")
    return math.exp(sensitivity / scale)


def noisy_query(
    value: float,
    sensitivity: float,
    dp: DpParams,
    kind: str,
    stream: RandomStream,
) -> float:
    """Add noise calibrated to the query sensitivity and the privacy target."""
    if sensitivity < 0:
        raise ValidationError("sensitivity must be >= 0")
    if sensitivity == 0.0:
        return float(value)
    if kind == "laplace":
        if dp.delta != 0.0:
            raise ValidationError("laplace noise requires delta = 0")
        if not dp.epsilon > 0:
            raise ValidationError("laplace noise requires eps > 0")
        return float(value) + stream.laplace(sensitivity / dp.epsilon)
    if kind == "gaussian":
        return float(value) + stream.gaussian(
            gaussian_variance(sensitivity, dp.epsilon, dp.delta)
        )
    raise ValidationError(f"unknown mechanism kind {kind!r}")


def randomized_response_probs(eps: float, delta: float) -> tuple[float, float]:
    """Keep/flip probabilities ((e^eps + delta)/(1 + e^eps), (1 - delta)/(1 + e^eps))."""
    if eps < 0:
        raise ValidationError("eps must be >= 0")
    if not 0.0 <= delta <= 1.0:
        raise ValidationError("delta must lie in [0, 1]")
    if eps == INF:
        return 1.0, 0.0
    keep = (math.exp(eps) + delta) / (1.0 + math.exp(eps))
    flip = (1.0 - delta) / (1.0 + math.exp(eps))
    if not 0.0 <= keep <= 1.0 or not 0.0 <= flip <= 1.0:
        raise ValidationError("randomized response probabilities leave [0, 1]")
    return keep, flip


def randomized_response(bits, eps: float, delta: float, stream: RandomStream):
    """Flip each bit independently with probability (1 - delta)/(1 + e^eps)."""
    bits = np.asarray(bits, dtype=np.int64)
    if np.any((bits != 0) & (bits != 1)):
        raise ValidationError("bits must be 0 or 1")
    keep, _ = randomized_response_probs(eps, delta)
    kept = stream.uniform(bits.shape) < keep
    return np.where(kept, bits, 1 - bits).astype(np.int64)


def born_weights(x: Dataset) -> np.ndarray:
    """Measurement probabilities |x_i|^2 of an amplitude dataset."""
    if x.mode != "amplitude":
        raise ValidationError("Born-rule sampling requires an amplitude dataset")
    return np.array([abs(v) ** 2 for v in x.values])


def l2_sample(x: Dataset, m: int, stream: RandomStream) -> np.ndarray:
    """m independent Born-rule index draws (0-based) via the inverse CDF."""
    if m < 1:
        raise ValidationError("m must be >= 1")
    weights = born_weights(x)
    cumulative = np.cumsum(weights)
    cumulative[-1] = 1.0  # normalization is validated upstream
    u = stream.uniform(m)
    return np.searchsorted(cumulative, u, side="right").astype(np.int64)


def measurement_mean(
    x: Dataset,
    spec: EncodingSpec,
    povm: Povm,
    m: int,
    noise: NoiseSpec,
    stream: RandomStream,
) -> float:
    """Encode, measure m times, and release the noisy mean of the outcomes.

    The state is re-prepared for every round, so the m rounds are independent
    Bernoulli draws with success probability tr(E_1 rho(x)); the output is
    their mean plus one draw of the configured noise.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    if len(povm.elements) != 2 or set(povm.labels) != {0, 1}:
        raise ValidationError("measurement must have exactly the outcomes {0, 1}")
    rho = encode(x, spec).density()
    if povm.dim != rho.dim:
        raise ValidationError("encoding dimension does not match the measurement")
    probs = povm_probabilities(povm, rho)
    p_one = float(probs[list(povm.labels).index(1)])
    draws = stream.bernoulli(p_one, size=m)
    mu = float(np.mean(draws))
    return mu + sample_noise(noise, stream)
