"""Empirical verification of privacy bounds.

Two audit families live here:

* exact audits of finite classical mechanisms -- outcome distributions are
  held as rationals, the smallest valid delta at a given epsilon is the
  hockey-stick divergence, and the reported epsilon is the worst log-ratio
  over neighboring inputs;
* measurement audits of qubit channels -- candidate state pairs inside the
  trace-distance neighborhood are pushed through the channel and the
  likelihood ratio is maximized over projective effects.

Both are one-sided by construction: they certify violations (with a
reproducible witness) and approach the true worst case from below; they never
overstate it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .bounds import INF, DpParams
from .channels import KrausChannel, bloch_rep
from .encodings import Dataset
from .errors import ResourceLimitError, UnsupportedDimensionError, ValidationError
from .linalg import DensityMatrix, bloch_vector
from .mechanisms import RandomStream

_RATIO_NUM_FLOOR = 1e-10   # numerator mass that certifies an infinite ratio
_RATIO_DEN_FLOOR = 1e-14   # denominator mass treated as zero


@dataclass(frozen=True)
class MechanismModel:
    """Exact finite mechanism: per-input outcome distributions over a shared
    outcome set, plus the neighbor relation to audit over."""

    outcomes: tuple
    dist: Mapping[str, tuple]
    neighbor_pairs: tuple

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        dist = {}
        for key, probs in self.dist.items():
            probs = tuple(Fraction(p) if not isinstance(p, Fraction) else p for p in probs)
            if len(probs) != len(outcomes):
                raise ValidationError(f"input {key!r}: wrong number of probabilities")
            if any(p < 0 for p in probs):
                raise ValidationError(f"input {key!r}: negative probability")
            total = sum(probs)
            if abs(float(total) - 1.0) > 1e-12:
                raise ValidationError(f"input {key!r}: probabilities sum to {float(total)}")
            dist[str(key)] = probs
        pairs = tuple((str(a), str(b)) for a, b in self.neighbor_pairs)
        for a, b in pairs:
            if a not in dist or b not in dist:
                raise ValidationError(f"neighbor pair ({a!r}, {b!r}) references unknown input")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "neighbor_pairs", pairs)

    @property
    def inputs(self) -> tuple:
        return tuple(self.dist.keys())


@dataclass(frozen=True)
class AuditReport:
    """Measured privacy of a mechanism against a claimed guarantee."""

    eps_hat: float
    delta_hat_at_eps: float
    satisfied: bool
    claimed_epsilon: float
    claimed_delta: float
    witness: dict
    search: dict

    def to_dict(self) -> dict:
        return {
            "eps_hat": self.eps_hat,
            "delta_hat": self.delta_hat_at_eps,
            "satisfied": self.satisfied,
            "claimed": {"epsilon": self.claimed_epsilon, "delta": self.claimed_delta},
            "witness": self.witness,
            "search": self.search,
        }


def hockey_stick(p: Sequence, q: Sequence, eps: float) -> float:
    """Smallest delta making the pair (eps, delta)-indistinguishable:
    sum_o max(P(o) - e^eps Q(o), 0)."""
    if len(p) != len(q):
        raise ValidationError("distributions must share a support")
    if eps < 0:
        raise ValidationError("eps must be >= 0")
    pf = [float(v) for v in p]
    qf = [float(v) for v in q]
    for name, vec in (("P", pf), ("Q", qf)):
        if any(v < -1e-12 for v in vec) or abs(sum(vec) - 1.0) > 1e-9:
            raise ValidationError(f"{name} is not a probability vector")
    factor = math.exp(eps) if eps != INF else INF
    if factor == INF:
        return 0.0
    return float(sum(max(pv - factor * qv, 0.0) for pv, qv in zip(pf, qf)))


def _pairwise_eps(p: Sequence[Fraction], q: Sequence[Fraction]):
    """(max ratio as Fraction or inf, index achieving it) for one direction."""
    best: Fraction | float = Fraction(0)
    best_idx = None
    for idx, (pv, qv) in enumerate(zip(p, q)):
        if qv == 0:
            if pv > 0:
                return INF, idx
            continue
        ratio = Fraction(pv) / Fraction(qv)
        if ratio > best:
            best, best_idx = ratio, idx
    return best, best_idx


def audit_classical(model: MechanismModel, claimed: DpParams) -> AuditReport:
    """Exact audit over every neighbor pair, in both directions."""
    eps_hat = 0.0
    witness: dict = {}
    delta_hat = 0.0
    delta_witness: dict = {}
    for a, b in model.neighbor_pairs:
        for src, dst in ((a, b), (b, a)):
            p, q = model.dist[src], model.dist[dst]
            ratio, idx = _pairwise_eps(p, q)
            value = INF if ratio == INF else (math.log(float(ratio)) if ratio > 0 else 0.0)
            if value > eps_hat or not witness:
                eps_hat = value
                witness = {
                    "pair": [src, dst],
                    "outcome": model.outcomes[idx] if idx is not None else None,
                    "ratio": "inf" if ratio == INF else float(ratio),
                }
            ds = hockey_stick(p, q, claimed.epsilon)
            if ds > delta_hat:
                delta_hat = ds
                factor = math.exp(claimed.epsilon)
                event = [
                    model.outcomes[i]
                    for i, (pv, qv) in enumerate(zip(p, q))
                    if float(pv) - factor * float(qv) > 0
                ]
                delta_witness = {"pair": [src, dst], "event": event}
    satisfied = delta_hat <= claimed.delta + 1e-12
    return AuditReport(
        eps_hat=eps_hat,
        delta_hat_at_eps=delta_hat,
        satisfied=satisfied,
        claimed_epsilon=claimed.epsilon,
        claimed_delta=claimed.delta,
        witness={"eps": witness, "delta": delta_witness},
        search={"pairs": len(model.neighbor_pairs), "method": "exact-enumeration"},
    )


# ---------------------------------------------------------------------------
# Measurement-ratio maximization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSettings:
    """Knobs for the channel audits; defaults resolve 1e-6-scale gaps on
    smooth qubit channels in milliseconds."""

    directions: int = 32     # Bloch grid for pair anchors
    partners: int = 6        # partner directions per anchored pair
    interior: int = 32       # seeded random interior pairs
    coarse: int = 256        # shared coarse projector directions
    plane: int = 4096        # in-plane samples during refinement
    top_k: int = 12          # pairs promoted to full refinement
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "directions": self.directions,
            "partners": self.partners,
            "interior": self.interior,
            "coarse": self.coarse,
            "plane": self.plane,
            "top_k": self.top_k,
            "seed": self.seed,
        }


def _fibonacci_directions(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    phi = np.arccos(1 - 2 * i / count)
    theta = np.pi * (1 + 5 ** 0.5) * i
    return np.column_stack(
        [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)]
    )


def _ratio_at(n: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    num = 0.5 * (1.0 + float(n @ a))
    den = 0.5 * (1.0 + float(n @ b))
    if den <= _RATIO_DEN_FLOOR:
        return INF if num > _RATIO_NUM_FLOOR else 1.0
    return num / den


def _ratio_in_plane(a: np.ndarray, b: np.ndarray, samples: int, golden_iters: int = 60):
    """Maximize (1 + n.a)/(1 + n.b) over unit n in span{a, b}.

    At any constrained maximum the optimal direction lies in that span, so a
    dense 1-D angle sweep plus golden-section polishing recovers the sphere
    maximum of this linear-fractional objective.
    """
    e1 = a if np.linalg.norm(a) > 1e-14 else np.array([1.0, 0.0, 0.0])
    e1 = e1 / np.linalg.norm(e1)
    b_perp = b - (b @ e1) * e1
    if np.linalg.norm(b_perp) > 1e-12:
        e2 = b_perp / np.linalg.norm(b_perp)
    else:
        helper = np.array([0.0, 0.0, 1.0]) if abs(e1[2]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e2 = np.cross(e1, helper)
        e2 = e2 / np.linalg.norm(e2)
    alpha_a, beta_a = float(a @ e1), float(a @ e2)
    alpha_b, beta_b = float(b @ e1), float(b @ e2)
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    num = 1.0 + alpha_a * np.cos(theta) + beta_a * np.sin(theta)
    den = 1.0 + alpha_b * np.cos(theta) + beta_b * np.sin(theta)
    blocked = den <= _RATIO_DEN_FLOOR
    if np.any(blocked & (num > _RATIO_NUM_FLOOR)):
        k = int(np.argmax(np.where(blocked, num, -np.inf)))
        return INF, np.cos(theta[k]) * e1 + np.sin(theta[k]) * e2
    ratios = np.where(blocked, 1.0, num / np.maximum(den, _RATIO_DEN_FLOOR))
    k = int(np.argmax(ratios))

    def value(th: float) -> float:
        nv = 1.0 + alpha_a * math.cos(th) + beta_a * math.sin(th)
        dv = 1.0 + alpha_b * math.cos(th) + beta_b * math.sin(th)
        if dv <= _RATIO_DEN_FLOOR:
            return INF if nv > _RATIO_NUM_FLOOR else 1.0
        return nv / dv

    step = 2 * np.pi / samples
    lo, hi = theta[k] - step, theta[k] + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = value(x1), value(x2)
    for _ in range(golden_iters):
        if f1 == INF or f2 == INF:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = value(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = value(x1)
    candidates = [(value(th), th) for th in (theta[k], x1, x2)]
    best_val, best_th = max(candidates, key=lambda item: item[0])
    direction = math.cos(best_th) * e1 + math.sin(best_th) * e2
    return best_val, direction


def _qubit_ratio(a: np.ndarray, b: np.ndarray, settings: SearchSettings):
    """Max likelihood ratio over projective effects for qubit Bloch images."""
    specials = [a, -a, b, -b, a - b]
    candidates = [v / np.linalg.norm(v) for v in specials if np.linalg.norm(v) > 1e-14]
    best_val, best_dir = 1.0, None  # identity effect gives ratio 1
    for n in candidates:
        val = _ratio_at(n, a, b)
        if val > best_val:
            best_val, best_dir = val, n
        if val == INF:
            return INF, n
    val, direction = _ratio_in_plane(a, b, settings.plane)
    if val > best_val:
        best_val, best_dir = val, direction
    return best_val, best_dir


def worst_case_measurement_ratio(
    a: DensityMatrix,
    b: DensityMatrix,
    search: SearchSettings | None = None,
) -> float:
    """sup over effects 0 <= M <= I of tr(M a)/tr(M b), attained at projectors.

    Qubits search the Bloch sphere directly. Dimensions 3 and 4 solve the
    equivalent generalized eigenproblem on the support of ``b`` after checking
    for mass of ``a`` outside that support (which makes the ratio infinite).
    """
    if a.dim != b.dim:
        raise ValidationError("dimension mismatch")
    settings = search or SearchSettings()
    if a.dim == 2:
        val, _ = _qubit_ratio(bloch_vector(a), bloch_vector(b), settings)
        return float(val) if val != INF else INF
    if a.dim > 4:
        raise UnsupportedDimensionError("measurement-ratio search supports dim <= 4")
    w, v = np.linalg.eigh(b.matrix)
    support = w > 1e-12
    null_vecs = v[:, ~support]
    if null_vecs.size:
        overlap = null_vecs.conj().T @ a.matrix @ null_vecs
        if float(np.max(np.abs(np.diag(overlap)).real, initial=0.0)) > _RATIO_NUM_FLOOR:
            return INF
    basis = v[:, support]
    a_s = basis.conj().T @ a.matrix @ basis
    b_s = basis.conj().T @ b.matrix @ basis
    ws, vs = np.linalg.eigh(b_s)
    inv_sqrt = vs @ np.diag(ws ** -0.5) @ vs.conj().T
    top = float(np.linalg.eigvalsh(inv_sqrt @ a_s @ inv_sqrt)[-1])
    return max(top, 1.0)


_AXES = np.array(
    [[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0], [0, -1.0, 0], [0, 0, 1.0], [0, 0, -1.0]]
)


def _audit_pairs(tau: float, settings: SearchSettings) -> list[tuple[np.ndarray, np.ndarray]]:
    """Bloch-vector pairs within trace distance tau: contracted antipodal
    pairs, pure anchors mixed toward other axes, and seeded interior pairs.
    The six cardinal axes are always anchored, since the named channels have
    axis-aligned worst-case pairs."""
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    anchors = np.vstack([_AXES, _fibonacci_directions(settings.directions)])
    for n in anchors:
        pairs.append((tau * n, -tau * n))
    partner_dirs = np.vstack([_AXES, _fibonacci_directions(settings.partners)])
    for n in anchors:
        for mdir in list(partner_dirs) + [-n]:
            pairs.append(((1 - tau) * n + tau * mdir, n.copy()))
    stream = RandomStream(settings.seed)
    for _ in range(settings.interior):
        u = np.asarray(stream.uniform(3)) * 2 - 1
        w = np.asarray(stream.uniform(3)) * 2 - 1
        if np.linalg.norm(u) > 1:
            u = u / np.linalg.norm(u) * float(stream.uniform())
        if np.linalg.norm(w) < 1e-12:
            w = np.array([0.0, 0.0, 1.0])
        w = w / np.linalg.norm(w)
        reach = float(stream.uniform()) * tau
        vvec = u + 2 * reach * w
        if np.linalg.norm(vvec) > 1:
            vvec = vvec / np.linalg.norm(vvec)
        pairs.append((u, vvec))
    return pairs


def audit_channel_qdp(
    channel: KrausChannel,
    tau: float,
    claimed_eps: float,
    search: SearchSettings | None = None,
) -> AuditReport:
    """Audit a qubit channel against a claimed pure-QDP epsilon at radius tau.

    Candidate input pairs within trace distance tau are pushed through the
    channel's Bloch affine map; a coarse shared projector grid ranks the
    ordered pairs and the strongest ones get a full in-plane refinement. A
    violation report carries the witness pair and projector direction.
    """
    if channel.dim_in != 2 or channel.dim_out != 2:
        raise UnsupportedDimensionError("channel audit requires a qubit channel")
    if not 0.0 <= tau <= 1.0:
        raise ValidationError("tau must lie in [0, 1]")
    settings = search or SearchSettings()
    rep = bloch_rep(channel)
    pairs = _audit_pairs(tau, settings)
    us = np.array([p[0] for p in pairs])
    vs = np.array([p[1] for p in pairs])
    img_u = us @ rep.T.T + rep.t
    img_v = vs @ rep.T.T + rep.t

    # ordered pairs: (u, v) and (v, u)
    a_img = np.vstack([img_u, img_v])
    b_img = np.vstack([img_v, img_u])
    a_in = np.vstack([us, vs])
    b_in = np.vstack([vs, us])

    grid = _fibonacci_directions(settings.coarse)
    nums = 1.0 + a_img @ grid.T
    dens = 1.0 + b_img @ grid.T
    blocked = dens <= 2 * _RATIO_DEN_FLOOR
    exploding = blocked & (nums > 2 * _RATIO_NUM_FLOOR)
    coarse = np.where(blocked, 1.0, nums / np.maximum(dens, 2 * _RATIO_DEN_FLOOR))
    coarse_best = coarse.max(axis=1)
    if np.any(exploding):
        coarse_best = np.where(exploding.any(axis=1), np.inf, coarse_best)

    order = np.argsort(coarse_best)[::-1]
    top = order[: settings.top_k]
    best_val, best_idx, best_dir = 1.0, int(order[0]), None
    for idx in top:
        val, direction = _qubit_ratio(a_img[idx], b_img[idx], settings)
        if val > best_val:
            best_val, best_idx, best_dir = val, int(idx), direction
        if val == INF:
            break

    eps_hat = INF if best_val == INF else (math.log(best_val) if best_val > 1.0 else 0.0)

    factor = math.exp(claimed_eps) if claimed_eps != INF else INF
    if factor == INF:
        delta_hat = 0.0
    else:
        gaps = 0.5 * ((1.0 - factor) + np.linalg.norm(a_img - factor * b_img, axis=1))
        delta_hat = float(min(max(np.max(gaps), 0.0), 1.0))

    satisfied = eps_hat <= claimed_eps + 1e-6
    witness = {
        "rho_bloch": [float(x) for x in a_in[best_idx]],
        "sigma_bloch": [float(x) for x in b_in[best_idx]],
        "projector_bloch": None if best_dir is None else [float(x) for x in best_dir],
        "ratio": "inf" if best_val == INF else float(best_val),
        "tau": tau,
    }
    return AuditReport(
        eps_hat=eps_hat,
        delta_hat_at_eps=delta_hat,
        satisfied=satisfied,
        claimed_epsilon=claimed_eps,
        claimed_delta=0.0,
        witness=witness,
        search={**settings.to_dict(), "pairs": len(pairs), "method": "bloch-grid"},
    )


def witness_ratio(channel: KrausChannel, witness: dict) -> float:
    """Recompute a channel-audit witness ratio from its stored coordinates."""
    rep = bloch_rep(channel)
    a = rep.T @ np.asarray(witness["rho_bloch"]) + rep.t
    b = rep.T @ np.asarray(witness["sigma_bloch"]) + rep.t
    if witness["projector_bloch"] is None:
        return 1.0
    n = np.asarray(witness["projector_bloch"])
    return _ratio_at(n, a, b)


# ---------------------------------------------------------------------------
# Exact subsampling audits
# ---------------------------------------------------------------------------


class TupleMechanism:
    """Base mechanism for subsampling audits: maps an m-tuple of sampled
    values to an exact outcome distribution."""

    outcomes: tuple

    def distribution(self, values: tuple) -> tuple:
        raise NotImplementedError


class PerEntryRandomizedResponse(TupleMechanism):
    """Randomized response applied independently to each sampled value.

    A sampled value is treated as bit 0 when it matches one of the reference
    entries (within 1e-12) and bit 1 otherwise; each bit is then kept with
    probability ``keep``. Outcomes are the output bit strings.
    """

    def __init__(self, keep: Fraction, m: int, reference: Sequence[complex]):
        keep = Fraction(keep)
        if not 0 <= keep <= 1:
            raise ValidationError("keep probability must lie in [0, 1]")
        self.keep = keep
        self.m = int(m)
        self.reference = tuple(complex(v) for v in reference)
        self.outcomes = tuple("".join(bits) for bits in itertools.product("01", repeat=m))

    def _bit(self, value: complex) -> int:
        return 0 if any(abs(value - r) <= 1e-12 for r in self.reference) else 1

    def distribution(self, values: tuple) -> tuple:
        bits = [self._bit(complex(v)) for v in values]
        flip = 1 - self.keep
        probs = []
        for outcome in self.outcomes:
            prob = Fraction(1)
            for b, o in zip(bits, outcome):
                prob *= self.keep if int(o) == b else flip
            probs.append(prob)
        return tuple(probs)


class IdentityOutput(TupleMechanism):
    """Outputs the sampled value tuple itself (point-mass distribution)."""

    def __init__(self, alphabet: Sequence[complex], m: int):
        self.m = int(m)
        self.alphabet = tuple(complex(v) for v in dict.fromkeys(alphabet))
        self.outcomes = tuple(itertools.product(self.alphabet, repeat=m))

    def distribution(self, values: tuple) -> tuple:
        key = tuple(complex(v) for v in values)
        return tuple(Fraction(1) if o == key else Fraction(0) for o in self.outcomes)


def born_weights_exact(x: Dataset) -> list[Fraction]:
    """Normalized Born weights |x_i|^2 as exact rationals."""
    if x.mode != "amplitude":
        raise ValidationError("Born weights require an amplitude dataset")
    raw = [Fraction(v.real) ** 2 + Fraction(v.imag) ** 2 for v in x.values]
    total = sum(raw)
    if total == 0:
        raise ValidationError("dataset has no mass")
    return [w / total for w in raw]


def _mixture_distribution(
    weights: Sequence[Fraction],
    m: int,
    dist_of_index_tuple: Callable[[tuple], Sequence[Fraction]],
    n_outcomes: int,
    budget: int,
) -> list[Fraction]:
    n = len(weights)
    if n ** m > budget:
        raise ResourceLimitError(f"{n}^{m} index tuples exceed the budget {budget}")
    acc = [Fraction(0)] * n_outcomes
    for idx_tuple in itertools.product(range(n), repeat=m):
        weight = Fraction(1)
        for i in idx_tuple:
            weight *= weights[i]
        if weight == 0:
            continue
        probs = dist_of_index_tuple(idx_tuple)
        for k, p in enumerate(probs):
            if p:
                acc[k] += weight * p
    return acc


def subsampled_model(
    x: Dataset,
    base: TupleMechanism,
    m: int,
    budget: int = 10 ** 6,
) -> MechanismModel:
    """Exact outcome distribution of base applied to m Born-rule draws.

    Index tuples are enumerated with replacement (each draw is an independent
    measurement of the encoded vector) and weighted by the product of Born
    probabilities.
    """
    weights = born_weights_exact(x)
    values = x.values

    def dist(idx_tuple):
        return base.distribution(tuple(values[i] for i in idx_tuple))

    probs = _mixture_distribution(weights, m, dist, len(base.outcomes), budget)
    return MechanismModel(
        outcomes=base.outcomes,
        dist={"x": tuple(probs)},
        neighbor_pairs=(),
    )


def phase_flip_neighbors(x: Dataset) -> dict[str, Dataset]:
    """All normalized single-entry neighbors obtained by negating one entry.

    Normalization pins the modulus of a changed entry, so negation is the
    canonical distinguishable change; zero entries admit no such neighbor.
    """
    out = {}
    for t, v in enumerate(x.values):
        if abs(v) <= 1e-15:
            continue
        vals = list(x.values)
        vals[t] = -v
        out[f"x~{t}"] = Dataset(mode="amplitude", values=tuple(vals))
    return out


def audit_subsampling_theorem(
    x: Dataset,
    base: TupleMechanism,
    m: int,
    claimed: DpParams,
    budget: int = 10 ** 6,
) -> AuditReport:
    """End-to-end audit of amplification by Born-rule subsampling.

    Builds the exact subsampled mechanism for ``x`` and each of its
    sign-flip neighbors, then runs the exact classical audit against the
    claimed amplified parameters.
    """
    weights = born_weights_exact(x)
    datasets = {"x": x, **phase_flip_neighbors(x)}
    dist = {}
    for key, ds in datasets.items():
        values = ds.values

        def dist_fn(idx_tuple, values=values):
            return base.distribution(tuple(values[i] for i in idx_tuple))

        dist[key] = tuple(
            _mixture_distribution(weights, m, dist_fn, len(base.outcomes), budget)
        )
    pairs = tuple(("x", key) for key in datasets if key != "x")
    model = MechanismModel(outcomes=base.outcomes, dist=dist, neighbor_pairs=pairs)
    report = audit_classical(model, claimed)
    return AuditReport(
        eps_hat=report.eps_hat,
        delta_hat_at_eps=report.delta_hat_at_eps,
        satisfied=report.satisfied,
        claimed_epsilon=report.claimed_epsilon,
        claimed_delta=report.claimed_delta,
        witness=report.witness,
        search={"pairs": len(pairs), "m": m, "n": x.n, "method": "exact-enumeration"},
    )


def randomized_response_model(keep: Fraction, n_bits: int = 1) -> MechanismModel:
    """Exact model of per-bit randomized response on n_bits-bit inputs."""
    keep = Fraction(keep)
    if not 0 <= keep <= 1:
        raise ValidationError("keep probability must lie in [0, 1]")
    flip = 1 - keep
    inputs = ["".join(bits) for bits in itertools.product("01", repeat=n_bits)]
    outcomes = tuple(inputs)
    dist = {}
    for inp in inputs:
        probs = []
        for out in outcomes:
            prob = Fraction(1)
            for i_bit, o_bit in zip(inp, out):
                prob *= keep if i_bit == o_bit else flip
            probs.append(prob)
        dist[inp] = tuple(probs)
    pairs = tuple(
        (a, b)
        for a, b in itertools.combinations(inputs, 2)
        if sum(x != y for x, y in zip(a, b)) == 1
    )
    return MechanismModel(outcomes=outcomes, dist=dist, neighbor_pairs=pairs)
