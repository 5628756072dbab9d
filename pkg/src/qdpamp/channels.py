"""Kraus-form quantum operations on small Hilbert spaces.

Covers construction of the named channels (generalized amplitude damping,
phase damping, phase-amplitude damping, depolarizing), application and
composition, the Bloch/Pauli-transfer picture for qubit channels, numerical
estimation of the trace-norm contraction (Dobrushin) coefficient, and the
Doeblin minorization check via Choi-matrix positivity.

One printed-form pitfall handled here: the phase damping pair
diag(1, sqrt(lambda)), diag(0, sqrt(lambda)) is not trace preserving
(the completeness sum is diag(1, 2*lambda)); the unique diagonal completion
diag(1, sqrt(1-lambda)), diag(0, sqrt(lambda)) is used instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import UnsupportedDimensionError, ValidationError
from .linalg import (
    ATOL_HERM,
    ATOL_STATE,
    DensityMatrix,
    PAULIS,
    assert_hermitian,
    bloch_vector,
    hermitian_part,
    is_psd,
    operator_norm_inf,
    trace_distance,
    trace_norm,
)

MAX_CHANNEL_DIM = 8


@dataclass(frozen=True)
class KrausChannel:
    """A quantum operation as a finite list of Kraus matrices."""

    ops: tuple
    trace_preserving: bool = True
    atol: float = ATOL_STATE

    def __post_init__(self):
        ops = tuple(np.asarray(op, dtype=complex) for op in self.ops)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        rows, cols = ops[0].shape
        for op in ops:
            if op.ndim != 2 or op.shape != (rows, cols):
                raise ValidationError("Kraus operators must share one shape")
        total = sum(op.conj().T @ op for op in ops)
        gap = total - np.eye(cols)
        if self.trace_preserving:
            if np.max(np.abs(gap)) > self.atol:
                raise ValidationError(
                    "Kraus completeness sum differs from the identity"
                )
        else:
            if not is_psd(-hermitian_part(gap), self.atol):
                raise ValidationError("Kraus sum exceeds the identity (trace increasing)")
        frozen = []
        for op in ops:
            a = np.array(op, copy=True)
            a.setflags(write=False)
            frozen.append(a)
        object.__setattr__(self, "ops", tuple(frozen))

    @property
    def dim_in(self) -> int:
        return self.ops[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.ops[0].shape[0]


@dataclass(frozen=True)
class BlochRep:
    """Affine action of a qubit channel on Bloch vectors: r -> T r + t."""

    T: np.ndarray
    t: np.ndarray
    unital: bool


@dataclass(frozen=True)
class ChannelSpec:
    """Declarative channel description; see ``build_channel``.

    ``kind`` is one of depolarizing, gad, pd, pad, compose, kraus, identity.
    """

    kind: str
    params: dict = field(default_factory=dict)
    outer: "ChannelSpec | None" = None
    inner: "ChannelSpec | None" = None
    ops: tuple | None = None

    @classmethod
    def from_json(cls, text: str) -> "ChannelSpec":
        stripped = text.strip()
        if stripped and not stripped.startswith(("{", "[", '"')):
            return cls.from_dict(stripped)  # bare kind like "identity"
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid channel JSON: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc) -> "ChannelSpec":
        if isinstance(doc, str):
            doc = {"kind": doc}
        if not isinstance(doc, dict) or "kind" not in doc:
            raise ValidationError("channel JSON needs a 'kind'")
        kind = doc["kind"]
        if kind == "compose":
            if "outer" not in doc or "inner" not in doc:
                raise ValidationError("compose channel needs 'outer' and 'inner'")
            return cls(
                kind="compose",
                outer=cls.from_dict(doc["outer"]),
                inner=cls.from_dict(doc["inner"]),
            )
        if kind == "kraus":
            ops = doc.get("ops")
            if not ops:
                raise ValidationError("kraus channel needs 'ops'")
            mats = tuple(
                np.array([[complex(e[0], e[1]) for e in row] for row in op])
                for op in ops
            )
            return cls(kind="kraus", ops=mats)
        params = {k: v for k, v in doc.items() if k != "kind"}
        return cls(kind=kind, params=params)


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"parameter {name}={value!r} must lie in [0, 1]")
    return value


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1]))) > ATOL_STATE:
        raise ValidationError("matrix is not unitary")
    return KrausChannel((u,))


def gad_channel(p: float, gamma: float) -> KrausChannel:
    """Generalized amplitude damping on one qubit."""
    p = _check_unit_interval("p", p)
    gamma = _check_unit_interval("gamma", gamma)
    sp, sq = np.sqrt(p), np.sqrt(1 - p)
    sg, sgbar = np.sqrt(gamma), np.sqrt(1 - gamma)
    ops = (
        sp * np.array([[1, 0], [0, sgbar]], dtype=complex),
        sp * np.array([[0, sg], [0, 0]], dtype=complex),
        sq * np.array([[sgbar, 0], [0, 1]], dtype=complex),
        sq * np.array([[0, 0], [sg, 0]], dtype=complex),
    )
    return KrausChannel(ops)


def pd_channel(lam: float) -> KrausChannel:
    """Phase damping on one qubit (trace-preserving completion)."""
    lam = _check_unit_interval("lambda", lam)
    ops = (
        np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=complex),
        np.array([[0, 0], [0, np.sqrt(lam)]], dtype=complex),
    )
    return KrausChannel(ops)


def pad_channel(p: float, gamma: float, lam: float) -> KrausChannel:
    """Phase-amplitude damping: phase damping followed by GAD."""
    return compose(gad_channel(p, gamma), pd_channel(lam))


def _weyl_ops(dim: int) -> list[np.ndarray]:
    omega = np.exp(2j * np.pi / dim)
    shift = np.roll(np.eye(dim, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(dim))
    ops = []
    for a in range(dim):
        for b in range(dim):
            ops.append(np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b))
    return ops


def depolarizing_channel(p: float, dim: int = 2) -> KrausChannel:
    """Depolarizing channel: rho -> p*I/dim + (1-p)*rho.

    Qubits use the Pauli Kraus set; 2 < dim <= 8 uses discrete Weyl operators.
    """
    p = _check_unit_interval("p", p)
    if dim < 2:
        raise ValidationError("depolarizing channel requires dim >= 2")
    if dim > MAX_CHANNEL_DIM:
        raise UnsupportedDimensionError(f"depolarizing supported up to dim {MAX_CHANNEL_DIM}")
    if dim == 2:
        ops = [np.sqrt(1 - 3 * p / 4) * np.eye(2, dtype=complex)]
        ops += [np.sqrt(p / 4) * pauli for pauli in PAULIS]
        return KrausChannel(tuple(op for op in ops if np.max(np.abs(op)) > 0))
    weight_id = 1 - p + p / dim ** 2
    weight_rest = p / dim ** 2
    ops = []
    for idx, w in enumerate(_weyl_ops(dim)):
        weight = weight_id if idx == 0 else weight_rest
        if weight > 0:
            ops.append(np.sqrt(weight) * w)
    return KrausChannel(tuple(ops))


def depolarize_exact(rho: np.ndarray, p: float, dim: int) -> np.ndarray:
    """Affine evaluator p*tr(rho)*I/dim + (1-p)*rho; cross-checks the Kraus path."""
    rho = np.asarray(rho, dtype=complex)
    return p * np.trace(rho) * np.eye(dim) / dim + (1 - p) * rho


def build_channel(spec: ChannelSpec) -> KrausChannel:
    """Materialize a declarative spec as a validated Kraus channel."""
    if spec.kind == "identity":
        return identity_channel(int(spec.params.get("dim", 2)))
    if spec.kind == "depolarizing":
        return depolarizing_channel(spec.params["p"], int(spec.params.get("dim", 2)))
    if spec.kind == "gad":
        return gad_channel(spec.params["p"], spec.params["gamma"])
    if spec.kind == "pd":
        return pd_channel(spec.params["lambda"])
    if spec.kind == "pad":
        return pad_channel(spec.params["p"], spec.params["gamma"], spec.params["lambda"])
    if spec.kind == "compose":
        return compose(build_channel(spec.outer), build_channel(spec.inner))
    if spec.kind == "kraus":
        return KrausChannel(spec.ops)
    raise ValidationError(f"unknown channel kind {spec.kind!r}")


def apply_matrix(channel: KrausChannel, a: np.ndarray) -> np.ndarray:
    """Apply the channel to an arbitrary matrix (no state validation)."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (channel.dim_in, channel.dim_in):
        raise ValidationError("dimension mismatch")
    out = np.zeros((channel.dim_out, channel.dim_out), dtype=complex)
    for op in channel.ops:
        out += op @ a @ op.conj().T
    return out


def apply(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a trace-preserving channel to a state."""
    if not channel.trace_preserving:
        raise ValidationError("apply() expects a trace-preserving channel")
    return DensityMatrix(hermitian_part(apply_matrix(channel, rho.matrix)))


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Channel running ``inner`` first: rho -> outer(inner(rho))."""
    if inner.dim_out != outer.dim_in:
        raise ValidationError("dimension mismatch in composition")
    ops = tuple(a @ b for a in outer.ops for b in inner.ops)
    return KrausChannel(ops, trace_preserving=outer.trace_preserving and inner.trace_preserving)


def choi(channel: KrausChannel) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) Phi(|i><j|); PSD for any Kraus channel."""
    vecs = [np.asarray(op).T.reshape(-1) for op in channel.ops]
    dim = channel.dim_in * channel.dim_out
    c = np.zeros((dim, dim), dtype=complex)
    for v in vecs:
        c += np.outer(v, v.conj())
    return hermitian_part(c)


def bloch_rep(channel: KrausChannel, atol: float = ATOL_STATE) -> BlochRep:
    """Pauli-transfer block T and shift t of a qubit channel.

    Built by pushing the Bloch axis states through the channel; the affine
    reconstruction is verified on all six axis states before returning.
    """
    if channel.dim_in != 2 or channel.dim_out != 2:
        raise UnsupportedDimensionError("Bloch representation requires a qubit channel")
    eye = np.eye(2, dtype=complex)
    t = np.array(
        [float(np.trace(p @ apply_matrix(channel, eye / 2)).real) for p in PAULIS]
    )
    cols = []
    for k, pauli in enumerate(PAULIS):
        img = apply_matrix(channel, (eye + pauli) / 2)
        cols.append(
            np.array([float(np.trace(p @ img).real) for p in PAULIS]) - t
        )
    T = np.column_stack(cols)
    unital = bool(
        np.linalg.norm(t) <= 1e-10
        and np.max(np.abs(apply_matrix(channel, eye) - eye)) <= 1e-10
    )
    for k, pauli in enumerate(PAULIS):
        for sign in (+1, -1):
            img = apply_matrix(channel, (eye + sign * pauli) / 2)
            want = t + sign * T[:, k]
            got = np.array([float(np.trace(p @ img).real) for p in PAULIS])
            if np.max(np.abs(got - want)) > 1e-10:
                raise ValidationError("Bloch reconstruction check failed")
    T.setflags(write=False)
    t.setflags(write=False)
    return BlochRep(T=T, t=t, unital=unital)


def _fibonacci_sphere(count: int) -> np.ndarray:
    """Deterministic, roughly uniform unit vectors on the 2-sphere."""
    i = np.arange(count) + 0.5
    phi = np.arccos(1 - 2 * i / count)
    theta = np.pi * (1 + 5 ** 0.5) * i
    return np.column_stack(
        [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)]
    )


def _qubit_pair_distance(channel: KrausChannel, direction: np.ndarray) -> float:
    plus = DensityMatrix.from_bloch(direction)
    minus = DensityMatrix.from_bloch(-direction)
    return trace_distance(apply(channel, plus), apply(channel, minus))


def dobrushin_estimate(
    channel: KrausChannel,
    grid: tuple[int, int] = (64, 32),
    refine_iters: int = 20,
    full_search: int = 0,
    seed: int = 0,
    method: str = "auto",
) -> float:
    """Worst-case trace-distance contraction factor of the channel.

    Unital qubit channels use the exact value: the operator norm of the
    Pauli-transfer block. Other qubit channels take the maximum of
    ||Phi(psi) - Phi(phi)|| over a grid of antipodal Bloch pairs (the extreme
    points of the relevant unit ball are differences of orthogonal pure
    states), then refine locally. Dimensions 3 and 4 sample seeded random
    orthonormal pairs. ``full_search`` additionally samples that many
    arbitrary mixed-state pairs as a sanity check. ``method`` picks the path:
    "auto" (exact shortcut when available), "exact", or "grid".
    """
    if not channel.trace_preserving:
        raise ValidationError("contraction estimate expects a trace-preserving channel")
    if method not in ("auto", "exact", "grid"):
        raise ValidationError(f"unknown method {method!r}")
    dim = channel.dim_in
    if dim == 2:
        rep = bloch_rep(channel)
        if method == "exact" and not rep.unital:
            raise ValidationError("exact shortcut requires a unital qubit channel")
        if rep.unital and method != "grid":
            return float(min(operator_norm_inf(rep.T), 1.0))
        az, pol = grid
        best_val, best_dir = -1.0, None
        for theta in np.linspace(0.0, np.pi, pol):
            for phi in np.linspace(0.0, 2 * np.pi, az, endpoint=False):
                n = np.array(
                    [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
                )
                val = _qubit_pair_distance(channel, n)
                if val > best_val:
                    best_val, best_dir = val, n
        width = np.pi / min(az, pol)
        theta0 = float(np.arccos(np.clip(best_dir[2], -1, 1)))
        phi0 = float(np.arctan2(best_dir[1], best_dir[0]))
        for _ in range(refine_iters):
            for dt in np.linspace(-width, width, 5):
                for dp in np.linspace(-width, width, 5):
                    theta, phi = theta0 + dt, phi0 + dp
                    n = np.array(
                        [
                            np.sin(theta) * np.cos(phi),
                            np.sin(theta) * np.sin(phi),
                            np.cos(theta),
                        ]
                    )
                    val = _qubit_pair_distance(channel, n)
                    if val > best_val:
                        best_val, theta0, phi0 = val, theta, phi
            width /= 2
        estimate = best_val
    elif dim <= 4:
        if method == "exact":
            raise ValidationError("exact shortcut requires a unital qubit channel")
        rng = np.random.default_rng(seed)
        estimate = 0.0
        for _ in range(2000):
            g = rng.normal(size=(dim, 2)) + 1j * rng.normal(size=(dim, 2))
            q, _ = np.linalg.qr(g)
            psi = DensityMatrix(np.outer(q[:, 0], q[:, 0].conj()))
            phi = DensityMatrix(np.outer(q[:, 1], q[:, 1].conj()))
            estimate = max(estimate, trace_distance(apply(channel, psi), apply(channel, phi)))
    else:
        raise UnsupportedDimensionError("contraction estimate supports dim <= 4")
    if full_search:
        from .linalg import random_density_matrix

        rng = np.random.default_rng(seed + 1)
        for _ in range(full_search):
            rho = random_density_matrix(dim, rng)
            sigma = random_density_matrix(dim, rng)
            gap = trace_distance(rho, sigma)
            if gap > 1e-9:
                ratio = trace_distance(apply(channel, rho), apply(channel, sigma)) / gap
                estimate = max(estimate, ratio)
    return float(min(max(estimate, 0.0), 1.0))


def doeblin_check(
    channel: KrausChannel,
    gamma: float,
    y: np.ndarray,
    tol: float = ATOL_STATE,
) -> bool:
    """Minorization test: is Phi - gamma * (tr(.) Y) completely positive?

    ``y`` must be PSD with trace <= 1 (so the subtracted map is a quantum
    operation). Complete positivity is read off the Choi matrix; the Choi
    matrix of tr(.) Y is I (x) Y. A passing check certifies the channel
    contracts trace distance by at least the factor (1 - gamma).
    """
    gamma = _check_unit_interval("gamma", gamma)
    y = assert_hermitian(np.asarray(y, dtype=complex), ATOL_HERM)
    if y.shape != (channel.dim_out, channel.dim_out):
        raise ValidationError("Y has the wrong dimension")
    if not is_psd(y, tol):
        raise ValidationError("Y must be PSD")
    if float(np.trace(y).real) > 1 + tol:
        raise ValidationError("Y must have trace <= 1")
    minorant_choi = np.kron(np.eye(channel.dim_in), y)
    return is_psd(choi(channel) - gamma * minorant_choi, tol)


def doeblin_to_dobrushin(gamma: float) -> float:
    """Contraction factor implied by a passing minorization check."""
    return 1.0 - _check_unit_interval("gamma", gamma)
