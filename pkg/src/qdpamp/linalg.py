"""Dense complex linear algebra for small quantum systems.

States, measurements, and the trace-distance toolkit used by everything else
in the package. Instances are tiny (dimension <= 64), so all routines favor
robustness over speed: dense numpy arrays, LAPACK Hermitian eigensolvers, and
explicit invariant checks at construction time.

Tolerance conventions, overridable per call:

* ``ATOL_HERM``  (1e-12) -- entrywise Hermiticity of raw matrices.
* ``ATOL_STATE`` (1e-10) -- positivity / trace / normalization invariants.
* ``ATOL_IDENT`` (1e-9)  -- derived identities checked by property tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

ATOL_HERM = 1e-12
ATOL_STATE = 1e-10
ATOL_IDENT = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_complex_matrix(entries, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce ``entries`` to a 2-D complex array, validating the shape."""
    a = np.asarray(entries, dtype=complex)
    if a.ndim == 1 and shape is not None:
        if a.size != shape[0] * shape[1]:
            raise ValidationError(
                f"expected {shape[0] * shape[1]} entries, got {a.size}"
            )
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim={a.ndim}")
    if shape is not None and a.shape != shape:
        raise ValidationError(f"expected shape {shape}, got {a.shape}")
    return a


def is_hermitian(a: np.ndarray, tol: float = ATOL_HERM) -> bool:
    a = np.asarray(a, dtype=complex)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and bool(
        np.max(np.abs(a - a.conj().T), initial=0.0) <= tol
    )


def assert_hermitian(a: np.ndarray, tol: float = ATOL_HERM) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a, tol):
        raise ValidationError("matrix is not Hermitian within tolerance")
    return a


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """(A + A†)/2 -- used to scrub float asymmetry from computed results."""
    a = np.asarray(a, dtype=complex)
    return (a + a.conj().T) / 2


def eigvals_hermitian(a: np.ndarray, tol: float = ATOL_HERM) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(assert_hermitian(a, tol))


def trace_norm(a: np.ndarray, tol: float = ATOL_HERM) -> float:
    """Half the sum of absolute eigenvalues of a Hermitian matrix.

    With this normalization the distance between two density matrices lands
    in [0, 1], and orthogonal pure states sit at distance exactly 1.
    """
    return float(0.5 * np.sum(np.abs(eigvals_hermitian(a, tol))))


def is_psd(a: np.ndarray, tol: float = ATOL_STATE) -> bool:
    """True iff the Hermitian matrix has minimum eigenvalue >= -tol."""
    w = eigvals_hermitian(a)
    return bool(w.size == 0 or w[0] >= -tol)


def operator_norm_inf(a: np.ndarray, mode: str = "operator") -> float:
    """Matrix infinity norm.

    ``mode="operator"`` returns the largest singular value (the norm induced
    by the Euclidean vector norm); ``mode="rowsum"`` returns the maximum
    absolute row sum. Both coincide with max |entry| on real diagonal input.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValidationError("operator_norm_inf expects a matrix")
    if mode == "operator":
        if min(a.shape) == 0:
            return 0.0
        return float(np.linalg.svd(a, compute_uv=False)[0])
    if mode == "rowsum":
        if a.shape[0] == 0:
            return 0.0
        return float(np.max(np.sum(np.abs(a), axis=1)))
    raise ValidationError(f"unknown norm mode {mode!r}")


def _frozen_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """A normalized state vector; amplitudes index the computational basis."""

    amplitudes: np.ndarray
    atol: float = ATOL_STATE

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise ValidationError("empty state vector")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > self.atol:
            raise ValidationError(
                f"state vector not normalized: sum |a_i|^2 = {norm_sq!r}"
            )
        object.__setattr__(self, "amplitudes", _frozen_array(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def inner(self, other: "PureState") -> complex:
        if self.dim != other.dim:
            raise ValidationError("dimension mismatch")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self) -> "DensityMatrix":
        v = self.amplitudes
        return DensityMatrix(np.outer(v, v.conj()))

    @classmethod
    def basis_state(cls, dim: int, index: int) -> "PureState":
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls(v)


@dataclass(frozen=True)
class DensityMatrix:
    """A positive semidefinite, unit-trace Hermitian matrix."""

    matrix: np.ndarray
    atol: float = ATOL_STATE

    def __post_init__(self):
        m = assert_hermitian(np.asarray(self.matrix, dtype=complex), ATOL_HERM)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > self.atol:
            raise ValidationError(f"trace is {tr!r}, expected 1")
        if not is_psd(m, self.atol):
            raise ValidationError("matrix has a negative eigenvalue beyond tolerance")
        object.__setattr__(self, "matrix", _frozen_array(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def from_bloch(cls, r: Sequence[float]) -> "DensityMatrix":
        """Qubit state (I + r.sigma)/2 from a Bloch vector with |r| <= 1."""
        r = np.asarray(r, dtype=float)
        if r.shape != (3,):
            raise ValidationError("Bloch vector must have 3 components")
        if np.linalg.norm(r) > 1 + ATOL_STATE:
            raise ValidationError("Bloch vector lies outside the unit ball")
        m = (np.eye(2, dtype=complex) + sum(c * p for c, p in zip(r, PAULIS))) / 2
        return cls(m)


def bloch_vector(rho: DensityMatrix) -> np.ndarray:
    """Bloch coordinates (tr(X rho), tr(Y rho), tr(Z rho)) of a qubit state."""
    if rho.dim != 2:
        raise ValidationError("Bloch coordinates are defined for qubits only")
    return np.array([float(np.trace(p @ rho.matrix).real) for p in PAULIS])


@dataclass(frozen=True)
class Povm:
    """A measurement: PSD elements summing to the identity, with labels."""

    elements: tuple
    labels: tuple = ()
    atol: float = ATOL_STATE

    def __post_init__(self):
        elems = tuple(
            assert_hermitian(np.asarray(e, dtype=complex), ATOL_HERM)
            for e in self.elements
        )
        if not elems:
            raise ValidationError("a POVM needs at least one element")
        dim = elems[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for e in elems:
            if e.shape != (dim, dim):
                raise ValidationError("POVM elements must share one dimension")
            if not is_psd(e, self.atol):
                raise ValidationError("POVM element is not PSD")
            total = total + e
        if np.max(np.abs(total - np.eye(dim))) > self.atol:
            raise ValidationError("POVM elements do not sum to the identity")
        labels = tuple(self.labels) if self.labels else tuple(range(len(elems)))
        if len(labels) != len(elems):
            raise ValidationError("one label per POVM element required")
        object.__setattr__(self, "elements", tuple(_frozen_array(e) for e in elems))
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


def binary_povm(accept: np.ndarray, labels: tuple = (1, 0), atol: float = ATOL_STATE) -> Povm:
    """Two-outcome POVM {E, I−E} from the accepting element E."""
    e = assert_hermitian(np.asarray(accept, dtype=complex), ATOL_HERM)
    return Povm((e, np.eye(e.shape[0]) - e), labels, atol)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix, tol: float = ATOL_HERM) -> float:
    """Trace distance, i.e. trace_norm(rho − sigma); a metric on states."""
    if rho.dim != sigma.dim:
        raise ValidationError("dimension mismatch")
    d = trace_norm(rho.matrix - sigma.matrix, tol)
    return float(min(max(d, 0.0), 1.0))


def povm_probabilities(povm: Povm, rho: DensityMatrix, atol: float = ATOL_STATE) -> np.ndarray:
    """Outcome probabilities tr(E_i rho), clamped into [0, 1] after validation."""
    if povm.dim != rho.dim:
        raise ValidationError("dimension mismatch")
    probs = np.array(
        [float(np.trace(e @ rho.matrix).real) for e in povm.elements]
    )
    if np.any(probs < -atol) or np.any(probs > 1 + atol):
        raise ValidationError("measurement probability outside [0, 1] beyond tolerance")
    total = float(np.sum(probs))
    if abs(total - 1.0) > ATOL_IDENT:
        raise ValidationError(f"probabilities sum to {total!r}, expected 1")
    return np.clip(probs, 0.0, 1.0)


def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(v / np.linalg.norm(v))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state: normalized Wishart matrix of the given rank."""
    k = rank or dim
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)
