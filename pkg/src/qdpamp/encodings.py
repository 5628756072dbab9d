"""Classical-to-quantum feature maps, their kernels, and the Gamma statistic.

Three encodings are supported:

* ``basis``     -- b-bit integer entries, mapped to a uniform superposition of
  the corresponding computational basis states (dimension 2**b).
* ``amplitude`` -- a normalized complex vector used directly as amplitudes
  (dimension n).
* ``rotation``  -- angles in [0, 2pi]; entry k contributes cos(x_k) to the
  amplitude of bitstrings with q_k = 1 and sin(x_k) where q_k = 0
  (dimension 2**n).

The kernel of two datasets is the squared inner product of their encoded
states. ``min_adjacent_kernel`` returns the published closed forms for the
worst kernel over datasets differing in a single entry; see the docstring
there for the overlap-convention caveat.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UnsupportedDimensionError, ValidationError
from .linalg import ATOL_STATE, PureState

MODES = ("basis", "amplitude", "rotation")
MAX_DIM = 64  # hard ceiling for encoded state dimension


@dataclass(frozen=True)
class EncodingSpec:
    """Which feature map to apply; basis mode needs the entry bit width."""

    kind: str
    bit_width: int | None = None

    def __post_init__(self):
        if self.kind not in MODES:
            raise ValidationError(f"unknown encoding kind {self.kind!r}")
        if self.kind == "basis":
            if not isinstance(self.bit_width, int) or self.bit_width < 1:
                raise ValidationError("basis encoding requires a positive bit_width")
            if 2 ** self.bit_width > MAX_DIM:
                raise UnsupportedDimensionError(
                    f"basis encoding with bit_width={self.bit_width} exceeds dim {MAX_DIM}"
                )


@dataclass(frozen=True)
class Dataset:
    """A classical input vector in one of the three encoding modes."""

    mode: str
    values: tuple
    bit_width: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"unknown dataset mode {self.mode!r}")
        vals = tuple(self.values)
        if not vals:
            raise ValidationError("empty dataset")
        if self.mode == "basis":
            if self.bit_width is None or self.bit_width < 1:
                raise ValidationError("basis dataset requires a positive bit_width")
            for v in vals:
                if not isinstance(v, (int, np.integer)) or v < 0:
                    raise ValidationError("basis entries must be nonnegative integers")
                if v >= 2 ** self.bit_width:
                    raise ValidationError(
                        f"entry {v} does not fit in {self.bit_width} bits"
                    )
            vals = tuple(int(v) for v in vals)
        elif self.mode == "amplitude":
            vals = tuple(complex(v) for v in vals)
            norm_sq = sum(abs(v) ** 2 for v in vals)
            if abs(norm_sq - 1.0) > ATOL_STATE:
                raise ValidationError(
                    f"amplitude dataset not normalized: sum |x_i|^2 = {norm_sq!r}"
                )
        else:
            vals = tuple(float(v) for v in vals)
            for v in vals:
                if not 0.0 <= v <= 2 * np.pi:
                    raise ValidationError("rotation entries must lie in [0, 2pi]")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    def to_json(self) -> str:
        doc: dict = {"mode": self.mode}
        if self.mode == "amplitude":
            doc["values"] = [[v.real, v.imag] for v in self.values]
        else:
            doc["values"] = list(self.values)
        if self.bit_width is not None:
            doc["bit_width"] = self.bit_width
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Dataset":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid dataset JSON: {exc}") from exc
        if not isinstance(doc, dict) or "mode" not in doc or "values" not in doc:
            raise ValidationError("dataset JSON needs 'mode' and 'values'")
        mode = doc["mode"]
        raw = doc["values"]
        if mode == "amplitude":
            values = tuple(
                complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
                for v in raw
            )
        else:
            values = tuple(raw)
        return cls(mode=mode, values=values, bit_width=doc.get("bit_width"))


def _check_spec_match(x: Dataset, spec: EncodingSpec) -> None:
    if x.mode != spec.kind:
        raise ValidationError(f"dataset mode {x.mode!r} does not match spec {spec.kind!r}")
    if spec.kind == "basis" and x.bit_width != spec.bit_width:
        raise ValidationError("dataset and spec disagree on bit_width")


def encode(x: Dataset, spec: EncodingSpec) -> PureState:
    """Apply the feature map, returning a normalized pure state.

    Basis mode accumulates one unit of amplitude per entry and renormalizes,
    so duplicate entries merge; the closed-form adjacent-kernel values assume
    all entries are distinct.
    """
    _check_spec_match(x, spec)
    if spec.kind == "amplitude":
        return PureState(np.asarray(x.values, dtype=complex))
    if spec.kind == "basis":
        dim = 2 ** spec.bit_width
        v = np.zeros(dim, dtype=complex)
        for entry in x.values:
            v[entry] += 1.0
        return PureState(v / np.linalg.norm(v))
    # rotation: amplitude over bitstrings q with q_1 the most significant bit;
    # bit q_k = 1 contributes cos(x_k), q_k = 0 contributes sin(x_k)
    n = x.n
    if 2 ** n > MAX_DIM:
        raise UnsupportedDimensionError(f"rotation encoding of n={n} entries exceeds dim {MAX_DIM}")
    amps = np.ones(1, dtype=complex)
    for angle in x.values:
        amps = np.concatenate([np.sin(angle) * amps, np.cos(angle) * amps])
    # the fold above is q_n-major; reorder to q_1-major indexing
    perm = [int(f"{idx:0{n}b}"[::-1], 2) for idx in range(2 ** n)]
    return PureState(amps[perm])


def kernel(x: Dataset, x_prime: Dataset, spec: EncodingSpec) -> float:
    """Squared inner product of the two encoded states."""
    if x.mode != x_prime.mode or x.n != x_prime.n:
        raise ValidationError("kernel arguments must share mode and length")
    k = abs(encode(x, spec).inner(encode(x_prime, spec))) ** 2
    if k > 1 + ATOL_STATE:
        raise ValidationError(f"kernel value {k!r} exceeds 1 beyond tolerance")
    return float(min(max(k, 0.0), 1.0))


def gamma(x: Dataset) -> float:
    """Largest squared modulus among the entries of an amplitude dataset."""
    if x.mode != "amplitude":
        raise ValidationError("Gamma is defined for amplitude datasets only")
    return float(max(abs(v) ** 2 for v in x.values))


def min_adjacent_kernel(
    spec: EncodingSpec,
    n: int | None = None,
    gamma_value: float | None = None,
    squared_overlap: bool = False,
) -> float:
    """Closed-form worst kernel over single-entry changes.

    Published values: basis 1 - 1/n, amplitude 1 - Gamma(x), rotation 0.
    These are overlap (not squared-overlap) quantities: the true squared
    kernel of distinct-entry basis neighbors is ((n-1)/n)**2, which is what
    the inner-product distance identity consumes. ``squared_overlap=True``
    returns the squared variants so callers can audit both conventions.
    """
    if spec.kind == "rotation":
        return 0.0
    if spec.kind == "basis":
        if n is None or n < 1:
            raise ValidationError("basis mode requires the entry count n >= 1")
        value = 1.0 - 1.0 / n
    else:
        if gamma_value is None:
            raise ValidationError("amplitude mode requires Gamma")
        if not 0.0 <= gamma_value <= 1.0:
            raise ValidationError("Gamma must lie in [0, 1]")
        value = 1.0 - gamma_value
    return float(value ** 2) if squared_overlap else float(value)


def are_neighbors(x: Dataset, x_prime: Dataset, tol: float = 1e-12) -> bool:
    """True iff the datasets differ in exactly one entry."""
    if x.mode != x_prime.mode or x.n != x_prime.n:
        raise ValidationError("neighbor test requires matching mode and length")
    if x.mode == "basis":
        differing = sum(a != b for a, b in zip(x.values, x_prime.values))
    else:
        differing = sum(
            abs(complex(a) - complex(b)) > tol
            for a, b in zip(x.values, x_prime.values)
        )
    return differing == 1
