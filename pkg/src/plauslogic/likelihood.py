"""Likelihood vectors and admissible 0/1 transforms.

A plausible proposition with ``k`` truth classes is stored as the diagonal of
its likelihood matrix: a probability vector whose index 0 is the "most true"
class.  An admissible transform is a 0/1 matrix with exactly one 1 per
column; it is stored as the column -> row function, so ``G rho G^T`` reduces
to a push-forward of the categorical distribution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

NORMALIZATION_TOL = 1e-9


class Likelihood:
    """Immutable probability vector over ``k >= 2`` ordered truth classes.

    Parameters
    ----------
    probs : sequence of float
        Nonnegative class probabilities.  A sum within ``tol`` of 1 is
        silently renormalized; anything further off is rejected.
    tol : float
        Normalization tolerance.
    """

    __slots__ = ("_probs",)

    def __init__(self, probs: Iterable[float], tol: float = NORMALIZATION_TOL):
        arr = np.array(list(probs) if not isinstance(probs, np.ndarray) else probs,
                       dtype=float).ravel()
        if arr.size < 2:
            raise ValueError(f"a likelihood needs at least 2 classes, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("likelihood entries must be finite")
        if np.any(arr < 0):
            raise ValueError(f"likelihood entries must be nonnegative: {arr.tolist()}")
        total = arr.sum()
        if abs(total - 1.0) > tol:
            raise ValueError(f"likelihood entries sum to {total!r}, not 1")
        if total != 1.0:
            arr = arr / total
        arr.setflags(write=False)
        self._probs = arr

    @classmethod
    def boolean(cls, p: float) -> "Likelihood":
        """The 2-valued likelihood ``(p, 1 - p)``."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range: {p!r}")
        return cls((p, 1.0 - p))

    @classmethod
    def deterministic(cls, cls_index: int, k: int) -> "Likelihood":
        """Point mass on one class."""
        if not 0 <= cls_index < k:
            raise ValueError(f"class {cls_index} out of range for k={k}")
        probs = np.zeros(k)
        probs[cls_index] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, k: int) -> "Likelihood":
        return cls(np.full(k, 1.0 / k))

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def k(self) -> int:
        return self._probs.size

    def __len__(self) -> int:
        return self._probs.size

    def __getitem__(self, i):
        return self._probs[i]

    def __iter__(self):
        return iter(self._probs.tolist())

    def __array__(self, dtype=None, copy=None):
        return self._probs if dtype is None else self._probs.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Likelihood):
            return NotImplemented
        return np.array_equal(self._probs, other._probs)

    def __hash__(self) -> int:
        return hash(self._probs.tobytes())

    def __repr__(self) -> str:
        return f"Likelihood({self._probs.tolist()})"

    def matrix(self) -> np.ndarray:
        """The diagonal likelihood matrix."""
        return np.diag(self._probs)

    def to_json(self) -> str:
        return json.dumps(self._probs.tolist())

    @classmethod
    def from_json(cls, text: str, tol: float = NORMALIZATION_TOL) -> "Likelihood":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("likelihood JSON must be an array of numbers")
        return cls(data, tol=tol)


class Validation(NamedTuple):
    """Outcome of :func:`validate`.  ``column`` is the first offending column."""

    ok: bool
    column: int | None = None
    reason: str = ""


@dataclass(frozen=True)
class AdmissibleMap:
    """A function from ``input_dim`` classes to ``output_dim`` classes.

    ``targets[n]`` is the row holding the single 1 of column ``n`` of the
    equivalent ``output_dim x input_dim`` 0/1 matrix.
    """

    input_dim: int
    output_dim: int
    targets: tuple[int, ...]

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        if self.input_dim < 1 or self.output_dim < 1:
            raise ValueError("dimensions must be positive")
        if len(targets) != self.input_dim:
            raise ValueError(
                f"expected {self.input_dim} column targets, got {len(targets)}")
        for n, t in enumerate(targets):
            if not 0 <= t < self.output_dim:
                raise ValueError(f"column {n} targets row {t}, outside [0, {self.output_dim})")

    @classmethod
    def identity(cls, k: int) -> "AdmissibleMap":
        return cls(k, k, tuple(range(k)))

    @classmethod
    def constant(cls, input_dim: int, output_dim: int, row: int = 0) -> "AdmissibleMap":
        return cls(input_dim, output_dim, (row,) * input_dim)

    @classmethod
    def from_matrix(cls, matrix) -> "AdmissibleMap":
        """Extract the column map from a 0/1 matrix, raising on violations."""
        m = np.asarray(matrix)
        report = validate(m)
        if not report.ok:
            raise ValueError(f"not admissible: column {report.column}: {report.reason}")
        return cls(m.shape[1], m.shape[0], tuple(int(np.argmax(m[:, n])) for n in range(m.shape[1])))

    def matrix(self) -> np.ndarray:
        """Materialize the ``M x N`` 0/1 matrix."""
        return matrix_form(self)

    def __call__(self, rho: Likelihood) -> Likelihood:
        return apply(self, rho)

    def to_dict(self) -> dict:
        return {"inputDim": self.input_dim, "outputDim": self.output_dim,
                "columns": list(self.targets)}

    @classmethod
    def from_dict(cls, data: dict) -> "AdmissibleMap":
        try:
            return cls(int(data["inputDim"]), int(data["outputDim"]), tuple(data["columns"]))
        except KeyError as exc:
            raise ValueError(f"admissible map JSON is missing {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "AdmissibleMap":
        return cls.from_dict(json.loads(text))


def tensor(a: Likelihood, b: Likelihood) -> Likelihood:
    """Tensor product, left operand major: entry ``i*k_b + j`` is ``a[i]*b[j]``."""
    return Likelihood(np.outer(a.probs, b.probs).ravel())


def tensor_all(factors: Sequence[Likelihood]) -> Likelihood:
    if not factors:
        raise ValueError("need at least one factor")
    out = factors[0]
    for f in factors[1:]:
        out = tensor(out, f)
    return out


def apply(g: AdmissibleMap, rho: Likelihood) -> Likelihood:
    """Push ``rho`` forward through ``g``; equal to the diagonal of ``G rho G^T``."""
    if rho.k != g.input_dim:
        raise ValueError(f"map expects dimension {g.input_dim}, likelihood has {rho.k}")
    out = np.bincount(g.targets, weights=rho.probs, minlength=g.output_dim)
    # bincount sums in column order, so total mass is unchanged up to rounding
    return Likelihood(out)


def matrix_form(g: AdmissibleMap) -> np.ndarray:
    m = np.zeros((g.output_dim, g.input_dim), dtype=int)
    m[list(g.targets), np.arange(g.input_dim)] = 1
    return m


def validate(candidate, output_dim: int | None = None) -> Validation:
    """Check a raw 0/1 matrix or a column-target list for admissibility.

    A 2-D array is read as a matrix; a flat sequence is read as column targets
    and needs ``output_dim`` to be range-checked.
    """
    arr = np.asarray(candidate)
    if arr.ndim == 1:
        for n, t in enumerate(arr.tolist()):
            if not isinstance(t, (int, np.integer)) or isinstance(t, bool):
                return Validation(False, n, f"target {t!r} is not an integer")
            if t < 0 or (output_dim is not None and t >= output_dim):
                return Validation(False, n, f"target {t} out of range")
        return Validation(True)
    if arr.ndim != 2:
        return Validation(False, None, f"expected a matrix, got {arr.ndim} dimensions")
    for n in range(arr.shape[1]):
        col = arr[:, n]
        if not np.all((col == 0) | (col == 1)):
            return Validation(False, n, "entries must be 0 or 1")
        ones = int(np.count_nonzero(col))
        if ones == 0:
            return Validation(False, n, "no one")
        if ones > 1:
            return Validation(False, n, f"{ones} ones")
    return Validation(True)


def compose(outer: AdmissibleMap, inner: AdmissibleMap) -> AdmissibleMap:
    """The map ``outer o inner`` (apply ``inner`` first)."""
    if inner.output_dim != outer.input_dim:
        raise ValueError("dimension mismatch in composition")
    return AdmissibleMap(inner.input_dim, outer.output_dim,
                         tuple(outer.targets[t] for t in inner.targets))


def kron(g1: AdmissibleMap, g2: AdmissibleMap) -> AdmissibleMap:
    """Map acting independently on the two factors of a tensor product."""
    return AdmissibleMap(
        g1.input_dim * g2.input_dim,
        g1.output_dim * g2.output_dim,
        tuple(t1 * g2.output_dim + t2 for t1 in g1.targets for t2 in g2.targets),
    )
