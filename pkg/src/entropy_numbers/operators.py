"""Operator representations: diagonal weight sequences and small dense matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    NumericalFailure,
    UnsupportedOperationError,
)
from .geometry import Field, check_p
from .linalg import jacobi_svd

MAX_POLAR_DIM = 4
RECON_TOL = 1e-9


@dataclass(frozen=True)
class DiagonalSpec:
    """Nonincreasing weights ``prefix`` followed by the constant ``tail``.

    ``sigma(k)`` (1-based) is ``prefix[k-1]`` for ``k <= len(prefix)`` and
    ``tail`` afterwards.
    """

    prefix: tuple[float, ...] = ()
    tail: float = 0.0
    p: float = 2.0
    field: Field = Field.REAL

    def __post_init__(self):
        prefix = tuple(float(x) for x in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", float(self.tail))
        object.__setattr__(self, "p", check_p(self.p))
        object.__setattr__(self, "field", Field.parse(self.field))
        vals = prefix + (self.tail,)
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise InvalidParameterError("diagonal weights must be finite and nonnegative")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise InvalidParameterError("diagonal weights must be nonincreasing (tail included)")

    def sigma(self, k: int) -> float:
        if k < 1:
            raise InvalidParameterError("weights are indexed from 1")
        return self.prefix[k - 1] if k <= len(self.prefix) else self.tail

    def weights(self, n: int) -> np.ndarray:
        return np.array([self.sigma(k) for k in range(1, n + 1)], dtype=float)

    @property
    def norm(self) -> float:
        return self.sigma(1)

    @classmethod
    def identity(cls, p=2.0, field=Field.REAL) -> "DiagonalSpec":
        return cls((), 1.0, p, field)


@dataclass(frozen=True)
class DenseOperator:
    """A rows x cols matrix acting l_p^cols -> l_p^rows over ``field``."""

    entries: np.ndarray
    p: float = 2.0
    field: Field = Field.REAL

    def __post_init__(self):
        field = Field.parse(self.field)
        dtype = complex if field is Field.COMPLEX else float
        arr = np.array(self.entries, dtype=dtype)
        if arr.ndim != 2 or 0 in arr.shape:
            raise InvalidParameterError(f"operator needs a nonempty 2-d matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameterError("operator entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "p", check_p(self.p))
        object.__setattr__(self, "field", field)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def is_diagonal(self) -> bool:
        A = self.entries
        return A.shape[0] == A.shape[1] and np.count_nonzero(A - np.diag(np.diag(A))) == 0

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def reduced(self) -> "DenseOperator | None":
        """Drop zero rows and zero columns; ``None`` for the zero operator.

        Both removals leave the image of the unit ball isometrically
        unchanged, so every entropy number is preserved.
        """
        A = self.entries
        keep_r = np.any(A != 0, axis=1)
        keep_c = np.any(A != 0, axis=0)
        if not keep_r.any():
            return None
        if keep_r.all() and keep_c.all():
            return self
        return DenseOperator(A[np.ix_(keep_r, keep_c)], self.p, self.field)

    def to_json(self) -> dict:
        A = self.entries
        if self.field is Field.COMPLEX:
            entries = [[[float(z.real), float(z.imag)] for z in row] for row in A]
        else:
            entries = A.tolist()
        return {"field": self.field.value, "p": _p_json(self.p), "entries": entries}


def _p_json(p: float):
    return "inf" if p == math.inf else p


def diag(values: Sequence[complex], p=2.0, field=Field.REAL) -> DenseOperator:
    return DenseOperator(np.diag(np.asarray(values)), p, field)


def identity(n: int, p=2.0, field=Field.REAL) -> DenseOperator:
    return DenseOperator(np.eye(n), p, field)


def zeros(rows: int, cols: int, p=2.0, field=Field.REAL) -> DenseOperator:
    return DenseOperator(np.zeros((rows, cols)), p, field)


# --- truncation -------------------------------------------------------------


@dataclass(frozen=True)
class TruncationScheme:
    """Coordinate projections P_n onto the first n basis vectors.

    On every l_p these have norm 1, so with Q_n = P_n the compression
    Q_n T P_n never has larger entropy numbers than T.
    """

    kind: str = "coordinate-projection"

    def projection(self, n: int, dim: int, p=2.0, field=Field.REAL) -> DenseOperator:
        if not 0 <= n <= dim:
            raise InvalidParameterError("projection rank must lie in [0, dim]")
        P = np.zeros((dim, dim))
        P[:n, :n] = np.eye(n)
        return DenseOperator(P, p, field)


def truncate(spec: DiagonalSpec, n: int) -> DenseOperator:
    """The leading n x n block of the diagonal operator."""
    if n < 1:
        raise InvalidParameterError("truncation size must be positive")
    return DenseOperator(np.diag(spec.weights(n)), spec.p, spec.field)


# --- algebra ----------------------------------------------------------------


def _conformable(A: DenseOperator, B: DenseOperator) -> None:
    if A.field is not B.field:
        raise DimensionMismatchError("operators are over different fields")
    if A.p != B.p:
        raise DimensionMismatchError("operators act on different l_p spaces")


def compose(A: DenseOperator, B: DenseOperator) -> DenseOperator:
    """A after B, i.e. the matrix product A @ B."""
    _conformable(A, B)
    if A.cols != B.rows:
        raise DimensionMismatchError(f"cannot compose {A.shape} with {B.shape}")
    return DenseOperator(A.entries @ B.entries, A.p, A.field)


def add(A: DenseOperator, B: DenseOperator) -> DenseOperator:
    _conformable(A, B)
    if A.shape != B.shape:
        raise DimensionMismatchError(f"cannot add {A.shape} and {B.shape}")
    return DenseOperator(A.entries + B.entries, A.p, A.field)


def scale(alpha: complex, A: DenseOperator) -> DenseOperator:
    if isinstance(alpha, complex) and alpha.imag != 0 and A.field is Field.REAL:
        raise DimensionMismatchError("complex scalar on a real operator")
    return DenseOperator(alpha * A.entries, A.p, A.field)


# --- Hilbert-space operations -----------------------------------------------


def _require_hilbert(A: DenseOperator, what: str) -> None:
    if A.p != 2:
        raise UnsupportedOperationError(f"{what} is only defined here for p = 2, got p = {A.p}")


def adjoint(A: DenseOperator) -> DenseOperator:
    _require_hilbert(A, "adjoint")
    return DenseOperator(A.entries.conj().T, A.p, A.field)


@dataclass(frozen=True)
class PolarParts:
    V: DenseOperator
    modulus: DenseOperator
    singular_values: np.ndarray


def _cast(M: np.ndarray, field: Field) -> np.ndarray:
    return M if field is Field.COMPLEX else M.real


def polar(A: DenseOperator) -> PolarParts:
    """T = V|T| with V vanishing on the kernel of |T|."""
    _require_hilbert(A, "polar decomposition")
    if max(A.shape) > MAX_POLAR_DIM:
        raise UnsupportedOperationError(f"polar decomposition limited to dimension {MAX_POLAR_DIM}")
    U, s, W = jacobi_svd(A.entries)
    cutoff = 64 * np.finfo(float).eps * max(1.0, float(s[0]) if len(s) else 0.0)
    live = s > cutoff
    modulus = (W * s) @ W.conj().T
    modulus = 0.5 * (modulus + modulus.conj().T)
    V = U[:, live] @ W[:, live].conj().T
    modulus = _cast(modulus, A.field)
    V = _cast(V, A.field)
    recon = float(np.abs(V @ modulus - A.entries).max())
    gram = float(np.abs(modulus @ modulus - A.entries.conj().T @ A.entries).max())
    if recon > RECON_TOL or gram > RECON_TOL:
        raise NumericalFailure("polar factors do not reproduce the operator", max(recon, gram))
    return PolarParts(
        V=DenseOperator(V, A.p, A.field),
        modulus=DenseOperator(modulus, A.p, A.field),
        singular_values=s,
    )


def modulus(A: DenseOperator) -> DenseOperator:
    """|A|, the positive square root of A*A."""
    return polar(A).modulus
