"""Certified brackets for operator norms ||A||_{p->p}."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import _lp
from .linalg import jacobi_svd
from .operators import DenseOperator

POWER_RESTARTS = 8
POWER_MAX_ITER = 500
POWER_SEED = 20160
# relative rounding allowance on the Jacobi singular value (backward stable,
# so errors are a few ulps of ||A||; this leaves orders of magnitude spare)
SVD_RTOL = 1e-13


@dataclass(frozen=True)
class NormBracket:
    lower: float
    upper: float
    method: tuple[str, ...]

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "method": list(self.method)}


def _col_sum_norm(A: np.ndarray) -> float:
    return float(np.abs(A).sum(axis=0).max())


def _row_sum_norm(A: np.ndarray) -> float:
    return float(np.abs(A).sum(axis=1).max())


def _vec_norm(x: np.ndarray, p: float) -> float:
    return float(_lp(np.abs(x), p))


def _dual_vector(y: np.ndarray, p: float) -> np.ndarray:
    """The norming functional of y in l_p, as a vector in l_q (q = p')."""
    ay = np.abs(y)
    ny = _vec_norm(y, p)
    if ny == 0:
        return np.zeros_like(y)
    sgn = np.where(ay > 0, y / np.where(ay > 0, ay, 1), 0)
    return sgn * (ay / ny) ** (p - 1)


def power_method_lower(A: np.ndarray, p: float, restarts: int = POWER_RESTARTS,
                       max_iter: int = POWER_MAX_ITER) -> float:
    """Best ||Ax||_p / ||x||_p seen by the dual-norm power iteration.

    Every iterate is a genuine vector, so the value is a lower bound on the
    norm regardless of convergence.
    """
    rows, cols = A.shape
    q = p / (p - 1)
    rng = np.random.default_rng(POWER_SEED)
    starts = [np.eye(cols)[j] for j in range(cols)]
    starts.append(np.ones(cols))
    while len(starts) < restarts:
        v = rng.standard_normal(cols)
        if np.iscomplexobj(A):
            v = v + 1j * rng.standard_normal(cols)
        starts.append(v)
    best = 0.0
    for x in starts[: max(restarts, cols + 1)]:
        x = x.astype(A.dtype)
        nx = _vec_norm(x, p)
        if nx == 0:
            continue
        x = x / nx
        for _ in range(max_iter):
            y = A @ x
            best = max(best, _vec_norm(y, p))
            z = A.conj().T @ _dual_vector(y, p)
            nz = _vec_norm(z, q)
            if nz == 0 or nz <= float(np.real(np.vdot(z, x))) * (1 + 1e-15):
                break
            x = _dual_vector(z, q)
            x = x / _vec_norm(x, p)
    return best


def operator_norm(A: DenseOperator) -> NormBracket:
    M = A.entries
    p = A.p
    nz = M != 0
    if nz.sum(axis=0).max() <= 1 and nz.sum(axis=1).max() <= 1:
        # permutation times diagonal: the norm is the largest modulus on every l_p
        v = float(np.abs(M).max())
        return NormBracket(v, v, ("monomial",))
    if p == 1:
        v = _col_sum_norm(M)
        return NormBracket(v, v, ("column-sum",))
    if p == math.inf:
        v = _row_sum_norm(M)
        return NormBracket(v, v, ("row-sum",))
    if p == 2:
        v = float(jacobi_svd(M)[1][0])
        return NormBracket(v * (1 - SVD_RTOL), v * (1 + SVD_RTOL), ("jacobi-svd",))
    # Riesz-Thorin between the exact l_1 and l_inf norms
    upper = _col_sum_norm(M) ** (1 / p) * _row_sum_norm(M) ** (1 - 1 / p)
    lower = min(power_method_lower(M, p), upper)
    return NormBracket(lower, upper, ("power-method", "riesz-thorin"))
