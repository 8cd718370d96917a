"""Scalar fields, l_p norms, and certified discretizations of unit balls.

Clouds are stored in *real layout*: a complex vector of length ``d`` is kept
as ``2d`` reals ``(re_1, im_1, ..., re_d, im_d)``.  Every geometric routine
that takes a ``field`` argument interprets the layout accordingly, so the
complex l_p norm is computed on the coordinate moduli.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import TYPE_CHECKING, Optional

import numpy as np

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidParameterError,
    UnsupportedDimensionError,
)

if TYPE_CHECKING:
    from .norms import NormBracket
    from .operators import DenseOperator

MAX_REAL_DIM = 4
DEFAULT_POINT_BUDGET = 250_000


class Field(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def real_factor(self) -> int:
        return 2 if self is Field.COMPLEX else 1

    @classmethod
    def parse(cls, value) -> "Field":
        if isinstance(value, Field):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidParameterError(f"unknown field {value!r}; use 'real' or 'complex'") from None


def check_p(p) -> float:
    """Validate an l_p exponent and return it as a float (``inf`` allowed)."""
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in {"inf", "infinity", "oo"} else float(p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidParameterError(f"p must lie in [1, inf], got {p}")
    return p


def _lp(absvals: np.ndarray, p: float) -> np.ndarray:
    """l_p norm along the last axis of a nonnegative array."""
    if absvals.shape[-1] == 0:
        return np.zeros(absvals.shape[:-1])
    if p == math.inf:
        return absvals.max(axis=-1)
    if p == 1:
        return absvals.sum(axis=-1)
    if p == 2:
        return np.sqrt(np.einsum("...i,...i->...", absvals, absvals))
    # scale by the max entry so large p does not overflow
    top = absvals.max(axis=-1, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    return top[..., 0] * ((absvals / safe) ** p).sum(axis=-1) ** (1.0 / p)


def p_norm(v, p) -> float:
    """l_p norm of a real or complex vector."""
    p = check_p(p)
    arr = np.abs(np.asarray(v).ravel())
    return float(_lp(arr, p))


def p_distance(u, v, p) -> float:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"vectors have shapes {u.shape} and {v.shape}")
    return p_norm(u - v, p)


def moduli(points: np.ndarray, field: Field) -> np.ndarray:
    """Coordinate moduli of real-layout points, shape (..., dim)."""
    if field is Field.COMPLEX:
        return np.hypot(points[..., 0::2], points[..., 1::2])
    return np.abs(points)


def row_norms(points: np.ndarray, p: float, field: Field) -> np.ndarray:
    return _lp(moduli(points, field), p)


def distances_to(points: np.ndarray, x: np.ndarray, p: float, field: Field) -> np.ndarray:
    """l_p distance from every row of ``points`` to the single point ``x``."""
    return row_norms(points - x, p, field)


def realify(vectors: np.ndarray) -> np.ndarray:
    """(N, d) complex -> (N, 2d) real layout."""
    vectors = np.asarray(vectors, dtype=complex)
    out = np.empty(vectors.shape[:-1] + (2 * vectors.shape[-1],))
    out[..., 0::2] = vectors.real
    out[..., 1::2] = vectors.imag
    return out


def complexify(points: np.ndarray) -> np.ndarray:
    return points[..., 0::2] + 1j * points[..., 1::2]


@dataclass(frozen=True)
class PointCloud:
    """A finite sample of a set S with an explicit density certificate.

    ``density`` bounds the distance from any point of S to the nearest cloud
    point.  ``subset_certified`` says every cloud point lies in S itself.
    """

    ambient_dim: int
    p: float
    field: Field
    points: np.ndarray
    density: float
    subset_certified: bool = True
    note: str = dc_field(default="", compare=False)

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[1] != self.ambient_dim:
            raise DimensionMismatchError(
                f"points of shape {self.points.shape} do not match ambient_dim={self.ambient_dim}"
            )

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def max_norm(self) -> float:
        if len(self) == 0:
            return 0.0
        return float(row_norms(self.points, self.p, self.field).max())


# --- unit-ball discretization ----------------------------------------------
#
# Grid of spacing h = 1/m over [-1, 1]^D (D the real dimension).  Keep grid
# points inside the ball, and radially project onto the sphere every outside
# grid point whose closed grid cell meets the ball.  For x in the ball, its
# nearest grid point g has per-real-coordinate error <= h/2, so
# ||x - g|| <= e := (h/2) * c, c = ||(1,..,1)|| in the norm at hand
# (c = d^(1/p) real, sqrt(2) d^(1/p) complex).  If g is outside the ball:
#   * p = 2: radial projection is the metric projection onto a convex set
#     in a Hilbert space, nonexpansive, and x is a fixed point -> error <= e;
#   * otherwise ||x - g/||g|| || <= ||x - g|| + (||g|| - 1)
#                                <= ||x - g|| + (||g|| - ||x||) <= 2e.
# When the ball is the cube itself (real p = inf, or real dimension 1) the
# nearest grid point never leaves the ball and the error is e.


def _eta_factor(dim: int, p: float, field: Field) -> float:
    """eta = factor * h for the grid of spacing h."""
    c = dim ** (0.0 if p == math.inf else 1.0 / p)
    if field is Field.COMPLEX:
        c *= math.sqrt(2.0)
    cube_like = field is Field.REAL and (p == math.inf or dim == 1)
    if cube_like or p == 2:
        return 0.5 * c
    return c


def _ball_volume_fraction(dim: int, p: float, field: Field) -> float:
    """Volume of the unit ball divided by the volume of the cube [-1,1]^D."""
    if p == math.inf:
        return 1.0 if field is Field.REAL else (math.pi / 4) ** dim
    if field is Field.REAL:
        log_v = dim * math.log(2 * math.gamma(1 + 1 / p)) - math.lgamma(1 + dim / p)
        return math.exp(log_v) / 2**dim
    log_v = dim * math.log(math.pi * math.gamma(1 + 2 / p)) - math.lgamma(1 + 2 * dim / p)
    return math.exp(log_v) / 4**dim


def _build_ball_grid(dim: int, p: float, field: Field, m: int) -> np.ndarray:
    real_dim = dim * field.real_factor
    h = 1.0 / m
    axis = np.arange(-m, m + 1, dtype=float) / m
    grid = np.stack(np.meshgrid(*([axis] * real_dim), indexing="ij"), axis=-1).reshape(-1, real_dim)
    norms = row_norms(grid, p, field)
    inside = norms <= 1.0
    # the cell of g meets the ball iff its corner nearest the origin does
    shrunk = np.maximum(np.abs(grid) - h / 2, 0.0)
    touches = ~inside & (row_norms(shrunk, p, field) <= 1.0)
    shell = grid[touches] / norms[touches, None]
    pts = np.concatenate([grid[inside], shell], axis=0)
    return np.unique(pts, axis=0)


def _grid_size_for(dim: int, p: float, field: Field, target_eta: float) -> int:
    return max(1, math.ceil(_eta_factor(dim, p, field) / target_eta - 1e-12))


def _estimated_count(dim: int, p: float, field: Field, m: int) -> float:
    real_dim = dim * field.real_factor
    return _ball_volume_fraction(dim, p, field) * (2 * m + 1) ** real_dim


@lru_cache(maxsize=32)
def _cached_ball(dim: int, p: float, field: Field, m: int) -> np.ndarray:
    pts = _build_ball_grid(dim, p, field, m)
    pts.setflags(write=False)
    return pts


def discretize_unit_ball(
    dim: int,
    p,
    field=Field.REAL,
    target_eta: float = 0.05,
    budget: int = DEFAULT_POINT_BUDGET,
    strict: bool = True,
) -> PointCloud:
    """Deterministic eta-dense subset of the closed unit ball of l_p^dim.

    With ``strict=False`` a budget overrun does not raise: the finest grid
    that fits is returned and its (larger) density is reported instead.
    """
    field = Field.parse(field)
    p = check_p(p)
    if dim < 1:
        raise InvalidParameterError("dimension must be positive")
    if not target_eta > 0:
        raise InvalidParameterError("target_eta must be positive")
    real_dim = dim * field.real_factor
    if real_dim > MAX_REAL_DIM:
        raise UnsupportedDimensionError(
            f"real dimension {real_dim} exceeds the supported maximum {MAX_REAL_DIM}"
        )
    factor = _eta_factor(dim, p, field)
    m = _grid_size_for(dim, p, field, target_eta)
    m_fit = m
    while m_fit > 1 and _estimated_count(dim, p, field, m_fit) > 1.1 * budget:
        m_fit -= 1
    while True:
        pts = _cached_ball(dim, p, field, m_fit)
        if len(pts) <= budget or m_fit == 1:
            break
        m_fit -= 1
    if m_fit < m:
        achieved = factor / m_fit
        if strict:
            raise BudgetExceededError(
                f"eta={target_eta} needs about {_estimated_count(dim, p, field, m):.0f} points, "
                f"budget is {budget}; best achievable eta is {achieved:.4g}",
                achieved_eta=achieved,
            )
    return PointCloud(
        ambient_dim=real_dim,
        p=p,
        field=field,
        points=pts,
        density=factor / m_fit,
        subset_certified=True,
        note=f"grid m={m_fit}",
    )


def image_cloud(op: "DenseOperator", ball: PointCloud, norm: Optional["NormBracket"] = None) -> PointCloud:
    """Push a ball cloud through ``op``; density scales by the norm upper bound.

    Exact duplicate images (from zero columns or rank deficiency) are merged.
    """
    from .norms import operator_norm

    if op.field is not ball.field:
        raise DimensionMismatchError("operator and cloud are over different fields")
    if op.cols * op.field.real_factor != ball.ambient_dim:
        raise DimensionMismatchError(
            f"operator has {op.cols} columns, cloud lives in real dimension {ball.ambient_dim}"
        )
    if op.p != ball.p:
        raise InvalidParameterError("operator and cloud use different p")
    if norm is None:
        norm = operator_norm(op)
    out_dim = op.rows * op.field.real_factor
    if norm.upper == 0:
        pts = np.zeros((1, out_dim))
        return PointCloud(out_dim, op.p, op.field, pts, 0.0, ball.subset_certified, "zero image")
    if op.field is Field.COMPLEX:
        pts = realify(complexify(ball.points) @ op.entries.T)
    else:
        pts = ball.points @ op.entries.T
    pts = np.unique(pts, axis=0)
    return PointCloud(
        ambient_dim=out_dim,
        p=op.p,
        field=op.field,
        points=pts,
        density=ball.density * norm.upper,
        subset_certified=ball.subset_certified,
        note=f"image of {ball.note}",
    )
