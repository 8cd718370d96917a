import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial import cKDTree

from entropy_numbers.errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidParameterError,
    UnsupportedDimensionError,
)
from entropy_numbers.geometry import (
    Field,
    complexify,
    discretize_unit_ball,
    image_cloud,
    p_distance,
    p_norm,
    realify,
    row_norms,
)
from entropy_numbers.operators import DenseOperator, diag

PROBES = 100_000


def test_p_norm_values():
    assert p_norm([3, 4], 2) == pytest.approx(5.0)
    assert p_norm([3, -4], 1) == 7.0
    assert p_norm([3, -4], "inf") == 4.0
    assert p_norm([3j, 4], 2) == pytest.approx(5.0)
    assert p_norm([1, 1], 3) == pytest.approx(2 ** (1 / 3))


def test_p_norm_large_p_does_not_overflow():
    assert p_norm([1e200, 1e200], 50) == pytest.approx(1e200 * 2 ** (1 / 50))


def test_p_distance_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        p_distance([1, 2], [1, 2, 3], 2)


@pytest.mark.parametrize("p", [0.5, float("nan"), -1])
def test_bad_p_rejected(p):
    with pytest.raises(InvalidParameterError):
        p_norm([1.0], p)


def test_realify_round_trip():
    z = np.array([[1 + 2j, -3j], [0.5, 2 - 1j]])
    assert np.array_equal(complexify(realify(z)), z)


def test_complex_norm_uses_moduli():
    z = np.array([[3 + 4j, 0]])
    assert row_norms(realify(z), 1, Field.COMPLEX)[0] == pytest.approx(5.0)


def _probe_ball(rng, real_dim, p, field, count):
    """Uniform points of the cube kept inside the ball, plus sphere points."""
    out = []
    while sum(len(x) for x in out) < count:
        x = rng.uniform(-1, 1, (count, real_dim))
        out.append(x[row_norms(x, p, field) <= 1])
    inner = np.concatenate(out)[: count // 2]
    s = rng.standard_normal((count - len(inner), real_dim))
    sphere = s / row_norms(s, p, field)[:, None]
    return np.concatenate([inner, sphere])


def _nearest_bound(cloud, probes):
    """An upper bound on each probe's distance to the cloud.

    Exact for real fields (Minkowski kd-tree); for complex p != 2 the true
    distance is taken over the 16 Euclidean neighbours, which can only
    overestimate the nearest distance.
    """
    tree = cKDTree(cloud.points)
    if cloud.field is Field.REAL or cloud.p == 2:
        d, _ = tree.query(probes, k=1, p=cloud.p)
        return d
    _, nb = tree.query(probes, k=16)
    diff = cloud.points[nb] - probes[:, None, :]
    return row_norms(diff, cloud.p, cloud.field).min(axis=1)


@pytest.mark.parametrize(
    "dim,p,field,eta",
    [
        (1, 2, "real", 0.01),
        (2, 2, "real", 0.02),
        (2, 1, "real", 0.03),
        (2, 1.5, "real", 0.03),
        (2, math.inf, "real", 0.03),
        (3, 2, "real", 0.05),
        (3, 3, "real", 0.06),
        (1, 2, "complex", 0.03),
        (1, 1.5, "complex", 0.05),
        (2, 2, "complex", 0.15),
    ],
)
def test_ball_cloud_density_certificate(dim, p, field, eta):
    cloud = discretize_unit_ball(dim, p, field, eta, strict=False)
    assert cloud.subset_certified
    assert np.all(row_norms(cloud.points, cloud.p, cloud.field) <= 1 + 1e-12)
    rng = np.random.default_rng(1234)
    probes = _probe_ball(rng, cloud.ambient_dim, cloud.p, cloud.field, PROBES)
    worst = float(_nearest_bound(cloud, probes).max())
    assert worst <= cloud.density + 1e-12


def test_target_eta_is_met_when_budget_allows():
    cloud = discretize_unit_ball(2, 2, "real", 0.02)
    assert cloud.density <= 0.02


def test_budget_strict_raises_with_achieved_eta():
    with pytest.raises(BudgetExceededError) as err:
        discretize_unit_ball(3, 2, "real", 0.001, budget=10_000)
    assert err.value.achieved_eta > 0.001
    relaxed = discretize_unit_ball(3, 2, "real", 0.001, budget=10_000, strict=False)
    assert len(relaxed) <= 10_000
    assert relaxed.density == pytest.approx(err.value.achieved_eta)


def test_dimension_limit():
    with pytest.raises(UnsupportedDimensionError):
        discretize_unit_ball(3, 2, "complex", 0.1)


def test_discretization_is_deterministic():
    a = discretize_unit_ball(2, 1.5, "real", 0.05)
    b = discretize_unit_ball(2, 1.5, "real", 0.05)
    assert np.array_equal(a.points, b.points)


def test_image_cloud_scales_density_by_norm():
    ball = discretize_unit_ball(2, 2, "real", 0.05)
    img = image_cloud(diag([3.0, 1.0]), ball)
    assert img.density == pytest.approx(3 * ball.density)
    assert img.max_norm <= 3 + 1e-12


def test_image_cloud_of_zero_operator():
    ball = discretize_unit_ball(2, 2, "real", 0.1)
    img = image_cloud(DenseOperator(np.zeros((2, 2))), ball)
    assert len(img) == 1 and img.density == 0.0


def test_image_cloud_rejects_mismatch():
    ball = discretize_unit_ball(2, 2, "real", 0.1)
    with pytest.raises(DimensionMismatchError):
        image_cloud(DenseOperator(np.eye(3)), ball)


@given(st.floats(1, 8), st.lists(st.floats(-5, 5), min_size=1, max_size=4),
       st.lists(st.floats(-5, 5), min_size=1, max_size=4))
def test_triangle_inequality(p, u, v):
    k = min(len(u), len(v))
    u, v = np.array(u[:k]), np.array(v[:k])
    assert p_norm(u + v, p) <= p_norm(u, p) + p_norm(v, p) + 1e-9
