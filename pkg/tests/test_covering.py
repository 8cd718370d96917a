import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entropy_numbers.covering import (
    Effort,
    EntropyBracket,
    entropy_bracket,
    exact_covering_refine,
    greedy_covering,
    packing_lower_bound,
)
from entropy_numbers.errors import InvalidParameterError, UnsupportedDimensionError
from entropy_numbers.geometry import discretize_unit_ball, image_cloud, row_norms
from entropy_numbers.norms import operator_norm
from entropy_numbers.operators import DenseOperator, diag, identity
from oracles import circle_cover_radius

SQRT3_2 = math.sqrt(3) / 2


@pytest.fixture(scope="module")
def disk():
    return image_cloud(identity(2), discretize_unit_ball(2, 2, "real", 0.02))


def test_bracket_rejects_crossing():
    with pytest.raises(ValueError):
        EntropyBracket(1, 1.0, 0.5)


def test_effort_parse():
    assert Effort.parse("EXACT") is Effort.EXACT
    with pytest.raises(InvalidParameterError):
        Effort.parse("fast")


def test_greedy_disk_three_centers(disk):
    net = greedy_covering(disk, 3)
    assert net.radius <= 0.90
    d = np.min(np.linalg.norm(disk.points[:, None] - net.centers[None], axis=2), axis=1)
    assert d.max() <= net.radius + 1e-12


def test_greedy_segment_two_centers():
    seg = image_cloud(identity(1), discretize_unit_ball(1, 2, "real", 0.01))
    assert greedy_covering(seg, 2).radius == pytest.approx(0.5, abs=0.01)


def test_packing_disk_two():
    lower, pts = packing_lower_bound(_disk(0.02), 2)
    assert lower >= SQRT3_2 - 0.02
    assert lower <= circle_cover_radius(2)
    assert pts.shape == (3, 2)


def _disk(eta):
    return image_cloud(identity(2), discretize_unit_ball(2, 2, "real", eta))


def test_packing_witness_lies_in_the_set():
    cloud = _disk(0.05)
    _, pts = packing_lower_bound(cloud, 4)
    assert np.all(np.linalg.norm(pts, axis=1) <= 1 + 1e-12)


def test_pigeonhole_more_points_than_centers():
    # n+1 points pairwise 2s apart force some ball to hold two of them
    cloud = _disk(0.05)
    for n in (1, 2, 3, 5):
        lower, pts = packing_lower_bound(cloud, n)
        D = np.linalg.norm(pts[:, None] - pts[None], axis=2) + np.eye(n + 1) * 9
        assert 2 * lower <= D.min() + 1e-12
        assert lower <= entropy_bracket(identity(2), n, 0.05).upper


@pytest.mark.parametrize("n", [2, 3])
def test_disk_brackets_match_arc_length(n):
    b = entropy_bracket(identity(2), n, 0.02, effort="exact")
    assert b.contains(circle_cover_radius(n))
    assert b.width <= 0.05


def test_segment_two_contains_half():
    eta = 0.01
    b = entropy_bracket(identity(1), 2, eta, effort="exact", use_formulas=False)
    assert b.contains(0.5) and b.width <= 2 * eta


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_rank_one_line(n):
    # a segment of length 2s is covered by n balls of radius s/n and no fewer
    s = 0.7
    A = DenseOperator([[s, 0.0], [0.0, 0.0]])
    b = entropy_bracket(A, n, 0.01, effort="exact", use_formulas=False)
    assert b.contains(s / n)


def test_zero_operator():
    b = entropy_bracket(DenseOperator(np.zeros((2, 2))), 3)
    assert (b.lower, b.upper, b.methods) == (0.0, 0.0, ("zero-operator",))


def test_first_entropy_number_is_norm():
    A = DenseOperator([[1.0, 0.4], [-0.3, 0.8]])
    b = entropy_bracket(A, 1, 0.02)
    nb = operator_norm(A)
    assert b.lower <= nb.upper and nb.lower <= b.upper
    assert b.width <= 0.04


def test_witness_centers_are_bounded():
    for A in (identity(2), DenseOperator([[2.0, 1.0], [0.0, 0.5]]), diag([1.0, 0.3], p=1)):
        b = entropy_bracket(A, 3, 0.05, effort="exact")
        c = b.upper_witness.centers
        assert np.all(row_norms(c, A.p, A.field) <= 2 * operator_norm(A).upper + 1e-12)


def test_reduced_operator_witnesses_are_embedded():
    A = DenseOperator([[0.0, 0.0], [0.0, 1.0]])
    b = entropy_bracket(A, 2, 0.01)
    assert b.upper_witness.centers.shape[1] == 2
    assert np.all(b.upper_witness.centers[:, 0] == 0)
    assert b.contains(0.5)


@settings(max_examples=15)
@given(st.lists(st.floats(-1, 1), min_size=4, max_size=4), st.integers(1, 5))
def test_lower_of_next_below_upper(entries, n):
    A = DenseOperator(np.array(entries).reshape(2, 2))
    a = entropy_bracket(A, n, 0.05)
    b = entropy_bracket(A, n + 1, 0.05)
    assert b.lower <= a.upper + 1e-9


@settings(max_examples=10)
@given(st.lists(st.floats(0.05, 1), min_size=2, max_size=2), st.integers(2, 4),
       st.sampled_from([1.0, 2.0, math.inf]))
def test_exact_never_contradicts_greedy(w, n, p):
    A = diag(sorted(w, reverse=True), p=p)
    g = entropy_bracket(A, n, 0.05, use_formulas=False)
    e = entropy_bracket(A, n, 0.05, effort="exact", use_formulas=False)
    assert e.overlaps(g)
    assert e.lower >= g.lower - 1e-12 and e.upper <= g.upper + 1e-12


def test_truncated_flag_on_tiny_budget():
    cloud = _disk(0.02)
    start = EntropyBracket(3, 0.0, 2.0, cloud.density)
    b = exact_covering_refine(cloud, 3, start, budget=10, round_budget=1)
    assert b.truncated
    assert b.lower <= SQRT3_2 <= b.upper


def test_exact_limits():
    cloud = _disk(0.1)
    with pytest.raises(UnsupportedDimensionError):
        exact_covering_refine(cloud, 17, EntropyBracket(17, 0.0, 1.0))
    with pytest.raises(UnsupportedDimensionError):
        entropy_bracket(identity(5), 2)


def test_large_operator_first_number_uses_norm():
    b = entropy_bracket(identity(5), 1)
    assert b.lower == b.upper == 1.0


def test_complex_scalar_contains_known_value():
    # eps_n of the complex unit disk acting on itself equals the real disk value
    b = entropy_bracket(DenseOperator([[1.0]], 2, "complex"), 3, 0.02, effort="exact")
    assert b.contains(SQRT3_2)


def test_volume_formula_path():
    b = entropy_bracket(identity(2), 4, 0.05)
    assert b.lower >= 0.5 - 1e-12
    assert "volume-bound" in b.methods or b.lower > 0.5


def test_bad_arguments():
    with pytest.raises(InvalidParameterError):
        entropy_bracket(identity(2), 0)
    with pytest.raises(InvalidParameterError):
        entropy_bracket(identity(2), 1, eta=0)
