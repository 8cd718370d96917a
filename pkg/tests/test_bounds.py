import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entropy_numbers.bounds import (
    best_volume_lower_bound,
    check_index_r,
    delta,
    diagonal_sandwich,
    index_r,
    projection_entropy_lower,
    volume_lower_bound,
)
from entropy_numbers.errors import InvalidParameterError
from entropy_numbers.geometry import Field
from entropy_numbers.operators import DiagonalSpec

weights = st.lists(st.floats(0.01, 1.0), min_size=1, max_size=6)


@st.composite
def specs(draw, field=Field.REAL):
    w = sorted(draw(weights), reverse=True)
    tail = draw(st.sampled_from([0.0, w[-1], w[-1] / 2]))
    return DiagonalSpec(tuple(w), tail, 2.0, field)


def _brute_delta(spec, n, k_max=400):
    e = 0.5 if spec.field is Field.COMPLEX else 1.0
    best, lp = 0.0, 0.0
    for k in range(1, k_max + 1):
        s = spec.sigma(k)
        if s == 0:
            break
        lp += math.log(s)
        best = max(best, math.exp((lp - e * math.log(n)) / k))
    return max(best, spec.tail)


@pytest.mark.parametrize("n", [1, 2, 10])
def test_identity(n):
    assert delta(DiagonalSpec.identity(), n).value == 1.0


def test_halving_prefix():
    d = delta(DiagonalSpec((1.0, 0.5, 0.25), 0.0), 2)
    assert d.value == pytest.approx(0.5, abs=1e-12)
    assert set(d.ties) == {1, 2}


@given(specs(), st.integers(1, 200))
def test_delta_matches_enumeration(spec, n):
    assert delta(spec, n).value == pytest.approx(_brute_delta(spec, n), rel=1e-12, abs=1e-15)


@given(specs(Field.COMPLEX), st.integers(1, 200))
def test_complex_delta_matches_enumeration(spec, n):
    assert delta(spec, n).value == pytest.approx(_brute_delta(spec, n), rel=1e-12, abs=1e-15)


@given(specs(), st.integers(1, 100))
def test_delta_nonincreasing_in_n_and_below_norm(spec, n):
    assert delta(spec, n + 1).value <= delta(spec, n).value + 1e-15
    assert delta(spec, n).value <= spec.norm + 1e-15


@given(specs(), st.integers(1, 1000))
def test_index_r_property(spec, n):
    assert check_index_r(spec, n)


def test_index_r_values():
    assert [index_r(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 0, 1, 1, 2, 2, 3]


@given(specs(), st.integers(1, 50))
def test_sandwich_shape(spec, n):
    lo, hi = diagonal_sandwich(spec, n)
    assert hi == pytest.approx(4 * lo)
    assert best_volume_lower_bound(spec, 6, n) <= lo * (1 + 1e-12)


def test_volume_bound_identity_plane():
    spec = DiagonalSpec.identity()
    for k in (2, 3, 4):
        assert volume_lower_bound(spec, 2, k) == pytest.approx(k ** -0.5)


def test_projection_lower():
    assert projection_entropy_lower(4, 2) == pytest.approx(4 ** (-1 / 4))
    assert projection_entropy_lower(4, 2, "real") == pytest.approx(4 ** (-1 / 2))
    with pytest.raises(InvalidParameterError):
        projection_entropy_lower(0, 2)


def test_delta_rejects_bad_n():
    with pytest.raises(InvalidParameterError):
        delta(DiagonalSpec.identity(), 0)
