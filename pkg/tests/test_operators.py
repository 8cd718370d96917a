import math

import numpy as np
import pytest

from entropy_numbers.errors import DimensionMismatchError, InvalidParameterError, UnsupportedOperationError
from entropy_numbers.geometry import Field
from entropy_numbers.operators import (
    DenseOperator,
    DiagonalSpec,
    TruncationScheme,
    add,
    adjoint,
    compose,
    diag,
    modulus,
    polar,
    scale,
    truncate,
)


def test_spec_sigma_and_truncate():
    spec = DiagonalSpec((1.0, 0.5), 0.25)
    assert [spec.sigma(k) for k in (1, 2, 3, 7)] == [1.0, 0.5, 0.25, 0.25]
    assert np.array_equal(truncate(spec, 3).entries, np.diag([1.0, 0.5, 0.25]))


@pytest.mark.parametrize("prefix,tail", [((0.5, 1.0), 0.0), ((1.0,), 2.0), ((-1.0,), 0.0), ((math.inf,), 0)])
def test_spec_validation(prefix, tail):
    with pytest.raises(InvalidParameterError):
        DiagonalSpec(prefix, tail)


def test_operator_validation():
    with pytest.raises(InvalidParameterError):
        DenseOperator(np.zeros((0, 2)))
    with pytest.raises(InvalidParameterError):
        DenseOperator([[np.nan]])
    with pytest.raises(InvalidParameterError):
        DenseOperator([[1.0]], p=0.5)


def test_entries_are_read_only():
    A = DenseOperator([[1.0, 2.0]])
    with pytest.raises(ValueError):
        A.entries[0, 0] = 3.0


def test_algebra_checks_shapes_and_spaces():
    A, B = DenseOperator(np.eye(2)), DenseOperator(np.ones((3, 3)))
    with pytest.raises(DimensionMismatchError):
        compose(A, B)
    with pytest.raises(DimensionMismatchError):
        add(A, B)
    with pytest.raises(DimensionMismatchError):
        add(A, DenseOperator(np.eye(2), p=1))
    with pytest.raises(DimensionMismatchError):
        scale(1j, A)
    assert np.array_equal(compose(A, A).entries, np.eye(2))


def test_reduction_drops_zero_lines():
    A = DenseOperator([[0, 0, 0], [0, 2, 0], [0, 0, 0]])
    assert A.reduced().shape == (1, 1)
    assert DenseOperator(np.zeros((2, 2))).reduced() is None


def test_projection_scheme():
    P = TruncationScheme().projection(2, 4)
    assert np.array_equal(np.diag(P.entries), [1, 1, 0, 0])
    with pytest.raises(InvalidParameterError):
        TruncationScheme().projection(5, 4)


def test_adjoint_requires_hilbert():
    with pytest.raises(UnsupportedOperationError):
        adjoint(diag([1, 2], p=1))
    with pytest.raises(UnsupportedOperationError):
        polar(diag([1, 2], p=3))


@pytest.mark.parametrize("seed", range(100))
@pytest.mark.parametrize("dim", [2, 3])
def test_polar_reconstructs(seed, dim):
    rng = np.random.default_rng(seed)
    cplx = seed % 2 == 1
    M = rng.standard_normal((dim, dim)) + (1j * rng.standard_normal((dim, dim)) if cplx else 0)
    A = DenseOperator(M, 2, Field.COMPLEX if cplx else Field.REAL)
    parts = polar(A)
    assert np.abs(parts.V.entries @ parts.modulus.entries - M).max() <= 1e-9
    H = parts.modulus.entries
    assert np.allclose(H, H.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(H).min() >= -1e-9
    sv = [np.linalg.svd(X, compute_uv=False) for X in (M, adjoint(A).entries, H)]
    assert np.abs(sv[0] - sv[1]).max() <= 1e-9
    assert np.abs(sv[0] - sv[2]).max() <= 1e-9


def test_polar_of_nilpotent():
    A = DenseOperator([[0.0, 1.0], [0.0, 0.0]])
    parts = polar(A)
    assert np.allclose(parts.modulus.entries, [[0, 0], [0, 1]])
    assert np.allclose(parts.V.entries, [[0, 1], [0, 0]])
    assert np.allclose(modulus(adjoint(A)).entries, [[1, 0], [0, 0]])
