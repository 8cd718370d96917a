import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from entropy_numbers.linalg import jacobi_eigh, jacobi_svd, singular_values

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@given(arrays(float, st.tuples(st.integers(1, 4), st.integers(1, 4)), elements=finite))
def test_svd_matches_numpy(A):
    s = singular_values(A)
    ref = np.linalg.svd(A, compute_uv=False)
    assert np.allclose(s[: len(ref)], ref, atol=1e-9 * max(1.0, ref.max(initial=0)))


@pytest.mark.parametrize("seed", range(20))
def test_svd_reconstructs(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    U, s, V = jacobi_svd(A)
    assert np.allclose((U * s) @ V.conj().T, A, atol=1e-10)
    assert np.all(np.diff(s) <= 0)


def test_eigh_of_hermitian():
    rng = np.random.default_rng(7)
    B = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    H = B + B.conj().T
    w, Q = jacobi_eigh(H)
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(H), atol=1e-10)
    assert np.allclose(Q.conj().T @ Q, np.eye(4), atol=1e-10)


def test_rank_deficient():
    s = singular_values(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(s, [1.0, 0.0])
