import numpy as np
import pytest

from entropy_numbers.errors import InvalidParameterError, UnsupportedDimensionError, UnsupportedOperationError
from entropy_numbers.hilbert import CONSISTENT, hilbert_identity_check
from entropy_numbers.operators import DenseOperator


def test_nilpotent_hand_case():
    rep = hilbert_identity_check(DenseOperator([[0.0, 1.0], [0.0, 0.0]]), 2, 0.01, "exact")
    row = rep.rows[1]
    for b in (row.operator, row.adjoint, row.modulus):
        assert b.contains(0.5)
    assert rep.violations == 0 and rep.singular_values_agree


@pytest.mark.parametrize("seed", range(3))
def test_random_real_consistent(seed):
    M = np.random.default_rng(seed).standard_normal((2, 2))
    rep = hilbert_identity_check(DenseOperator(M), 3, 0.05)
    assert set(rep.verdicts) == {CONSISTENT}
    assert rep.singular_value_gap <= 1e-9


def test_rectangular_padding():
    rep = hilbert_identity_check(DenseOperator([[1.0, 2.0]]), 1, 0.05)
    assert len(rep.singular_values[0]) == 2
    assert rep.singular_values_agree


def test_limits():
    with pytest.raises(UnsupportedOperationError):
        hilbert_identity_check(DenseOperator(np.eye(2), p=1), 1)
    with pytest.raises(UnsupportedDimensionError):
        hilbert_identity_check(DenseOperator(np.eye(4)), 1)
    with pytest.raises(InvalidParameterError):
        hilbert_identity_check(DenseOperator(np.eye(2)), 0)
