import math

import pytest

from entropy_numbers.approximation import (
    check_monotone,
    coordinate_functional,
    remark_counterexample,
    run_truncation_convergence,
)
from entropy_numbers.errors import InvalidParameterError, UnsupportedOperationError
from entropy_numbers.operators import DiagonalSpec


def test_identity_rows_bracket_one():
    rec = run_truncation_convergence(DiagonalSpec.identity(), 1, [1, 2, 3], 0.05)
    assert all(r.bracket.contains(1.0) for r in rec.rows)
    assert check_monotone(rec)
    assert rec.ceiling == (1.0, 4.0)


def test_stabilizes_after_prefix():
    spec = DiagonalSpec((1.0, 0.5), 0.0)
    rec = run_truncation_convergence(spec, 2, [1, 2, 3, 4], 0.05)
    assert check_monotone(rec)
    assert rec.stable_from is not None and rec.stable_from <= 2
    assert rec.sizes == (1, 2, 3, 4)


def test_lower_tracks_growth():
    spec = DiagonalSpec((1.0, 0.9), 0.0)
    rec = run_truncation_convergence(spec, 3, [1, 2], 0.05)
    assert rec.lower_nondecreasing


def test_monotone_detects_inversion():
    spec = DiagonalSpec((1.0, 0.5), 0.0)
    rec = run_truncation_convergence(spec, 2, [1, 2], 0.05)
    bad = rec.rows[::-1]
    from dataclasses import replace
    # a later (smaller) truncation with a larger bracket breaks nesting
    big = replace(bad[0].bracket, lower=3.0, upper=3.5)
    broken = replace(rec, rows=(replace(rec.rows[0], bracket=big), rec.rows[1]))
    assert not check_monotone(broken)


@pytest.mark.parametrize("sizes", [[], [0, 1], [3, 2]])
def test_bad_sizes(sizes):
    with pytest.raises(InvalidParameterError):
        run_truncation_convergence(DiagonalSpec.identity(), 1, sizes)


def test_linf_rejected():
    with pytest.raises(UnsupportedOperationError):
        run_truncation_convergence(DiagonalSpec.identity(p=math.inf), 1, [1])


def test_counterexample():
    for n in range(1, 11):
        rep = remark_counterexample(n)
        assert rep.eps1.lower == rep.eps1.upper == 1.0
        assert rep.limit_eps1.upper == 0.0
        assert rep.norm.lower == rep.norm.upper == 1.0
    assert coordinate_functional(3).entries.tolist() == [[0.0, 0.0, 1.0]]
