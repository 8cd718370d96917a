"""Truncation harness: brackets of eps_k(T_n) for growing leading blocks T_n."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bounds import delta
from .covering import Effort, EntropyBracket, entropy_bracket
from .errors import InvalidParameterError, UnsupportedOperationError
from .norms import NormBracket, operator_norm
from .operators import DenseOperator, DiagonalSpec, truncate

MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    bracket: EntropyBracket
    wall_ms: float = 0.0


@dataclass(frozen=True)
class ConvergenceRecord:
    """Brackets of eps_k(T_n) for the requested sizes n.

    ``ceiling`` is ``(delta(k), 4 delta(k))`` for the untruncated diagonal
    operator, the interval its k-th entropy number lies in.
    ``lower_nondecreasing`` says the lower endpoints grow with n up to
    ``2 eta`` of slack.  ``stable_from`` is the first size from which all
    later rows carry the same bracket, or ``None``.
    """

    k: int
    spec: DiagonalSpec
    rows: tuple[ConvergenceRow, ...]
    ceiling: tuple[float, float]
    lower_nondecreasing: bool
    stable_from: Optional[int]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(r.n for r in self.rows)


def _same(a: EntropyBracket, b: EntropyBracket) -> bool:
    return a.lower == b.lower and a.upper == b.upper


def run_truncation_convergence(
    spec: DiagonalSpec,
    k: int,
    sizes: Sequence[int],
    eta: float = 0.05,
    effort=Effort.GREEDY,
    **oracle_options,
) -> ConvergenceRecord:
    """Bracket eps_k(truncate(spec, n)) for every n in ``sizes``.

    Extra keyword arguments go to :func:`entropy_bracket` unchanged.
    """
    if k < 1:
        raise InvalidParameterError("k must be positive")
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise InvalidParameterError("at least one truncation size is required")
    if any(n < 1 for n in sizes):
        raise InvalidParameterError("truncation sizes must be positive")
    if any(a > b for a, b in zip(sizes, sizes[1:])):
        raise InvalidParameterError(f"truncation sizes must be nondecreasing, got {sizes}")
    if spec.p == math.inf:
        raise UnsupportedOperationError("truncation harness needs p < inf: l_inf has no useful projections")
    rows = []
    for n in sizes:
        t0 = time.perf_counter()
        b = entropy_bracket(truncate(spec, n), k, eta, effort, **oracle_options)
        rows.append(ConvergenceRow(n, b, 1000 * (time.perf_counter() - t0)))
    d = delta(spec, k).value
    slack = 2 * max(r.bracket.eta for r in rows)
    nondecreasing = all(b.bracket.lower >= a.bracket.lower - slack for a, b in zip(rows, rows[1:]))
    stable_from = None
    for i in range(len(rows)):
        if all(_same(rows[i].bracket, r.bracket) for r in rows[i + 1:]):
            stable_from = rows[i].n
            break
    return ConvergenceRecord(k, spec, tuple(rows), (d, 4 * d), nondecreasing, stable_from)


def check_monotone(record: ConvergenceRecord) -> bool:
    """Bracket-level form of eps_k(T_n) <= eps_k(T_m) for n <= m, plus the ceiling.

    Since T_n = P_n T_m P_n with norm-one projections, a smaller truncation
    never has a larger entropy number, and each is at most 4 delta(k).
    """
    if not record.rows:
        raise InvalidParameterError("empty convergence record")
    rows = record.rows
    for i, a in enumerate(rows):
        for b in rows[i + 1:]:
            if a.bracket.lower > b.bracket.upper + MONOTONE_SLACK:
                return False
    top = record.ceiling[1]
    return all(r.bracket.lower <= top + MONOTONE_SLACK for r in rows) and all(
        r.bracket.upper <= top + 2 * r.bracket.eta + MONOTONE_SLACK for r in rows
    )


@dataclass(frozen=True)
class CounterexampleReport:
    """The coordinate functional x -> x_n on l_2^n against its pointwise limit 0.

    Each such functional has norm and first entropy number 1, yet the
    sequence tends to 0 pointwise, whose first entropy number is 0.  Its
    truncations are not of the form Q T P with norm-one Q and P of a
    single limit operator, which is what breaks convergence.
    """

    n: int
    operator: DenseOperator
    norm: NormBracket
    eps1: EntropyBracket
    limit_eps1: EntropyBracket


def coordinate_functional(n: int) -> DenseOperator:
    if n < 1:
        raise InvalidParameterError("n must be positive")
    row = np.zeros((1, n))
    row[0, n - 1] = 1.0
    return DenseOperator(row, 2.0)


def remark_counterexample(n: int, eta: float = 0.05) -> CounterexampleReport:
    op = coordinate_functional(n)
    zero = DenseOperator(np.zeros((1, n)), 2.0)
    return CounterexampleReport(
        n=n,
        operator=op,
        norm=operator_norm(op),
        eps1=entropy_bracket(op, 1, eta),
        limit_eps1=entropy_bracket(zero, 1, eta),
    )
