"""Compare entropy brackets of A, its adjoint and its modulus on l_2.

For matrices the three images of the unit ball are ellipsoids with the same
semi-axes (the singular values), so they are isometric and share every
entropy number.  The report checks that from two directions: the oracle
brackets must pairwise overlap, and the singular values must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covering import MAX_EXACT_N, Effort, EntropyBracket, entropy_bracket
from .errors import InvalidParameterError, UnsupportedDimensionError, UnsupportedOperationError
from .linalg import singular_values
from .operators import DenseOperator, adjoint, polar

MAX_HILBERT_DIM = 3
SV_TOL = 1e-9
CONSISTENT = "consistent"
VIOLATED = "violated"


def _overlap(a: EntropyBracket, b: EntropyBracket) -> bool:
    return a.lower <= b.upper and b.lower <= a.upper


@dataclass(frozen=True)
class HilbertRow:
    n: int
    operator: EntropyBracket
    adjoint: EntropyBracket
    modulus: EntropyBracket

    @property
    def verdict(self) -> str:
        trio = (self.operator, self.adjoint, self.modulus)
        ok = all(_overlap(x, y) for i, x in enumerate(trio) for y in trio[i + 1:])
        return CONSISTENT if ok else VIOLATED


@dataclass(frozen=True)
class HilbertIdentityReport:
    description: str
    matrix: DenseOperator
    rows: tuple[HilbertRow, ...]
    singular_values: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]
    singular_value_gap: float

    @property
    def verdicts(self) -> tuple[str, ...]:
        return tuple(r.verdict for r in self.rows)

    @property
    def violations(self) -> int:
        return sum(v == VIOLATED for v in self.verdicts)

    @property
    def singular_values_agree(self) -> bool:
        return self.singular_value_gap <= SV_TOL


def _padded_singular_values(M: np.ndarray, size: int) -> np.ndarray:
    s = np.sort(singular_values(M))[::-1]
    return np.concatenate([s, np.zeros(size - len(s))])


def hilbert_identity_check(
    A: DenseOperator,
    n_max: int,
    eta: float = 0.05,
    effort=Effort.GREEDY,
    description: str = "",
    **oracle_options,
) -> HilbertIdentityReport:
    """Brackets of eps_n for A, A* and |A| for n = 1..n_max, with verdicts."""
    if A.p != 2:
        raise UnsupportedOperationError(f"the adjoint identity is checked on l_2 only, got p = {A.p}")
    if max(A.shape) > MAX_HILBERT_DIM:
        raise UnsupportedDimensionError(f"matrices up to {MAX_HILBERT_DIM}x{MAX_HILBERT_DIM} are supported")
    if not 1 <= n_max <= MAX_EXACT_N:
        raise InvalidParameterError(f"n_max must lie in [1, {MAX_EXACT_N}]")
    effort = Effort.parse(effort)
    star = adjoint(A)
    mod = polar(A).modulus
    size = max(A.shape)
    svs = [_padded_singular_values(M.entries, size) for M in (A, star, mod)]
    gap = float(max(np.abs(svs[0] - svs[1]).max(), np.abs(svs[0] - svs[2]).max()))
    rows = []
    for n in range(1, n_max + 1):
        rows.append(HilbertRow(
            n,
            entropy_bracket(A, n, eta, effort, **oracle_options),
            entropy_bracket(star, n, eta, effort, **oracle_options),
            entropy_bracket(mod, n, eta, effort, **oracle_options),
        ))
    return HilbertIdentityReport(
        description=description,
        matrix=A,
        rows=tuple(rows),
        singular_values=tuple(tuple(float(x) for x in s) for s in svs),
        singular_value_gap=gap,
    )
