"""Closed-form bounds for diagonal operators and bracket-level inequality checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import InvalidParameterError, UnsupportedOperationError
from .geometry import Field
from .operators import DiagonalSpec

CHECK_SLACK = 1e-9
TIE_RTOL = 1e-12


def _exponent_scale(field: Field) -> float:
    # complex spaces have twice the real dimension: n^(-1/(2k)) instead of n^(-1/k)
    return 0.5 if field is Field.COMPLEX else 1.0


def _term(log_prod: float, k: int, n: int, field: Field) -> float:
    if log_prod == -math.inf:
        return 0.0
    return math.exp((log_prod - _exponent_scale(field) * math.log(n)) / k)


@dataclass(frozen=True)
class DeltaValue:
    n: int
    value: float
    attained_k: Union[int, str]
    tolerance: float = 0.0
    ties: tuple[int, ...] = ()


def delta(spec: DiagonalSpec, n: int, tol: float = 1e-12) -> DeltaValue:
    """sup over k of n^(-e/k) (sigma_1 ... sigma_k)^(1/k), e = 1 real, 1/2 complex.

    Beyond the prefix (k >= m) the term is c * exp(A / k) with c the tail and
    A = log(sigma_1...sigma_m) - m log c - e log n, which is monotone in k:
    decreasing if A > 0 (sup at k = m, already enumerated), otherwise
    increasing towards the limit c.  The supremum is therefore exact and
    ``tol`` is only validated.
    """
    if n < 1:
        raise InvalidParameterError("n must be positive")
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    field = spec.field
    m = len(spec.prefix)
    terms: list[float] = []
    log_prod = 0.0
    for k in range(1, m + 1):
        s = spec.prefix[k - 1]
        log_prod = log_prod + math.log(s) if s > 0 and log_prod != -math.inf else -math.inf
        terms.append(_term(log_prod, k, n, field))
    c = spec.tail
    best = max(terms) if terms else 0.0
    limit_wins = False
    if c > 0:
        A = log_prod - m * math.log(c) - _exponent_scale(field) * math.log(n)
        if m == 0:
            if n == 1:
                # every term equals c; attained at k = 1
                terms.append(c)
            else:
                limit_wins = True
        elif A <= 0 and c > best:
            limit_wins = True
    if limit_wins:
        return DeltaValue(n, c, "limit", 0.0, ())
    if not terms:
        return DeltaValue(n, 0.0, 1, 0.0, (1,))
    best = max(terms)
    ties = tuple(k + 1 for k, t in enumerate(terms) if t >= best * (1 - TIE_RTOL))
    return DeltaValue(n, best, ties[0], 0.0, ties)


def diagonal_sandwich(spec: DiagonalSpec, n: int) -> tuple[float, float]:
    """[delta(n), 4 delta(n)], an interval containing eps_n of the diagonal operator."""
    if spec.p == math.inf:
        raise UnsupportedOperationError(
            "the diagonal sandwich is unavailable on l_inf: there are no useful projections"
        )
    d = delta(spec, n).value
    return d, 4 * d


def volume_lower_bound(spec: DiagonalSpec, k: int, n: int) -> float:
    """n^(-e/k) (sigma_1...sigma_k)^(1/k): the volume-comparison bound."""
    if k < 1 or n < 1:
        raise InvalidParameterError("k and n must be positive")
    log_prod = 0.0
    for i in range(1, k + 1):
        s = spec.sigma(i)
        if s == 0:
            return 0.0
        log_prod += math.log(s)
    return _term(log_prod, k, n, spec.field)


def best_volume_lower_bound(spec: DiagonalSpec, k_max: int, n: int) -> float:
    return max(volume_lower_bound(spec, k, n) for k in range(1, k_max + 1))


def projection_entropy_lower(k: int, rank_n: int, field=Field.COMPLEX) -> float:
    """Lower bound on eps_k of a norm-one rank-n coordinate projection.

    Complex: k^(-1/(2n)); real: k^(-1/n) (same volume argument in real
    dimension n).
    """
    if k < 1 or rank_n < 1:
        raise InvalidParameterError("k and rank must be positive")
    field = Field.parse(field)
    return k ** (-_exponent_scale(field) / rank_n)


def index_r(n: int) -> int:
    """Smallest r >= 0 with n <= 2^(r+1)."""
    if n < 1:
        raise InvalidParameterError("n must be positive")
    r = 0
    while n > 2 ** (r + 1):
        r += 1
    return r


def check_index_r(spec: DiagonalSpec, n: int) -> bool:
    """sigma_{r+1} <= 2 delta(n) for the smallest r with n <= 2^(r+1)."""
    r = index_r(n)
    return spec.sigma(r + 1) <= 2 * delta(spec, n).value * (1 + 1e-12) + 1e-300


def check_subadditivity(bracket_T, bracket_TS, norm_S) -> bool:
    """Bracket shadow of eps_k(T+S) <= eps_k(T) + ||S||."""
    if bracket_T.n != bracket_TS.n:
        raise InvalidParameterError("brackets refer to different n")
    return bracket_TS.lower <= bracket_T.upper + norm_S.upper + CHECK_SLACK


def check_submultiplicativity(bracket_R, bracket_SRT, norm_S, norm_T) -> bool:
    """Bracket shadow of eps_k(SRT) <= ||S|| eps_k(R) ||T||."""
    if bracket_R.n != bracket_SRT.n:
        raise InvalidParameterError("brackets refer to different n")
    return bracket_SRT.lower <= norm_S.upper * bracket_R.upper * norm_T.upper + CHECK_SLACK
