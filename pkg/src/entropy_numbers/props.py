"""Seeded invariant suites run by ``entropy-numbers props``.

Each suite draws small random instances from its own stream and reports
how many checks ran and which failed.  All suites use the fast greedy
oracle so the whole selection finishes in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .approximation import check_monotone, remark_counterexample, run_truncation_convergence
from .bounds import check_index_r, check_submultiplicativity, check_subadditivity, delta
from .covering import entropy_bracket
from .errors import ConfigError
from .linalg import singular_values
from .norms import operator_norm
from .operators import DenseOperator, DiagonalSpec, adjoint, diag, polar

ETA = 0.05


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, what: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(what)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "failures": list(self.failures)}


def _random_matrix(rng, rows: int, cols: int, complex_: bool) -> np.ndarray:
    M = rng.standard_normal((rows, cols))
    if complex_:
        M = M + 1j * rng.standard_normal((rows, cols))
    return M


def _random_spec(rng, length: int, tail_zero: bool = True) -> DiagonalSpec:
    w = np.sort(rng.uniform(0.05, 1.0, length))[::-1]
    tail = 0.0 if tail_zero else float(rng.uniform(0, w[-1]))
    return DiagonalSpec(tuple(w), tail)


def suite_norm_first(rng, res: SuiteResult) -> None:
    """eps_1 equals the operator norm."""
    for i in range(12):
        dim = int(rng.integers(1, 4))
        p = [1.0, 1.5, 2.0][i % 3]
        w = rng.uniform(0.1, 1.0, dim)
        b = entropy_bracket(diag(w, p=p), 1, ETA)
        s1 = float(np.max(w))
        res.check(b.contains(s1) and b.width <= 2 * ETA, f"eps_1 bracket {b.lower, b.upper} vs norm {s1}")
    for _ in range(4):
        w = rng.uniform(0.1, 1.0, 3)
        nb = operator_norm(diag(w, p="inf"))
        res.check(nb.lower == nb.upper == float(np.max(w)), "l_inf diagonal norm")


def suite_delta_index(rng, res: SuiteResult) -> None:
    """sigma_{r+1} <= 2 delta(n) for the smallest r with n <= 2^(r+1)."""
    for _ in range(200):
        spec = _random_spec(rng, int(rng.integers(1, 6)), tail_zero=bool(rng.integers(0, 2)))
        n = int(rng.integers(1, 64))
        res.check(check_index_r(spec, n), f"index property for {spec.prefix}, n={n}")


def suite_subadditivity(rng, res: SuiteResult) -> None:
    """eps_k(T + S) <= eps_k(T) + ||S|| at bracket level."""
    for _ in range(6):
        T = DenseOperator(_random_matrix(rng, 2, 2, False))
        S = DenseOperator(0.3 * _random_matrix(rng, 2, 2, False))
        k = int(rng.integers(1, 4))
        bT = entropy_bracket(T, k, ETA)
        bTS = entropy_bracket(DenseOperator(T.entries + S.entries), k, ETA)
        res.check(check_subadditivity(bT, bTS, operator_norm(S)), f"subadditivity k={k}")


def suite_submultiplicativity(rng, res: SuiteResult) -> None:
    """eps_k(S R T) <= ||S|| eps_k(R) ||T|| at bracket level."""
    for _ in range(6):
        R, S, T = (DenseOperator(_random_matrix(rng, 2, 2, False)) for _ in range(3))
        k = int(rng.integers(1, 4))
        bR = entropy_bracket(R, k, ETA)
        bSRT = entropy_bracket(DenseOperator(S.entries @ R.entries @ T.entries), k, ETA)
        res.check(check_submultiplicativity(bR, bSRT, operator_norm(S), operator_norm(T)),
                  f"submultiplicativity k={k}")


def suite_monotone_in_n(rng, res: SuiteResult) -> None:
    """lower(n+1) <= upper(n)."""
    for _ in range(4):
        A = DenseOperator(_random_matrix(rng, 2, 2, False))
        brackets = [entropy_bracket(A, n, ETA) for n in range(1, 6)]
        for a, b in zip(brackets, brackets[1:]):
            res.check(b.lower <= a.upper + 1e-9, f"monotone n={a.n}->{b.n}")


def suite_singular_values(rng, res: SuiteResult) -> None:
    """A, A* and |A| share singular values; polar factors rebuild A."""
    for i in range(100):
        dim = 2 + i % 2
        A = DenseOperator(_random_matrix(rng, dim, dim, i % 4 >= 2), 2.0, "complex" if i % 4 >= 2 else "real")
        parts = polar(A)
        s = [np.sort(singular_values(M.entries))[::-1] for M in (A, adjoint(A), parts.modulus)]
        gap = max(np.abs(s[0] - s[1]).max(), np.abs(s[0] - s[2]).max())
        rebuilt = np.abs(parts.V.entries @ parts.modulus.entries - A.entries).max()
        res.check(gap <= 1e-9 and rebuilt <= 1e-9, f"seed index {i}: gap {gap:.2e}, rebuild {rebuilt:.2e}")


def suite_truncation(rng, res: SuiteResult) -> None:
    """Truncation brackets respect nesting and stabilize past the prefix."""
    for _ in range(3):
        m = int(rng.integers(1, 3))
        spec = _random_spec(rng, m)
        rec = run_truncation_convergence(spec, 2, list(range(1, m + 3)), ETA)
        res.check(check_monotone(rec), f"monotone record for {spec.prefix}")
        res.check(rec.stable_from is not None and rec.stable_from <= m, f"stabilization for {spec.prefix}")


def suite_counterexample(rng, res: SuiteResult) -> None:
    """Coordinate functionals keep eps_1 = 1 while their pointwise limit is 0."""
    for n in range(1, 11):
        rep = remark_counterexample(n)
        res.check(rep.eps1.lower == rep.eps1.upper == 1.0 and rep.limit_eps1.upper == 0.0,
                  f"counterexample n={n}")


def suite_delta_spots(rng, res: SuiteResult) -> None:
    """Hand-computed values of delta."""
    ident = DiagonalSpec.identity()
    for n in (1, 2, 10):
        res.check(delta(ident, n).value == 1.0, f"identity delta({n})")
    d = delta(DiagonalSpec((1.0, 0.5, 0.25), 0.0), 2)
    res.check(abs(d.value - 0.5) <= 1e-12 and set(d.ties) == {1, 2}, "delta(2) of (1, 1/2, 1/4)")


SUITES: dict[str, Callable] = {
    "norm-first": suite_norm_first,
    "delta-index": suite_delta_index,
    "delta-spots": suite_delta_spots,
    "subadditivity": suite_subadditivity,
    "submultiplicativity": suite_submultiplicativity,
    "monotone-in-n": suite_monotone_in_n,
    "singular-values": suite_singular_values,
    "truncation": suite_truncation,
    "counterexample": suite_counterexample,
}


def run_suites(names: list[str], seed: int) -> list[SuiteResult]:
    if not names:
        raise ConfigError("empty suite selection")
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suites: {', '.join(unknown)}; known: {', '.join(SUITES)}")
    results = []
    for i, name in enumerate(names):
        # independent stream per suite, so selections do not shift each other
        rng = np.random.default_rng([seed, list(SUITES).index(name)])
        res = SuiteResult(name)
        SUITES[name](rng, res)
        results.append(res)
    return results
