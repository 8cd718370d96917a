"""Command-line entry point: ``entropy-numbers bounds|estimate|converge|hilbert|props``.

Exit codes: 0 success, 1 a property suite failed, 2 bad configuration,
3 request outside the oracle's capabilities, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import math
import sys
import time
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .approximation import check_monotone, run_truncation_convergence
from .bounds import best_volume_lower_bound, delta
from .config import (
    budgets,
    build_matrix,
    build_spec,
    int_list,
    load_config,
    parse_field,
    positive_float,
)
from .covering import MAX_EXACT_N, Effort, entropy_bracket
from .errors import CapabilityError, ConfigError, InvalidParameterError, NumericalFailure
from .hilbert import hilbert_identity_check
from .norms import operator_norm
from .operators import DenseOperator
from .props import SUITES, run_suites
from .records import (
    RunRecord,
    bracket_json,
    convergence_json,
    csv_text,
    hilbert_json,
    norm_json,
)

EXIT_OK, EXIT_SUITE_FAILED, EXIT_CONFIG, EXIT_CAPABILITY, EXIT_NUMERICAL = 0, 1, 2, 3, 4
DEFAULT_ETA = 0.05


class Outcome:
    """What a command produced: the JSON payload, CSV rows and a short table."""

    def __init__(self, payload, csv_rows=None, table: str = "", failed: bool = False):
        self.payload = payload
        self.csv_rows = csv_rows
        self.table = table
        self.failed = failed


def _methods(b) -> str:
    return "+".join(b.methods)


def _bracket_row(b, wall_ms: float, method: Optional[str] = None) -> dict:
    return {"n": b.n, "lower": b.lower, "upper": b.upper, "eta": b.eta,
            "method": method or _methods(b), "wall_ms": round(wall_ms, 3)}


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _resolved(cfg: dict, args) -> dict:
    """Config values with command-line overrides applied."""
    out = dict(cfg)
    for key in ("eta", "effort", "seed", "n", "k", "sizes", "n_max"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    if getattr(args, "suite", None) is not None:
        out["suites"] = args.suite
    if getattr(args, "witnesses", False):
        out["witnesses"] = True
    return out


def _eta(cfg: dict) -> float:
    return positive_float(cfg.get("eta", DEFAULT_ETA), "eta")


def _effort(cfg: dict) -> Effort:
    try:
        return Effort.parse(cfg.get("effort", "greedy"))
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None


def _positive(values: list[int], what: str) -> list[int]:
    if not values or any(v < 1 for v in values):
        raise ConfigError(f"{what} must be positive integers")
    return values


# --- commands -------------------------------------------------------------------


def cmd_bounds(cfg: dict) -> Outcome:
    spec = build_spec(cfg)
    if spec.p == math.inf:
        raise ConfigError("diagonal bounds are unavailable on l_inf: there are no useful projections")
    ns = _positive(int_list(cfg.get("n", [1, 2, 4, 8]), "n"), "n")
    rows, csv_rows, lines = [], [], ["n  delta  sandwich  volume_lower"]
    kmax = max(1, len(spec.prefix) + 1)
    for n in ns:
        t0 = time.perf_counter()
        d = delta(spec, n)
        vol = best_volume_lower_bound(spec, kmax, n)
        rows.append({
            "n": n,
            "delta": d.value,
            "attained_k": d.attained_k,
            "ties": list(d.ties),
            "sandwich": {"lower": d.value, "upper": 4 * d.value, "tags": ["diagonal-sandwich"]},
            "volume_lower": {"value": vol, "k_max": kmax, "tags": ["volume-bound"]},
        })
        csv_rows.append({"n": n, "lower": d.value, "upper": 4 * d.value, "eta": 0.0,
                         "method": "diagonal-sandwich", "wall_ms": round(1000 * (time.perf_counter() - t0), 3)})
        lines.append(f"{n}  {_fmt(d.value)}  [{_fmt(d.value)}, {_fmt(4 * d.value)}]  {_fmt(vol)}")
    payload = {"spec": {"prefix": list(spec.prefix), "tail": spec.tail, "p": spec.p,
                        "field": spec.field.value}, "rows": rows}
    return Outcome(payload, csv_rows, "\n".join(lines))


def _operator(cfg: dict) -> DenseOperator:
    if "matrix" in cfg:
        return build_matrix(cfg)
    raise ConfigError("estimate needs a 'matrix' in the config")


def cmd_estimate(cfg: dict) -> Outcome:
    op = _operator(cfg)
    ns = _positive(int_list(cfg.get("n", 1), "n"), "n")
    eta, effort = _eta(cfg), _effort(cfg)
    extra = budgets(cfg)
    witnesses = bool(cfg.get("witnesses", False))
    out, csv_rows, lines = [], [], ["n  lower  upper  eta  methods"]
    for n in ns:
        t0 = time.perf_counter()
        b = entropy_bracket(op, n, eta, effort, **extra)
        wall = 1000 * (time.perf_counter() - t0)
        out.append(bracket_json(b, witnesses=witnesses))
        csv_rows.append(_bracket_row(b, wall))
        lines.append(f"{n}  {_fmt(b.lower)}  {_fmt(b.upper)}  {_fmt(b.eta)}  {_methods(b)}")
    payload = {"operator": op.to_json(), "norm": norm_json(operator_norm(op)),
               "eta": eta, "effort": effort.value, "brackets": out}
    return Outcome(payload, csv_rows, "\n".join(lines))


def cmd_converge(cfg: dict) -> Outcome:
    spec = build_spec(cfg)
    if spec.p == math.inf:
        raise ConfigError("the truncation harness needs p < inf: there are no useful projections on l_inf")
    if "k" not in cfg:
        raise ConfigError("converge needs k")
    k = _positive(int_list(cfg["k"], "k"), "k")
    if len(k) != 1:
        raise ConfigError("converge takes a single k")
    sizes = _positive(int_list(cfg.get("sizes", [1, 2, 3]), "sizes"), "sizes")
    if any(a > b for a, b in zip(sizes, sizes[1:])):
        raise ConfigError(f"sizes must be nondecreasing, got {sizes}")
    eta, effort = _eta(cfg), _effort(cfg)
    rec = run_truncation_convergence(spec, k[0], sizes, eta, effort, **budgets(cfg))
    ok = check_monotone(rec)
    csv_rows = [_bracket_row(r.bracket, r.wall_ms) | {"n": r.n} for r in rec.rows]
    lines = ["size  lower  upper  methods"]
    lines += [f"{r.n}  {_fmt(r.bracket.lower)}  {_fmt(r.bracket.upper)}  {_methods(r.bracket)}" for r in rec.rows]
    lines.append(f"ceiling [{_fmt(rec.ceiling[0])}, {_fmt(rec.ceiling[1])}]  monotone={ok}  "
                 f"stable_from={rec.stable_from}")
    return Outcome(convergence_json(rec, ok), csv_rows, "\n".join(lines))


def _hilbert_matrices(cfg: dict) -> list[tuple[str, DenseOperator]]:
    if "matrix" in cfg:
        op = build_matrix(cfg)
        return [("config matrix", op)]
    rnd = cfg.get("random")
    if not isinstance(rnd, dict):
        raise ConfigError("hilbert needs a 'matrix' or a 'random' mapping {real: count, complex: count, dim: d}")
    extra = set(rnd) - {"real", "complex", "dim"}
    if extra:
        raise ConfigError(f"unknown random keys: {', '.join(sorted(extra))}")
    dim = int_list(rnd.get("dim", 2), "dim")[0]
    seed = int_list(cfg.get("seed", 0), "seed")[0]
    rng = np.random.default_rng(seed)
    mats = []
    for field in ("real", "complex"):
        count = int_list(rnd.get(field, 0), field)[0]
        for i in range(count):
            M = rng.standard_normal((dim, dim))
            if field == "complex":
                M = M + 1j * rng.standard_normal((dim, dim))
            mats.append((f"{field} #{i} (seed {seed})", DenseOperator(M, 2.0, field)))
    if not mats:
        raise ConfigError("random selection is empty")
    return mats


def cmd_hilbert(cfg: dict) -> Outcome:
    n_max = int_list(cfg.get("n_max", 4), "n_max")[0]
    if not 1 <= n_max <= MAX_EXACT_N:
        raise ConfigError(f"n_max must lie in [1, {MAX_EXACT_N}]")
    eta, effort = _eta(cfg), _effort(cfg)
    extra = budgets(cfg)
    reports, csv_rows, lines = [], [], []
    for desc, op in _hilbert_matrices(cfg):
        rep = hilbert_identity_check(op, n_max, eta, effort, description=desc, **extra)
        reports.append(hilbert_json(rep))
        for r in rep.rows:
            for role, b in (("operator", r.operator), ("adjoint", r.adjoint), ("modulus", r.modulus)):
                csv_rows.append(_bracket_row(b, 0.0, f"{role}:{_methods(b)}"))
        lines.append(f"{desc}: verdicts {', '.join(rep.verdicts)}; singular-value gap "
                     f"{rep.singular_value_gap:.2e}")
    violations = sum(r["violations"] for r in reports)
    return Outcome({"reports": reports, "violations": violations}, csv_rows, "\n".join(lines))


def cmd_props(cfg: dict) -> Outcome:
    names = cfg.get("suites", list(SUITES))
    if not isinstance(names, list):
        raise ConfigError("'suites' must be a list")
    seed = int_list(cfg.get("seed", 0), "seed")[0]
    results = run_suites([str(n) for n in names], seed)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({r.checked} checks)" for r in results]
    for r in results:
        lines += [f"    {f}" for f in r.failures]
    payload = {"suites": [r.to_json() for r in results], "all_passed": all(r.passed for r in results)}
    return Outcome(payload, None, "\n".join(lines), failed=not payload["all_passed"])


COMMANDS = {
    "bounds": cmd_bounds,
    "estimate": cmd_estimate,
    "converge": cmd_converge,
    "hilbert": cmd_hilbert,
    "props": cmd_props,
}


# --- plumbing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entropy-numbers", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML run configuration")
        p.add_argument("--out", help="write the JSON record (or CSV) here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--eta", type=float)
        p.add_argument("--effort", choices=("greedy", "exact"))
        p.add_argument("--seed", type=int)
        p.add_argument("--n", type=int, nargs="+")
        p.add_argument("--k", type=int)
        p.add_argument("--sizes", type=int, nargs="+")
        p.add_argument("--n-max", dest="n_max", type=int)
        p.add_argument("--suite", nargs="*", help="property suites to run (props only)")
        p.add_argument("--witnesses", action="store_true", help="include witness points in JSON")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = _resolved(load_config(args.config), args)
        if "field" in cfg:
            parse_field(cfg["field"])
        outcome = COMMANDS[args.command](cfg)
        if args.format == "csv":
            if outcome.csv_rows is None:
                raise ConfigError(f"{args.command} has no CSV form")
            text = csv_text(outcome.csv_rows)
        else:
            record = RunRecord(
                command=args.command,
                config=cfg,
                seed=int_list(cfg.get("seed", 0), "seed")[0],
                version=__version__,
                timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(),
                payload=outcome.payload,
                wall_time_s=round(time.perf_counter() - t0, 3),
            )
            text = record.dumps()
    except (ConfigError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapabilityError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(outcome.table)
    else:
        sys.stdout.write(text)
    return EXIT_SUITE_FAILED if outcome.failed else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
