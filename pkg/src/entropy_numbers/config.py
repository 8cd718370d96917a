"""Run configuration: a YAML mapping merged with command-line overrides."""

from __future__ import annotations

import math
from typing import Any, Optional

import numpy as np
import yaml

from .errors import ConfigError, InvalidParameterError
from .geometry import Field
from .operators import DenseOperator, DiagonalSpec

KNOWN_KEYS = {
    "field", "p", "spec", "matrix", "n", "k", "sizes", "eta", "effort", "seed",
    "n_max", "random", "suites", "witnesses", "budgets",
}
BUDGET_KEYS = {"node_budget", "round_budget", "point_budget", "exact_point_budget"}


def load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping of keys to values")
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def parse_p(value: Any) -> float:
    if isinstance(value, str) and value.strip().lower() in {"inf", "infinity", "oo"}:
        return math.inf
    try:
        p = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"p must be a number >= 1 or 'inf', got {value!r}") from None
    if not p >= 1:
        raise ConfigError(f"p must be >= 1, got {value!r}")
    return p


def parse_field(value: Any) -> Field:
    try:
        return Field.parse(value or "real")
    except (InvalidParameterError, ValueError):
        raise ConfigError(f"field must be 'real' or 'complex', got {value!r}") from None


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(f"{what} must be an integer, got {value!r}")
    return int(value)


def int_list(value: Any, what: str) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [_int(v, what) for v in value]
    return [_int(value, what)]


def positive_float(value: Any, what: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a number, got {value!r}") from None
    if not v > 0 or not math.isfinite(v):
        raise ConfigError(f"{what} must be positive and finite, got {value!r}")
    return v


def build_spec(cfg: dict) -> DiagonalSpec:
    raw = cfg.get("spec")
    if not isinstance(raw, dict):
        raise ConfigError("config needs a 'spec' mapping with 'prefix' and 'tail'")
    extra = set(raw) - {"prefix", "tail"}
    if extra:
        raise ConfigError(f"unknown spec keys: {', '.join(sorted(extra))}")
    try:
        return DiagonalSpec(
            tuple(float(x) for x in raw.get("prefix", []) or []),
            float(raw.get("tail", 0.0)),
            parse_p(cfg.get("p", 2)),
            parse_field(cfg.get("field")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad spec: {exc}") from None


def _entry(x: Any) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(x.replace(" ", ""))
    return complex(float(x))


def build_matrix(cfg: dict) -> DenseOperator:
    raw = cfg.get("matrix")
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise ConfigError("config needs a 'matrix' given as a list of rows")
    field = parse_field(cfg.get("field"))
    try:
        entries = np.array([[_entry(x) for x in row] for row in raw])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad matrix entry: {exc}") from None
    if field is Field.REAL:
        if np.any(entries.imag != 0):
            raise ConfigError("complex entries need field: complex")
        entries = entries.real
    try:
        return DenseOperator(entries, parse_p(cfg.get("p", 2)), field)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None


def budgets(cfg: dict) -> dict:
    raw = cfg.get("budgets") or {}
    if not isinstance(raw, dict):
        raise ConfigError("'budgets' must be a mapping")
    extra = set(raw) - BUDGET_KEYS
    if extra:
        raise ConfigError(f"unknown budget keys: {', '.join(sorted(extra))}")
    return {k: _int(v, k) for k, v in raw.items()}
