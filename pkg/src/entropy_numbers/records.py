"""JSON/CSV serialization of results and the run record wrapped around them."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from typing import Any, Iterable

import numpy as np

from .approximation import ConvergenceRecord, CounterexampleReport
from .covering import EntropyBracket
from .hilbert import HilbertIdentityReport
from .norms import NormBracket

CSV_COLUMNS = ("n", "lower", "upper", "eta", "method", "wall_ms")


def jsonable(value: Any) -> Any:
    """Plain JSON types only; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, complex):
        return [jsonable(value.real), jsonable(value.imag)]
    return value


def bracket_json(b: EntropyBracket, witnesses: bool = False) -> dict:
    return b.to_json(witnesses=witnesses)


def norm_json(b: NormBracket) -> dict:
    return b.to_json()


def convergence_json(rec: ConvergenceRecord, check: bool) -> dict:
    return {
        "k": rec.k,
        "spec": {"prefix": list(rec.spec.prefix), "tail": rec.spec.tail, "p": rec.spec.p,
                 "field": rec.spec.field.value},
        "ceiling": {"lower": rec.ceiling[0], "upper": rec.ceiling[1], "tags": ["diagonal-sandwich"]},
        "rows": [{"size": r.n, "bracket": bracket_json(r.bracket)} for r in rec.rows],
        "lower_nondecreasing": rec.lower_nondecreasing,
        "stable_from": rec.stable_from,
        "monotone": check,
    }


def hilbert_json(rep: HilbertIdentityReport) -> dict:
    return {
        "description": rep.description,
        "matrix": rep.matrix.to_json(),
        "rows": [
            {
                "n": r.n,
                "operator": bracket_json(r.operator),
                "adjoint": bracket_json(r.adjoint),
                "modulus": bracket_json(r.modulus),
                "verdict": r.verdict,
            }
            for r in rep.rows
        ],
        "singular_values": {
            "operator": list(rep.singular_values[0]),
            "adjoint": list(rep.singular_values[1]),
            "modulus": list(rep.singular_values[2]),
            "max_gap": rep.singular_value_gap,
            "agree": rep.singular_values_agree,
        },
        "violations": rep.violations,
    }


def counterexample_json(rep: CounterexampleReport) -> dict:
    return {
        "n": rep.n,
        "norm": norm_json(rep.norm),
        "eps1": bracket_json(rep.eps1),
        "limit_eps1": bracket_json(rep.limit_eps1),
    }


def canonical_dumps(payload: Any) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, separators=(",", ":"), allow_nan=False)


def payload_hash(payload: Any) -> str:
    return hashlib.sha256(canonical_dumps(payload).encode("utf-8")).hexdigest()


@dataclass
class RunRecord:
    """Everything needed to reproduce a run.

    Only ``payload`` is covered by the determinism guarantee; the timestamp
    and wall time sit outside it.
    """

    command: str
    config: dict
    seed: int
    version: str
    timestamp: str
    payload: Any
    wall_time_s: float

    def to_json(self) -> dict:
        return jsonable({
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "timestamp": self.timestamp,
            "wall_time_s": self.wall_time_s,
            "payload": self.payload,
            "payload_sha256": payload_hash(self.payload),
        })

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def csv_text(rows: Iterable[dict]) -> str:
    """CSV with the fixed column order and a header row."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: jsonable(row.get(k, "")) for k in CSV_COLUMNS})
    return buf.getvalue()
