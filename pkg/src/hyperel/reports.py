"""Machine-readable reports, canonical serialization, and checkpoints.

Reports hold only JSON-safe primitives: every integer becomes a decimal
string at build time (ell values overflow 64-bit consumers within a few
dozen rows), rationals become "p/q", and dumps are canonical (sorted keys,
tight separators, trailing newline). Identical runs therefore produce
byte-identical files, with the timing field as the single documented
exception.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import CheckpointError
from .exact_num import DUSART_X_MIN

SCHEMA_VERSION = "1"
FORMATS = ("json", "csv")
SEARCH_CSV_COLUMNS = ("variant", "n1", "n2", "ell", "r", "equal", "magnitude")


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation parameters, echoed verbatim into every report."""

    command: str
    variant: int = 1
    n2_max: int = 1
    sieve_limit: int = 0  # 0 means derive the smallest admissible value
    output_path: Optional[str] = None
    format: str = "json"
    threads: int = 1
    checkpoint_path: Optional[str] = None

    def __post_init__(self):
        if self.n2_max < 1:
            raise ValueError(f"n2_max must be >= 1, got {self.n2_max}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.variant not in (1, 3):
            raise ValueError(f"variant must be 1 or 3, got {self.variant}")
        floor_limit = 4 * self.n2_max + 2
        if self.sieve_limit == 0:
            object.__setattr__(self, "sieve_limit", max(floor_limit, 2 * DUSART_X_MIN))
        elif self.sieve_limit < floor_limit:
            raise ValueError(
                f"sieve_limit must be >= {floor_limit} for n2_max {self.n2_max}, "
                f"got {self.sieve_limit}"
            )


@dataclass(frozen=True)
class Report:
    """Canonical-form report; all leaves are str/bool/None, ready to dump."""

    schema_version: str
    command: str
    parameters: Dict[str, Any]
    records: Tuple[Any, ...]
    summary: Dict[str, Any]
    timing: str


def canon(value: Any) -> Any:
    """Rewrite a value tree into the canonical JSON-safe form."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        raise TypeError(f"floats are not canonical: {value!r}")
    if isinstance(value, (list, tuple)):
        return [canon(v) for v in value]
    if isinstance(value, dict):
        return {str(k): canon(v) for k, v in value.items()}
    if dataclasses.is_dataclass(value):
        return canon(dataclasses.asdict(value))
    raise TypeError(f"cannot canonicalize {type(value).__name__}")


def parse_canonical_int(text: str) -> int:
    return int(text)


def parse_canonical_rational(text: str) -> Fraction:
    return Fraction(text)


def build_report(
    config: RunConfig,
    records: Sequence[Any],
    summary: Dict[str, Any],
    timing_seconds: float,
    extra_parameters: Optional[Dict[str, Any]] = None,
) -> Report:
    params = dict(dataclasses.asdict(config))
    if extra_parameters:
        params.update(extra_parameters)
    return Report(
        schema_version=SCHEMA_VERSION,
        command=config.command,
        parameters=canon(params),
        records=tuple(canon(list(records))),
        summary=canon(summary),
        timing=f"{timing_seconds:.3f}",
    )


def _dump(obj: Any) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode("ascii")


def report_json_bytes(report: Report, zero_timing: bool = False) -> bytes:
    data = dataclasses.asdict(report)
    if zero_timing:
        data["timing"] = "0.000"
    return _dump(data)


def strip_timing_bytes(data: bytes) -> bytes:
    """Re-dump a serialized report with the timing field zeroed.

    The determinism guarantee is byte identity of everything except timing;
    this produces the comparison surface from a written file.
    """
    obj = json.loads(data.decode("ascii"))
    obj["timing"] = "0.000"
    return _dump(obj)


def report_from_json_bytes(data: bytes) -> Report:
    obj = json.loads(data.decode("ascii"))
    return Report(
        schema_version=obj["schema_version"],
        command=obj["command"],
        parameters=obj["parameters"],
        records=tuple(obj["records"]),
        summary=obj["summary"],
        timing=obj["timing"],
    )


def search_csv_bytes(records: Sequence[Dict[str, Any]]) -> bytes:
    """Delimited form of search records (canonical dicts in, text out)."""
    lines = [",".join(SEARCH_CSV_COLUMNS)]
    for rec in records:
        row = []
        for col in SEARCH_CSV_COLUMNS:
            v = rec[col]
            row.append("true" if v is True else "false" if v is False else str(v))
        lines.append(",".join(row))
    return ("\n".join(lines) + "\n").encode("ascii")


def write_report(report: Report, config: RunConfig) -> str:
    """Write the report to config.output_path in config.format; returns path."""
    if config.output_path is None:
        raise ValueError("write_report needs output_path set")
    if config.format == "csv":
        if config.command != "search":
            raise ValueError("csv format is defined for the search command only")
        payload = search_csv_bytes(list(report.records))
    else:
        payload = report_json_bytes(report)
    _atomic_write(config.output_path, payload)
    return config.output_path


def _atomic_write(path: str, payload: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# ---- Checkpoints ----

CHECKPOINT_KIND_SEARCH = "search"
CHECKPOINT_KIND_Q3 = "answer-q3"


def save_checkpoint(path: str, kind: str, semantic_config: Dict[str, Any], state: Dict[str, Any]) -> None:
    """Atomic write: a partially written checkpoint never replaces a good one."""
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "config": canon(semantic_config),
        "state": state,
    }
    _atomic_write(path, _dump(payload))


def load_checkpoint(path: str, kind: str, semantic_config: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    """Read a checkpoint back, or None to start fresh.

    Missing file: fresh start. Unreadable or structurally wrong file: fresh
    start with a warning (the run must not be blocked by a torn write).
    Config mismatch: CheckpointError, because silently recomputing under
    different parameters would masquerade as a resumed run.
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except FileNotFoundError:
        return None
    except OSError as exc:
        print(f"warning: checkpoint {path} unreadable ({exc}); restarting", file=sys.stderr)
        return None
    try:
        obj = json.loads(raw.decode("ascii"))
        if obj["schema_version"] != SCHEMA_VERSION or obj["kind"] != kind:
            raise ValueError("wrong schema_version or kind")
        stored_config = obj["config"]
        state = obj["state"]
    except (ValueError, KeyError, TypeError, UnicodeDecodeError) as exc:
        print(f"warning: checkpoint {path} corrupt ({exc}); restarting", file=sys.stderr)
        return None
    if stored_config != canon(semantic_config):
        raise CheckpointError(
            f"checkpoint {path} was written for config {stored_config}, "
            f"current run has {canon(semantic_config)}; refusing to resume"
        )
    return state
