"""
CSV and JSON writers for sweep rows.

CSV carries a header and the columns of :attr:`SweepRow.FIELDS`, floats formatted with 12 significant digits. JSON
holds the rows at full precision together with a metadata block.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from collections.abc import Iterable, Sequence
from enum import StrEnum
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Optional, TextIO

from ..exceptions import ConfigError
from ..units import constants_digest
from ..utils import sec_to_duration, utc_timestamp
from .sweep import SweepRow, SweepSpec


class OutputFormat(StrEnum):
    Csv = "csv"
    Json = "json"

    @classmethod
    def for_path(cls, path: Optional[Path]) -> "OutputFormat":
        if path is not None and path.suffix.lower() == ".json":
            return cls.Json
        return cls.Csv


def package_version() -> str:
    try:
        return version("cpforce")
    except PackageNotFoundError:
        return "unknown"


def format_number(value: float) -> str:
    return f"{value:.11e}"


def csv_text(rows: Iterable[SweepRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SweepRow.FIELDS)
    for row in rows:
        writer.writerow(
            [str(row.terms_l) if name == "terms_l" else format_number(getattr(row, name)) for name in SweepRow.FIELDS]
        )
    return buffer.getvalue()


def sweep_metadata(spec: Optional[SweepSpec], elapsed: Optional[float] = None) -> dict[str, Any]:
    metadata: dict[str, Any] = {
        "version": package_version(),
        "constants_sha256": constants_digest(),
        "generated_at": utc_timestamp(),
    }
    if spec is not None:
        metadata["spec"] = spec.describe()
    if elapsed is not None:
        metadata["elapsed"] = sec_to_duration(elapsed)
    return metadata


def json_text(rows: Iterable[SweepRow], metadata: Optional[dict[str, Any]] = None) -> str:
    document = {
        "metadata": metadata or {},
        "rows": [{name: getattr(row, name) for name in (*SweepRow.FIELDS, "converged")} for row in rows],
    }
    return json.dumps(document, indent=2) + "\n"


def emit(
    rows: Sequence[SweepRow],
    fmt: OutputFormat,
    destination: Optional[Path | TextIO] = None,
    *,
    spec: Optional[SweepSpec] = None,
    elapsed: Optional[float] = None,
) -> Optional[Path]:
    """
    Writes ``rows`` to ``destination`` (a path, an open text stream, or stdout when omitted).

    :returns: the path written, if any
    """
    if fmt == OutputFormat.Json:
        text = json_text(rows, sweep_metadata(spec, elapsed))
    else:
        text = csv_text(rows)

    if isinstance(destination, Path):
        destination.parent.mkdir(parents=True, exist_ok=True)
        destination.write_text(text, encoding="utf-8", newline="")
        return destination
    (destination or sys.stdout).write(text)
    return None


def _row_from_mapping(record: dict[str, Any]) -> SweepRow:
    try:
        return SweepRow(
            **{name: int(record[name]) if name == "terms_l" else float(record[name]) for name in SweepRow.FIELDS},
            converged=bool(record.get("converged", True)),
        )
    except (KeyError, ValueError) as e:
        raise ConfigError(f"malformed sweep row {record!r}: {e}") from e


def read_rows(path: Path) -> list[SweepRow]:
    """Reads rows back from a file written by :func:`emit`; the format follows the suffix."""
    text = path.read_text(encoding="utf-8")
    if OutputFormat.for_path(path) == OutputFormat.Json:
        return [_row_from_mapping(record) for record in json.loads(text)["rows"]]

    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SweepRow.FIELDS:
        raise ConfigError(f"unexpected CSV header {reader.fieldnames!r} in {path}")
    return [_row_from_mapping(record) for record in reader]


__all__ = [
    "OutputFormat",
    "package_version",
    "format_number",
    "csv_text",
    "json_text",
    "sweep_metadata",
    "emit",
    "read_rows",
]
