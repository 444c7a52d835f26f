"""
Report Manager for stqft

Writes a RunReport as JSON lines: a config record, one record per frame in
frame order, then an aggregate record. Keys are sorted and no timestamps are
written, so identical runs give byte-identical reports.
"""

import json
from pathlib import Path
from typing import Any

import numpy as np

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import SignalFileException
from stqft.models.run_report import RunReport

logger = get_logger(__name__)


def _plain(value: Any) -> Any:
    """Turn numpy scalars and arrays into JSON types."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def format_report(report: RunReport) -> str:
    """The report as JSON-lines text."""
    lines = [
        json.dumps(_plain(record), sort_keys=True, ensure_ascii=False)
        for record in report.records()
    ]
    return "\n".join(lines) + "\n"


def write_report(report: RunReport, path: str | Path) -> None:
    """
    Write the report file.

    Raises:
        SignalFileException: If the file cannot be written
    """
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(format_report(report))
    except OSError as e:
        raise SignalFileException(f"Cannot write report {path}: {e}") from e
    logger.info(f"Wrote report with {report.total_frames} frame records to {path}")


def read_report(path: str | Path) -> list[dict[str, Any]]:
    """Read a report back as a list of records."""
    try:
        with open(path, encoding="utf-8") as f:
            return [json.loads(line) for line in f if line.strip()]
    except OSError as e:
        raise SignalFileException(f"Cannot read report {path}: {e}") from e
