"""Report and CSV emission."""
import csv
import io
import logging
import math
import typing
from enum import Enum
from pathlib import Path

import numpy as np
import toml

from bubbletower.const import VERSION
from bubbletower.utils import write_atomic

from .const import Report, RunContext, Table

_LOGGER = logging.getLogger(__name__)


def clean_value(value: typing.Any) -> typing.Any:
    """TOML-ready copy: no None, plain Python numbers, lists for sequences"""
    if isinstance(value, Enum):
        return value.value

    if isinstance(value, np.ndarray):
        return [clean_value(v) for v in value.tolist()]

    if isinstance(value, (np.integer,)):
        return int(value)

    if isinstance(value, (np.floating,)):
        value = float(value)

    if isinstance(value, float) and not math.isfinite(value):
        return str(value)

    if isinstance(value, typing.Mapping):
        return {str(k): clean_value(v) for k, v in value.items() if v is not None}

    if isinstance(value, (list, tuple)):
        return [clean_value(v) for v in value if v is not None]

    if isinstance(value, (set, frozenset)):
        return sorted(clean_value(v) for v in value)

    if isinstance(value, Path):
        return str(value)

    return value


def report_document(report: Report, context: RunContext) -> typing.Dict[str, typing.Any]:
    document = {
        "provenance": {
            "command": report.command,
            "version": VERSION,
            "config_hash": context.config_hash,
            "seed": context.seed,
        },
        "summary": {"passed": report.passed, "tables": sorted(report.tables)},
    }
    document.update(report.sections)

    return clean_value(document)


def render_report(report: Report, context: RunContext) -> str:
    return toml.dumps(report_document(report, context))


def render_csv(table: Table) -> str:
    """RFC 4180 text (CRLF line endings)"""
    with io.StringIO() as csv_io:
        writer = csv.writer(csv_io)
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow(row)

        return csv_io.getvalue()


def write_outputs(report: Report, context: RunContext) -> typing.List[Path]:
    """Write <command>.toml and one CSV per table atomically"""
    written = [
        write_atomic(
            context.output_dir / f"{report.command}.toml", render_report(report, context)
        )
    ]

    for name, table in sorted(report.tables.items()):
        written.append(write_atomic(context.output_dir / f"{name}.csv", render_csv(table)))

    _LOGGER.info("Wrote %s file(s) to %s", len(written), context.output_dir)
    return written


def failure_report(command: str, error: Exception) -> Report:
    """Report for an analysis that stopped with an error"""
    section: typing.Dict[str, typing.Any] = {
        "type": type(error).__name__,
        "message": str(error),
    }
    for attribute in ("condition", "violations"):
        if hasattr(error, attribute):
            section[attribute] = getattr(error, attribute)

    return Report(command=command, passed=False, sections={"error": section})
