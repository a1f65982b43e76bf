"""Command-line front end: one configurable command per analysis."""
from .const import Command, Report, RunContext, Table
from .report import failure_report, render_csv, render_report, write_outputs
