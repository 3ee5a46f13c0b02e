"""
Report files for the Networks Application.
Every command writes plot-ready CSV tables and one structured text report.
Each file starts with a single timestamp line; the rest depends only on
the resolved configuration, so repeated runs give identical bodies.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

from django.utils import timezone

from .conf import hetnet_settings

logger = logging.getLogger(__name__)

HEADER_PREFIX = "# generated "


def timestamp_line():
    return f"{HEADER_PREFIX}{timezone.now().isoformat(timespec='seconds')}"


def csv_text(fieldnames, rows):
    """CSV text of a list of dicts or tuples, '\\n' line endings."""
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, fieldnames=list(fieldnames), extrasaction="ignore",
        lineterminator="\n",
    )
    writer.writeheader()
    for row in rows:
        if not isinstance(row, dict):
            row = dict(zip(fieldnames, row))
        writer.writerow({key: _cell(value) for key, value in row.items()})
    return buffer.getvalue()


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class Report:
    """
    Collects the sections and tables of one command run.
    The configuration is echoed at the top of the text report.
    """

    command: str
    config: dict
    sections: list = dataclass_field(default_factory=list)
    tables: dict = dataclass_field(default_factory=dict)

    def add_section(self, title, items):
        """Append a titled block of (key, value) pairs."""
        self.sections.append((title, [(str(k), _cell(v)) for k, v in items]))

    def add_table(self, name, fieldnames, rows):
        self.tables[name] = (list(fieldnames), list(rows))

    def resolved_config(self):
        return {
            "command": self.command,
            "spec": self.config,
            "settings": hetnet_settings.as_dict(),
        }

    def body(self):
        """The report text without its timestamp line."""
        lines = ["[config]"]
        lines.extend(
            json.dumps(self.resolved_config(), indent=2, sort_keys=True,
                       default=str).splitlines()
        )
        for title, items in self.sections:
            lines.append("")
            lines.append(f"[{title}]")
            lines.extend(f"{key} = {value}" for key, value in items)
        if self.tables:
            lines.append("")
            lines.append("[tables]")
            lines.extend(f"{name}.csv" for name in sorted(self.tables))
        return "\n".join(lines) + "\n"

    def text(self):
        return f"{timestamp_line()}\n{self.body()}"

    def write(self, output_dir=None, stem=None):
        """Write the text report and every table; returns the paths."""
        output_dir = Path(output_dir or hetnet_settings.OUTPUT_DIR)
        output_dir.mkdir(parents=True, exist_ok=True)
        stem = stem or self.command
        paths = []
        stamp = timestamp_line()
        report_path = output_dir / f"{stem}.txt"
        report_path.write_text(f"{stamp}\n{self.body()}", encoding="utf-8")
        paths.append(report_path)
        for name, (fieldnames, rows) in sorted(self.tables.items()):
            path = output_dir / f"{stem}_{name}.csv"
            path.write_text(f"{stamp}\n{csv_text(fieldnames, rows)}",
                            encoding="utf-8")
            paths.append(path)
        logger.info("Wrote %d report files to %s", len(paths), output_dir)
        return paths


def strip_timestamp(text):
    """Drop the timestamp line so two reports can be compared."""
    lines = text.splitlines(keepends=True)
    if lines and lines[0].startswith(HEADER_PREFIX):
        lines = lines[1:]
    return "".join(lines)
