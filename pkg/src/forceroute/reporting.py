# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
CSV and JSON artifact writers.

CSV artifacts start with a ``# config: {...}`` line echoing the run
configuration, followed by a header row and one row per trial or
configuration. Notes such as aggregates follow as ``# name: {...}`` lines.
Floats are written with 12 significant digits.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import typing as t
from collections.abc import Sequence


def format_value(value: t.Any) -> t.Any:
    """
    Normalize a value for output.

    Floats are rounded to 12 significant digits; ``None`` stays ``None``.
    """
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {key: format_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [format_value(item) for item in value]
    return value


def _csv_cell(value: t.Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _dumps(value: t.Any) -> str:
    return json.dumps(format_value(value), sort_keys=True, separators=(",", ":"))


@dataclasses.dataclass
class Artifact:
    """
    Tabular result of one command.
    """

    config: dict[str, t.Any]
    columns: list[str]
    rows: list[dict[str, t.Any]] = dataclasses.field(default_factory=list)
    notes: dict[str, t.Any] = dataclasses.field(default_factory=dict)

    def drop_columns(self, names: Sequence[str]) -> None:
        """
        Remove columns (and row values) in place.
        """
        drop = set(names)
        self.columns = [column for column in self.columns if column not in drop]
        for row in self.rows:
            for name in drop:
                row.pop(name, None)

    def to_csv(self) -> str:
        """
        Render as CSV text.
        """
        out = io.StringIO()
        out.write(f"# config: {_dumps(self.config)}\n")
        writer = csv.DictWriter(
            out, fieldnames=self.columns, lineterminator="\n", extrasaction="ignore"
        )
        writer.writeheader()
        for row in self.rows:
            writer.writerow({key: _csv_cell(row.get(key)) for key in self.columns})
        for name, value in self.notes.items():
            out.write(f"# {name}: {_dumps(value)}\n")
        return out.getvalue()

    def to_json(self) -> str:
        """
        Render as JSON text.
        """
        data = {
            "config": self.config,
            "columns": self.columns,
            "rows": [{key: row.get(key) for key in self.columns} for row in self.rows],
            **self.notes,
        }
        return json.dumps(format_value(data), indent=2, sort_keys=True) + "\n"

    def render(self, fmt: t.Literal["csv", "json"]) -> str:
        """
        Render in the given format.
        """
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"Unknown output format {fmt!r}")


def write_artifact(
    artifact: Artifact, fmt: t.Literal["csv", "json"], path: str | None
) -> None:
    """
    Write an artifact to ``path``, or to standard output if ``path`` is ``None``.
    """
    text = artifact.render(fmt)
    if path is None:
        print(text, end="")
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


__all__ = (
    "Artifact",
    "format_value",
    "write_artifact",
)
