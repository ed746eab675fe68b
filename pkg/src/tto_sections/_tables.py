"""Result tables and result documents.

Each class renders itself via ``render()``: tables as CSV with a header row,
documents as sorted-key JSON.  Floats are written with ``repr`` so identical
runs give identical bytes.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np


def _is_complex(value: Any) -> bool:
    return isinstance(value, (complex, np.complexfloating))


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return str(value)


@dataclass(frozen=True)
class Table:
    """A flat table of per-n diagnostics.

    Columns holding complex numbers are split into ``<name>_re`` and
    ``<name>_im``.
    """

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Any, ...], ...] = ()

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"table {self.name!r}: row {row!r} does not match columns {self.columns!r}")

    def _complex_columns(self) -> list[bool]:
        return [any(_is_complex(row[i]) for row in self.rows) for i in range(len(self.columns))]

    def render(self) -> str:
        split = self._complex_columns()
        header: list[str] = []
        for name, is_complex in zip(self.columns, split):
            header.extend([f"{name}_re", f"{name}_im"] if is_complex else [name])
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in self.rows:
            cells: list[str] = []
            for value, is_complex in zip(row, split):
                if is_complex:
                    z = complex(value)
                    cells.extend([_cell(z.real), _cell(z.imag)])
                else:
                    cells.append(_cell(value))
            writer.writerow(cells)
        return buffer.getvalue()

    def __str__(self) -> str:
        return self.render()


def _plain(value: Any) -> Any:
    """JSON-compatible copy of ``value``; complex as [re, im], NaN as null."""
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) or math.isinf(value) else value
    if _is_complex(value):
        return [_plain(value.real), _plain(value.imag)]
    if hasattr(value, "value") and isinstance(value.value, str):
        return value.value
    return value


@dataclass(frozen=True)
class ResultDocument:
    """Machine-readable record of one experiment run."""

    name: str
    kind: str
    status: int
    passed: bool
    summary: Mapping[str, Any] = field(default_factory=dict)
    tables: tuple[str, ...] = ()
    config: Mapping[str, Any] = field(default_factory=dict)
    error: Optional[Mapping[str, Any]] = None

    def render(self) -> str:
        document = {
            "name": self.name,
            "kind": self.kind,
            "status": self.status,
            "passed": self.passed,
            "summary": _plain(self.summary),
            "tables": list(self.tables),
            "config": _plain(self.config),
        }
        if self.error is not None:
            document["error"] = _plain(self.error)
        return json.dumps(document, sort_keys=True, indent=2) + "\n"

    def __str__(self) -> str:
        return self.render()
