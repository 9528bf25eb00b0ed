"""CSV dialect: ``#``-prefixed ``key: value`` header lines, comma-separated body,
floats written with 17 significant digits so a round trip is exact."""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from . import __version__


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(value)


def render_table(header: dict, columns: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write(f"# tool: greybody {__version__}\n")
    for key, value in header.items():
        buf.write(f"# {key}: {format_value(value) if not isinstance(value, str) else value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def parse_table(text: str):
    """Inverse of :func:`render_table`; values are returned as strings."""
    header, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            header[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    reader = csv.DictReader(body)
    return header, list(reader)
