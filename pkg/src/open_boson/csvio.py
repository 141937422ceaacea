"""Deterministic CSV output: header row always present, 17 significant digits."""

from __future__ import annotations

import csv
import io
import os
from typing import Iterable, Sequence


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, float)) or hasattr(value, "__float__"):
        return f"{float(value):.17g}"
    return str(value)


def render(header: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence],
              comments: Sequence[str] = ()) -> None:
    text = render(header, rows, comments)
    with open(path, "w", newline="") as fh:
        fh.write(text)
