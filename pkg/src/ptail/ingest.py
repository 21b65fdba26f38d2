"""Reading loss data from delimited text and writing curve tables."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .curve import TailCurve
from .ustat import SortedSample

CSV_HEADER = ("u", "m", "t_hat", "ci_lo", "ci_hi", "alpha_hat")


class DataError(ValueError):
    """Input data could not be turned into a valid sample."""


@dataclass(frozen=True)
class IngestSpec:
    """How to turn one column of a delimited file into a sample.

    The minimum filter (keep values ``>= min_threshold``) is applied before
    dividing by ``rescale``.
    """

    path: str
    column: str | int = 0
    delimiter: str | None = None
    header: bool | None = None
    min_threshold: float | None = None
    rescale: float = 1.0


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _sniff_delimiter(first_line: str) -> str:
    for d in (",", "\t", ";"):
        if d in first_line:
            return d
    return " "


def read_column(spec: IngestSpec, stream=None) -> np.ndarray:
    if stream is None:
        if spec.path == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(spec.path, newline="") as fh:
                    text = fh.read()
            except OSError as exc:
                raise DataError(f"read: cannot open {spec.path!r}: {exc.strerror}") from exc
    else:
        text = stream.read()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DataError(f"read: {spec.path!r} contains no data")
    delim = spec.delimiter or _sniff_delimiter(lines[0])
    if delim == " ":
        rows = [ln.split() for ln in lines]
    else:
        rows = list(csv.reader(io.StringIO("\n".join(lines)), delimiter=delim))
    first = rows[0]
    if isinstance(spec.column, str) and not spec.column.lstrip("-").isdigit():
        header = True
        names = [c.strip() for c in first]
        if spec.column not in names:
            raise DataError(f"column: {spec.column!r} not in header {names}")
        col = names.index(spec.column)
    else:
        col = int(spec.column)
        header = spec.header
        if header is None:
            header = col < len(first) and not _is_number(first[col].strip())
    body = rows[1:] if header else rows
    values = []
    for lineno, row in enumerate(body, start=2 if header else 1):
        if col >= len(row) or not row[col].strip():
            raise DataError(f"column: line {lineno} has no value in column {spec.column!r}")
        cell = row[col].strip()
        try:
            values.append(float(cell))
        except ValueError:
            raise DataError(f"parse: line {lineno}: {cell!r} is not a number") from None
    if not values:
        raise DataError(f"column: column {spec.column!r} is empty")
    return np.asarray(values, dtype=float)


def load_sample(spec: IngestSpec, stream=None) -> SortedSample:
    x = read_column(spec, stream)
    if spec.min_threshold is not None:
        x = x[x >= spec.min_threshold]
    if not spec.rescale > 0:
        raise DataError("filter: rescale divisor must be positive")
    x = x / spec.rescale
    if x.size < 2:
        raise DataError(f"filter: {x.size} observation(s) left after filtering; need at least 2")
    try:
        return SortedSample(x)
    except ValueError as exc:
        raise DataError(f"validate: {exc}") from None


def fmt(v: float) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.15g}"


def curve_csv(curve: TailCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in curve.rows():
        w.writerow([fmt(row[0]), str(row[1]), *(fmt(v) for v in row[2:])])
    return buf.getvalue()


def _json_num(v: float):
    if not math.isfinite(v):
        return None
    return float(f"{v:.15g}")


def curve_json(curve: TailCurve) -> str:
    points = [
        dict(zip(CSV_HEADER, (_json_num(r[0]), r[1], *(_json_num(v) for v in r[2:]))))
        for r in curve.rows()
    ]
    doc = {
        "n": curve.n,
        "level": curve.level,
        "method": None if curve.method is None else curve.method.kind,
        "points": points,
    }
    return json.dumps(doc, indent=1) + "\n"
