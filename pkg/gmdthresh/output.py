"""Number formatting and the CSV / report writers used by the CLI."""

import csv
import math
from typing import Iterable, Optional, TextIO, Sequence


def fmt(value: Optional[float], digits: int) -> str:
    """`digits` significant digits; None becomes an empty field."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def write_csv(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence[Optional[float]]], digits: int):
    """One header line, then one comma-separated line per row."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v, digits) for v in row])


def write_report(stream: TextIO, items: Iterable[tuple[str, object]], digits: int):
    """`key: value` lines; floats go through fmt, everything else through str."""
    for key, value in items:
        if isinstance(value, float) or value is None:
            text = fmt(value, digits)
        elif isinstance(value, (list, tuple)):
            text = " ".join(fmt(v, digits) if isinstance(v, float) else str(v) for v in value)
        else:
            text = str(value)
        stream.write(f"{key}: {text}\n")
