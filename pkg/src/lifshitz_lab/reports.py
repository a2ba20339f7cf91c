"""JSON and CSV writers with lossless floating-point output."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .free_energy.common import _plain

FLOAT_FMT = ".17g"


def fmt(x) -> str:
    """17 significant digits for floats; str() for everything else."""
    if isinstance(x, float):
        return format(x, FLOAT_FMT) if math.isfinite(x) else str(x)
    if x is None:
        return ""
    return str(x)


def to_json(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(obj))
    return path


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(header, rows))
    return path


def read_csv(path):
    """Rows as dicts; numeric fields converted to float where possible."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            conv = {}
            for k, v in row.items():
                try:
                    conv[k] = float(v)
                except ValueError:
                    conv[k] = v
            out.append(conv)
    return out
