"""Deterministic JSON/CSV helpers for report objects.

Infinite values are encoded as the strings "inf" / "-inf" rather than
sentinel numbers; numpy scalars and arrays are converted to plain Python
types.  Output text is byte-stable for identical inputs.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np


def json_ready(obj):
    """Recursively convert an object tree to JSON-encodable plain types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: json_ready(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(x) for x in obj]
    if isinstance(obj, np.ndarray):
        return [json_ready(x) for x in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    return obj


def dumps(obj) -> str:
    """Stable JSON text with a trailing newline."""
    return json.dumps(json_ready(obj), indent=2) + "\n"


def csv_lines(header, rows) -> str:
    """Minimal CSV (no quoting; fields are numbers and plain words)."""
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(_csv_field(x) for x in row))
    return "\n".join(out) + "\n"


def _csv_field(x) -> str:
    x = json_ready(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)
