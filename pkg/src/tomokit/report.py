"""Line-oriented ``key=value`` report formatting shared by the CLI and checks."""

from __future__ import annotations

import json
import math

import numpy as np


def fmt(value) -> str:
    """Locale-independent formatting: booleans lowercase, numbers to 10 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    out = format(v, ".10g")
    return "0" if out == "-0" else out


def line(**fields) -> str:
    return " ".join(f"{k}={fmt(v)}" for k, v in fields.items())


def json_line(**fields) -> str:
    def conv(v):
        if isinstance(v, (bool, np.bool_)):
            return bool(v)
        if isinstance(v, (int, np.integer)):
            return int(v)
        if isinstance(v, str):
            return v
        return float(fmt(v))

    return json.dumps({k: conv(v) for k, v in fields.items()}, sort_keys=False)
