import json

import numpy as np
import pytest

from tomokit.report import fmt, json_line, line


@pytest.mark.parametrize(
    "value,text",
    [
        (True, "true"),
        (np.bool_(False), "false"),
        (3, "3"),
        (np.int64(-2), "-2"),
        (0.1, "0.1"),
        (1 / 3, "0.3333333333"),
        (-0.0, "0"),
        (1e-20, "1e-20"),
        (float("nan"), "nan"),
        (float("-inf"), "-inf"),
        ("label", "label"),
    ],
)
def test_fmt(value, text):
    assert fmt(value) == text


def test_line_keeps_order():
    assert line(b=1, a=0.5, ok=True) == "b=1 a=0.5 ok=true"


def test_json_line_roundtrip():
    data = json.loads(json_line(F=np.float64(1 / 3), n=np.int32(4), ok=np.bool_(True), label="x"))
    assert data == {"F": 0.3333333333, "n": 4, "ok": True, "label": "x"}
