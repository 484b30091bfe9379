"""Exact-number rendering and atomic file output shared by reports and the CLI."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from typing import Any


def ratio(q) -> str:
    """Always ``"p/q"``, including integers (``"1/1"``)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def decimal(q) -> str:
    return f"{float(Fraction(q)):.12g}"


def exact(q) -> dict:
    return {"exact": ratio(q), "decimal": decimal(q)}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return exact(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".phaselab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
