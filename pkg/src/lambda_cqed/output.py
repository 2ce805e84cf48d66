"""CSV / JSON-lines emitters with fixed float formatting and atomic writes."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

SIG_DIGITS = 12


def fmt_float(x) -> str:
    return format(float(x), f".{SIG_DIGITS}g")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    x = float(v)
    return "" if math.isnan(x) else fmt_float(x)


def _json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    x = float(v)
    if not math.isfinite(x):
        return None
    return float(fmt_float(x))


def csv_text(rows, columns) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def jsonl_text(rows, columns) -> str:
    out = []
    for row in rows:
        out.append(json.dumps({c: _json_value(row[c]) for c in columns}))
    return "\n".join(out) + ("\n" if out else "")


def json_text(obj: dict) -> str:
    return json.dumps({k: _json_value(v) for k, v in obj.items()}, indent=2) + "\n"


def render(rows, columns, fmt: str) -> str:
    if fmt == "csv":
        return csv_text(rows, columns)
    if fmt == "jsonl":
        return jsonl_text(rows, columns)
    raise ValueError(f"unknown output format {fmt!r}")


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
