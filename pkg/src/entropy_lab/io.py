"""Reading and writing distributions, operators, joint tables and reports.

File formats (all UTF-8):

* distribution JSON ``{"alphabet": N, "probs": [...]}`` or a one-row CSV;
* joint distribution JSON ``{"joint": [[...], ...]}`` (rows indexed by x)
  or a multi-row CSV;
* operator JSON ``{"dim": d, "re": [[...]], "im": [[...]]}`` (``im`` may
  be omitted for real operators).

Numbers are written as the shortest decimal that round-trips, and
infinity as ``+inf``.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from . import classical, operators

PathLike = Union[str, Path]


class FormatError(ValueError):
    """Input file could not be parsed."""


def format_value(x) -> str:
    """Shortest round-trip decimal; ``+inf`` for infinity; empty for None."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return repr(x)


def parse_value(s: str) -> float:
    s = s.strip()
    if s in ("+inf", "inf"):
        return math.inf
    return float(s)


# ---------------------------------------------------------------------------
# JSON and CSV payloads


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(path: PathLike) -> Dict[str, Any]:
    try:
        obj = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return obj


def _load_csv_rows(path: PathLike) -> List[List[float]]:
    rows = []
    for line in csv.reader(_io.StringIO(_read_text(path))):
        cells = [c for c in (c.strip() for c in line) if c]
        if not cells:
            continue
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise FormatError(f"{path}: non-numeric CSV cell") from exc
    if not rows:
        raise FormatError(f"{path}: empty CSV")
    if len({len(r) for r in rows}) != 1:
        raise FormatError(f"{path}: ragged CSV rows")
    return rows


def _matrix(obj, name, path) -> np.ndarray:
    try:
        m = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: '{name}' is not a numeric matrix") from exc
    if m.ndim != 2:
        raise FormatError(f"{path}: '{name}' must be a 2-D array")
    return m


def load_payload(path: PathLike):
    """Load any supported file and return ``(kind, array)`` with ``kind`` one
    of ``"distribution"``, ``"joint"`` or ``"operator"``."""
    p = Path(path)
    if p.suffix.lower() == ".csv":
        rows = _load_csv_rows(p)
        if len(rows) == 1:
            return "distribution", np.array(rows[0])
        return "joint", np.array(rows)
    obj = _load_json(p)
    if "probs" in obj:
        probs = np.asarray(obj["probs"], dtype=float)
        if probs.ndim != 1:
            raise FormatError(f"{path}: 'probs' must be a flat list")
        if "alphabet" in obj and obj["alphabet"] != probs.size:
            raise FormatError(f"{path}: alphabet {obj['alphabet']} does not match {probs.size} probabilities")
        return "distribution", probs
    if "joint" in obj:
        return "joint", _matrix(obj["joint"], "joint", path)
    if "re" in obj:
        re = _matrix(obj["re"], "re", path)
        im = _matrix(obj["im"], "im", path) if "im" in obj else np.zeros_like(re)
        if re.shape != im.shape:
            raise FormatError(f"{path}: 're' and 'im' shapes differ")
        if "dim" in obj and (re.shape[0] != obj["dim"] or re.shape[1] != obj["dim"]):
            raise FormatError(f"{path}: dim {obj['dim']} does not match matrix shape {re.shape}")
        return "operator", re + 1j * im if np.any(im) else re
    raise FormatError(f"{path}: unrecognized JSON schema")


def read_distribution(path: PathLike) -> np.ndarray:
    kind, arr = load_payload(path)
    if kind != "distribution":
        raise FormatError(f"{path}: expected a distribution, found a {kind}")
    return classical.as_distribution(arr)


def read_joint(path: PathLike) -> np.ndarray:
    kind, arr = load_payload(path)
    if kind != "joint":
        raise FormatError(f"{path}: expected a joint distribution, found a {kind}")
    return classical.as_joint(arr)


def read_operator(path: PathLike, density: bool = False) -> np.ndarray:
    kind, arr = load_payload(path)
    if kind != "operator":
        raise FormatError(f"{path}: expected an operator, found a {kind}")
    return operators.as_density(arr) if density else operators.as_positive(arr)


def _num_list(a: Iterable) -> List[float]:
    return [float(x) for x in a]


def write_distribution(path: PathLike, P) -> None:
    P = np.asarray(P, dtype=float)
    p = Path(path)
    if p.suffix.lower() == ".csv":
        p.write_text(",".join(format(x, ".17g") for x in P) + "\n", encoding="utf-8")
    else:
        p.write_text(json.dumps({"alphabet": int(P.size), "probs": _num_list(P)}), encoding="utf-8")


def write_joint(path: PathLike, J) -> None:
    J = np.asarray(J, dtype=float)
    p = Path(path)
    if p.suffix.lower() == ".csv":
        p.write_text("".join(",".join(format(x, ".17g") for x in row) + "\n" for row in J),
                     encoding="utf-8")
    else:
        p.write_text(json.dumps({"joint": [_num_list(r) for r in J]}), encoding="utf-8")


def write_operator(path: PathLike, X) -> None:
    X = np.asarray(X)
    obj = {
        "dim": int(X.shape[0]),
        "re": [_num_list(r) for r in X.real],
        "im": [_num_list(r) for r in np.imag(X)],
    }
    Path(path).write_text(json.dumps(obj), encoding="utf-8")


# ---------------------------------------------------------------------------
# tables


def rows_to_csv(rows: Sequence[Dict[str, Any]], header: Sequence[str] = None) -> str:
    """Render dictionaries as CSV text; ``header`` defaults to the union of
    keys in first-seen order."""
    if header is None:
        header = []
        for r in rows:
            header.extend(k for k in r if k not in header)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_value(r.get(k)) for k in header])
    return buf.getvalue()


def rows_to_table(rows: Sequence[Dict[str, Any]], header: Sequence[str] = None) -> str:
    """Fixed-width plain-text table."""
    text = rows_to_csv(rows, header)
    cells = [line.split(",") for line in text.splitlines()]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def json_default(x):
    if isinstance(x, (np.floating, float)):
        return format_value(x) if not math.isfinite(x) else float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def clean_for_json(obj):
    """Replace non-finite floats with their string tokens, recursively."""
    if isinstance(obj, dict):
        return {k: clean_for_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean_for_json(v) for v in obj]
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return format_value(obj)
    return obj
