"""Shared utility functions used across projcert modules.

Provides:
  - projcert_dir(): resolve config directory from PROJCERT_DIR env var.
  - atomic_write_json(): crash-safe JSON file writes via temp+rename.
  - dump_json(): canonical JSON text (stable key order, compact or pretty).
  - encode_number() / decode_number(): JSON codec for reals where
    infinities travel as the strings "inf" / "-inf".
  - vector_to_json(): numpy vector to a JSON-ready list.
"""

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

PROJCERT_DIR_ENV = "PROJCERT_DIR"


def projcert_dir() -> Path:
    """Resolve config directory from PROJCERT_DIR env var or default ~/.projcert."""
    raw = os.environ.get(PROJCERT_DIR_ENV, "")
    return Path(raw) if raw else Path.home() / ".projcert"


def dump_json(data: Any, *, pretty: bool = False) -> str:
    """Serialize to canonical JSON text.

    Key order is the insertion order of the dicts built by the to_dict()
    methods, so identical inputs give byte-identical output.
    """
    if pretty:
        return json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False)
    return json.dumps(data, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def atomic_write_json(path: Path, data: Any, indent: int = 2) -> None:
    """Write JSON data to a file atomically.

    Writes to a temporary file in the same directory, then renames it
    to the target path. This prevents data corruption if the process
    is interrupted mid-write.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    content = json.dumps(data, indent=indent, allow_nan=False) + "\n"

    fd, tmp_path = tempfile.mkstemp(
        dir=str(path.parent), suffix=".tmp", prefix=f".{path.name}."
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(content)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_path, str(path))
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def encode_number(value: float) -> float | str:
    """Encode a real for JSON; infinities become "inf" / "-inf"."""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def decode_number(raw: Any) -> float:
    """Decode a JSON real, accepting "inf" / "-inf" strings.

    Raises ValueError for anything else that is not a number (booleans
    included, since json maps true/false to Python bools).
    """
    if isinstance(raw, str):
        if raw == "inf":
            return math.inf
        if raw == "-inf":
            return -math.inf
        raise ValueError(f"expected a number or 'inf'/'-inf', got {raw!r}")
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ValueError(f"expected a number, got {raw!r}")
    return float(raw)


def vector_to_json(vector: np.ndarray) -> list[float | str]:
    """Convert a 1-D numpy vector to a JSON-ready list."""
    return [encode_number(v) for v in np.asarray(vector, dtype=float).ravel()]
