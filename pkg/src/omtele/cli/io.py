"""Deterministic CSV and JSON writers.

Floats are written with ``repr`` (shortest round-trip form), keys are
sorted, and line endings are always ``\\n``, so equal inputs give
byte-identical files.  CSV files start with ``#`` header lines carrying
units, conventions and the full parameter set.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Iterable, Sequence

from omtele.errors import ConfigError

OUT_ENV = "OMTELE_OUT"
DEFAULT_OUT = "out"


def resolve_out_dir(cli_value: str | None, config_value: str | None) -> Path:
    """--out, then the config's output.dir, then $OMTELE_OUT, then ./out."""
    for candidate in (cli_value, config_value, os.environ.get(OUT_ENV)):
        if candidate:
            return Path(candidate)
    return Path(DEFAULT_OUT)


def ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {str(path)!r}: {exc.strerror}", "$.output.dir") from exc
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {str(path)!r} is not writable", "$.output.dir")
    return path


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ""
    return str(value)


def _clean(obj):
    # JSON has no NaN/Infinity; non-finite values become null.
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def render_json(payload: dict) -> str:
    return json.dumps(_clean(payload), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def render_csv(header: Sequence[str], columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [f"# {line}" if line else "#" for line in header]
    lines.append(",".join(columns))
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def parameter_header(lab_params: dict, units: dict) -> list[str]:
    return [f"param {name} = {format_value(float(value))} {units[name]}" for name, value in sorted(lab_params.items())]
