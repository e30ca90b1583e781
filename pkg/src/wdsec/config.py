"""Structured-text config handling.

Reading uses tomli.  Writing targets the bounded manifest schema (nested
tables of scalars and flat lists), so the emitter below stays tiny rather
than pulling in a full writer dependency.
"""
from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Any, Mapping

import tomli


def load_toml(path: str | Path) -> dict[str, Any]:
    with open(path, "rb") as fh:
        return tomli.load(fh)


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, str):
        # JSON escaping is a subset of basic-string TOML escaping
        return json.dumps(value)
    raise TypeError(f"cannot emit {type(value).__name__} as a scalar")


def _emit_table(out: list[str], table: Mapping[str, Any], prefix: str) -> None:
    nested: list[tuple[str, Mapping[str, Any]]] = []
    for key, value in table.items():
        if isinstance(value, Mapping):
            nested.append((key, value))
        elif isinstance(value, (list, tuple)):
            items = ", ".join(_scalar(v) for v in value)
            out.append(f"{key} = [{items}]")
        else:
            out.append(f"{key} = {_scalar(value)}")
    for key, value in nested:
        name = f"{prefix}.{key}" if prefix else key
        out.append("")
        out.append(f"[{name}]")
        _emit_table(out, value, name)


def dump_toml(data: Mapping[str, Any]) -> str:
    out: list[str] = []
    _emit_table(out, data, "")
    return "\n".join(out).lstrip("\n") + "\n"


def write_toml(path: str | Path, data: Mapping[str, Any]) -> None:
    Path(path).write_text(dump_toml(data), encoding="utf-8")


def resolve_seed(seed: int | None, default: int = 20260816) -> int:
    """Seed precedence: WDS_SEED environment variable, then the explicit
    value, then the package default."""
    env = os.environ.get("WDS_SEED")
    if env is not None and env.strip():
        return int(env)
    if seed is not None:
        return int(seed)
    return default
