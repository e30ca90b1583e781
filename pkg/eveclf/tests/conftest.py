"""Shared fixtures: synthetic corpora written straight in the on-disk format.

Unit tests never shell out to the exporter; they build record files and
manifests by hand so the reader is exercised against the byte layout,
not against another library's writer.  (The acceptance module is the one
place real exported corpora are used.)
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from eveclf.records import RECORD_DTYPE, WINDOW, blob_sha1

GATE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if GATE_LINES:
        terminalreporter.section("acceptance gates")
        for line in GATE_LINES:
            terminalreporter.write_line(line)


def manifest_text(
    *,
    pattern: str,
    class_names: tuple[str, ...],
    symbols_per_class: int,
    grid: tuple[float, ...],
    seed: int,
    record_count: int,
    data_file: str,
    data_hash: str,
    window: int = WINDOW,
    record_bytes: int = RECORD_DTYPE.itemsize,
) -> str:
    names = ", ".join(f'"{n}"' for n in class_names)
    grid_s = ", ".join(f"{g:.1f}" for g in grid)
    return (
        "[dataset]\n"
        "format = 1\n"
        f'pattern = "{pattern}"\n'
        f"class_names = [{names}]\n"
        f"symbols_per_class = {symbols_per_class}\n"
        f"es_n0_grid = [{grid_s}]\n"
        f"seed = {seed}\n"
        f"record_count = {record_count}\n"
        f"window = {window}\n"
        f"record_bytes = {record_bytes}\n"
        'normalization = "unit-power"\n'
        f'data_file = "{data_file}"\n'
        f'data_hash = "{data_hash}"\n'
    )


def write_corpus(
    out_dir: Path,
    name: str,
    make_window: Callable[[int, float, np.random.Generator], np.ndarray],
    *,
    class_names: tuple[str, ...] = ("a", "b", "c"),
    grid: tuple[float, ...] = (0.0, 20.0),
    per_cell: int = 10,
    seed: int = 7,
    shuffle_labels: bool = False,
) -> Path:
    """Write a (data, manifest) pair; returns the manifest path.

    ``make_window(class_idx, es_n0_db, rng)`` supplies one complex window
    per record; it is normalized to unit average power before writing.
    """
    rng = np.random.default_rng(seed)
    total = len(class_names) * len(grid) * per_cell
    rec = np.zeros(total, dtype=RECORD_DTYPE)
    k = 0
    for ci in range(len(class_names)):
        for es in grid:
            for _ in range(per_cell):
                w = np.asarray(make_window(ci, float(es), rng), dtype=np.complex128)
                w = w / np.sqrt(np.mean(np.abs(w) ** 2))
                rec["label"][k] = ci
                rec["es_n0_db"][k] = es
                rec["iq"][k, :, 0] = w.real.astype(np.float32)
                rec["iq"][k, :, 1] = w.imag.astype(np.float32)
                k += 1
    rec = rec[rng.permutation(total)]
    if shuffle_labels:
        rec["label"] = rec["label"][rng.permutation(total)]

    data = rec.tobytes()
    (out_dir / f"{name}.bin").write_bytes(data)
    manifest = out_dir / f"{name}.toml"
    manifest.write_text(
        manifest_text(
            pattern=name,
            class_names=class_names,
            symbols_per_class=len(grid) * per_cell,
            grid=grid,
            seed=seed,
            record_count=total,
            data_file=f"{name}.bin",
            data_hash=blob_sha1(data),
        )
    )
    return manifest


def tone_window(ci: int, es: float, rng: np.random.Generator) -> np.ndarray:
    """Trivially separable classes: one clean tone per class plus light noise."""
    t = np.arange(WINDOW)
    carrier = np.exp(2j * np.pi * (ci + 1) * t / 16)
    noise = (rng.standard_normal(WINDOW) + 1j * rng.standard_normal(WINDOW)) * 0.05
    return carrier + noise


def noise_window(ci: int, es: float, rng: np.random.Generator) -> np.ndarray:
    """No class information at all: white noise for every class."""
    return rng.standard_normal(WINDOW) + 1j * rng.standard_normal(WINDOW)


@pytest.fixture()
def tone_manifest(tmp_path) -> Path:
    return write_corpus(tmp_path, "tones", tone_window)


@pytest.fixture()
def noise_manifest(tmp_path) -> Path:
    return write_corpus(tmp_path, "noise", noise_window)
