"""Reading labeled IQ corpora.

This package trains against file pairs produced by the ``wdsec generate``
exporter, and the coupling is deliberately limited to what is on disk:

* a binary file of fixed-size records, little endian, each record being a
  ``u16`` class label, an ``f32`` Es/N0 value in dB, and one complex
  window of 1024 samples stored as interleaved float32 I/Q pairs --
  8,198 bytes per record;
* a TOML manifest with a single ``[dataset]`` table naming the binary
  file, the class names, the Es/N0 grid, and a git-blob SHA-1 of the
  binary payload.

Nothing here imports the producer.  If the layout above changes, this
module is the only place that needs to follow.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

WINDOW = 1024

RECORD_DTYPE = np.dtype(
    [
        ("label", "<u2"),
        ("es_n0_db", "<f4"),
        ("iq", "<f4", (WINDOW, 2)),
    ]
)


def blob_sha1(data: bytes) -> str:
    """Git-style blob hash: SHA-1 over ``b"blob <len>\\0" + data``."""
    h = hashlib.sha1()
    h.update(b"blob %d\0" % len(data))
    h.update(data)
    return h.hexdigest()


@dataclass(frozen=True)
class Corpus:
    """One loaded dataset: windows as real (n, 2, 1024) arrays plus labels.

    ``iq[k, 0]`` is the in-phase row and ``iq[k, 1]`` the quadrature row
    of record ``k`` -- the layout the classifier consumes directly.
    ``point_idx[k]`` is the position of the record's Es/N0 value on the
    manifest grid.
    """

    pattern: str
    class_names: tuple[str, ...]
    es_n0_grid: tuple[float, ...]
    seed: int
    data_hash: str
    labels: np.ndarray
    es_n0_db: np.ndarray
    point_idx: np.ndarray
    iq: np.ndarray

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def n_records(self) -> int:
        return len(self.labels)


def load_manifest(path: str | Path) -> dict:
    """The validated ``[dataset]`` table of a manifest file."""
    path = Path(path)
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    if "dataset" not in doc:
        raise ValueError(f"{path}: no [dataset] table")
    d = doc["dataset"]
    if d.get("format") != 1:
        raise ValueError(f"{path}: unsupported format {d.get('format')!r}")
    if d.get("window") != WINDOW:
        raise ValueError(f"{path}: window {d.get('window')} != {WINDOW}")
    if d.get("record_bytes") != RECORD_DTYPE.itemsize:
        raise ValueError(
            f"{path}: record_bytes {d.get('record_bytes')} != {RECORD_DTYPE.itemsize}"
        )
    if d.get("normalization") != "unit-power":
        raise ValueError(f"{path}: unknown normalization {d.get('normalization')!r}")
    missing = {"pattern", "class_names", "es_n0_grid", "seed", "record_count",
               "data_file", "data_hash"} - set(d)
    if missing:
        raise ValueError(f"{path}: manifest missing keys {sorted(missing)}")
    return d


def load_corpus(manifest_path: str | Path, verify_hash: bool = True) -> Corpus:
    """Load the corpus a manifest describes.

    The binary file is resolved relative to the manifest.  With
    ``verify_hash`` the payload's git-blob SHA-1 must match the manifest
    before anything is parsed.
    """
    manifest_path = Path(manifest_path)
    d = load_manifest(manifest_path)
    data_path = manifest_path.parent / d["data_file"]
    data = data_path.read_bytes()

    expected = d["record_count"] * RECORD_DTYPE.itemsize
    if len(data) != expected:
        raise ValueError(
            f"{data_path}: {len(data)} bytes, manifest promises {expected}"
        )
    if verify_hash:
        got = blob_sha1(data)
        if got != d["data_hash"]:
            raise ValueError(
                f"{data_path}: payload hash {got} != manifest {d['data_hash']}"
            )

    rec = np.frombuffer(data, dtype=RECORD_DTYPE)
    labels = rec["label"].astype(np.int64)
    if labels.size and labels.max() >= len(d["class_names"]):
        raise ValueError(f"{data_path}: label {labels.max()} out of range")

    grid = tuple(float(g) for g in d["es_n0_grid"])
    grid_f4 = np.asarray(grid, dtype="<f4")
    es = rec["es_n0_db"]
    on_grid = es[:, None] == grid_f4[None, :]
    if not on_grid.any(axis=1).all():
        bad = es[~on_grid.any(axis=1)][0]
        raise ValueError(f"{data_path}: Es/N0 {bad} not on the manifest grid")

    # (n, 1024, 2) interleaved pairs -> (n, 2, 1024) I/Q rows
    iq = np.ascontiguousarray(rec["iq"].transpose(0, 2, 1))

    return Corpus(
        pattern=d["pattern"],
        class_names=tuple(d["class_names"]),
        es_n0_grid=grid,
        seed=int(d["seed"]),
        data_hash=d["data_hash"],
        labels=labels,
        es_n0_db=es.astype(np.float64),
        point_idx=on_grid.argmax(axis=1).astype(np.int64),
        iq=iq,
    )


def stratified_split(
    corpus: Corpus, val_fraction: float = 0.2, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic train/held-out split, stratified per (class, Es/N0) cell.

    Every cell contributes the same held-out share, so accuracy-vs-Es/N0
    tables stay balanced.  Cells with at least two records always keep at
    least one record on each side.  Returns sorted index arrays
    ``(train_idx, val_idx)`` that partition the corpus.
    """
    if not 0.0 <= val_fraction < 1.0:
        raise ValueError(f"val_fraction {val_fraction} outside [0, 1)")
    rng = np.random.default_rng(seed)
    train_parts: list[np.ndarray] = []
    val_parts: list[np.ndarray] = []
    cells = corpus.labels * len(corpus.es_n0_grid) + corpus.point_idx
    for cell in np.unique(cells):
        idx = rng.permutation(np.flatnonzero(cells == cell))
        n_val = int(round(val_fraction * len(idx)))
        if val_fraction > 0 and len(idx) >= 2:
            n_val = min(max(n_val, 1), len(idx) - 1)
        val_parts.append(idx[:n_val])
        train_parts.append(idx[n_val:])
    return (
        np.sort(np.concatenate(train_parts)),
        np.sort(np.concatenate(val_parts)),
    )
