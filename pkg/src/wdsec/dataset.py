"""Labeled IQ corpus export for eavesdropper-classifier training.

Fixed binary records (little-endian, 8198 bytes): u16 class label, f32
Es/N0 in dB, then 1024 complex samples as interleaved I/Q float32 pairs.
Each record is a uniformly random 1024-sample crop of one 2048-sample
symbol, normalized to unit average power after the channel.  A TOML
manifest describing the corpus is written next to the data file.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from . import config, qpsk
from .harness import blob_hash
from .waveform import BandPlan, WaveformConfig, modulate

WINDOW = 1024

RECORD_DTYPE = np.dtype(
    [("label", "<u2"), ("es_n0_db", "<f4"), ("iq", "<f4", (WINDOW, 2))]
)

DEFAULT_GRID = tuple(float(db) for db in range(-20, 51, 10))

_SEED_TAG = 0xD5E7


@dataclass(frozen=True)
class DatasetSpec:
    pattern: str
    plans: Mapping[str, BandPlan]
    symbols_per_class: int = 2000
    es_n0_grid: tuple[float, ...] = DEFAULT_GRID
    cfg: WaveformConfig = field(default_factory=WaveformConfig)
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.plans:
            raise ValueError("need at least one signal class")
        if not self.es_n0_grid:
            raise ValueError("empty Es/N0 grid")
        if self.symbols_per_class < 1:
            raise ValueError("symbols_per_class must be positive")
        if self.cfg.n_time_samples < WINDOW:
            raise ValueError(f"symbols must span at least {WINDOW} samples")

    @property
    def record_count(self) -> int:
        return len(self.plans) * self.symbols_per_class

    def point_counts(self) -> list[int]:
        """Records per grid point within one class; remainders go to the
        leading points so totals always match symbols_per_class."""
        base, extra = divmod(self.symbols_per_class, len(self.es_n0_grid))
        return [base + (1 if i < extra else 0) for i in range(len(self.es_n0_grid))]


@dataclass(frozen=True)
class DatasetManifest:
    pattern: str
    class_names: tuple[str, ...]
    symbols_per_class: int
    es_n0_grid: tuple[float, ...]
    seed: int
    record_count: int
    data_file: str
    data_hash: str

    def to_doc(self) -> dict:
        return {
            "dataset": {
                "format": 1,
                "pattern": self.pattern,
                "class_names": list(self.class_names),
                "symbols_per_class": self.symbols_per_class,
                "es_n0_grid": list(self.es_n0_grid),
                "seed": self.seed,
                "record_count": self.record_count,
                "window": WINDOW,
                "record_bytes": RECORD_DTYPE.itemsize,
                "normalization": "unit-power",
                "data_file": self.data_file,
                "data_hash": self.data_hash,
            }
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "DatasetManifest":
        d = doc["dataset"]
        return cls(
            d["pattern"],
            tuple(d["class_names"]),
            d["symbols_per_class"],
            tuple(d["es_n0_grid"]),
            d["seed"],
            d["record_count"],
            d["data_file"],
            d["data_hash"],
        )


def manifest_path(data_path: str | Path) -> Path:
    return Path(data_path).with_suffix(".toml")


def _class_records(
    plan: BandPlan,
    label: int,
    spec: DatasetSpec,
    seed: int,
    class_idx: int,
) -> np.ndarray:
    cfg = spec.cfg
    q = cfg.n_time_samples
    counts = spec.point_counts()
    out = np.empty(spec.symbols_per_class, dtype=RECORD_DTYPE)
    row = 0
    for point_idx, (es_n0_db, n_rec) in enumerate(zip(spec.es_n0_grid, counts)):
        if n_rec == 0:
            continue
        rng = np.random.default_rng(
            np.random.SeedSequence((seed, _SEED_TAG, class_idx, point_idx))
        )
        idx = rng.integers(0, 4, size=(n_rec, plan.n_data)).astype(np.int8)
        sig = modulate(qpsk.ALPHABET[idx], cfg, plan).samples
        sigma = np.sqrt(10.0 ** (-es_n0_db / 10.0) / 2.0)
        sig = sig + sigma * (
            rng.standard_normal(sig.shape) + 1j * rng.standard_normal(sig.shape)
        )
        starts = rng.integers(0, q - WINDOW + 1, size=n_rec)
        cols = starts[:, None] + np.arange(WINDOW)[None, :]
        crop = sig[np.arange(n_rec)[:, None], cols]
        crop /= np.sqrt(np.mean(np.abs(crop) ** 2, axis=1, keepdims=True))

        block = out[row : row + n_rec]
        block["label"] = label
        block["es_n0_db"] = es_n0_db
        block["iq"][:, :, 0] = crop.real.astype(np.float32)
        block["iq"][:, :, 1] = crop.imag.astype(np.float32)
        row += n_rec
    return out


def export_dataset(spec: DatasetSpec, path: str | Path) -> DatasetManifest:
    """Write the corpus and its manifest; deterministic under the seed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    seed = config.resolve_seed(spec.seed)
    names = tuple(spec.plans)
    with open(path, "wb") as fh:
        for class_idx, name in enumerate(names):
            recs = _class_records(spec.plans[name], class_idx, spec, seed, class_idx)
            recs.tofile(fh)
    manifest = DatasetManifest(
        pattern=spec.pattern,
        class_names=names,
        symbols_per_class=spec.symbols_per_class,
        es_n0_grid=spec.es_n0_grid,
        seed=seed,
        record_count=spec.record_count,
        data_file=path.name,
        data_hash=blob_hash(path.read_bytes()),
    )
    config.write_toml(manifest_path(path), manifest.to_doc())
    return manifest


def read_records(path: str | Path, mmap: bool = False) -> np.ndarray:
    if mmap:
        return np.memmap(path, dtype=RECORD_DTYPE, mode="r")
    return np.fromfile(path, dtype=RECORD_DTYPE)


def load_manifest(data_path: str | Path) -> DatasetManifest:
    return DatasetManifest.from_doc(config.load_toml(manifest_path(data_path)))


def verify_dataset(data_path: str | Path) -> DatasetManifest:
    """Check record count and content hash against the manifest."""
    manifest = load_manifest(data_path)
    records = read_records(data_path)
    if len(records) != manifest.record_count:
        raise ValueError(
            f"manifest promises {manifest.record_count} records, file has {len(records)}"
        )
    actual = blob_hash(Path(data_path).read_bytes())
    if actual != manifest.data_hash:
        raise ValueError("dataset content hash does not match its manifest")
    return manifest
