"""Monte-Carlo BER experiments over signal patterns.

One experiment sweeps an Es/N0 grid for every signal class in a pattern,
running modulate -> channel -> equalize -> detect on batches until each
point has collected enough bit errors or hit its trial cap.  Each point
draws from its own seeded stream, so results are deterministic for a
fixed seed and independent of how other points or classes ran.
"""
from __future__ import annotations

import csv
import hashlib
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Literal, Mapping

import numpy as np

from . import channel as ch
from . import config, detection, metrics, qpsk
from .waveform import BandPlan, SubBand, WaveformConfig, band_correlation, modulate

Detector = Literal["mf", "zf", "sd", "multiband-sd"]
RxMode = Literal["matched", "mismatch", "classifier"]


@dataclass(frozen=True)
class ClassifierStub:
    """Replays a recorded confusion matrix in place of a live classifier.

    Row nu holds the probability of each predicted class given true class
    nu.  The uniform stub models a fully ambiguous pattern.
    """

    class_names: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.float64)
        lam = len(self.class_names)
        if m.shape != (lam, lam):
            raise ValueError("confusion matrix must be square over the classes")
        if np.any(m < 0) or not np.allclose(m.sum(axis=1), 1.0, atol=1e-6):
            raise ValueError("confusion rows must be probability vectors")

    @classmethod
    def uniform(cls, class_names: tuple[str, ...]) -> "ClassifierStub":
        lam = len(class_names)
        return cls(class_names, np.full((lam, lam), 1.0 / lam))

    @classmethod
    def from_csv(cls, path: str | Path) -> "ClassifierStub":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0][0] != "true":
            raise ValueError("confusion CSV must start with a 'true' header column")
        names = tuple(rows[0][1:])
        matrix = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
        return cls(names, matrix)

    def predict(self, true_idx: int, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(len(self.class_names), size=size, p=self.matrix[true_idx])


def write_confusion_csv(path: str | Path, stub: ClassifierStub) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["true", *stub.class_names])
        for name, row in zip(stub.class_names, stub.matrix):
            writer.writerow([name, *[f"{v:.6f}" for v in row]])


@dataclass(frozen=True)
class ExperimentSpec:
    plans: Mapping[str, BandPlan]
    es_n0_grid: tuple[float, ...]
    detector: Detector = "multiband-sd"
    rx_mode: RxMode = "matched"
    delta_alpha: float = 0.0
    classifier: ClassifierStub | None = None
    channel_kind: Literal["awgn", "rayleigh"] = "awgn"
    cfg: WaveformConfig = field(default_factory=WaveformConfig)
    min_errors: int = 100
    max_symbols: int = 20000
    batch_symbols: int = 256
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.plans:
            raise ValueError("need at least one signal class")
        if not self.es_n0_grid:
            raise ValueError("need at least one Es/N0 point")
        if self.min_errors < 1 or self.max_symbols < 1 or self.batch_symbols < 1:
            raise ValueError("stopping-rule parameters must be positive")
        if self.rx_mode == "mismatch" and self.delta_alpha == 0.0:
            raise ValueError("mismatch mode needs a non-zero delta_alpha")
        if self.rx_mode == "classifier" and self.classifier is None:
            raise ValueError("classifier mode needs a ClassifierStub")


@dataclass(frozen=True)
class BerPoint:
    es_n0_db: float
    bit_errors: int
    bits_total: int
    symbols: int
    erasures: int
    seconds: float

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_total

    @property
    def ci(self) -> tuple[float, float]:
        return metrics.wilson_interval(self.bit_errors, self.bits_total)


@dataclass(frozen=True)
class BerCurve:
    label: str
    points: tuple[BerPoint, ...]


@dataclass(frozen=True)
class BerReport:
    curves: dict[str, BerCurve]
    seed: int


def _shift_betas(plan: BandPlan, delta: float) -> BandPlan:
    return BandPlan(
        plan.kind,
        tuple(SubBand(b.beta + delta, b.n_sub, b.eps) for b in plan.subbands),
    )


def _detect_indices(
    samples: np.ndarray,
    cfg: WaveformConfig,
    belief: BandPlan,
    detector: Detector,
) -> tuple[np.ndarray, int]:
    """Detect a batch under the receiver's believed plan; returns index
    decisions and the erasure count."""
    sig = _wrap(samples, cfg)
    if detector == "mf":
        if belief.kind == "sb":
            obs = detection.demodulate(sig, cfg, None, belief)
            return qpsk.slice_to_indices(obs.r), 0
        # no-detector baseline: plain orthogonal receiver
        obs = detection.demodulate_nearest_bin(sig, cfg, belief)
        return qpsk.slice_to_indices(obs.r), 0
    if detector == "zf":
        obs = detection.demodulate(sig, cfg, None, belief)
        return qpsk.slice_to_indices(detection._zf_soft(obs.corr.entries, obs.r)), 0
    if detector == "sd":
        obs = detection.demodulate(sig, cfg, None, belief)
        idx, _, fallback = detection.sd_batch_indices(obs.corr.entries, obs.r)
        return idx, int(np.count_nonzero(fallback))
    if detector == "multiband-sd":
        parts = []
        erasures = 0
        for band in belief.subbands:
            r_b = detection.band_demod(samples, cfg, band)
            c_b = band_correlation(cfg, band).entries
            idx, _, fallback = detection.sd_batch_indices(c_b, r_b)
            erasures += int(np.count_nonzero(fallback))
            parts.append(idx)
        return np.concatenate(parts, axis=-1), erasures
    raise ValueError(f"unknown detector {detector!r}")


def _wrap(samples: np.ndarray, cfg: WaveformConfig):
    from .waveform import ComplexSignal

    return ComplexSignal(samples, "time", 1.0 / np.sqrt(cfg.n_time_samples))


def _run_point(
    spec: ExperimentSpec,
    plan: BandPlan,
    class_idx: int,
    point_idx: int,
    es_n0_db: float,
    seed: int,
) -> BerPoint:
    rng = np.random.default_rng(np.random.SeedSequence((seed, class_idx, point_idx)))
    model = ch.ChannelModel(spec.channel_kind, es_n0_db)
    cfg = spec.cfg
    names = tuple(spec.plans)

    errors = 0
    bits = 0
    symbols = 0
    erasures = 0
    t0 = time.perf_counter()
    while errors < spec.min_errors and symbols < spec.max_symbols:
        b = min(spec.batch_symbols, spec.max_symbols - symbols)
        idx_true = rng.integers(0, 4, size=(b, plan.n_data)).astype(np.int8)
        sig = modulate(qpsk.ALPHABET[idx_true], cfg, plan)
        received, state = ch.apply(sig, model, rng)
        received = ch.equalize(received, state)

        if spec.rx_mode == "matched":
            groups = [(plan, np.arange(b))]
        elif spec.rx_mode == "mismatch":
            groups = [(_shift_betas(plan, spec.delta_alpha), np.arange(b))]
        else:
            assert spec.classifier is not None
            pred = spec.classifier.predict(class_idx, rng, b)
            groups = [
                (spec.plans[names[p]], np.flatnonzero(pred == p))
                for p in np.unique(pred)
            ]

        for belief, rows in groups:
            if rows.size == 0:
                continue
            idx_hat, miss = _detect_indices(received.samples[rows], cfg, belief, spec.detector)
            erasures += miss
            # a belief from another class may carry a different carrier
            # count; score the overlapping prefix
            n_cmp = min(plan.n_data, belief.n_data)
            errors += qpsk.bit_errors(idx_hat[:, :n_cmp], idx_true[rows][:, :n_cmp])
            bits += 2 * n_cmp * rows.size
        symbols += b
    return BerPoint(es_n0_db, errors, bits, symbols, erasures, time.perf_counter() - t0)


def run_ber(spec: ExperimentSpec) -> BerReport:
    """Sweep the grid for every class; see the module docstring for the
    per-point stopping rule."""
    seed = config.resolve_seed(spec.seed)
    curves: dict[str, BerCurve] = {}
    for class_idx, (name, plan) in enumerate(spec.plans.items()):
        points = tuple(
            _run_point(spec, plan, class_idx, point_idx, es, seed)
            for point_idx, es in enumerate(spec.es_n0_grid)
        )
        curves[name] = BerCurve(name, points)
    return BerReport(curves, seed)


def blob_hash(data: bytes) -> str:
    """Content hash in git blob form, stable across platforms."""
    h = hashlib.sha1(b"blob %d\x00" % len(data))
    h.update(data)
    return h.hexdigest()


def write_curve_csv(path: str | Path, curve: BerCurve) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["es_n0_db", "value", "ci_low", "ci_high"])
        for p in curve.points:
            lo, hi = p.ci
            writer.writerow([f"{p.es_n0_db:g}", f"{p.ber:.8e}", f"{lo:.8e}", f"{hi:.8e}"])


def read_curve_csv(path: str | Path) -> list[tuple[float, float, float, float]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows and rows[0][0] == "es_n0_db":
        rows = rows[1:]
    return [tuple(float(v) for v in row) for row in rows]


def spec_summary(spec: ExperimentSpec) -> dict:
    return {
        "classes": list(spec.plans),
        "es_n0_grid": list(spec.es_n0_grid),
        "detector": spec.detector,
        "rx_mode": spec.rx_mode,
        "delta_alpha": spec.delta_alpha,
        "channel": spec.channel_kind,
        "n_subcarriers": spec.cfg.n_subcarriers,
        "oversampling": spec.cfg.oversampling,
        "min_errors": spec.min_errors,
        "max_symbols": spec.max_symbols,
    }


def write_run_manifest(
    path: str | Path,
    spec: ExperimentSpec,
    report: BerReport,
    artifacts: Mapping[str, Path],
) -> None:
    """Echo the experiment alongside content hashes of its outputs."""
    doc = {
        "run": {"seed": report.seed, "format": 1},
        "experiment": spec_summary(spec),
        "artifacts": {
            name: blob_hash(Path(p).read_bytes()) for name, p in artifacts.items()
        },
    }
    config.write_toml(path, doc)
