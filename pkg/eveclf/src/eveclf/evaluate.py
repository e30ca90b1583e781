"""Accuracy tables, confusion matrices, and the CSV surfaces they ship on.

The curve CSVs written here use the same four-column schema the signal
toolkit's ``plot`` command reads (``es_n0_db,value,ci_low,ci_high``), so
classification-accuracy curves drop straight into the existing plotting
path.  Confusion matrices use the ``true,<class...>`` layout its
``classify-eval`` command consumes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import PatternCnn, predict_proba
from .records import Corpus


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    # the interval provably contains p; keep that true against round-off
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


@dataclass(frozen=True)
class Evaluation:
    """Per-(class, Es/N0) accuracy plus the derived security metrics.

    ``per_class[c, p]`` is the accuracy of true class ``c`` at grid point
    ``p``; ``sca[p]`` averages it over classes -- the probability the
    eavesdropper names the transmitted pattern.  ``confusion[c, k]`` is
    the pooled row-normalized rate of deciding ``k`` when ``c`` was sent.

    ``soft_confusion[c, k]`` is the mean probability mass assigned to
    ``k`` over true-class-``c`` records.  The two tell the same story for
    a confident model, but diverge for a near-indifferent one: argmax
    then collapses onto whichever class edges ahead by tie-break, while
    the assigned mass still reports the indifference itself.  It is None
    when the evaluation was scored from hard decisions alone.
    """

    class_names: tuple[str, ...]
    es_n0_grid: tuple[float, ...]
    trials: np.ndarray
    correct: np.ndarray
    confusion: np.ndarray
    soft_confusion: np.ndarray | None = None

    @property
    def per_class(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.where(self.trials > 0, self.correct / np.maximum(self.trials, 1), np.nan)

    @property
    def sca(self) -> np.ndarray:
        table = self.per_class
        return np.nanmean(table, axis=0)

    def sca_interval(self, point: int) -> tuple[float, float]:
        # band from pooled counts; exact match to sca for balanced cells
        return wilson_interval(
            int(self.correct[:, point].sum()), int(self.trials[:, point].sum())
        )


def tally(
    true_labels: np.ndarray,
    point_idx: np.ndarray,
    predicted: np.ndarray,
    class_names: tuple[str, ...],
    es_n0_grid: tuple[float, ...],
    probabilities: np.ndarray | None = None,
) -> Evaluation:
    """Score hard decisions against truth, cell by cell."""
    n_cls, n_pts = len(class_names), len(es_n0_grid)
    trials = np.zeros((n_cls, n_pts), dtype=np.int64)
    correct = np.zeros((n_cls, n_pts), dtype=np.int64)
    counts = np.zeros((n_cls, n_cls), dtype=np.int64)
    np.add.at(trials, (true_labels, point_idx), 1)
    hit = predicted == true_labels
    np.add.at(correct, (true_labels[hit], point_idx[hit]), 1)
    np.add.at(counts, (true_labels, predicted), 1)
    row = counts.sum(axis=1, keepdims=True)
    confusion = counts / np.maximum(row, 1)
    soft = None
    if probabilities is not None:
        mass = np.zeros((n_cls, n_cls), dtype=np.float64)
        np.add.at(mass, true_labels, probabilities)
        soft = mass / np.maximum(row, 1)
    return Evaluation(
        tuple(class_names), tuple(es_n0_grid), trials, correct, confusion, soft
    )


def evaluate(
    model: PatternCnn, corpus: Corpus, idx: np.ndarray | None = None
) -> Evaluation:
    """Run the classifier over (a subset of) a corpus and score it."""
    if idx is None:
        idx = np.arange(corpus.n_records)
    proba = predict_proba(model, corpus.iq[idx])
    return tally(
        corpus.labels[idx], corpus.point_idx[idx], proba.argmax(axis=1),
        corpus.class_names, corpus.es_n0_grid, probabilities=proba,
    )


def write_curve_csv(path: str | Path, ev: Evaluation) -> None:
    """SCA vs Es/N0 in the four-column plot schema."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["es_n0_db", "value", "ci_low", "ci_high"])
        for p, es in enumerate(ev.es_n0_grid):
            lo, hi = ev.sca_interval(p)
            writer.writerow([f"{es:g}", f"{ev.sca[p]:.8e}", f"{lo:.8e}", f"{hi:.8e}"])


def write_confusion_csv(path: str | Path, ev: Evaluation, *, soft: bool = False) -> None:
    matrix = ev.soft_confusion if soft else ev.confusion
    if matrix is None:
        raise ValueError("evaluation carries no assigned-mass matrix")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["true", *ev.class_names])
        for name, row in zip(ev.class_names, matrix):
            writer.writerow([name, *[f"{v:.6f}" for v in row]])


def write_per_class_csv(path: str | Path, ev: Evaluation) -> None:
    """Wide per-class accuracy table, one column per class."""
    table = ev.per_class
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["es_n0_db", *ev.class_names])
        for p, es in enumerate(ev.es_n0_grid):
            writer.writerow([f"{es:g}", *[f"{v:.6f}" for v in table[:, p]]])


def format_table(ev: Evaluation) -> str:
    """The per-point accuracy table as printable text."""
    width = max(len(n) for n in ev.class_names) + 2
    head = "es_n0_db".rjust(9) + "".join(n.rjust(width) for n in ev.class_names)
    lines = [head + "sca".rjust(8)]
    table = ev.per_class
    for p, es in enumerate(ev.es_n0_grid):
        row = f"{es:9g}" + "".join(f"{table[c, p]:{width}.3f}" for c in range(len(ev.class_names)))
        lines.append(row + f"{ev.sca[p]:8.3f}")
    return "\n".join(lines)
