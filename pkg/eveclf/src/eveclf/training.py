"""Training: Adam on cross-entropy with early stopping on held-out accuracy.

One call to :func:`train` owns the whole job -- split, fit, log, save --
and leaves three files in the output directory:

* ``model.pt``        weights plus the metadata needed to evaluate later
* ``training-log.csv``  per-epoch loss and held-out accuracy
* ``model-card.md``   the assumptions baked into the architecture
"""

from __future__ import annotations

import copy
import csv
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch import nn

from . import model as model_mod
from .model import PatternCnn, predict_labels
from .records import Corpus, load_corpus, stratified_split

MAX_EPOCHS = 30


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = MAX_EPOCHS
    batch_size: int = 128
    learning_rate: float = 0.01
    val_fraction: float = 0.2
    seed: int = 0
    patience: int = 3  # epochs without a held-out accuracy gain before stopping
    lr_step: int = 0  # shrink the rate every lr_step epochs; 0 keeps it fixed
    lr_gamma: float = 1.0

    def __post_init__(self) -> None:
        if not 1 <= self.epochs <= MAX_EPOCHS:
            raise ValueError(f"epochs {self.epochs} outside [1, {MAX_EPOCHS}]")
        if self.batch_size < 1:
            raise ValueError(f"batch_size {self.batch_size} < 1")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate {self.learning_rate} <= 0")
        if self.patience < 1:
            raise ValueError(f"patience {self.patience} < 1")
        if self.lr_step < 0:
            raise ValueError(f"lr_step {self.lr_step} < 0")
        if not 0 < self.lr_gamma <= 1:
            raise ValueError(f"lr_gamma {self.lr_gamma} outside (0, 1]")


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    loss: float
    val_loss: float
    val_accuracy: float


@dataclass(frozen=True)
class TrainResult:
    model: PatternCnn
    history: tuple[EpochStats, ...]
    best_epoch: int
    train_idx: np.ndarray = field(repr=False)
    val_idx: np.ndarray = field(repr=False)
    artifact: Path
    card: Path
    log: Path


def _epoch_eval(model: PatternCnn, x: torch.Tensor, y: torch.Tensor,
                loss_fn: nn.Module, batch: int = 512) -> tuple[float, float]:
    model.eval()
    losses, hits = [], 0
    with torch.no_grad():
        for a in range(0, len(x), batch):
            logits = model(x[a : a + batch])
            losses.append(float(loss_fn(logits, y[a : a + batch])) * len(logits))
            hits += int((logits.argmax(dim=1) == y[a : a + batch]).sum())
    return sum(losses) / len(x), hits / len(x)


def train(
    manifest_path: str | Path,
    out_dir: str | Path,
    cfg: TrainConfig = TrainConfig(),
    corpus: Corpus | None = None,
    log: bool = True,
) -> TrainResult:
    """Fit a classifier to the corpus a manifest describes.

    The head size comes from the manifest's class list.  The split is
    stratified per (class, Es/N0) cell with ``cfg.seed``, so a later
    evaluation run can rebuild the exact held-out set from the saved
    metadata.  Training stops early once held-out accuracy has not
    improved for ``cfg.patience`` epochs, and the best-epoch weights are
    what ends up in the artifact.
    """
    manifest_path = Path(manifest_path)
    if corpus is None:
        corpus = load_corpus(manifest_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    train_idx, val_idx = stratified_split(corpus, cfg.val_fraction, cfg.seed)
    torch.manual_seed(cfg.seed)
    net = PatternCnn(corpus.n_classes)
    opt = torch.optim.Adam(net.parameters(), lr=cfg.learning_rate)
    sched = (
        torch.optim.lr_scheduler.StepLR(opt, cfg.lr_step, cfg.lr_gamma)
        if cfg.lr_step
        else None
    )
    loss_fn = nn.CrossEntropyLoss()

    x_train = torch.from_numpy(corpus.iq[train_idx]).unsqueeze(1)
    y_train = torch.from_numpy(corpus.labels[train_idx])
    x_val = torch.from_numpy(corpus.iq[val_idx]).unsqueeze(1)
    y_val = torch.from_numpy(corpus.labels[val_idx])

    perm_gen = torch.Generator().manual_seed(cfg.seed)
    history: list[EpochStats] = []
    best = (-1.0, 0, None)  # (val accuracy, epoch, state dict)
    t0 = time.perf_counter()
    for epoch in range(1, cfg.epochs + 1):
        net.train()
        order = torch.randperm(len(x_train), generator=perm_gen)
        running, seen = 0.0, 0
        for a in range(0, len(order), cfg.batch_size):
            sel = order[a : a + cfg.batch_size]
            opt.zero_grad()
            loss = loss_fn(net(x_train[sel]), y_train[sel])
            loss.backward()
            opt.step()
            running += loss.detach().item() * len(sel)
            seen += len(sel)
        if sched is not None:
            sched.step()
        val_loss, val_acc = (
            _epoch_eval(net, x_val, y_val, loss_fn) if len(x_val) else (0.0, 1.0)
        )
        stats = EpochStats(epoch, running / seen, val_loss, val_acc)
        history.append(stats)
        if log:
            print(
                f"epoch {epoch:2d}  loss {stats.loss:.4f}  "
                f"val_loss {val_loss:.4f}  val_acc {val_acc:.4f}  "
                f"[{time.perf_counter() - t0:.0f}s]",
                flush=True,
            )
        if val_acc > best[0]:
            best = (val_acc, epoch, copy.deepcopy(net.state_dict()))
        elif epoch - best[1] >= cfg.patience:
            if log:
                print(f"early stop: no gain since epoch {best[1]}")
            break

    if best[2] is not None:
        net.load_state_dict(best[2])

    artifact = out_dir / "model.pt"
    torch.save(
        {
            "state_dict": net.state_dict(),
            "n_classes": corpus.n_classes,
            "class_names": list(corpus.class_names),
            "pattern": corpus.pattern,
            "data_hash": corpus.data_hash,
            "train_config": asdict(cfg),
            "epochs_run": len(history),
            "best_epoch": best[1],
            "best_val_accuracy": best[0],
        },
        artifact,
    )
    log_path = _write_log(out_dir / "training-log.csv", history)
    card = _write_card(out_dir / "model-card.md", corpus, cfg, history, best[1])
    return TrainResult(
        net, tuple(history), best[1], train_idx, val_idx, artifact, card, log_path
    )


def load_model(path: str | Path) -> tuple[PatternCnn, dict]:
    """Rebuild a saved classifier; returns it with the artifact metadata."""
    meta = torch.load(path, map_location="cpu", weights_only=True)
    net = PatternCnn(meta["n_classes"])
    net.load_state_dict(meta["state_dict"])
    net.eval()
    return net, meta


def _write_log(path: Path, history: list[EpochStats]) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "loss", "val_loss", "val_accuracy"])
        for st in history:
            writer.writerow(
                [st.epoch, f"{st.loss:.8e}", f"{st.val_loss:.8e}", f"{st.val_accuracy:.6f}"]
            )
    return path


def _write_card(
    path: Path, corpus: Corpus, cfg: TrainConfig, history: list[EpochStats], best: int
) -> Path:
    final = history[-1]
    lines = [
        "# model card: IQ pattern classifier",
        "",
        f"- corpus: pattern `{corpus.pattern}`, {corpus.n_records} records, "
        f"{corpus.n_classes} classes, payload blob `{corpus.data_hash[:12]}`",
        f"- classes: {', '.join(corpus.class_names)}",
        f"- Es/N0 grid (dB): {', '.join(f'{g:g}' for g in corpus.es_n0_grid)}",
        f"- split: {1 - cfg.val_fraction:.0%}/{cfg.val_fraction:.0%} per "
        f"(class, Es/N0) cell, seed {cfg.seed}",
        f"- optimizer: Adam, lr {cfg.learning_rate:g}"
        + (f" (x{cfg.lr_gamma:g} every {cfg.lr_step} epochs)" if cfg.lr_step else "")
        + f", batch {cfg.batch_size}, cap {cfg.epochs} epochs, patience {cfg.patience}",
        f"- ran {final.epoch} epochs; kept epoch {best} "
        f"(held-out accuracy {max(h.val_accuracy for h in history):.4f})",
        "",
        "## architecture assumptions",
        "",
        f"{model_mod.N_BLOCKS} convolution blocks of {model_mod.N_FILTERS} filters over",
        "the raw 2x1024 I/Q window, average-pooled to a 2x1x64 feature map and",
        "read out by one fully connected layer behind 50% dropout.  Kernel",
        f"width {model_mod.KERNEL} along the sample axis and stride-2 max pooling after each",
        "of the first six blocks are modelling choices, not interface",
        "constraints: the record format fixes the input shape and the manifest",
        "fixes the head size, nothing in between.",
    ]
    path.write_text("\n".join(lines) + "\n")
    return path
