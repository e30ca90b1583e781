"""Command line front end: ``eveclf train`` and ``eveclf eval``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .evaluate import (
    evaluate,
    format_table,
    write_confusion_csv,
    write_curve_csv,
    write_per_class_csv,
)
from .records import load_corpus, stratified_split
from .training import TrainConfig, load_model, train


def _cmd_train(args: argparse.Namespace) -> int:
    cfg = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch,
        learning_rate=args.lr,
        val_fraction=args.val_fraction,
        seed=args.seed,
        patience=args.patience,
        lr_step=args.lr_step,
        lr_gamma=args.lr_gamma,
    )
    result = train(args.manifest, args.out, cfg, log=not args.quiet)
    best = max(h.val_accuracy for h in result.history)
    print(f"kept epoch {result.best_epoch} (held-out accuracy {best:.4f})")
    print(f"wrote {result.artifact}, {result.log}, {result.card}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    model, meta = load_model(args.model)
    corpus = load_corpus(args.manifest)
    if corpus.n_classes != meta["n_classes"]:
        print(
            f"error: corpus has {corpus.n_classes} classes, "
            f"model head expects {meta['n_classes']}",
            file=sys.stderr,
        )
        return 2

    if args.split == "all":
        idx = None
    else:
        # splits are only meaningful on the corpus the model was fit to
        if corpus.data_hash != meta["data_hash"]:
            print(
                "error: corpus payload differs from the training corpus; "
                "use --split all to evaluate anyway",
                file=sys.stderr,
            )
            return 2
        tc = meta["train_config"]
        train_idx, val_idx = stratified_split(corpus, tc["val_fraction"], tc["seed"])
        idx = val_idx if args.split == "held-out" else train_idx

    result = evaluate(model, corpus, idx)
    print(format_table(result))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_curve_csv(out / "sca.csv", result)
    write_confusion_csv(out / "confusion.csv", result)
    write_confusion_csv(out / "confusion-soft.csv", result, soft=True)
    write_per_class_csv(out / "per-class.csv", result)
    print(f"wrote sca.csv, confusion.csv, confusion-soft.csv, per-class.csv under {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eveclf",
        description="train and score a CNN eavesdropper on exported IQ corpora",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a classifier to one corpus")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument(
        "--lr-step", type=int, default=0,
        help="shrink the rate every N epochs (0 keeps it fixed)",
    )
    p.add_argument("--lr-gamma", type=float, default=1.0)
    p.add_argument("--val-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--patience", type=int, default=3)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="score a saved model, write metric CSVs")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument(
        "--split",
        default="held-out",
        choices=["held-out", "train", "all"],
        help="held-out/train rebuild the training split; all scores every record",
    )
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
