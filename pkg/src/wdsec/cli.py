"""Command-line front end.

Subcommands map onto the library one to one: generate (datasets), ber
(Monte-Carlo curves), classify-eval (classification accuracy roll-up),
keys (pattern-key streams), power (front-end budgets), complexity
(detector bounds), plot (CSV to SVG).
"""
from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

from . import dataset, detection, harness, keygen, metrics, patterns
from .waveform import WaveformConfig


def _parse_grid(text: str) -> tuple[float, ...]:
    """Either 'start:step:stop' (stop inclusive) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        out = []
        v = start
        while v <= stop + 1e-9:
            out.append(round(v, 10))
            v += step
        return tuple(out)
    return tuple(float(p) for p in text.split(","))


def _waveform_config(args: argparse.Namespace) -> WaveformConfig:
    return WaveformConfig(args.n_subcarriers, args.oversampling)


def _add_waveform_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-subcarriers", type=int, default=256, metavar="N")
    p.add_argument("--oversampling", type=int, default=8, metavar="RHO")


def _cmd_generate(args: argparse.Namespace) -> int:
    cfg = _waveform_config(args)
    plans = patterns.pattern_plans(args.pattern, cfg)
    spec = dataset.DatasetSpec(
        pattern=args.pattern,
        plans=plans,
        symbols_per_class=args.symbols,
        es_n0_grid=_parse_grid(args.esn0),
        cfg=cfg,
        seed=args.seed,
    )
    manifest = dataset.export_dataset(spec, args.out)
    print(f"wrote {manifest.record_count} records for {len(manifest.class_names)} "
          f"classes to {args.out}")
    print(f"manifest: {dataset.manifest_path(args.out)}")
    return 0


def _resolve_plans(args: argparse.Namespace, cfg: WaveformConfig):
    if args.pattern:
        return patterns.pattern_plans(args.pattern, cfg)
    return {name: patterns.plan_by_name(name, cfg) for name in args.plan.split(",")}


def _cmd_ber(args: argparse.Namespace) -> int:
    cfg = _waveform_config(args)
    plans = _resolve_plans(args, cfg)

    rx_mode, delta, stub = "matched", 0.0, None
    if args.rx.startswith("mismatch:"):
        rx_mode = "mismatch"
        delta = float(args.rx.split(":", 1)[1])
    elif args.rx.startswith("classifier:"):
        rx_mode = "classifier"
        source = args.rx.split(":", 1)[1]
        if source == "uniform":
            stub = harness.ClassifierStub.uniform(tuple(plans))
        else:
            stub = harness.ClassifierStub.from_csv(source)
    elif args.rx != "matched":
        raise SystemExit(f"unknown rx assumption {args.rx!r}")

    spec = harness.ExperimentSpec(
        plans=plans,
        es_n0_grid=_parse_grid(args.esn0),
        detector=args.detector,
        rx_mode=rx_mode,
        delta_alpha=delta,
        classifier=stub,
        channel_kind=args.channel,
        cfg=cfg,
        min_errors=args.min_errors,
        max_symbols=args.max_symbols,
        seed=args.seed,
    )
    report = harness.run_ber(spec)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, Path] = {}
    for name, curve in report.curves.items():
        path = prefix.parent / f"{prefix.name}-{name}.csv"
        harness.write_curve_csv(path, curve)
        artifacts[name] = path
        for p in curve.points:
            print(f"{name} @ {p.es_n0_db:g} dB: BER {p.ber:.3e} "
                  f"({p.bit_errors}/{p.bits_total} bits, {p.symbols} symbols)")
    manifest = prefix.parent / f"{prefix.name}-manifest.toml"
    harness.write_run_manifest(manifest, spec, report, artifacts)
    print(f"curves: {', '.join(str(p) for p in artifacts.values())}")
    print(f"manifest: {manifest}")
    return 0


def _cmd_classify_eval(args: argparse.Namespace) -> int:
    """Roll a per-class accuracy table (es_n0_db,class,hits,trials) up to
    average accuracy per point with a confidence interval."""
    by_point: dict[float, list[tuple[int, int]]] = defaultdict(list)
    with open(args.csv, newline="") as fh:
        for row in csv.DictReader(fh):
            by_point[float(row["es_n0_db"])].append(
                (int(row["hits"]), int(row["trials"]))
            )
    rows = []
    for es in sorted(by_point):
        hits = [h for h, _ in by_point[es]]
        trials = [t for _, t in by_point[es]]
        value = metrics.sca(hits, trials)
        lo, hi = metrics.wilson_interval(sum(hits), sum(trials))
        rows.append((es, value, lo, hi))
        print(f"{es:g} dB: SCA {value:.4f} [{lo:.4f}, {hi:.4f}]")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["es_n0_db", "value", "ci_low", "ci_high"])
            for es, value, lo, hi in rows:
                writer.writerow([f"{es:g}", f"{value:.8f}", f"{lo:.8f}", f"{hi:.8f}"])
        print(f"wrote {args.out}")
    return 0


def _cmd_keys(args: argparse.Namespace) -> int:
    key_values = tuple(float(k) for k in args.keys.split(","))
    stream = keygen.stream_from_quadruple(
        args.gamma, args.phi0, args.eta, args.count, key_values
    )
    sys.stdout.write(keygen.keys_to_text(stream))
    return 0


def _cmd_power(args: argparse.Namespace) -> int:
    frameworks = (
        ("wds", "digital-bf", "hybrid-bf", "analog-bf")
        if args.framework == "all"
        else (args.framework,)
    )
    for fw in frameworks:
        print(f"{fw}: {metrics.power(fw):g} mW")
    return 0


def _cmd_complexity(args: argparse.Namespace) -> int:
    print(f"single-band SD bound: {detection.sd_complexity_bound(args.n)}")
    if args.n_b:
        print(f"multi-band SD bound:  {detection.sd_complexity_bound(args.n, args.n_b)}")
    try:
        print(f"orthogonal FFT:       {detection.fft_complexity(args.n)}")
    except ValueError:
        pass
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    from .plotting import plot_curves

    labels = args.labels.split(",") if args.labels else None
    out = plot_curves(
        args.csv,
        args.out,
        labels=labels,
        log_y=not args.linear,
        y_label=args.y_label,
        title=args.title,
    )
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wdsec",
        description="waveform-defined security simulation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="export a labeled IQ dataset")
    p.add_argument("--pattern", required=True, choices=sorted(patterns.PATTERNS))
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--symbols", type=int, default=2000,
                   help="symbols per class (default 2000)")
    p.add_argument("--esn0", default="-20:10:50", type=str)
    p.add_argument("--seed", type=int, default=None)
    _add_waveform_args(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("ber", help="run a Monte-Carlo BER sweep")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--plan", help="comma list of class names, e.g. mamb-1 or ofdm")
    group.add_argument("--pattern", choices=sorted(patterns.PATTERNS))
    p.add_argument("--detector", default="multiband-sd",
                   choices=["mf", "zf", "sd", "multiband-sd"])
    p.add_argument("--esn0", default="0:2:10", type=str)
    p.add_argument("--rx", default="matched",
                   help="matched | mismatch:DELTA | classifier:CSV | classifier:uniform")
    p.add_argument("--channel", default="awgn", choices=["awgn", "rayleigh"])
    p.add_argument("--out", required=True, help="output prefix for CSV curves")
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-symbols", type=int, default=20000)
    p.add_argument("--seed", type=int, default=None)
    _add_waveform_args(p)
    p.set_defaults(func=_cmd_ber)

    p = sub.add_parser("classify-eval",
                       help="average a per-class accuracy table into SCA per point")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_classify_eval)

    p = sub.add_parser("keys", help="emit a pattern-key stream")
    p.add_argument("--gamma", type=float, default=3.9)
    p.add_argument("--phi0", type=float, default=0.85)
    p.add_argument("--eta", type=float, default=0.75)
    p.add_argument("--count", type=int, default=16)
    p.add_argument("--keys", default="0.8,0.85,0.9",
                   help="comma list of quantizer bin edges/keys")
    p.set_defaults(func=_cmd_keys)

    p = sub.add_parser("power", help="front-end power of one architecture")
    p.add_argument("--framework", default="all",
                   choices=["wds", "digital-bf", "hybrid-bf", "analog-bf", "all"])
    p.set_defaults(func=_cmd_power)

    p = sub.add_parser("complexity", help="detector multiplication bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n-b", type=int, default=None)
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("plot", help="render curve CSVs to SVG")
    p.add_argument("csv", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--labels", default=None, help="comma list, one per CSV")
    p.add_argument("--linear", action="store_true", help="linear y axis")
    p.add_argument("--y-label", default="BER")
    p.add_argument("--title", default=None)
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
