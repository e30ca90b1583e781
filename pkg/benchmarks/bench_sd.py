"""Timing comparison of the compiled and plain-Python sphere-search kernels.

Runs identical batches through both implementations, checks the decisions
agree bit for bit, and prints per-operating-point throughput.  The compiled
path is skipped (with a note) when numba is unavailable or disabled via
WDS_NUMBA=0.

Usage: python3 benchmarks/bench_sd.py [--rows 2000] [--repeats 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from wdsec import _kernels, qpsk
from wdsec import channel as ch
from wdsec.detection import _chol_upper, _zf_soft, demodulate
from wdsec.waveform import WaveformConfig, build_sb_plan, modulate

RADIUS_SLACK = 1e-12

POINTS = (
    (4, 0.8, 8.0),
    (8, 0.8, 8.0),
    (16, 0.9, 10.0),
    (16, 0.7, 10.0),
    (18, 0.8, 12.0),
)


def _observation(n_sub: int, alpha: float, es_n0_db: float, rows: int, rng):
    cfg = WaveformConfig(n_sub, 8)
    plan = build_sb_plan(cfg, alpha)
    idx = rng.integers(0, 4, size=(rows, plan.n_data)).astype(np.int8)
    sig = modulate(qpsk.ALPHABET[idx], cfg, plan)
    received, _ = ch.apply(sig, ch.ChannelModel("awgn", es_n0_db), rng)
    obs = demodulate(received, cfg, None, plan)
    upper = _chol_upper(obs.corr.entries)
    soft = np.ascontiguousarray(_zf_soft(obs.corr.entries, obs.r))
    szf = np.ascontiguousarray(qpsk.slice_to_indices(soft))
    return upper, soft, szf


def _time(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2000, help="vectors per batch")
    ap.add_argument("--repeats", type=int, default=3, help="timing repeats, best kept")
    args = ap.parse_args()

    jit = getattr(_kernels, "sd_batch_jit", None)
    if jit is None:
        print("compiled kernel unavailable (numba missing or WDS_NUMBA=0); "
              "timing the Python path only")
    rng = np.random.default_rng(0xBE7C)

    header = f"{'n':>3} {'alpha':>5} {'Es/N0':>5} {'python':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n_sub, alpha, es in POINTS:
        upper, soft, szf = _observation(n_sub, alpha, es, args.rows, rng)
        batch_args = (upper, soft, szf, qpsk.ALPHABET, RADIUS_SLACK)
        if jit is not None:
            jit(*batch_args)  # compile outside the timed region
            got_j, vis_j, fb_j = jit(*batch_args)
            got_p, vis_p, fb_p = _kernels.sd_batch_py(*batch_args)
            if not (
                np.array_equal(got_j, got_p)
                and np.array_equal(vis_j, vis_p)
                and np.array_equal(fb_j, fb_p)
            ):
                print(f"MISMATCH at n={n_sub} alpha={alpha}; kernels diverged")
                return 1
        t_py = _time(_kernels.sd_batch_py, batch_args, args.repeats)
        if jit is not None:
            t_jit = _time(jit, batch_args, args.repeats)
            print(f"{n_sub:>3} {alpha:>5.2f} {es:>5.1f} "
                  f"{args.rows / t_py:>8.0f}/s {args.rows / t_jit:>8.0f}/s "
                  f"{t_py / t_jit:>7.1f}x")
        else:
            print(f"{n_sub:>3} {alpha:>5.2f} {es:>5.1f} {args.rows / t_py:>8.0f}/s "
                  f"{'-':>10} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
