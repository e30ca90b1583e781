"""End-to-end release gates.

One test per contract point, in dependency order: detector optimality,
analytic identities, synthesis equivalence, link-level statistics, the
security sweeps, and the closed-form budgets.  Each gate appends a
PASS/FAIL verdict line (echoed after the summary via conftest) carrying
the measured numbers.

Statistical gates draw from the shared default seed so they are exactly
reproducible; overriding WDS_SEED re-rolls the Monte Carlo draw and may
push a contained-in-CI assertion outside its band.
"""
from __future__ import annotations

import math
import time

import numpy as np

from conftest import GATE_LINES
from oracles import direct_modulate, ml_indices_batch
from wdsec import channel as ch
from wdsec import config, patterns, qpsk
from wdsec.detection import demodulate, fft_complexity, sd_batch_indices, sd_complexity_bound
from wdsec.harness import ExperimentSpec, run_ber
from wdsec.keygen import ChaoticState, next_state, paired_check, stream_from_quadruple
from wdsec.metrics import accuracy_approx, power
from wdsec.waveform import (
    WaveformConfig,
    build_amb_plan,
    build_mb_plan,
    build_sb_plan,
    correlation_matrix,
    modulate,
    multi_band_plan,
)

SEED = config.resolve_seed(None)


def _gate(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    GATE_LINES.append(line)
    print(line)
    assert ok, line


def _qfunc(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2))


def _crossing(es_db, bers, target=1e-3):
    """Es/N0 where a log-linear interpolation of the curve hits target."""
    for (x0, y0), (x1, y1) in zip(zip(es_db, bers), zip(es_db[1:], bers[1:])):
        if y0 >= target >= y1 and y1 > 0:
            t = (math.log10(target) - math.log10(y0)) / (math.log10(y1) - math.log10(y0))
            return x0 + t * (x1 - x0)
    return None


# --------------------------------------------------------------- detection


def test_sphere_decoder_equals_exhaustive_search():
    rng = np.random.default_rng(np.random.SeedSequence((SEED, 1)))
    t0 = time.perf_counter()
    mismatches = 0
    trials = 0
    for n_sub in (2, 4, 6):
        cfg = WaveformConfig(n_sub, 8)
        for alpha in (0.7, 0.8, 0.9):
            plan = build_sb_plan(cfg, alpha)
            idx = rng.integers(0, 4, size=(10_000, plan.n_data)).astype(np.int8)
            sig = modulate(qpsk.ALPHABET[idx], cfg, plan)
            es_n0_db = rng.uniform(0.0, 15.0)
            received, _ = ch.apply(sig, ch.ChannelModel("awgn", es_n0_db), rng)
            obs = demodulate(received, cfg, None, plan)
            got, _, _ = sd_batch_indices(obs.corr.entries, obs.r)
            want = ml_indices_batch(obs.corr.entries, obs.r)
            mismatches += int(np.sum(np.any(got != want, axis=1)))
            trials += idx.shape[0]
    elapsed = time.perf_counter() - t0
    _gate(
        "sd-equals-ml",
        mismatches == 0 and elapsed < 120.0,
        f"{mismatches}/{trials} mismatches over N x alpha grid, {elapsed:.1f}s",
    )


# -------------------------------------------------------------- identities


def test_coherence_identities():
    worst_diag = 0.0
    for n_sub in (2, 3, 8, 31, 64, 128, 256):
        cfg = WaveformConfig(n_sub, 8)
        for alpha in (0.67, 0.7, 0.8, 0.9, 0.95, 1.0):
            c = correlation_matrix(cfg, alpha, alpha).entries
            worst_diag = max(worst_diag, float(np.abs(np.diagonal(c) - 1.0).max()))
    cfg = WaveformConfig(256, 8)
    eye_err = float(
        np.abs(correlation_matrix(cfg, 1.0, 1.0).entries - np.eye(256)).max()
    )
    _gate(
        "coherence-identities",
        worst_diag < 1e-12 and eye_err < 1e-12,
        f"unit-diagonal error {worst_diag:.2e}, orthogonal-identity error {eye_err:.2e}",
    )


def test_transforms_match_direct_synthesis():
    rng = np.random.default_rng(np.random.SeedSequence((SEED, 3)))
    cfg = WaveformConfig(64, 4)
    cases = {
        "sb-0.7": build_sb_plan(cfg, 0.7),
        "sb-0.8": build_sb_plan(cfg, 0.8),
        "sb-0.9": build_sb_plan(cfg, 0.9),
        "sb-1.0": build_sb_plan(cfg, 1.0),
        "mb": build_mb_plan(cfg, 0.8, 16),
        "amb": build_amb_plan(cfg, 0.8, n_bands=3, base_n=8),
        "mamb": multi_band_plan("mamb", (0.9, 0.85, 0.8), (8, 9, 10)),
    }
    worst = 0.0
    for plan in cases.values():
        syms = qpsk.ALPHABET[rng.integers(0, 4, size=(16, plan.n_data))]
        got = modulate(syms, cfg, plan).samples
        want = direct_modulate(syms, cfg, plan)
        worst = max(worst, float(np.linalg.norm(got - want) / np.linalg.norm(want)))
    _gate(
        "transform-vs-direct",
        worst < 1e-9,
        f"worst relative synthesis error {worst:.2e} across {len(cases)} plans",
    )


# ------------------------------------------------------------- link level


def test_ofdm_ber_matches_closed_form():
    t0 = time.perf_counter()
    cfg = WaveformConfig(256, 1)
    eb_grid = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
    offset = 10 * math.log10(2)  # QPSK: two bits per symbol
    spec = ExperimentSpec(
        plans={"ofdm": build_sb_plan(cfg, 1.0)},
        es_n0_grid=tuple(eb + offset for eb in eb_grid),
        detector="mf",
        cfg=cfg,
        min_errors=100,
        max_symbols=60_000,
        batch_symbols=512,
        seed=SEED,
    )
    points = run_ber(spec).curves["ofdm"].points
    elapsed = time.perf_counter() - t0
    contained = 0
    enough_errors = True
    for eb, p in zip(eb_grid, points):
        theory = _qfunc(math.sqrt(2 * 10 ** (eb / 10)))
        lo, hi = p.ci
        contained += lo <= theory <= hi
        enough_errors &= p.bit_errors >= 100
    _gate(
        "ofdm-closed-form",
        contained == len(eb_grid) and enough_errors and elapsed < 300.0,
        f"{contained}/{len(eb_grid)} theory points inside the 95% band, {elapsed:.1f}s",
    )


def test_mixed_plans_track_ofdm_and_defeat_mf():
    # baseline and mixed curves bracket the 1e-3 crossing on equal 1 dB
    # spans; interpolating across unequal spans skews the gap estimate
    cfg_ofdm = WaveformConfig(256, 1)
    base = run_ber(
        ExperimentSpec(
            plans={"ofdm": build_sb_plan(cfg_ofdm, 1.0)},
            es_n0_grid=(9.0, 10.0),
            detector="mf",
            cfg=cfg_ofdm,
            min_errors=400,
            max_symbols=60_000,
            batch_symbols=1024,
            seed=SEED,
        )
    ).curves["ofdm"].points
    base_cross = _crossing([p.es_n0_db for p in base], [p.ber for p in base])

    cfg = WaveformConfig(256, 8)
    plans = patterns.pattern_plans("mamb", cfg)
    sd_curves = run_ber(
        ExperimentSpec(
            plans=plans,
            es_n0_grid=(9.0, 10.0, 11.0),
            detector="multiband-sd",
            cfg=cfg,
            min_errors=400,
            max_symbols=12_000,
            batch_symbols=256,
            seed=SEED,
        )
    ).curves
    mf_curves = run_ber(
        ExperimentSpec(
            plans=plans,
            es_n0_grid=(30.0,),
            detector="mf",
            cfg=cfg,
            min_errors=100,
            max_symbols=2_000,
            batch_symbols=256,
            seed=SEED,
        )
    ).curves

    gaps = {}
    floors = {}
    for name in plans:
        pts = sd_curves[name].points
        cross = _crossing([p.es_n0_db for p in pts], [p.ber for p in pts])
        gaps[name] = None if cross is None or base_cross is None else cross - base_cross
        floors[name] = mf_curves[name].points[0].ber
    ok = (
        base_cross is not None
        and all(g is not None and abs(g) <= 1.0 for g in gaps.values())
        and all(f > 0.1 for f in floors.values())
    )
    gap_txt = ", ".join(
        f"{k} {'n/a' if g is None else f'{g:+.2f}dB'}" for k, g in gaps.items()
    )
    floor_txt = ", ".join(f"{f:.2f}" for f in floors.values())
    _gate(
        "mixed-plans-vs-ofdm",
        ok,
        f"1e-3 crossing gaps [{gap_txt}] within 1.0 dB; 30 dB MF floors [{floor_txt}] above 0.1",
    )


def test_mismatched_sphere_decoder_stays_blind():
    cfg = WaveformConfig(16, 8)
    spec = ExperimentSpec(
        plans={"sb-0.8": build_sb_plan(cfg, 0.8)},
        es_n0_grid=tuple(float(x) for x in range(0, 41, 5)),
        detector="sd",
        rx_mode="mismatch",
        delta_alpha=0.05,
        cfg=cfg,
        min_errors=100,
        max_symbols=2_000,
        batch_symbols=256,
        seed=SEED,
    )
    points = run_ber(spec).curves["sb-0.8"].points
    bers = [p.ber for p in points]
    ok = all(0.2 <= b <= 0.5 for b in bers)
    _gate(
        "mismatch-stays-blind",
        ok,
        f"BER {min(bers):.3f}..{max(bers):.3f} over 0-40 dB, inside [0.2, 0.5]",
    )


# ------------------------------------------------------------ closed forms


def test_power_budget_values():
    wds = power("wds")
    digital = power("digital-bf")
    ratio = digital / wds
    _gate(
        "power-budget",
        wds == 611.0 and digital == 3556.0 and 5.5 <= ratio <= 6.0,
        f"wds {wds:.0f} mW, digital-bf {digital:.0f} mW, ratio {ratio:.2f}",
    )


def test_key_generator_reproducibility_and_divergence():
    first = next_state(ChaoticState(3.9, 0.85)).phi
    a = stream_from_quadruple(3.9, 0.85, 0.75, 10_000)
    b = stream_from_quadruple(3.9, 0.85, 0.75, 10_000)
    ka = stream_from_quadruple(3.9, 0.85, 0.75, 64).keys
    kb = stream_from_quadruple(3.9, 0.86, 0.75, 64).keys
    split = next((i for i, (x, y) in enumerate(zip(ka, kb)) if x != y), None)
    _gate(
        "key-generator",
        first == 0.49725 and paired_check(a, b) and split is not None and split < 32,
        f"first iterate {first!r}, 10000 paired keys equal, "
        f"perturbed streams split at key {split}",
    )


def test_search_complexity_bounds():
    def single(n):
        return sum(2**k * (2 * k + 1) for k in range(1, 2 * n + 1))

    def multi(n, n_b):
        return (n // n_b) * single(n_b)

    exact = all(sd_complexity_bound(n) == single(n) for n in (2, 4, 8, 16)) and all(
        sd_complexity_bound(n, n_b) == multi(n, n_b)
        for n, n_b in ((8, 2), (8, 4), (16, 4), (16, 8), (64, 16))
    )
    fft_exact = all(
        fft_complexity(1 << p) == (1 << p) // 2 * p for p in range(1, 13)
    )
    dominated = all(
        sd_complexity_bound(n, n_b) < sd_complexity_bound(n)
        for n in range(8, 65)
        for n_b in range(1, n)
        if n % n_b == 0
    )
    _gate(
        "complexity-bounds",
        exact and fft_exact and dominated,
        f"closed forms exact (single N=4 gives {sd_complexity_bound(4)}), "
        "banded bound below full bound for all N in 8..64",
    )


def test_indistinguishability_accuracy_approximation():
    a3 = accuracy_approx(3)
    a7 = accuracy_approx(7)
    drop = (a3 - a7) / a3
    _gate(
        "accuracy-approximation",
        a3 == 1 / 3 and a7 == 1 / 7 and abs(drop - 0.571) <= 0.005,
        f"1/3 and 1/7 exact, relative drop {drop:.1%}",
    )
