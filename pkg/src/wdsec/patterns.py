"""Named signal patterns: the class sets a transmitter hops between.

Single-band classes sweep the compression factor; multi-band classes
sweep the per-band compression; mixed classes shuffle three compressions
across sixteen equal-bandwidth sub-bands.
"""
from __future__ import annotations

from .waveform import (
    BandPlan,
    WaveformConfig,
    build_amb_plan,
    build_mamb_plan,
    build_sb_plan,
    multi_band_plan,
)

SB_ALPHAS = (1.0, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7)

MB_BETAS = {"mb-1": 0.9, "mb-2": 0.85, "mb-3": 0.8}
AMB_BETAS = {"amb-1": 0.9, "amb-2": 0.85, "amb-3": 0.8}

# per-sub-band compression sequences of the three mixed classes
MAMB_SEQUENCES = {
    "mamb-1": (0.90, 0.80, 0.85, 0.90, 0.90, 0.80, 0.85, 0.80,
               0.90, 0.85, 0.90, 0.85, 0.90, 0.80, 0.85, 0.80),
    "mamb-2": (0.80, 0.90, 0.80, 0.90, 0.85, 0.90, 0.80, 0.80,
               0.85, 0.85, 0.80, 0.90, 0.85, 0.90, 0.80, 0.85),
    "mamb-3": (0.85, 0.85, 0.90, 0.80, 0.90, 0.85, 0.90, 0.90,
               0.80, 0.85, 0.80, 0.85, 0.85, 0.80, 0.90, 0.80),
}

N_BANDS = 16
SUB_BAND_SIZE = 16


def sb_pattern(cfg: WaveformConfig) -> dict[str, BandPlan]:
    return {f"sb-{a:g}": build_sb_plan(cfg, a) for a in SB_ALPHAS}


def mb_pattern(cfg: WaveformConfig) -> dict[str, BandPlan]:
    """Uniform multi-band classes: sixteen sub-bands of sixteen carriers,
    one compression per class."""
    return {
        name: multi_band_plan("mb", [beta] * N_BANDS, [SUB_BAND_SIZE] * N_BANDS)
        for name, beta in MB_BETAS.items()
    }


def amb_pattern(cfg: WaveformConfig) -> dict[str, BandPlan]:
    return {
        name: build_amb_plan(cfg, beta, n_bands=N_BANDS)
        for name, beta in AMB_BETAS.items()
    }


def mamb_pattern(cfg: WaveformConfig) -> dict[str, BandPlan]:
    return {
        name: build_mamb_plan(cfg, seq) for name, seq in MAMB_SEQUENCES.items()
    }


PATTERNS = {
    "sb": sb_pattern,
    "mb": mb_pattern,
    "amb": amb_pattern,
    "mamb": mamb_pattern,
}


def pattern_plans(name: str, cfg: WaveformConfig | None = None) -> dict[str, BandPlan]:
    """Plans of one named pattern, keyed by class name."""
    if name not in PATTERNS:
        raise ValueError(f"unknown pattern {name!r}; choose from {sorted(PATTERNS)}")
    return PATTERNS[name](cfg or WaveformConfig())


def plan_by_name(name: str, cfg: WaveformConfig | None = None) -> BandPlan:
    """Single plan lookup, e.g. 'mamb-1' or 'sb-0.8' or 'ofdm'."""
    cfg = cfg or WaveformConfig()
    if name == "ofdm":
        return build_sb_plan(cfg, 1.0)
    for pattern in PATTERNS:
        plans = PATTERNS[pattern](cfg)
        if name in plans:
            return plans[name]
    raise ValueError(f"unknown plan {name!r}")
