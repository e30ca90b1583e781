"""Evaluation quantities: classification accuracy, power models, and
binomial confidence intervals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

Framework = Literal["wds", "digital-bf", "hybrid-bf", "analog-bf"]


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion; well behaved at
    zero counts, unlike the normal approximation."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    # the interval provably contains p; keep that true against round-off
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def sca(class_hits: Sequence[int], trials: Sequence[int] | int) -> float:
    """Average per-class identification rate across the pattern's
    classes: (1/lambda) * sum N_C/N_T."""
    hits = np.asarray(class_hits, dtype=np.float64)
    n_t = np.broadcast_to(np.asarray(trials, dtype=np.float64), hits.shape)
    if hits.size == 0:
        raise ValueError("need at least one class")
    if np.any(n_t <= 0) or np.any(hits < 0) or np.any(hits > n_t):
        raise ValueError("hits must lie in [0, trials] with positive trials")
    return float(np.mean(hits / n_t))


def accuracy_approx(n_classes: int) -> float:
    """Expected identification rate against indistinguishable classes:
    1 over the class count."""
    if n_classes < 1:
        raise ValueError("class count must be positive")
    return 1.0 / n_classes


def max_classes(b: int, n_subbands: int) -> int:
    """Distinct mixed plans with b compression choices per sub-band."""
    if b < 1 or n_subbands < 1:
        raise ValueError("need positive choice and sub-band counts")
    return b**n_subbands


@dataclass(frozen=True)
class PowerModelParams:
    """Front-end power budget in mW; defaults are the evaluation values."""

    p_lo: float = 22.0
    p_dac: float = 170.0
    p_mixer: float = 5.0
    p_filter: float = 14.0
    p_tx: float = 200.0
    p_ps: float = 10.0
    xi: float = 0.5
    n_rf_full: int = 6
    n_rf_hybrid: int = 2
    n_ps: int = 6

    def __post_init__(self) -> None:
        if not 0.0 < self.xi <= 1.0:
            raise ValueError("amplifier efficiency must lie in (0, 1]")
        for name in ("p_lo", "p_dac", "p_mixer", "p_filter", "p_tx", "p_ps"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def power(framework: Framework, params: PowerModelParams | None = None) -> float:
    """Total front-end consumption of one transmitter architecture.

    The single-chain waveform-security transmitter carries one full RF
    chain; beamforming variants multiply chains and/or phase shifters.
    """
    p = params or PowerModelParams()
    chain = p.p_dac + p.p_mixer + p.p_filter
    amp = p.p_tx / p.xi
    if framework == "wds":
        return p.p_lo + chain + amp
    if framework == "digital-bf":
        return p.p_lo + p.n_rf_full * (chain + amp)
    if framework == "hybrid-bf":
        return p.p_lo + p.n_rf_hybrid * chain + p.n_ps * (p.p_ps + amp)
    if framework == "analog-bf":
        return p.p_lo + chain + p.n_ps * (p.p_ps + amp)
    raise ValueError(f"unknown framework {framework!r}")
