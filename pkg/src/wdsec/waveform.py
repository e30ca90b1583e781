"""Non-orthogonal multicarrier signal construction.

Sub-carriers are packed at a fraction (the bandwidth compression factor,
BCF) of the orthogonal spacing.  Signals are synthesized with zero-padded
IFFTs: a band with compression beta over Q time samples uses an M-point
transform, M = round(Q/beta), so the realised grid is beta_eff = Q/M.
All correlation quantities are computed from the realised grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

PlanKind = Literal["sb", "mb", "amb", "mamb"]


def as_bcf(value: float) -> float:
    """Validate a bandwidth compression factor; 1.0 is orthogonal packing."""
    v = float(value)
    if not 0.0 < v <= 1.0:
        raise ValueError(f"BCF must lie in (0, 1], got {value!r}")
    return v


def se_gain(alpha: float) -> float:
    """Spectral-efficiency gain over orthogonal packing, in percent."""
    return (1.0 / as_bcf(alpha) - 1.0) * 100.0


def iround(x: float) -> int:
    """Round half away from zero. Python's round() ties to even, which
    would silently shift the transform grid for exact .5 cases."""
    return int(np.floor(x + 0.5)) if x >= 0 else -int(np.floor(-x + 0.5))


@dataclass(frozen=True)
class WaveformConfig:
    """Static frame geometry: N data sub-carriers oversampled by rho."""

    n_subcarriers: int = 256
    oversampling: int = 8
    max_transform: int = 1 << 22

    def __post_init__(self) -> None:
        if self.n_subcarriers < 1 or self.oversampling < 1:
            raise ValueError("n_subcarriers and oversampling must be positive")

    @property
    def n_time_samples(self) -> int:
        return self.n_subcarriers * self.oversampling

    def transform_size(self, beta: float) -> int:
        m = iround(self.n_time_samples / as_bcf(beta))
        if m > self.max_transform:
            raise ValueError(
                f"beta={beta} needs an {m}-point transform, above the "
                f"configured maximum {self.max_transform}"
            )
        return m


@dataclass(frozen=True)
class SubBand:
    """One compressed band: n_sub carriers at spacing beta, starting at
    integer bin eps of its own beta-grid."""

    beta: float
    n_sub: int
    eps: int = 0

    def __post_init__(self) -> None:
        as_bcf(self.beta)
        if self.n_sub < 1:
            raise ValueError("sub-band must carry at least one sub-carrier")
        if self.eps < 0:
            raise ValueError("sub-band offset must be non-negative")


@dataclass(frozen=True)
class BandPlan:
    """Frequency layout of one signal class.

    Guard spacing between adjacent sub-bands is fixed at one empty
    sub-carrier; the builders below enforce it through the eps offsets.
    """

    kind: PlanKind
    subbands: tuple[SubBand, ...]
    guard: int = 1

    def __post_init__(self) -> None:
        if not self.subbands:
            raise ValueError("plan needs at least one sub-band")
        if self.kind == "sb" and (len(self.subbands) != 1 or self.subbands[0].eps != 0):
            raise ValueError("single-band plans have exactly one sub-band at offset 0")
        if self.guard != 1:
            raise ValueError("guard is fixed at one empty sub-carrier")

    @property
    def n_data(self) -> int:
        return sum(b.n_sub for b in self.subbands)

    def boundaries(self) -> list[tuple[int, int]]:
        """Start/stop index of each sub-band within the data vector."""
        out, pos = [], 0
        for b in self.subbands:
            out.append((pos, pos + b.n_sub))
            pos += b.n_sub
        return out

    def effective_betas(self, cfg: WaveformConfig) -> list[float]:
        q = cfg.n_time_samples
        return [q / cfg.transform_size(b.beta) for b in self.subbands]

    def carrier_freqs(self, cfg: WaveformConfig) -> np.ndarray:
        """Center frequency of every data carrier, in orthogonal-bin units,
        on the realised (effective) grids."""
        parts = []
        for b, beta_eff in zip(self.subbands, self.effective_betas(cfg)):
            parts.append(beta_eff * (b.eps + np.arange(b.n_sub)))
        return np.concatenate(parts)


def build_sb_plan(cfg: WaveformConfig, alpha: float) -> BandPlan:
    return BandPlan("sb", (SubBand(as_bcf(alpha), cfg.n_subcarriers, 0),))


def effective_beta(alpha: float, n: int, n_b: int) -> float:
    """Per-band compression that keeps a guarded multi-band layout inside
    the bandwidth of the single-band signal at compression alpha."""
    if n % n_b:
        raise ValueError("sub-band size must divide the sub-carrier count")
    beta = as_bcf(alpha) * n / (n + n // n_b - 1)
    if beta <= 0:
        raise ValueError("degenerate layout")
    return beta


def _layout(kind: PlanKind, betas: Sequence[float], n_subs: Sequence[int]) -> BandPlan:
    """Place sub-bands left to right, one guard sub-carrier between
    neighbours, each offset an integer of its own beta-grid."""
    bands: list[SubBand] = []
    eps = 0
    f_last = 0.0
    for i, (beta, n_sub) in enumerate(zip(betas, n_subs)):
        if i > 0:
            # First integer bin of this grid leaving at least one empty slot.
            # The nudge absorbs round-off when f_last/beta is an exact
            # integer (uniform-beta layouts); band positions are O(1e2) so
            # 1e-9 cannot skip a genuine boundary.
            eps = int(np.floor(f_last / beta + 1e-9)) + 2
        bands.append(SubBand(beta, n_sub, eps))
        f_last = beta * (eps + n_sub - 1)
    return BandPlan(kind, tuple(bands))


def build_mb_plan(cfg: WaveformConfig, alpha: float, n_b: int) -> BandPlan:
    """Uniform multi-band plan derived from a single-band compression:
    N/n_b sub-bands of n_b carriers each, same total occupied bandwidth."""
    n = cfg.n_subcarriers
    beta = effective_beta(alpha, n, n_b)
    n_bands = n // n_b
    return _layout("mb", [beta] * n_bands, [n_b] * n_bands)


def multi_band_plan(kind: PlanKind, betas: Sequence[float], n_subs: Sequence[int]) -> BandPlan:
    """General guarded layout with per-band compression and size."""
    if len(betas) != len(n_subs):
        raise ValueError("betas and n_subs must pair up")
    return _layout(kind, [as_bcf(b) for b in betas], list(n_subs))


def amb_band_size(beta: float, base_beta: float = 0.9, base_n: int = 16) -> int:
    """Sub-carrier count keeping beta*n_sub ~ base_beta*base_n (equal
    per-band bandwidth), rounded to the nearest integer."""
    return base_n + iround(base_n * base_beta / as_bcf(beta) - base_n)


def build_amb_plan(
    cfg: WaveformConfig,
    beta: float,
    n_bands: int = 16,
    base_beta: float = 0.9,
    base_n: int = 16,
) -> BandPlan:
    """Adaptive multi-band plan: the band count stays fixed while each
    band packs enough carriers to occupy the base band's bandwidth."""
    n_sub = amb_band_size(beta, base_beta, base_n)
    return _layout("amb", [beta] * n_bands, [n_sub] * n_bands)


def build_mamb_plan(
    cfg: WaveformConfig,
    betas: Sequence[float],
    base_beta: float = 0.9,
    base_n: int = 16,
) -> BandPlan:
    """Mixed adaptive multi-band plan: per-band compression varies, band
    sizes keep occupied bandwidth equal across bands."""
    n_subs = [amb_band_size(b, base_beta, base_n) for b in betas]
    return _layout("mamb", [as_bcf(b) for b in betas], n_subs)


@dataclass(frozen=True)
class ComplexSignal:
    samples: np.ndarray
    domain: Literal["time", "frequency"] = "time"
    power_scale: float = 1.0

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("signal contains non-finite samples")


def modulate(symbols: np.ndarray, cfg: WaveformConfig, plan: BandPlan) -> ComplexSignal:
    """Synthesize time samples for a plan.

    symbols has shape (..., n_data); output shape is (..., Q).  Bands
    sharing one transform size are placed in a single zero-interleaved
    spectrum; distinct grids get their own transform and the truncated
    outputs are summed.  Amplitude convention: each carrier contributes
    exp(2j*pi*f*k/Q)/sqrt(Q), so mean sample power is n_data/Q
    independent of compression.
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    if symbols.shape[-1] != plan.n_data:
        raise ValueError(f"expected {plan.n_data} symbols, got {symbols.shape[-1]}")
    q = cfg.n_time_samples

    by_m: dict[int, list[tuple[SubBand, int, int]]] = {}
    for band, (lo, hi) in zip(plan.subbands, plan.boundaries()):
        by_m.setdefault(cfg.transform_size(band.beta), []).append((band, lo, hi))

    out = np.zeros((*symbols.shape[:-1], q), dtype=np.complex128)
    for m, group in by_m.items():
        spec = np.zeros((*symbols.shape[:-1], m), dtype=np.complex128)
        for band, lo, hi in group:
            if band.eps + band.n_sub > m:
                raise ValueError("sub-band placed beyond its transform grid")
            spec[..., band.eps : band.eps + band.n_sub] = symbols[..., lo:hi]
        # ifft scales by 1/M; compensate to keep 1/sqrt(Q) per carrier
        out += (m / np.sqrt(q)) * np.fft.ifft(spec, axis=-1)[..., :q]
    return ComplexSignal(out, "time", 1.0 / np.sqrt(q))


def modulate_single_band(
    symbols: np.ndarray, cfg: WaveformConfig, alpha: float
) -> ComplexSignal:
    return modulate(symbols, cfg, build_sb_plan(cfg, alpha))


def modulate_multi_band(
    symbols: np.ndarray, cfg: WaveformConfig, plan: BandPlan
) -> ComplexSignal:
    if plan.kind == "sb":
        raise ValueError("use modulate_single_band for single-band plans")
    return modulate(symbols, cfg, plan)


def dirichlet_kernel(u: np.ndarray, q: int) -> np.ndarray:
    """Normalized coherence between two carriers spaced u orthogonal bins
    apart over q samples: (1/q) sum_k exp(2j*pi*u*k/q) in closed form."""
    u = np.asarray(u, dtype=np.float64)
    num = np.sinc(u)
    den = np.sinc(u / q)
    return num / den * np.exp(1j * np.pi * u * (q - 1) / q)


@dataclass(frozen=True)
class CorrelationMatrix:
    entries: np.ndarray
    tx_bcf: float | None
    rx_bcf: float | None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def correlation_matrix(
    cfg: WaveformConfig, tx_bcf: float, rx_bcf: float
) -> CorrelationMatrix:
    """Carrier cross-coherence seen by a receiver on the rx grid listening
    to a transmitter on the tx grid; equal grids give unit diagonal, and
    both at 1.0 give the identity."""
    at = as_bcf(tx_bcf)
    ar = as_bcf(rx_bcf)
    n = cfg.n_subcarriers
    q = cfg.n_time_samples
    m = np.arange(n)
    u = at * m[None, :] - ar * m[:, None]
    return CorrelationMatrix(dirichlet_kernel(u, q), at, ar)


def plan_correlation(
    cfg: WaveformConfig, plan: BandPlan, rx_plan: BandPlan | None = None
) -> CorrelationMatrix:
    """Full cross-coherence between a plan's carriers and a receiver
    plan's analysis grid (defaults to the same plan)."""
    rx = rx_plan or plan
    if rx.n_data != plan.n_data:
        raise ValueError("receiver plan must have matching carrier count")
    f_tx = plan.carrier_freqs(cfg)
    f_rx = rx.carrier_freqs(cfg)
    u = f_tx[None, :] - f_rx[:, None]
    ent = dirichlet_kernel(u, cfg.n_time_samples)
    single = plan.kind == "sb" and rx.kind == "sb"
    return CorrelationMatrix(
        ent,
        plan.subbands[0].beta if single else None,
        rx.subbands[0].beta if single else None,
    )


def band_correlation(cfg: WaveformConfig, band: SubBand) -> CorrelationMatrix:
    """Local coherence of one sub-band on its own realised grid; the
    offset cancels, only the spacing matters."""
    beta_eff = cfg.n_time_samples / cfg.transform_size(band.beta)
    m = np.arange(band.n_sub)
    u = beta_eff * (m[None, :] - m[:, None])
    return CorrelationMatrix(
        dirichlet_kernel(u, cfg.n_time_samples), beta_eff, beta_eff
    )


def occupied_bandwidth(plan: BandPlan, cfg: WaveformConfig) -> float:
    """Spectral span of the plan in orthogonal sub-carrier units, counting
    one spacing of roll-off past the last carrier."""
    last = plan.subbands[-1]
    beta_eff = plan.effective_betas(cfg)[-1]
    return beta_eff * (last.eps + last.n_sub)
