"""Symbol recovery from compressed-spectrum observations.

Three detectors over the demodulated vector r: single-tap slicing (MF),
zero-forcing, and a depth-first sphere search that is exactly ML whenever
it reports found.  Multi-band signals are detected per sub-band with the
sub-band-local coherence matrix.  The demodulator takes the receiver's
*believed* layout, so a mismatched belief produces the biased observation
an eavesdropper would actually work with.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, qpsk
from .waveform import (
    BandPlan,
    ComplexSignal,
    CorrelationMatrix,
    SubBand,
    WaveformConfig,
    band_correlation,
    plan_correlation,
)

RADIUS_SLACK = 1e-12
_PIVOT_FLOOR = 1e-10


@dataclass(frozen=True)
class DemodObservation:
    r: np.ndarray
    corr: CorrelationMatrix

    def __post_init__(self) -> None:
        if self.r.shape[-1] != self.corr.dim:
            raise ValueError("observation length does not match coherence dimension")


@dataclass(frozen=True)
class DetectionResult:
    symbols: np.ndarray
    visited_nodes: int
    found: bool
    erasures: int = 0


def _believed_plan(plan: BandPlan, rx_bcf: float | None) -> BandPlan:
    if rx_bcf is None:
        return plan
    return BandPlan(
        plan.kind,
        tuple(SubBand(rx_bcf, b.n_sub, b.eps) for b in plan.subbands),
    )


def band_demod(
    samples: np.ndarray, cfg: WaveformConfig, band: SubBand
) -> np.ndarray:
    """Project time samples onto one sub-band's analysis grid."""
    m = cfg.transform_size(band.beta)
    spec = np.fft.fft(samples, m, axis=-1)
    sel = spec[..., band.eps : band.eps + band.n_sub]
    return sel / np.sqrt(cfg.n_time_samples)


def demodulate(
    signal: ComplexSignal,
    cfg: WaveformConfig,
    rx_bcf: float | None,
    plan: BandPlan,
) -> DemodObservation:
    """Correlate the received signal against the receiver's believed
    carrier grid.  plan is that belief; passing rx_bcf overrides every
    sub-band's compression while keeping the believed layout, which is
    the wrong-matrix condition a mismatched eavesdropper operates under.
    """
    if signal.domain != "time":
        raise ValueError("demodulation expects a time-domain signal")
    if signal.samples.shape[-1] != cfg.n_time_samples:
        raise ValueError("signal length does not match the configuration")
    belief = _believed_plan(plan, rx_bcf)
    parts = [band_demod(signal.samples, cfg, b) for b in belief.subbands]
    r = np.concatenate(parts, axis=-1)
    return DemodObservation(r, plan_correlation(cfg, belief))


def demodulate_nearest_bin(
    signal: ComplexSignal, cfg: WaveformConfig, plan: BandPlan
) -> DemodObservation:
    """Plain orthogonal-FFT receiver: each carrier is read from its
    nearest integer bin.  This is the no-detector baseline; on compressed
    plans the grid mismatch scrambles the observation."""
    q = cfg.n_time_samples
    bins = np.rint(plan.carrier_freqs(cfg)).astype(int) % q
    spec = np.fft.fft(signal.samples, q, axis=-1) / np.sqrt(q)
    r = spec[..., bins]
    eye = CorrelationMatrix(np.eye(plan.n_data, dtype=np.complex128), 1.0, 1.0)
    return DemodObservation(r, eye)


def mf_decide(obs: DemodObservation) -> np.ndarray:
    """Hard decision straight on r, ignoring inter-carrier coupling."""
    return qpsk.slice_to_symbols(obs.r)


def _zf_soft(corr_entries: np.ndarray, r: np.ndarray) -> np.ndarray:
    arr = np.asarray(r, dtype=np.complex128)
    flat = arr.reshape(-1, arr.shape[-1]).T
    try:
        solved = np.linalg.solve(corr_entries, flat)
    except np.linalg.LinAlgError as exc:
        raise ValueError("coherence matrix is singular; compression too deep "
                         "for this band size") from exc
    return solved.T.reshape(arr.shape)


def zf_decide(obs: DemodObservation) -> np.ndarray:
    """Hard decision on the interference-inverted observation."""
    return qpsk.slice_to_symbols(_zf_soft(obs.corr.entries, obs.r))


def _chol_upper(corr_entries: np.ndarray) -> np.ndarray:
    g = corr_entries.conj().T @ corr_entries
    try:
        lower = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise ValueError("coherence matrix is numerically singular") from exc
    upper = lower.conj().T
    if np.abs(np.diagonal(upper)).min() < _PIVOT_FLOOR:
        raise ValueError("coherence factorization pivot underflow")
    return np.ascontiguousarray(upper)


@dataclass(frozen=True)
class SdWorkspace:
    """Single-use state for one sphere search: the upper factor of C*C,
    the soft zero-forcing point, and the starting radius."""

    chol_upper: np.ndarray
    soft: np.ndarray
    radius: float

    @classmethod
    def from_observation(
        cls,
        obs: DemodObservation,
        radius: float | None = None,
        slack: float = RADIUS_SLACK,
    ) -> "SdWorkspace":
        if obs.r.ndim != 1:
            raise ValueError("workspaces are built per observation, not per batch")
        upper = _chol_upper(obs.corr.entries)
        soft = _zf_soft(obs.corr.entries, obs.r)
        if radius is None:
            diff = soft - qpsk.ALPHABET[qpsk.slice_to_indices(soft)]
            radius = float(np.sum(np.abs(upper @ diff) ** 2)) * (1.0 + slack) + 1e-300
        return cls(upper, soft, float(radius))


def sphere_decode(
    obs: DemodObservation, workspace: SdWorkspace | None = None
) -> DetectionResult:
    """Exact ML decision whenever found is returned true.

    With the default zero-forcing radius the starting point itself lies
    inside the sphere, so the search cannot come back empty; an explicit
    tighter radius can, in which case the ZF decision is returned and the
    miss is reported as an erasure.
    """
    ws = workspace if workspace is not None else SdWorkspace.from_observation(obs)
    best, found, visited = _kernels.sd_one(
        ws.chol_upper,
        np.ascontiguousarray(ws.soft),
        qpsk.ALPHABET,
        ws.radius,
    )
    if found:
        symbols = qpsk.ALPHABET[best]
    else:
        symbols = qpsk.ALPHABET[qpsk.slice_to_indices(ws.soft)]
    return DetectionResult(symbols, int(visited), bool(found), 0 if found else 1)


def sd_batch_indices(
    corr_entries: np.ndarray, r: np.ndarray, slack: float = RADIUS_SLACK
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sphere-search every row of r against one coherence matrix.

    Returns (index matrix, visited counts, fallback flags); flagged rows
    found no leaf inside the radius and carry the ZF decision.
    """
    arr = np.asarray(r, dtype=np.complex128)
    lead = arr.shape[:-1]
    n = arr.shape[-1]
    upper = _chol_upper(corr_entries)
    soft = _zf_soft(corr_entries, arr).reshape(-1, n)
    szf = qpsk.slice_to_indices(soft)
    idx, visited, fallback = _kernels.sd_batch(
        upper,
        np.ascontiguousarray(soft),
        np.ascontiguousarray(szf),
        qpsk.ALPHABET,
        slack,
    )
    return idx.reshape(*lead, n), visited.reshape(lead), fallback.reshape(lead)


def detect_multiband(
    signal: ComplexSignal,
    cfg: WaveformConfig,
    plan: BandPlan,
    rx_plan: BandPlan | None = None,
) -> DetectionResult:
    """Sphere-decode each sub-band independently on the receiver plan's
    grids and concatenate the decisions.  Sub-bands where the search
    reports no solution fall back to ZF and are counted as erasures."""
    rx = rx_plan if rx_plan is not None else plan
    if rx.n_data != plan.n_data:
        raise ValueError("receiver plan does not partition the data vector")
    parts = []
    visited_total = 0
    erasures = 0
    for band in rx.subbands:
        r_b = band_demod(signal.samples, cfg, band)
        c_b = band_correlation(cfg, band).entries
        idx, visited, fallback = sd_batch_indices(c_b, r_b)
        visited_total += int(visited.sum())
        erasures += int(np.count_nonzero(fallback))
        parts.append(idx)
    symbols = qpsk.ALPHABET[np.concatenate(parts, axis=-1)]
    return DetectionResult(symbols, visited_total, erasures == 0, erasures)


def sd_complexity_bound(n: int, n_b: int | None = None) -> int:
    """Worst-case multiplication count of the full search: every node of
    a depth-2N binary-expanded tree costs 2n+1 multiplies at level n.
    With sub-band decomposition the bound applies per band."""
    if n < 1:
        raise ValueError("n must be positive")
    if n_b is None:
        return sum((1 << k) * (2 * k + 1) for k in range(1, 2 * n + 1))
    if n_b < 1 or n_b >= n or n % n_b:
        raise ValueError("sub-band size must divide n and be smaller than n")
    per_band = sum((1 << k) * (2 * k + 1) for k in range(1, 2 * n_b + 1))
    return (n // n_b) * per_band


def fft_complexity(n: int) -> int:
    """Butterfly multiplication count (N/2)log2 N of the orthogonal
    receiver, for power-of-two sizes."""
    if n < 2 or n & (n - 1):
        raise ValueError("n must be a power of two, at least 2")
    return (n // 2) * (n.bit_length() - 1)
