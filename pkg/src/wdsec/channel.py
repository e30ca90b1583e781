"""AWGN and frequency-selective fading with receiver-side equalization.

Noise level is set per transmitted symbol energy over noise density, so a
unit-energy constellation observed through a matched demodulator sees
complex noise of variance 10**(-es_n0_db/10) per component.  Multipath is
one-symbol block fading: a fresh tap realization per call, applied as a
circular convolution so equalization is a per-bin division.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .waveform import ComplexSignal

ChannelKind = Literal["awgn", "rayleigh"]


def exponential_taps(n_taps: int = 3, decay_db: float = 3.0) -> tuple[tuple[int, float], ...]:
    """Power-delay profile with the given per-tap decay, normalized to
    unit total mean power; delays are consecutive samples from zero."""
    if n_taps < 1:
        raise ValueError("need at least one tap")
    raw = 10.0 ** (-decay_db * np.arange(n_taps) / 10.0)
    raw /= raw.sum()
    return tuple((d, float(p)) for d, p in enumerate(raw))


@dataclass(frozen=True)
class ChannelModel:
    kind: ChannelKind = "awgn"
    es_n0_db: float = math.inf
    taps: tuple[tuple[int, float], ...] = field(default_factory=exponential_taps)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rayleigh":
            total = sum(p for _, p in self.taps)
            if abs(total - 1.0) > 1e-9:
                raise ValueError("tap mean powers must sum to 1")
        if not (math.isfinite(self.es_n0_db) or self.es_n0_db == math.inf):
            raise ValueError("es_n0_db must be finite or +inf")

    @property
    def noise_variance(self) -> float:
        if self.es_n0_db == math.inf:
            return 0.0
        return 10.0 ** (-self.es_n0_db / 10.0)


@dataclass(frozen=True)
class ChannelState:
    """Realized channel descriptor: per-bin frequency response (None for
    the identity channel) plus the noise variance actually applied."""

    freq_response: np.ndarray | None
    noise_variance: float

    @property
    def condition_number(self) -> float:
        if self.freq_response is None:
            return 1.0
        mags = np.abs(self.freq_response)
        lo = mags.min()
        if lo == 0.0:
            return math.inf
        return float(mags.max() / lo)


def _noise(shape: tuple[int, ...], variance: float, rng: np.random.Generator) -> np.ndarray:
    if variance == 0.0:
        return np.zeros(shape, dtype=np.complex128)
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def apply(
    signal: ComplexSignal, model: ChannelModel, rng: np.random.Generator | None = None
) -> tuple[ComplexSignal, ChannelState]:
    """Pass a time-domain signal (batched on leading axes) through the
    channel.  Fading draws one tap realization per leading-axis entry."""
    if signal.domain != "time":
        raise ValueError("channel expects time-domain input")
    if rng is None:
        rng = np.random.default_rng(model.seed)
    x = signal.samples
    q = x.shape[-1]
    var = model.noise_variance

    if model.kind == "awgn":
        y = x + _noise(x.shape, var, rng)
        return ComplexSignal(y, "time", signal.power_scale), ChannelState(None, var)

    delays = np.array([d for d, _ in model.taps])
    if int(delays.max()) >= q:
        raise ValueError("tap delay exceeds the symbol length")
    powers = np.array([p for _, p in model.taps])
    lead = x.shape[:-1]
    gains = _noise((*lead, len(model.taps)), 1.0, rng) * np.sqrt(powers)
    impulse = np.zeros((*lead, q), dtype=np.complex128)
    impulse[..., delays] = gains
    h_f = np.fft.fft(impulse, axis=-1)
    y = np.fft.ifft(np.fft.fft(x, axis=-1) * h_f, axis=-1)
    y += _noise(x.shape, var, rng)
    return ComplexSignal(y, "time", signal.power_scale), ChannelState(h_f, var)


def equalize(received: ComplexSignal, state: ChannelState) -> ComplexSignal:
    """Invert the realized channel; identity channels pass through."""
    if state.freq_response is None:
        return received
    mags = np.abs(state.freq_response)
    if mags.min() < 1e-12:
        raise ValueError(
            f"channel too ill-conditioned to invert "
            f"(condition number {state.condition_number:.3e})"
        )
    spec = np.fft.fft(received.samples, axis=-1) / state.freq_response
    return ComplexSignal(np.fft.ifft(spec, axis=-1), "time", received.power_scale)
