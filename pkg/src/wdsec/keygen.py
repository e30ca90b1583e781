"""Paired pattern-key generation from the logistic map.

Both endpoints iterate the same chaotic state and quantize supra-threshold
values into compression-factor keys.  Chaotic maps amplify any arithmetic
reassociation, so the update is evaluated in one pinned order,
(gamma * (1 - phi)) * phi, making paired streams bit-identical across
platforms in IEEE double precision.
"""
from __future__ import annotations

from dataclasses import dataclass

from .waveform import as_bcf


class KeyExhaustedError(RuntimeError):
    """The map ran for the iteration cap without producing a key."""


SKIP_CAP = 10**6


@dataclass(frozen=True)
class ChaoticState:
    gamma: float
    phi: float
    map_kind: str = "logistic"
    step: int = 0

    def __post_init__(self) -> None:
        if self.map_kind != "logistic":
            raise ValueError(f"unknown map kind {self.map_kind!r}")
        if not 1.0 < self.gamma < 4.0:
            raise ValueError("gamma must lie in (1, 4)")
        if not 0.0 < self.phi < 1.0:
            raise ValueError("phi must lie in (0, 1)")


def next_state(state: ChaoticState) -> ChaoticState:
    # pinned evaluation order; do not refactor
    phi = (state.gamma * (1.0 - state.phi)) * state.phi
    return ChaoticState(state.gamma, phi, state.map_kind, state.step + 1)


@dataclass(frozen=True)
class KeyQuantizer:
    """Half-open bins (lower, upper] above a threshold eta; values at or
    below eta, or beyond the last bin, emit no key."""

    eta: float
    bins: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        if not self.bins:
            raise ValueError("quantizer needs at least one bin")
        prev = self.eta
        for lower, upper, key in self.bins:
            if lower != prev:
                raise ValueError("bins must tile contiguously from eta upward")
            if upper <= lower:
                raise ValueError("bin upper edge must exceed its lower edge")
            as_bcf(key)
            prev = upper

    @classmethod
    def from_keys(cls, eta: float, keys: tuple[float, ...]) -> "KeyQuantizer":
        """Build contiguous bins whose upper edges are the keys themselves:
        (eta, k1] -> k1, (k1, k2] -> k2, and so on."""
        edges = (eta, *keys)
        bins = tuple(
            (edges[i], edges[i + 1], edges[i + 1]) for i in range(len(keys))
        )
        return cls(eta, bins)

    def quantize(self, value: float) -> float | None:
        if value <= self.eta or value > self.bins[-1][1]:
            return None
        for lower, upper, key in self.bins:
            if lower < value <= upper:
                return key
        return None


DEFAULT_QUADRUPLE = (3.9, 0.85, "logistic", 0.75)


def default_quantizer() -> KeyQuantizer:
    return KeyQuantizer.from_keys(0.75, (0.8, 0.85, 0.9))


@dataclass(frozen=True)
class PatternKeyStream:
    keys: tuple[float, ...]
    source: tuple[float, float, str, float]


def emit_keys(
    state: ChaoticState, quantizer: KeyQuantizer, count: int
) -> tuple[PatternKeyStream, ChaoticState]:
    """Advance the map until `count` keys have been quantized, skipping
    sub-threshold values.  Returns the stream and the final state so a
    caller can continue the same trajectory."""
    if count < 0:
        raise ValueError("count must be non-negative")
    origin = (state.gamma, state.phi, state.map_kind, quantizer.eta)
    keys: list[float] = []
    dry_spins = 0
    while len(keys) < count:
        state = next_state(state)
        key = quantizer.quantize(state.phi)
        if key is None:
            dry_spins += 1
            if dry_spins >= SKIP_CAP:
                raise KeyExhaustedError(
                    f"no key in {SKIP_CAP} iterations; quantizer unreachable "
                    f"from this trajectory"
                )
            continue
        dry_spins = 0
        keys.append(key)
    return PatternKeyStream(tuple(keys), origin), state


def stream_from_quadruple(
    gamma: float,
    phi0: float,
    eta: float,
    count: int,
    keys: tuple[float, ...] = (0.8, 0.85, 0.9),
) -> PatternKeyStream:
    state = ChaoticState(gamma, phi0)
    quant = KeyQuantizer.from_keys(eta, keys)
    stream, _ = emit_keys(state, quant, count)
    return stream


def paired_check(a: PatternKeyStream, b: PatternKeyStream) -> bool:
    """True iff both endpoints derived identical key sequences."""
    return a.keys == b.keys


def keys_to_text(stream: PatternKeyStream) -> str:
    """One decimal compression factor per line, for experiment configs."""
    return "\n".join(repr(k) for k in stream.keys) + "\n"
