"""Gray-mapped QPSK constellation with unit average symbol energy."""
from __future__ import annotations

import numpy as np

# Index layout: idx = 2*b0 + b1, I = 1-2*b0, Q = 1-2*b1.  Adjacent decision
# regions differ in exactly one bit.
ALPHABET = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j], dtype=np.complex128) / np.sqrt(2.0)

BITS_PER_SYMBOL = 2

# popcount over 2-bit xor values, used by BER counters
_XOR_WEIGHT = np.array([0, 1, 1, 2], dtype=np.int64)


def bits_to_indices(bits: np.ndarray) -> np.ndarray:
    """Pack a (..., 2k) bit array into (..., k) constellation indices."""
    bits = np.asarray(bits)
    if bits.shape[-1] % 2:
        raise ValueError("bit count must be even for QPSK")
    b = bits.reshape(*bits.shape[:-1], -1, 2)
    return (2 * b[..., 0] + b[..., 1]).astype(np.int8)


def indices_to_bits(indices: np.ndarray) -> np.ndarray:
    idx = np.asarray(indices)
    out = np.empty((*idx.shape, 2), dtype=np.uint8)
    out[..., 0] = (idx >> 1) & 1
    out[..., 1] = idx & 1
    return out.reshape(*idx.shape[:-1], -1)


def modulate_indices(indices: np.ndarray) -> np.ndarray:
    return ALPHABET[np.asarray(indices)]


def slice_to_indices(values: np.ndarray) -> np.ndarray:
    """Hard decision: nearest constellation point, returned as indices."""
    v = np.asarray(values)
    return ((np.real(v) < 0) * 2 + (np.imag(v) < 0) * 1).astype(np.int8)


def slice_to_symbols(values: np.ndarray) -> np.ndarray:
    return ALPHABET[slice_to_indices(values)]


def bit_errors(idx_a: np.ndarray, idx_b: np.ndarray) -> int:
    """Hamming distance in bits between two index arrays of equal shape."""
    a = np.asarray(idx_a, dtype=np.int64)
    b = np.asarray(idx_b, dtype=np.int64)
    return int(_XOR_WEIGHT[a ^ b].sum())
