"""Counter-based uniform random numbers.

Every uniform is a pure function of (seed, sample index, edge index), so any
subset of samples can be regenerated independently of worker count or
evaluation order.  The mixing function is the SplitMix64 finalizer, applied
in three chained stages (seed, then sample counter, then edge counter); it is
part of the reproducibility contract and must not change.
"""
from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

_SHIFT_30 = np.uint64(30)
_SHIFT_27 = np.uint64(27)
_SHIFT_31 = np.uint64(31)
_SHIFT_11 = np.uint64(11)
_INV_2_53 = 2.0 ** -53


def mix64(z):
    """SplitMix64 finalizer over uint64 scalars or arrays (wrapping)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = z + _GAMMA
        z = (z ^ (z >> _SHIFT_30)) * _MIX1
        z = (z ^ (z >> _SHIFT_27)) * _MIX2
        return z ^ (z >> _SHIFT_31)


def edge_uniforms(seed: int, sample_start: int, n_samples: int, n_edges: int) -> np.ndarray:
    """Uniforms in [0, 1) for samples [sample_start, sample_start + n_samples).

    Returns an (n_samples, n_edges) float64 array; entry (s, e) depends only
    on (seed, sample_start + s, e).
    """
    s = mix64(np.uint64(seed & _MASK64))
    counters = np.arange(sample_start, sample_start + n_samples, dtype=np.uint64)
    per_sample = mix64(s ^ counters)
    h = mix64(per_sample[:, None] ^ np.arange(n_edges, dtype=np.uint64))
    return (h >> _SHIFT_11).astype(np.float64) * _INV_2_53


def derive_seed(master_seed: int, label: str) -> int:
    """Stable 64-bit sub-seed for a named stream (e.g. one per design)."""
    digest = hashlib.blake2b(
        f"{master_seed & _MASK64}:{label}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")
