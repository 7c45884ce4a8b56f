"""Deterministic random streams for row selection and instance generation.

The generator is splitmix64: output ``j`` is a fixed bit-mix of
``seed + (j+1) * GAMMA`` (64-bit wrapping arithmetic), so the stream is a pure
function of (seed, draw counter) and produces identical sequences on every
platform regardless of whether draws happen one at a time or in bulk.
Row indices use rejection sampling for an exactly uniform range reduction;
Gaussians use the Box-Muller transform on consecutive draw pairs.
"""

import math

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64_MOD = 1 << 64
_INV_2_53 = 2.0**-53


def _mix(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


class IndexStream:
    """Counter-based splitmix64 stream of uniform indices, floats and Gaussians.

    Two streams with the same seed yield the same draw sequence bit for bit;
    the counter records how many raw 64-bit words have been consumed.
    """

    algorithm = "splitmix64"

    def __init__(self, seed: int):
        self.seed = int(seed) % _U64_MOD
        self._counter = 0

    def __repr__(self):
        return f"IndexStream(seed={self.seed}, counter={self._counter}, algorithm={self.algorithm!r})"

    @property
    def counter(self) -> int:
        return self._counter

    def raw(self, count: int) -> np.ndarray:
        """Next `count` raw 64-bit words as a uint64 array."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        ks = np.arange(self._counter + 1, self._counter + count + 1, dtype=np.uint64)
        self._counter += count
        with np.errstate(over="ignore"):
            return _mix(np.uint64(self.seed) + ks * _GAMMA)

    def next_uniforms(self, count: int) -> np.ndarray:
        """float64 samples in [0, 1), 53 bits each."""
        return (self.raw(count) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def next_gaussians(self, count: int) -> np.ndarray:
        """Standard normal samples via Box-Muller on consecutive draw pairs."""
        pairs = (count + 1) // 2
        raw = self.raw(2 * pairs)
        # u1 in (0, 1] so log() is safe; u2 in [0, 1)
        u1 = ((raw[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
        u2 = (raw[1::2] >> np.uint64(11)).astype(np.float64) * _INV_2_53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * math.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:count]

    def next_indices(self, m: int, count: int) -> np.ndarray:
        """Next `count` uniform indices in {0, ..., m-1} as an int64 array.

        Raw words >= limit are rejected, where limit is the largest multiple
        of m not exceeding 2**64; the remainder of accepted words is unbiased.
        """
        if m < 1:
            raise ValueError("m must be positive")
        limit = np.uint64(_U64_MOD - (_U64_MOD % m))
        mm = np.uint64(m)
        parts = []
        got = 0
        while got < count:
            need = count - got
            raw = self.raw(need)
            accepted = raw[raw < limit]
            if accepted.size:
                parts.append((accepted % mm).astype(np.int64))
                got += accepted.size
        if len(parts) == 1:
            return parts[0]
        return np.concatenate(parts)

    def next_index(self, m: int) -> int:
        return int(self.next_indices(m, 1)[0])
