"""Counter-based pseudo-random streams.

Every stochastic quantity in this package (noise samples, message bits,
coded-symbol connections) is addressed as ``stream_value(seed, i)`` so that
any element can be regenerated in isolation: trial j of an experiment, or
symbol i of a rateless stream, never depends on how many values were drawn
before it.  The generator is the splitmix64 output function applied to a
64-bit Weyl sequence; both the compiled and the pure backends implement
exactly the arithmetic below.

Value at counter i (i >= 0) for a stream with a given seed::

    stream_value(seed, i) = mix64((seed + (i + 1) * GOLDEN) mod 2^64)

where mix64 is the splitmix64 finalizer.  Gaussians come from Box-Muller on
two consecutive counters, using only the cosine branch so that sample i is a
pure function of counters (2i, 2i+1).
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_LANE = 0xD1342543DE82EF95
_SEED_TWEAK = 0x6A09E667F3BCC909

_INV_2_53 = 1.0 / (1 << 53)


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_value(seed: int, i: int) -> int:
    """The i-th 64-bit value of the stream, random access."""
    return mix64((seed + (i + 1) * GOLDEN) & MASK64)


def substream_seed(seed: int, lane: int) -> int:
    """Seed for an indexed substream (e.g. one coded symbol's own stream)."""
    return mix64(((seed ^ _SEED_TWEAK) + (lane + 1) * _LANE) & MASK64)


def substream_seeds(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized substream_seed for lanes start .. start+count-1 (uint64)."""
    lane = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return _mix64_np(np.uint64(seed ^ _SEED_TWEAK) + lane * np.uint64(_LANE))


def child_seed(seed: int, tag) -> int:
    """Derive an independent named child stream from a parent seed.

    tag may be an int or a string; strings are folded through sha256 so the
    mapping is stable across runs and platforms.
    """
    if isinstance(tag, str):
        tag_int = int.from_bytes(hashlib.sha256(tag.encode()).digest()[:8], "little")
    else:
        tag_int = int(tag) & MASK64
    return mix64((seed ^ mix64((tag_int + GOLDEN) & MASK64)) & MASK64)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_values(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized stream_value for counters start .. start+count-1 (uint64)."""
    i = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return _mix64_np(np.uint64(seed) + i * np.uint64(GOLDEN))


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms on [0, 1), one per counter."""
    return (stream_values(seed, start, count) >> np.uint64(11)).astype(np.float64) * _INV_2_53


def normals(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normals; sample i consumes counters (2i, 2i+1).

    Box-Muller cosine branch: z_i = sqrt(-2 ln u1) * cos(2 pi u2) with
    u1 in (0, 1] so the log is finite.
    """
    raw = stream_values(seed, 2 * start, 2 * count)
    u1 = ((raw[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (raw[1::2] >> np.uint64(11)).astype(np.float64) * _INV_2_53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def bits(seed: int, start: int, count: int) -> np.ndarray:
    """Random bits as uint8, one per counter."""
    return (stream_values(seed, start, count) & np.uint64(1)).astype(np.uint8)


class CounterRng:
    """Sequential convenience wrapper over a counter stream.

    Keeps a cursor so callers that just want "the next value" can have it,
    while the underlying stream stays random-access for everyone else.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.cursor = 0

    def next_uniform(self) -> float:
        u = (stream_value(self.seed, self.cursor) >> 11) * _INV_2_53
        self.cursor += 1
        return u

    def uniforms(self, count: int) -> np.ndarray:
        u = uniforms(self.seed, self.cursor, count)
        self.cursor += count
        return u

    def normals(self, count: int) -> np.ndarray:
        z = normals(self.seed, self.cursor, count)
        self.cursor += 2 * count
        return z

    def bits(self, count: int) -> np.ndarray:
        b = bits(self.seed, self.cursor, count)
        self.cursor += count
        return b

    def child(self, tag) -> "CounterRng":
        return CounterRng(child_seed(self.seed, tag))
