"""Lookup tables for the compiled message-passing kernel.

The check-node update in sign/log-magnitude form needs only one scalar
function, F(x) = -log(tanh(x/2)) on x > 0, because F is its own inverse:
the output magnitude is F(sum of F over other inputs).  The compiled kernel
approximates F by linear interpolation over buckets indexed by the top 15
bits of the float32 bit pattern (sign bit is always 0 after taking
magnitudes), which makes the bucket width proportional to x so relative
error stays ~1e-5 across the whole clamped domain.  The pure backend uses
exact libm instead; the two agree behaviorally, not bitwise.
"""

from __future__ import annotations

import numpy as np

TABLE_BITS = 16  # index = float32 bits >> 16, fraction from the low 16 bits
TABLE_SIZE = 1 << 15

Q_MIN = 1e-30  # below this a message is treated as saturated-strong input
Q_CAP = 36.0  # input magnitude clamp
MSG_CAP = 44.0  # output magnitude clamp
ARG_MAX = 128.0  # F(arg) is flushed to zero above this


def f_involution(x):
    """F(x) = -log(tanh(x/2)), exact, for scalars or arrays (x > 0)."""
    return -np.log(np.tanh(0.5 * np.asarray(x, dtype=np.float64)))


def build_tables() -> tuple[np.ndarray, np.ndarray]:
    """(values, slopes) float32 arrays of length 32768.

    Bucket i covers float32 values whose bit pattern lies in
    [i << 16, (i+1) << 16); within a bucket the value is affine in the low
    16 bits, so value + slope * frac interpolates exactly at both ends.
    """
    idx = np.arange(TABLE_SIZE + 1, dtype=np.uint32) << np.uint32(16)
    with np.errstate(invalid="ignore"):  # top bucket boundary is a nan pattern
        x = idx.view(np.float32).astype(np.float64)
    x[0] = np.float64(np.frombuffer(np.uint32(1).tobytes(), dtype=np.float32)[0])
    with np.errstate(divide="ignore", over="ignore"):
        f = f_involution(x)
    f[~np.isfinite(f)] = 0.0
    values = f[:-1]
    slopes = f[1:] - f[:-1]
    return values.astype(np.float32), slopes.astype(np.float32)


F_TABLE, F_SLOPE = build_tables()
