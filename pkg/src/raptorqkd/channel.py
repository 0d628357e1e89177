"""Binary-input AWGN channel with reproducible noise streams.

Sign convention fixed project-wide: bit 0 maps to +1, so positive LLRs
favor bit 0.  With unit-energy antipodal signaling and linear SNR gamma,
noise variance is 1/gamma and the channel LLR is L = 2*gamma*y; over the
all-zero word L is Gaussian with mean 2*gamma and variance 4*gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng


@dataclass(frozen=True)
class ChannelParams:
    gamma: float
    seed: int

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")


def db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def linear_to_db(gamma: float) -> float:
    return 10.0 * math.log10(gamma)


def bpsk(bits: np.ndarray) -> np.ndarray:
    """bit 0 -> +1.0, bit 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def transmit(bits: np.ndarray, params: ChannelParams, start: int = 0) -> np.ndarray:
    """y_i = (1 - 2 b_i) + n_i with n_i ~ N(0, 1/gamma).

    start indexes the noise stream so that symbol i always sees the same
    noise draw no matter how transmission is chunked.
    """
    n = len(bits)
    sigma = 1.0 / math.sqrt(params.gamma)
    return bpsk(bits) + sigma * rng.normals(params.seed, start, n)


def llr(received: np.ndarray, params: ChannelParams) -> np.ndarray:
    """LLR of each observation; positive favors bit 0."""
    return 2.0 * params.gamma * np.asarray(received, dtype=np.float64)
