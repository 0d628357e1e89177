"""Rateless inner code.

Coded symbol i is a pure function of (lt_seed, i): the symbol owns a
counter substream whose value 0 picks its degree and whose later values
pick distinct neighbors among the k' intermediate bits by rejection.
Any window of the symbol stream can therefore be regenerated on either
side of the link without replaying the symbols before it.
"""

from dataclasses import dataclass

import numpy as np

from ..degree import DegreeDistribution
from ..rng import GOLDEN, _mix64_np, substream_seeds
from . import backend

_INV_2_53 = 1.0 / (1 << 53)


@dataclass(frozen=True)
class SymbolBlock:
    """A contiguous run of coded symbols in compressed sparse row form."""

    start: int
    row_ptr: np.ndarray
    neighbors: np.ndarray
    values: np.ndarray | None

    @property
    def count(self) -> int:
        return self.row_ptr.shape[0] - 1

    @property
    def max_degree(self) -> int:
        if self.count == 0:
            return 0
        return int(np.diff(self.row_ptr).max())


def lt_degrees(dist: DegreeDistribution, lt_seed: int, start: int, count: int,
               k_prime: int) -> np.ndarray:
    """Degrees of symbols start .. start+count-1, capped at k'."""
    sseeds = substream_seeds(lt_seed, start, count)
    raw = _mix64_np(sseeds + np.uint64(GOLDEN))  # counter 0 of each substream
    u = (raw >> np.uint64(11)).astype(np.float64) * _INV_2_53
    cum = np.cumsum(dist.probabilities)
    idx = np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1)
    return np.minimum(dist.degrees[idx], k_prime).astype(np.int64)


def lt_encode(bits, dist: DegreeDistribution, lt_seed: int, start: int,
              count: int, k_prime: int) -> SymbolBlock:
    """Generate symbols [start, start+count).

    With ``bits`` (the k'-long intermediate block) the XOR values are
    computed; with ``bits=None`` only the graph is built, which is what
    the receiver needs.
    """
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    degrees = lt_degrees(dist, lt_seed, start, count, k_prime)
    row_ptr = np.zeros(count + 1, dtype=np.int64)
    np.cumsum(degrees, out=row_ptr[1:])
    idx_dtype = np.uint16 if k_prime < (1 << 16) else np.uint32
    neighbors = np.empty(int(row_ptr[-1]), dtype=idx_dtype)
    values = None if bits is None else np.empty(count, dtype=np.uint8)
    if bits is not None:
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
    max_deg = int(degrees.max()) if count else 0
    backend.lt_fill(bits, lt_seed, start, row_ptr, neighbors, values, k_prime,
                    max_degree=max_deg)
    return SymbolBlock(start=start, row_ptr=row_ptr, neighbors=neighbors, values=values)
