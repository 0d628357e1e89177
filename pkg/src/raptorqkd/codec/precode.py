"""High-rate LDPC precoder.

The outer code maps k message bits to k' = round(k / rate) intermediate
bits satisfying m = k' - k parity checks.  The parity-check matrix is
grown by progressive edge placement (each new edge reaches for the check
farthest from the variable in the current graph, breaking ties toward
low degree), which keeps short cycles out of a matrix this sparse.
Encoding is systematic: message bits land on non-pivot columns of the
reduced matrix, parity bits on pivot columns.
"""

from dataclasses import dataclass, field

import numpy as np

from ..rng import CounterRng, child_seed

_REBUILD_ATTEMPTS = 8


class PrecodeError(ValueError):
    pass


def _peg_graph(k_prime: int, m: int, column_weight: int, seed: int,
               randomize: bool = False):
    """Place column_weight edges per variable; returns (var_adj, chk_adj, chk_deg).

    randomize swaps the balanced greedy pick for a uniform draw among the
    candidate checks.  The greedy rule is deterministic enough that at a
    handful of checks its column patterns can all land in a proper
    subspace regardless of seed; a randomized retry escapes that.
    """
    rng = CounterRng(seed)
    perm = np.argsort(rng.uniforms(m), kind="stable")
    rank = np.empty(m, dtype=np.int64)
    rank[perm] = np.arange(m)
    jitter = rng.uniforms(k_prime * column_weight) if randomize else None

    width = int(np.ceil(column_weight * k_prime / m)) + 8
    chk_adj = np.full((m, width), -1, dtype=np.int64)
    chk_deg = np.zeros(m, dtype=np.int64)
    var_adj = np.full((k_prime, column_weight), -1, dtype=np.int64)

    chk_stamp = np.full(m, -1, dtype=np.int64)
    var_stamp = np.full(k_prime, -1, dtype=np.int64)
    stamp = 0

    for v in range(k_prime):
        for t in range(column_weight):
            if t == 0:
                cand = None  # whole complement: no edges from v yet
            else:
                stamp += 1
                frontier = var_adj[v, :t].copy()
                chk_stamp[frontier] = stamp
                var_stamp[v] = stamp
                reached = t
                cand = None
                while True:
                    nxt = chk_adj[frontier, :].ravel()
                    nxt = nxt[nxt >= 0]
                    nxt = np.unique(nxt[var_stamp[nxt] != stamp])
                    var_stamp[nxt] = stamp
                    if nxt.size == 0:
                        break
                    new_checks = var_adj[nxt, :].ravel()
                    new_checks = new_checks[new_checks >= 0]
                    new_checks = np.unique(new_checks[chk_stamp[new_checks] != stamp])
                    if new_checks.size == 0:
                        break
                    chk_stamp[new_checks] = stamp
                    reached += new_checks.size
                    if reached == m:
                        cand = new_checks  # deepest layer = complement of previous depth
                        break
                    frontier = new_checks
            if cand is None:
                cand = np.nonzero(chk_stamp != stamp)[0] if t > 0 else np.arange(m)
            if randomize:
                pick = int(jitter[v * column_weight + t] * cand.size) % cand.size
                c = int(cand[pick])
            else:
                score = chk_deg[cand] * m + rank[cand]
                c = int(cand[np.argmin(score)])
            if chk_deg[c] >= chk_adj.shape[1]:
                chk_adj = np.pad(chk_adj, ((0, 0), (0, 8)), constant_values=-1)
            chk_adj[c, chk_deg[c]] = v
            chk_deg[c] += 1
            var_adj[v, t] = c
    return var_adj, chk_adj, chk_deg


def _rref_gf2(h_dense: np.ndarray):
    """Row-reduce over GF(2), preferring pivots in high columns.

    Returns (rref, pivot_cols_by_row) or None when rows are dependent.
    """
    m, n = h_dense.shape
    r = np.packbits(h_dense, axis=1)
    pivot_col = np.full(m, -1, dtype=np.int64)
    used = np.zeros(m, dtype=bool)
    found = 0
    for col in range(n - 1, -1, -1):
        byte, bit = divmod(col, 8)
        mask = np.uint8(0x80 >> bit)
        has = (r[:, byte] & mask).astype(bool) & ~used
        rows = np.nonzero(has)[0]
        if rows.size == 0:
            continue
        p = rows[0]
        used[p] = True
        pivot_col[p] = col
        others = np.nonzero((r[:, byte] & mask).astype(bool))[0]
        others = others[others != p]
        if others.size:
            r[others] ^= r[p]
        found += 1
        if found == m:
            break
    if found < m:
        return None
    return np.unpackbits(r, axis=1, count=n), pivot_col


@dataclass(frozen=True)
class PrecodeSpec:
    k: int
    rate: float = 0.95
    column_weight: int = 3

    def __post_init__(self):
        if self.k < 1:
            raise PrecodeError(f"k must be positive, got {self.k}")
        if not 0.0 < self.rate < 1.0:
            raise PrecodeError(f"rate must be in (0, 1), got {self.rate}")
        k_prime = int(round(self.k / self.rate))
        if k_prime <= self.k:
            raise PrecodeError(
                f"rate {self.rate} with k={self.k} leaves no parity bits"
            )
        n_checks = k_prime - self.k
        if self.column_weight < 1 or self.column_weight > n_checks:
            raise PrecodeError(
                f"column weight {self.column_weight} needs at least that many checks"
            )
        if self.column_weight == n_checks and n_checks > 1:
            # every variable then touches every check: all columns equal, rank 1
            raise PrecodeError(
                f"column weight {self.column_weight} equal to the check count "
                f"{n_checks} collapses the matrix rank; raise k or lower the rate"
            )
        if self.column_weight % 2 == 0:
            # even weight makes every check-row sum cancel: rank < n_checks always
            raise PrecodeError("column weight must be odd for a full-rank check matrix")

    @property
    def k_prime(self) -> int:
        return int(round(self.k / self.rate))

    @property
    def n_checks(self) -> int:
        return self.k_prime - self.k


@dataclass
class Precode:
    """Built precoder: parity-check structure plus systematic encode maps."""

    spec: PrecodeSpec
    seed: int
    h_row_ptr: np.ndarray = field(repr=False)
    h_cols: np.ndarray = field(repr=False)
    h_packed: np.ndarray = field(repr=False)
    msg_positions: np.ndarray = field(repr=False)
    parity_positions: np.ndarray = field(repr=False)
    b_packed: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return self.spec.k

    @property
    def k_prime(self) -> int:
        return self.spec.k_prime

    def encode(self, message: np.ndarray) -> np.ndarray:
        """Map k message bits to the k'-bit intermediate block."""
        message = np.asarray(message, dtype=np.uint8)
        if message.shape != (self.k,):
            raise PrecodeError(f"message must have shape ({self.k},)")
        mp = np.packbits(message)
        parity = np.bitwise_count(self.b_packed & mp[None, :]).sum(axis=1).astype(np.uint8) & 1
        word = np.zeros(self.k_prime, dtype=np.uint8)
        word[self.msg_positions] = message
        word[self.parity_positions] = parity
        return word

    def extract_message(self, word: np.ndarray) -> np.ndarray:
        return np.asarray(word, dtype=np.uint8)[self.msg_positions]

    def parities_satisfied(self, word: np.ndarray) -> bool:
        wp = np.packbits(np.asarray(word, dtype=np.uint8))
        syndrome = np.bitwise_count(self.h_packed & wp[None, :]).sum(axis=1) & 1
        return not syndrome.any()

    def max_check_degree(self) -> int:
        return int(np.diff(self.h_row_ptr).max())


def build_precoder(spec: PrecodeSpec, seed: int) -> Precode:
    """Grow the graph and derive the systematic maps; reseeds on rank loss."""
    k_prime, m, cw = spec.k_prime, spec.n_checks, spec.column_weight
    for attempt in range(_REBUILD_ATTEMPTS):
        peg_seed = child_seed(seed, f"peg{attempt}" if attempt else "peg")
        var_adj, chk_adj, chk_deg = _peg_graph(k_prime, m, cw, peg_seed,
                                               randomize=attempt >= 2)
        h_dense = np.zeros((m, k_prime), dtype=np.uint8)
        rows = np.repeat(np.arange(m), chk_deg)
        cols = chk_adj[chk_adj >= 0]
        h_dense[rows, cols] = 1
        reduced = _rref_gf2(h_dense)
        if reduced is not None:
            break
    else:
        raise PrecodeError(
            f"no full-rank graph after {_REBUILD_ATTEMPTS} attempts (k={spec.k})"
        )

    rref, pivot_col = reduced
    parity_positions = pivot_col.copy()
    is_pivot = np.zeros(k_prime, dtype=bool)
    is_pivot[pivot_col] = True
    msg_positions = np.nonzero(~is_pivot)[0]
    b = rref[:, msg_positions]
    b_packed = np.packbits(b, axis=1)

    sorted_adj = np.sort(chk_adj, axis=1)  # -1 fill sorts first; slice it away
    row_ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(chk_deg, out=row_ptr[1:])
    idx_dtype = np.uint16 if k_prime < (1 << 16) else np.uint32
    h_cols = np.empty(int(row_ptr[-1]), dtype=idx_dtype)
    for c in range(m):
        deg = chk_deg[c]
        h_cols[row_ptr[c]:row_ptr[c + 1]] = sorted_adj[c, -deg:]

    return Precode(
        spec=spec,
        seed=seed,
        h_row_ptr=row_ptr,
        h_cols=h_cols,
        h_packed=np.packbits(h_dense, axis=1),
        msg_positions=msg_positions,
        parity_positions=parity_positions,
        b_packed=b_packed,
    )
