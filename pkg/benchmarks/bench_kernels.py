"""Kernel throughput: compiled extension vs the pure-Python reference.

Both backends implement the same two hot loops (check-node message
sweeps and coded-symbol generation).  This script runs them over an
identical decode-scale workload and prints wall time, edge throughput
and cross-backend agreement:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --k 10000 --symbols 12000 --sweeps 20

Default sizes are modest because the pure kernels run at Python-loop
speed; scale up when only the compiled numbers matter.
"""

import argparse
import math
import time

import numpy as np

from raptorqkd import rng
from raptorqkd.channel import ChannelParams, llr, transmit
from raptorqkd.codec import _fallback
from raptorqkd.codec.decoder import RaptorCode
from raptorqkd.codec.lt import lt_degrees
from raptorqkd.codec.tables import F_SLOPE, F_TABLE
from raptorqkd.degree import DegreeDistribution

try:
    from raptorqkd.codec import _speedups
except ImportError:
    _speedups = None

# a designed low-SNR output distribution, max degree 100
_ENTRIES = {
    1: 0.0035, 2: 0.3493, 3: 0.2314, 4: 0.0624, 5: 0.1115,
    8: 0.0436, 9: 0.0696, 20: 0.0286, 21: 0.0401, 100: 0.0599,
}


def build_workload(k: int, n_symbols: int, gamma: float, seed: int):
    dist = DegreeDistribution.renormalized(_ENTRIES, 100)
    code = RaptorCode(k, dist, seed=seed)
    word = rng.bits(rng.child_seed(seed, "payload"), 0, k)
    inter = code.encode_intermediate(word)
    block = code.lt_symbols(inter, seed + 1, 0, n_symbols)
    params = ChannelParams(gamma=gamma, seed=seed + 2)
    chan = llr(transmit(block.values, params), params).astype(np.float32)
    return code, inter, block, chan


def time_check_pass(backend: str, code, block, chan, sweeps: int, repeats: int):
    """Best-of-repeats time for `sweeps` full graph sweeps; returns post too."""
    pre = code.precoder
    scratch = max(block.max_degree, pre.max_check_degree(), 1)
    best = math.inf
    post = None
    for _ in range(repeats):
        msg = np.zeros(block.neighbors.shape[0], dtype=np.float32)
        lmsg = np.zeros(pre.h_cols.shape[0], dtype=np.float32)
        post = np.zeros(code.k_prime, dtype=np.float32)
        if backend == "pure":
            t0 = time.perf_counter()
            for _ in range(sweeps):
                _fallback.check_pass(block.row_ptr, block.neighbors, msg, post, chan)
                _fallback.check_pass(pre.h_row_ptr, pre.h_cols, lmsg, post, None)
            dt = time.perf_counter() - t0
        else:
            q = np.empty(scratch, dtype=np.float64)
            f = np.empty(scratch, dtype=np.float64)
            t0 = time.perf_counter()
            for _ in range(sweeps):
                _speedups.check_pass(block.row_ptr, block.neighbors, msg, post,
                                     chan, F_TABLE, F_SLOPE, q, f, 1.0)
                _speedups.check_pass(pre.h_row_ptr, pre.h_cols, lmsg, post,
                                     None, F_TABLE, F_SLOPE, q, f, 1.0)
            dt = time.perf_counter() - t0
        best = min(best, dt)
    edges = (block.neighbors.size + pre.h_cols.size) * sweeps
    return best, edges, post


def time_lt_fill(backend: str, dist, inter, k_prime: int, lt_seed: int,
                 n_symbols: int, repeats: int):
    degrees = lt_degrees(dist, lt_seed, 0, n_symbols, k_prime)
    row_ptr = np.zeros(n_symbols + 1, dtype=np.int64)
    np.cumsum(degrees, out=row_ptr[1:])
    idx_dtype = np.uint16 if k_prime < (1 << 16) else np.uint32
    best = math.inf
    nbr = values = None
    for _ in range(repeats):
        nbr = np.empty(int(row_ptr[-1]), dtype=idx_dtype)
        values = np.empty(n_symbols, dtype=np.uint8)
        if backend == "pure":
            t0 = time.perf_counter()
            _fallback.lt_fill(inter, lt_seed, 0, row_ptr, nbr, values, k_prime)
            dt = time.perf_counter() - t0
        else:
            touched = np.zeros(k_prime, dtype=np.uint8)
            sel = np.empty(max(int(degrees.max()), 1), dtype=np.int64)
            t0 = time.perf_counter()
            _speedups.lt_fill(inter, lt_seed, 0, row_ptr, nbr, values, k_prime,
                              touched, sel)
            dt = time.perf_counter() - t0
        best = min(best, dt)
    return best, int(row_ptr[-1]), nbr, values


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=2000, help="message length")
    ap.add_argument("--symbols", type=int, default=2400, help="received coded symbols")
    ap.add_argument("--sweeps", type=int, default=10, help="decoder sweeps to time")
    ap.add_argument("--repeats", type=int, default=2, help="timing repeats (best kept)")
    ap.add_argument("--gamma", type=float, default=0.05, help="linear channel SNR")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    code, inter, block, chan = build_workload(args.k, args.symbols, args.gamma, args.seed)
    nnz = block.neighbors.size + code.precoder.h_cols.size
    print(f"workload: k={args.k} k'={code.k_prime} symbols={args.symbols} "
          f"graph edges={nnz} gamma={args.gamma}")

    backends = ["pure"] + (["compiled"] if _speedups is not None else [])
    if _speedups is None:
        print("note: compiled extension not importable, timing the pure backend only")

    rows = []
    posts = {}
    lt_out = {}
    for be in backends:
        dt, edges, post = time_check_pass(be, code, block, chan, args.sweeps, args.repeats)
        posts[be] = post
        rows.append(("check_pass", be, dt, edges / dt))
        dt, filled, nbr, values = time_lt_fill(be, code.distribution, inter,
                                               code.k_prime, args.seed + 1,
                                               args.symbols, args.repeats)
        lt_out[be] = (nbr, values)
        rows.append(("lt_fill", be, dt, filled / dt))

    print(f"\n{'kernel':<12}{'backend':<10}{'time':>10}  {'edges/s':>10}  {'speedup':>8}")
    base = {r[0]: r[2] for r in rows if r[1] == "pure"}
    rows.sort(key=lambda r: (r[0], r[1] != "pure"))
    for kernel, be, dt, rate in rows:
        speed = base[kernel] / dt
        print(f"{kernel:<12}{be:<10}{dt:>9.4f}s  {rate:>10.3e}  {speed:>7.1f}x")

    if len(backends) == 2:
        print("\ncross-backend agreement:")
        same_nbr = np.array_equal(lt_out["pure"][0], lt_out["compiled"][0])
        same_val = np.array_equal(lt_out["pure"][1], lt_out["compiled"][1])
        print(f"  lt_fill: neighbors identical={same_nbr} values identical={same_val}")
        gap = float(np.abs(posts["pure"] - posts["compiled"]).max())
        flips = int(((posts["pure"] < 0) != (posts["compiled"] < 0)).sum())
        print(f"  check_pass after {args.sweeps} sweeps: max |post gap| {gap:.3e}, "
              f"hard decisions differing on {flips} of {code.k_prime} variables")
        if not (same_nbr and same_val):
            raise SystemExit("lt_fill outputs diverged between backends")


if __name__ == "__main__":
    main()
