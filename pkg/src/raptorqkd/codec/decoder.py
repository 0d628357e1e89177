"""Joint sum-product decoder over the precoder and the rateless graph.

Variable nodes are the k' intermediate bits.  Check nodes are the LDPC
parities (channel slot pinned to +inf, i.e. known satisfied, which the
kernels encode as "no channel term") plus one check per received coded
symbol carrying that symbol's channel LLR.  Messages are updated check
by check in a fixed serial order, which both makes runs bit-for-bit
reproducible and roughly halves the iteration count versus flooding.
"""

from dataclasses import dataclass

import numpy as np

from ..degree import DegreeDistribution
from ..rng import child_seed
from . import backend
from .lt import SymbolBlock, lt_encode
from .precode import Precode, PrecodeSpec, build_precoder

_STALL_WINDOW = 4
_STALL_TOL = 0.01


class RaptorCode:
    """Precoder plus output degree distribution; all static code structure."""

    def __init__(self, k: int, distribution: DegreeDistribution, seed: int = 0,
                 precode_spec: PrecodeSpec | None = None):
        if precode_spec is None:
            precode_spec = PrecodeSpec(k=k)
        if precode_spec.k != k:
            raise ValueError(f"precode spec is for k={precode_spec.k}, not {k}")
        self.k = k
        self.distribution = distribution
        self.seed = int(seed)
        self.precode_spec = precode_spec
        self.precoder: Precode = build_precoder(precode_spec, child_seed(seed, "precode"))

    @property
    def k_prime(self) -> int:
        return self.precoder.k_prime

    def encode_intermediate(self, message: np.ndarray) -> np.ndarray:
        return self.precoder.encode(message)

    def lt_symbols(self, intermediate, lt_seed: int, start: int, count: int) -> SymbolBlock:
        """Coded symbols [start, start+count); intermediate=None builds graph only."""
        return lt_encode(intermediate, self.distribution, lt_seed, start, count,
                         self.k_prime)


@dataclass(frozen=True)
class DecodeResult:
    success: bool
    message: np.ndarray
    iterations: int
    symbols: int
    stalled: bool = False
    trajectory: tuple = ()  # mean |posterior| at each termination checkpoint


class TannerGraph:
    """Accumulated decoding state: LDPC checks plus received symbol blocks."""

    def __init__(self, code: RaptorCode):
        self.code = code
        pre = code.precoder
        self.ldpc_msg = np.zeros(pre.h_cols.shape[0], dtype=np.float32)
        self.ldpc_max_deg = pre.max_check_degree()
        self.blocks: list[SymbolBlock] = []
        self.block_msgs: list[np.ndarray] = []
        self.block_chans: list[np.ndarray] = []
        self.post = np.zeros(code.k_prime, dtype=np.float32)
        self.n_symbols = 0

    def append_block(self, block: SymbolBlock, llrs: np.ndarray) -> None:
        if block.count != llrs.shape[0]:
            raise ValueError("one LLR per coded symbol required")
        self.blocks.append(block)
        self.block_msgs.append(np.zeros(block.neighbors.shape[0], dtype=np.float32))
        self.block_chans.append(np.ascontiguousarray(llrs, dtype=np.float32))
        self.n_symbols += block.count

    def reset(self) -> None:
        self.ldpc_msg[:] = 0.0
        for m in self.block_msgs:
            m[:] = 0.0
        self.post[:] = 0.0

    def sweep(self, damp: float = 1.0) -> None:
        """One serial pass over every check node, in arrival order."""
        pre = self.code.precoder
        for block, msg, chan in zip(self.blocks, self.block_msgs, self.block_chans):
            backend.check_pass(block.row_ptr, block.neighbors, msg, self.post,
                               chan, max_degree=block.max_degree, damp=damp)
        backend.check_pass(pre.h_row_ptr, pre.h_cols, self.ldpc_msg, self.post,
                           None, max_degree=self.ldpc_max_deg, damp=damp)


class DecodeSession:
    """Incremental decoding of one rateless stream.

    Blocks of channel LLRs arrive in symbol order; each decode() runs
    from cold messages over the union of everything received, so the
    result never depends on how the symbols were batched.
    """

    def __init__(self, code: RaptorCode, lt_seed: int):
        self.code = code
        self.lt_seed = int(lt_seed)
        self.graph = TannerGraph(code)
        self._last: DecodeResult | None = None

    @property
    def n_symbols(self) -> int:
        return self.graph.n_symbols

    def add_block(self, llrs) -> None:
        """Append LLRs for the next len(llrs) symbols of the stream."""
        llrs = np.atleast_1d(np.asarray(llrs, dtype=np.float32))
        if llrs.size == 0:
            return
        block = self.code.lt_symbols(None, self.lt_seed, self.graph.n_symbols,
                                     llrs.shape[0])
        self.graph.append_block(block, llrs)
        self._last = None

    def decode(self, max_iters: int = 200, check_every: int = 5,
               stall_window: int = _STALL_WINDOW,
               stall_tol: float = _STALL_TOL,
               damping: float = 1.0) -> DecodeResult:
        if self.graph.n_symbols < 1:
            raise ValueError("decode needs at least one received symbol")
        if not 0.0 < damping <= 1.0:
            raise ValueError(f"damping must be in (0, 1], got {damping}")
        graph = self.graph
        pre = self.code.precoder
        graph.reset()
        prev_hard = None
        hard = np.zeros(self.code.k_prime, dtype=np.uint8)
        growth: list[float] = []
        success = False
        stalled = False
        iters_used = max_iters
        for it in range(1, max_iters + 1):
            graph.sweep(damping)
            if it > 4 and it % check_every != 0:
                continue
            hard = (graph.post < 0.0).astype(np.uint8)
            parities_ok = pre.parities_satisfied(hard)
            if parities_ok and prev_hard is not None and np.array_equal(hard, prev_hard):
                success = True
                iters_used = it
                break
            prev_hard = hard
            growth.append(float(np.abs(graph.post, dtype=np.float64).mean()))
            if len(growth) > stall_window and not parities_ok:
                old = growth[-1 - stall_window]
                if old > 0.0 and growth[-1] < (1.0 + stall_tol) * old:
                    stalled = True
                    iters_used = it
                    break
        if not success and not stalled:
            hard = (graph.post < 0.0).astype(np.uint8)
        result = DecodeResult(
            success=success,
            message=hard[pre.msg_positions],
            iterations=iters_used,
            symbols=graph.n_symbols,
            stalled=stalled,
            trajectory=tuple(growth),
        )
        self._last = result
        return result

    def decode_incremental(self, llrs, **decode_kwargs) -> DecodeResult:
        """Append a block and re-decode; an empty block returns the last result."""
        llrs = np.atleast_1d(np.asarray(llrs, dtype=np.float32))
        if llrs.size == 0 and self._last is not None:
            return self._last
        self.add_block(llrs)
        return self.decode(**decode_kwargs)

    def symbol_agreement(self, word: np.ndarray, min_confidence: float = 5.0) -> float:
        """Fraction of confidently received symbols matching a re-encode of word.

        Diagnostic for the success contract: values XORed from word should
        reproduce the hard decisions of symbols whose channel LLR is strong.
        """
        word = np.asarray(word, dtype=np.uint8)
        checked = 0
        agree = 0
        for block, chan in zip(self.graph.blocks, self.graph.block_chans):
            conf = np.abs(chan) >= min_confidence
            if not conf.any():
                continue
            enc = self.code.lt_symbols(word, self.lt_seed, block.start, block.count)
            rx_hard = (chan < 0.0).astype(np.uint8)
            checked += int(conf.sum())
            agree += int((enc.values[conf] == rx_hard[conf]).sum())
        return 1.0 if checked == 0 else agree / checked
