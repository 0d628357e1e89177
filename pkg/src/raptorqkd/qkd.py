"""Reverse reconciliation over the equivalent binary-input AWGN channel.

Bob holds the reference data: per block he draws fresh random bits,
sends them through the noisy channel, and publishes the XOR of those
bits with the next window of a rateless codeword of his key.  Alice
unmasks her channel LLRs with the published XOR and decodes
incrementally until her estimate of Bob's key satisfies the decoder's
success checks, then acknowledges.  The block schedule sweeps the
target efficiency down from 1 in 1% steps to a floor, after which the
total length grows geometrically.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import channel
from .codec.decoder import DecodeSession, RaptorCode
from .exitchart import capacity
from .rng import bits as stream_bits
from .rng import child_seed

EFFICIENCY_FLOOR = 0.80
BLOCK_GROWTH = 1.02
MAX_BLOCKS = 40


class QkdError(ValueError):
    pass


@dataclass(frozen=True)
class CvqkdParams:
    """Operating point of the continuous-variable link, shot-noise units."""

    v_a: float
    transmittance: float
    excess_noise: float = 0.01
    homodyne_eff: float = 0.6
    electronic_noise: float = 0.01
    attenuation_db_per_km: float = 0.2
    distance_km: float | None = None

    def __post_init__(self):
        for name in ("v_a", "excess_noise", "homodyne_eff", "electronic_noise",
                     "attenuation_db_per_km"):
            if getattr(self, name) < 0:
                raise QkdError(f"{name} must be nonnegative")
        if not 0.0 < self.transmittance <= 1.0:
            raise QkdError(f"transmittance must be in (0, 1], got {self.transmittance}")
        if self.distance_km is not None:
            t = 10.0 ** (-self.attenuation_db_per_km * self.distance_km / 10.0)
            if not math.isclose(t, self.transmittance, rel_tol=1e-9):
                raise QkdError(
                    f"transmittance {self.transmittance} inconsistent with "
                    f"{self.distance_km} km at {self.attenuation_db_per_km} dB/km"
                )

    @classmethod
    def from_distance(cls, distance_km: float, v_a: float, **kwargs) -> "CvqkdParams":
        att = kwargs.pop("attenuation_db_per_km", 0.2)
        t = 10.0 ** (-att * distance_km / 10.0)
        return cls(v_a=v_a, transmittance=t, attenuation_db_per_km=att,
                   distance_km=distance_km, **kwargs)


def equivalent_snr(p: CvqkdParams) -> float:
    """Linear SNR of the induced binary-input AWGN channel."""
    th = p.transmittance * p.homodyne_eff
    denom = 2.0 + p.excess_noise * th + 2.0 * p.electronic_noise
    if denom <= 0.0:
        raise QkdError("nonpositive noise denominator")
    return p.v_a * th / denom


def key_rate(eta: float, i_ab: float, i_e: float, p_w: float = 0.0) -> float:
    """Secret bits per symbol; negative balances clamp to zero."""
    if not 0.0 <= p_w <= 1.0:
        raise QkdError(f"word error probability must be in [0, 1], got {p_w}")
    if min(eta, i_ab, i_e) < 0:
        raise QkdError("eta, i_ab and i_e must be nonnegative")
    return max(0.0, (1.0 - p_w) * (eta * i_ab - i_e))


class BlockSchedule:
    """Cumulative symbol counts n_1 < n_1+n_2 < ... for one session.

    Stage one targets efficiency 1.00, 0.99, ... down to a floor:
    the i-th cumulative count is ceil(k / (e_i * capacity)).  Past the
    floor each cumulative count grows by a fixed factor.  Counts are
    forced strictly increasing so every block carries at least one
    symbol.
    """

    def __init__(self, k: int, capacity_bits: float,
                 efficiency_floor: float = EFFICIENCY_FLOOR,
                 growth: float = BLOCK_GROWTH,
                 max_blocks: int = MAX_BLOCKS):
        if k < 1:
            raise QkdError(f"k must be positive, got {k}")
        if not 0.0 < capacity_bits < 1.0:
            raise QkdError(f"capacity must be in (0, 1) bits, got {capacity_bits}")
        if not 0.0 < efficiency_floor <= 1.0:
            raise QkdError("efficiency floor must be in (0, 1]")
        if growth <= 1.0:
            raise QkdError("growth must exceed 1")
        self.k = k
        self.capacity_bits = capacity_bits
        targets = []
        e = 1.0
        step = 0
        while e > efficiency_floor - 1e-12 and step < max_blocks:
            targets.append(e)
            step += 1
            e = 1.0 - 0.01 * step
        cum = []
        for i in range(max_blocks):
            if i < len(targets):
                c = math.ceil(k / (targets[i] * capacity_bits))
            else:
                c = math.ceil(cum[-1] * growth)
            if cum:
                c = max(c, cum[-1] + 1)
            cum.append(c)
        self.target_efficiencies = targets
        self.cumulative = cum

    def __len__(self) -> int:
        return len(self.cumulative)

    def block_size(self, i: int) -> int:
        """Size of block i (0-based)."""
        prev = self.cumulative[i - 1] if i > 0 else 0
        return self.cumulative[i] - prev

    def target_efficiency(self, i: int) -> float:
        """Efficiency (k/n)/C aimed at after block i lands; floor past stage one."""
        return self.k / self.cumulative[i] / self.capacity_bits


@dataclass(frozen=True)
class BlockRecord:
    size: int
    cumulative: int
    iterations: int
    decoded: bool
    skipped: bool


@dataclass(frozen=True)
class Transcript:
    """Everything observable about one reconciliation session."""

    success: bool
    key: np.ndarray
    reference_key: np.ndarray
    gamma: float
    n_total: int
    blocks_used: int
    iterations_total: int
    efficiency: float
    per_block: list[BlockRecord] = field(default_factory=list)

    @property
    def leaked_symbols(self) -> int:
        return self.n_total

    @property
    def keys_match(self) -> bool:
        return bool(np.array_equal(self.key, self.reference_key))


def run_reconciliation(code: RaptorCode, gamma: float, seed: int,
                       schedule: BlockSchedule | None = None,
                       max_blocks: int = MAX_BLOCKS,
                       max_iters: int | None = None,
                       skip_above: float | None = None,
                       **decode_kwargs) -> Transcript:
    """One full session; deterministic in (code, gamma, seed).

    skip_above short-circuits blocks whose target efficiency exceeds a
    known-achievable ceiling: symbols are still sent and counted, the
    decoder just is not run on a provably premature graph.  The result
    matches a run without skipping because decoding is cold-restarted
    per block.
    """
    if gamma <= 0:
        raise QkdError(f"gamma must be positive, got {gamma}")
    cap = capacity(gamma)
    if schedule is None:
        schedule = BlockSchedule(code.k, cap, max_blocks=max_blocks)
    if max_iters is None:
        max_iters = 200 if gamma >= 0.01 else 500

    msg_seed = child_seed(seed, "msg")
    pad_seed = child_seed(seed, "pad")
    noise_seed = child_seed(seed, "noise")
    lt_seed = child_seed(seed, "lt")

    bob_key = stream_bits(msg_seed, 0, code.k)
    word = code.encode_intermediate(bob_key)
    params = channel.ChannelParams(gamma=gamma, seed=noise_seed)
    session = DecodeSession(code, lt_seed)

    records: list[BlockRecord] = []
    result = None
    success = False
    iterations_total = 0
    n_blocks = min(len(schedule), max_blocks)
    blocks_used = 0
    for i in range(n_blocks):
        start = schedule.cumulative[i - 1] if i > 0 else 0
        count = schedule.block_size(i)
        coded = code.lt_symbols(word, lt_seed, start, count).values
        x1 = stream_bits(pad_seed, start, count)
        mask = x1 ^ coded  # published
        y = channel.transmit(x1, params, start=start)
        llr_block = (1.0 - 2.0 * mask) * channel.llr(y, params)
        session.add_block(llr_block)
        blocks_used = i + 1
        skip = skip_above is not None and schedule.target_efficiency(i) > skip_above
        if skip:
            records.append(BlockRecord(count, schedule.cumulative[i], 0, False, True))
            continue
        result = session.decode(max_iters=max_iters, **decode_kwargs)
        iterations_total += result.iterations
        records.append(BlockRecord(count, schedule.cumulative[i],
                                   result.iterations, result.success, False))
        if result.success:
            success = True
            break

    n_total = schedule.cumulative[blocks_used - 1]
    alice_key = result.message if result is not None else np.zeros(code.k, dtype=np.uint8)
    efficiency = (code.k / n_total) / cap
    return Transcript(
        success=success,
        key=alice_key,
        reference_key=bob_key,
        gamma=gamma,
        n_total=n_total,
        blocks_used=blocks_used,
        iterations_total=iterations_total,
        efficiency=efficiency,
        per_block=records,
    )


@dataclass(frozen=True)
class DistanceRecord:
    distance_km: float
    gamma: float
    v_a: float
    eta: float
    i_ab: float
    i_e: float
    p_w: float
    key_rate: float


def key_rate_vs_distance(distances, i_e_table, v_a_grid, eta=0.95, p_w: float = 0.0,
                         i_ab_model: str = "bi_awgn_exact",
                         **param_kwargs) -> list[DistanceRecord]:
    """Secret key rate per distance, modulation variance grid-searched.

    i_e_table maps distance to the eavesdropper information (externally
    computed); a missing distance is an error rather than a guess.
    eta may be a constant or a callable of the equivalent SNR.
    """
    records = []
    for dist in distances:
        if callable(i_e_table):
            i_e = float(i_e_table(dist))
        else:
            if dist not in i_e_table:
                raise QkdError(
                    f"no eavesdropper information supplied for distance {dist} km"
                )
            i_e = float(i_e_table[dist])
        best = None
        for v_a in v_a_grid:
            p = CvqkdParams.from_distance(dist, v_a=v_a, **param_kwargs)
            gamma = equivalent_snr(p)
            if gamma <= 0:
                continue
            i_ab = capacity(gamma, model=i_ab_model)
            eta_val = float(eta(gamma)) if callable(eta) else float(eta)
            rate = key_rate(eta_val, i_ab, i_e, p_w)
            rec = DistanceRecord(dist, gamma, v_a, eta_val, i_ab, i_e, p_w, rate)
            if best is None or rec.key_rate > best.key_rate:
                best = rec
        if best is None:
            raise QkdError(f"empty modulation variance grid for distance {dist}")
        records.append(best)
    return records
