"""Pure-Python reference implementation of the hot codec kernels.

Selected automatically when the compiled extension is unavailable (or
forced via RAPTORQKD_BACKEND=pure).  Semantics match the compiled kernels
operation for operation; magnitudes go through exact libm instead of the
interpolation tables, so results agree behaviorally rather than bitwise.
Python-loop speed: fine for unit-test problem sizes, hundreds of times
slower than the extension on experiment-scale graphs (see benchmarks/).
"""

from __future__ import annotations

import math

import numpy as np

from ..rng import GOLDEN, MASK64, mix64, substream_seed
from .tables import ARG_MAX, MSG_CAP, Q_CAP, Q_MIN

COMPILED = False


def _f_exact(x: float) -> float:
    # F(x) = -log(tanh(x/2)); self-inverse on (0, inf)
    t = math.tanh(0.5 * x)
    if t >= 1.0:
        return 0.0
    return -math.log(t)


def check_pass(row_ptr, nbr, msg, post, chan, damp: float = 1.0) -> None:
    """One layered sweep over a block of check nodes, in place.

    For each check (in index order): gather inputs q_e = post[v] - msg[e]
    plus the channel LLR when present, form output magnitudes via the
    F-involution in sign/log-magnitude form, then write messages back and
    update the variable posteriors immediately (layered scheduling).
    Zero inputs follow the erasure convention: any other zero input forces
    a zero output.  damp < 1 relaxes each message toward its new value
    instead of replacing it; damp = 1.0 is the plain update.
    """
    n_checks = len(row_ptr) - 1
    has_chan = chan is not None
    damped = damp != 1.0
    for c in range(n_checks):
        s = int(row_ptr[c])
        e = int(row_ptr[c + 1])
        deg = e - s
        zeros = 0
        total = 0.0
        neg = False
        qs = np.empty(deg, dtype=np.float32)
        fs = np.empty(deg, dtype=np.float64)
        if has_chan:
            lc = float(chan[c])
            if lc == 0.0:
                zeros += 1
            else:
                neg ^= lc < 0.0
                total += _f_exact(min(max(abs(lc), Q_MIN), Q_CAP))
        for t in range(deg):
            q = np.float32(post[nbr[s + t]] - msg[s + t])
            qs[t] = q
            if q == 0.0:
                zeros += 1
                fs[t] = 0.0
            else:
                neg ^= q < 0.0
                fv = _f_exact(min(max(abs(float(q)), Q_MIN), Q_CAP))
                fs[t] = fv
                total += fv
        for t in range(deg):
            q = float(qs[t])
            others_zero = zeros - (1 if q == 0.0 else 0)
            if others_zero > 0:
                out = np.float32(0.0)
            else:
                arg = total - fs[t]
                if arg < Q_MIN:
                    mag = MSG_CAP
                elif arg > ARG_MAX:
                    mag = 0.0
                else:
                    mag = min(_f_exact(arg), MSG_CAP)
                sign_neg = neg ^ (q < 0.0)
                out = np.float32(-mag if sign_neg else mag)
            v = nbr[s + t]
            if damped:
                out = np.float32((1.0 - damp) * float(msg[s + t]) + damp * float(out))
            delta = np.float32(out - msg[s + t])
            msg[s + t] = out
            post[v] = np.float32(post[v] + delta)


def lt_fill(bits, lt_seed: int, start: int, row_ptr, nbr, values, k_prime: int) -> None:
    """Fill neighbor indices (sorted, distinct) and XOR values per symbol.

    Symbol i draws from its own substream: counter 0 chose the degree
    (already folded into row_ptr), counters 1.. feed rejection sampling of
    distinct uniform indices.  bits may be None when only the graph is
    needed (receiver side).
    """
    count = len(row_ptr) - 1
    touched = np.zeros(k_prime, dtype=np.uint8)
    has_bits = bits is not None
    for i in range(count):
        lo = int(row_ptr[i])
        deg = int(row_ptr[i + 1]) - lo
        sseed = substream_seed(lt_seed, start + i)
        got = 0
        j = 1
        sel = []
        while got < deg:
            u = mix64((sseed + (j + 1) * GOLDEN) & MASK64)
            j += 1
            cand = u % k_prime
            if touched[cand]:
                continue
            touched[cand] = 1
            sel.append(cand)
            got += 1
        sel.sort()
        val = 0
        for t, v in enumerate(sel):
            nbr[lo + t] = v
            touched[v] = 0
            if has_bits:
                val ^= int(bits[v])
        if values is not None:
            values[i] = val
