# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled codec kernels: layered check-pass and coded-symbol fill.

Mirrors _fallback.py operation for operation; see that module for the
reference semantics.  Magnitudes go through the F-involution lookup tables
(float32-bit-indexed linear interpolation, relative error ~1e-5) instead of
libm, which is what buys the throughput.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs
from libc.stdint cimport int64_t, uint8_t, uint16_t, uint32_t, uint64_t

COMPILED = True

ctypedef fused idx_t:
    uint16_t
    uint32_t

cdef double Q_MIN = 1e-30
cdef double Q_CAP = 36.0
cdef double MSG_CAP = 44.0
cdef double ARG_MAX = 128.0

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15UL
cdef uint64_t LANE = 0xD1342543DE82EF95UL
cdef uint64_t SEED_TWEAK = 0x6A09E667F3BCC909UL


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9UL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBUL
    return z ^ (z >> 31)


cdef inline double table_f(float x, const float* tab, const float* slope) nogil:
    # x must already be clamped into (0, ARG_MAX]; buckets index the top
    # 15 bits of the positive float32 pattern, low 16 bits interpolate.
    cdef uint32_t bits = (<uint32_t*> &x)[0]
    cdef uint32_t idx = bits >> 16
    cdef double frac = <double> (bits & 0xFFFFu) * (1.0 / 65536.0)
    return <double> tab[idx] + <double> slope[idx] * frac


def check_pass(const int64_t[::1] row_ptr,
               idx_t[::1] nbr,
               float[::1] msg,
               float[::1] post,
               chan_obj,
               const float[::1] f_table,
               const float[::1] f_slope,
               double[::1] q_scratch,
               double[::1] f_scratch,
               double damp=1.0):
    """One layered sweep over a block of check nodes, in place.

    damp < 1 blends each new message with the stored one (relaxation);
    damp = 1.0 reproduces the undamped update exactly.
    """
    cdef Py_ssize_t n_checks = row_ptr.shape[0] - 1
    cdef bint has_chan = chan_obj is not None
    cdef const float[::1] chan = chan_obj if has_chan else None
    cdef const float* tab = &f_table[0]
    cdef const float* slope = &f_slope[0]
    cdef bint damped = damp != 1.0
    cdef Py_ssize_t c, s, e, t, deg
    cdef int zeros, others_zero
    cdef bint neg, sign_neg
    cdef double total, lc, alc, fv, arg, mag, q64
    cdef float q, out, delta, newm
    with nogil:
        for c in range(n_checks):
            s = row_ptr[c]
            e = row_ptr[c + 1]
            deg = e - s
            zeros = 0
            total = 0.0
            neg = False
            if has_chan:
                lc = <double> chan[c]
                if lc == 0.0:
                    zeros += 1
                else:
                    if lc < 0.0:
                        neg = not neg
                    alc = fabs(lc)
                    if alc > Q_CAP:
                        alc = Q_CAP
                    elif alc < Q_MIN:
                        alc = Q_MIN
                    total += table_f(<float> alc, tab, slope)
            for t in range(deg):
                q = post[nbr[s + t]] - msg[s + t]
                q_scratch[t] = <double> q
                if q == 0.0:
                    zeros += 1
                    f_scratch[t] = 0.0
                else:
                    if q < 0.0:
                        neg = not neg
                    q64 = fabs(<double> q)
                    if q64 > Q_CAP:
                        q64 = Q_CAP
                    elif q64 < Q_MIN:
                        q64 = Q_MIN
                    fv = table_f(<float> q64, tab, slope)
                    f_scratch[t] = fv
                    total += fv
            for t in range(deg):
                q64 = q_scratch[t]
                others_zero = zeros - (1 if q64 == 0.0 else 0)
                if others_zero > 0:
                    out = 0.0
                else:
                    arg = total - f_scratch[t]
                    if arg < Q_MIN:
                        mag = MSG_CAP
                    elif arg > ARG_MAX:
                        mag = 0.0
                    else:
                        mag = table_f(<float> arg, tab, slope)
                        if mag > MSG_CAP:
                            mag = MSG_CAP
                    sign_neg = neg ^ (q64 < 0.0)
                    out = <float> (-mag if sign_neg else mag)
                if damped:
                    newm = <float> ((1.0 - damp) * <double> msg[s + t] + damp * <double> out)
                    delta = newm - msg[s + t]
                    msg[s + t] = newm
                else:
                    delta = out - msg[s + t]
                    msg[s + t] = out
                post[nbr[s + t]] += delta


def lt_fill(bits_obj,
            uint64_t lt_seed,
            int64_t start,
            const int64_t[::1] row_ptr,
            idx_t[::1] nbr,
            values_obj,
            int64_t k_prime,
            uint8_t[::1] touched,
            int64_t[::1] sel):
    """Fill sorted distinct neighbor indices and XOR values per symbol."""
    cdef Py_ssize_t count = row_ptr.shape[0] - 1
    cdef bint has_bits = bits_obj is not None
    cdef bint has_vals = values_obj is not None
    cdef const uint8_t[::1] bits = bits_obj if has_bits else None
    cdef uint8_t[::1] values = values_obj if has_vals else None
    cdef Py_ssize_t i, t, u_idx
    cdef int64_t lo, deg, got, cand, key
    cdef uint64_t sseed, j, u
    cdef uint8_t val
    with nogil:
        for i in range(count):
            lo = row_ptr[i]
            deg = row_ptr[i + 1] - lo
            sseed = mix64((lt_seed ^ SEED_TWEAK) + (<uint64_t> (start + i) + 1UL) * LANE)
            got = 0
            j = 2  # counter 1 onward; counter 0 picked the degree
            val = 0
            while got < deg:
                u = mix64(sseed + j * GOLDEN)
                j += 1
                cand = <int64_t> (u % <uint64_t> k_prime)
                if touched[cand]:
                    continue
                touched[cand] = 1
                sel[got] = cand
                got += 1
            # insertion sort; degrees are small and nearly always < 32
            for t in range(1, deg):
                key = sel[t]
                u_idx = t
                while u_idx > 0 and sel[u_idx - 1] > key:
                    sel[u_idx] = sel[u_idx - 1]
                    u_idx -= 1
                sel[u_idx] = key
            for t in range(deg):
                cand = sel[t]
                nbr[lo + t] = <idx_t> cand
                touched[cand] = 0
                if has_bits:
                    val ^= bits[cand]
            if has_vals:
                values[i] = val
