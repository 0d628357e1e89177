"""Kernel backend selection.

The compiled extension is preferred when importable; set
``RAPTORQKD_BACKEND=pure`` to force the reference implementation or
``RAPTORQKD_BACKEND=compiled`` to fail hard when the extension is missing.
Both backends implement the same update rule; the compiled one trades
exact logs for table interpolation, so results agree to ~1e-4 per
message, not bitwise.
"""

import os

import numpy as np

from . import _fallback
from .tables import F_SLOPE, F_TABLE

_choice = os.environ.get("RAPTORQKD_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "compiled", "pure"):
    raise ValueError(f"RAPTORQKD_BACKEND must be auto, compiled or pure, got {_choice!r}")

_impl = None
if _choice in ("auto", "compiled"):
    try:
        from . import _speedups as _impl
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "RAPTORQKD_BACKEND=compiled but the _speedups extension is not built; "
                "reinstall the package or use RAPTORQKD_BACKEND=pure"
            )
        _impl = None

COMPILED = _impl is not None


def backend_name() -> str:
    return "compiled" if COMPILED else "pure"


def check_pass(row_ptr, nbr, msg, post, chan, max_degree=None, damp=1.0):
    """One layered sweep; dispatches to the selected kernel."""
    if not COMPILED:
        _fallback.check_pass(row_ptr, nbr, msg, post, chan, damp)
        return
    if max_degree is None:
        max_degree = int(np.diff(row_ptr).max()) if row_ptr.shape[0] > 1 else 0
    q_scratch = np.empty(max(max_degree, 1), dtype=np.float64)
    f_scratch = np.empty(max(max_degree, 1), dtype=np.float64)
    _impl.check_pass(row_ptr, nbr, msg, post, chan, F_TABLE, F_SLOPE, q_scratch, f_scratch, damp)


def lt_fill(bits, lt_seed, start, row_ptr, nbr, values, k_prime, max_degree=None):
    """Fill coded-symbol neighbor lists (and values when bits given)."""
    if not COMPILED:
        _fallback.lt_fill(bits, lt_seed, start, row_ptr, nbr, values, k_prime)
        return
    if max_degree is None:
        max_degree = int(np.diff(row_ptr).max()) if row_ptr.shape[0] > 1 else 0
    touched = np.zeros(k_prime, dtype=np.uint8)
    sel = np.empty(max(max_degree, 1), dtype=np.int64)
    _impl.lt_fill(bits, lt_seed, int(start), row_ptr, nbr, values, int(k_prime), touched, sel)
