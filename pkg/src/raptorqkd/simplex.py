"""Self-contained dense linear-program solver.

Two-phase primal simplex on a dense tableau.  The design programs this
serves have at most a few hundred variables and a couple thousand rows, so
dense float64 arithmetic is fast and keeps the artifact dependency-free.
Determinism: entering variable by most-negative reduced cost with lowest
index on ties (Dantzig), lowest row index on ratio ties, with an automatic
switch to Bland's rule if the objective stalls long enough to suggest
cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_PIVOT_TOL = 1e-11
_FEAS_TOL = 1e-9
_STALL_LIMIT = 200
_MAX_PIVOTS = 100_000


class LpError(ValueError):
    pass


@dataclass
class LinearProgram:
    """min/max c.x subject to A x (<=, >=, =) b, x >= lower_bounds."""

    c: np.ndarray
    sense: str
    a: np.ndarray
    b: np.ndarray
    relations: list[str]
    lower_bounds: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.float64)
        self.a = np.asarray(self.a, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if self.a.ndim != 2:
            raise LpError("constraint matrix must be 2-D")
        m, n = self.a.shape
        if self.c.shape != (n,) or self.b.shape != (m,) or len(self.relations) != m:
            raise LpError("inconsistent LP dimensions")
        if self.sense not in ("min", "max"):
            raise LpError(f"sense must be 'min' or 'max', got {self.sense!r}")
        for r in self.relations:
            if r not in ("<=", ">=", "="):
                raise LpError(f"unknown relation {r!r}")
        if self.lower_bounds is None:
            self.lower_bounds = np.zeros(n)
        else:
            self.lower_bounds = np.asarray(self.lower_bounds, dtype=np.float64)
            if self.lower_bounds.shape != (n,):
                raise LpError("lower_bounds shape mismatch")
        for arr, name in ((self.c, "c"), (self.a, "A"), (self.b, "b"), (self.lower_bounds, "lb")):
            if not np.all(np.isfinite(arr)):
                raise LpError(f"non-finite entries in {name}")


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    values: np.ndarray | None
    objective: float | None
    pivots: int = 0
    max_violation: float = field(default=0.0)


def _pivot(tab: np.ndarray, row: int, col: int, basis: np.ndarray) -> None:
    tab[row] /= tab[row, col]
    piv_row = tab[row]
    col_vals = tab[:, col].copy()
    col_vals[row] = 0.0
    tab -= np.outer(col_vals, piv_row)  # col_vals[row] is zeroed, pivot row untouched
    basis[row] = col


def _run_simplex(tab: np.ndarray, basis: np.ndarray, n_cols: int, allowed: np.ndarray):
    """Minimize the objective in the last tableau row over allowed columns.

    Returns (status, pivots) with status 'optimal' or 'unbounded'.
    """
    m = tab.shape[0] - 1
    pivots = 0
    stall = 0
    bland = False
    last_obj = tab[-1, -1]
    while True:
        costs = tab[-1, :n_cols]
        if bland:
            enter = -1
            for j in range(n_cols):
                if allowed[j] and costs[j] < -_PIVOT_TOL:
                    enter = j
                    break
        else:
            masked = np.where(allowed, costs, 0.0)
            enter = int(np.argmin(masked))
            if masked[enter] >= -_PIVOT_TOL:
                enter = -1
        if enter < 0:
            return "optimal", pivots
        col = tab[:m, enter]
        rhs = tab[:m, -1]
        ok = col > _PIVOT_TOL
        if not np.any(ok):
            return "unbounded", pivots
        ratios = np.where(ok, rhs / np.where(ok, col, 1.0), np.inf)
        best = np.min(ratios)
        ties = np.flatnonzero(ratios <= best + 1e-12)
        if bland and len(ties) > 1:
            leave = int(ties[np.argmin(basis[ties])])
        else:
            leave = int(ties[0])
        _pivot(tab, leave, enter, basis)
        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise RuntimeError("simplex pivot limit exceeded")
        obj = tab[-1, -1]
        if obj < last_obj - 1e-12:
            stall = 0
            last_obj = obj
        else:
            stall += 1
            if stall > _STALL_LIMIT:
                bland = True


def solve(lp: LinearProgram) -> LpSolution:
    """Solve the program; statuses are optimal, infeasible, or unbounded."""
    m, n = lp.a.shape
    lb = lp.lower_bounds
    # shift to y = x - lb >= 0
    b = lp.b - lp.a @ lb
    a = lp.a.copy()
    relations = list(lp.relations)
    c = lp.c if lp.sense == "min" else -lp.c
    obj_shift = float(np.dot(lp.c, lb))

    # normalize to nonnegative rhs
    for i in range(m):
        if b[i] < 0:
            a[i] = -a[i]
            b[i] = -b[i]
            relations[i] = {"<=": ">=", ">=": "<=", "=": "="}[relations[i]]
    # row equilibration for conditioning
    scale = np.maximum(np.max(np.abs(a), axis=1), np.abs(b))
    scale[scale == 0] = 1.0
    a = a / scale[:, None]
    b = b / scale

    n_slack = sum(1 for r in relations if r == "<=")
    n_surp = sum(1 for r in relations if r == ">=")
    n_art = sum(1 for r in relations if r in (">=", "="))
    n_cols = n + n_slack + n_surp + n_art
    tab = np.zeros((m + 1, n_cols + 1))
    tab[:m, :n] = a
    tab[:m, -1] = b
    basis = np.full(m, -1, dtype=np.int64)
    art_cols = []
    s_at, p_at = n, n + n_slack
    a_at = n + n_slack + n_surp
    for i, rel in enumerate(relations):
        if rel == "<=":
            tab[i, s_at] = 1.0
            basis[i] = s_at
            s_at += 1
        elif rel == ">=":
            tab[i, p_at] = -1.0
            p_at += 1
            tab[i, a_at] = 1.0
            basis[i] = a_at
            art_cols.append(a_at)
            a_at += 1
        else:
            tab[i, a_at] = 1.0
            basis[i] = a_at
            art_cols.append(a_at)
            a_at += 1

    total_pivots = 0
    art_start = n + n_slack + n_surp
    if art_cols:
        # phase 1: minimize artificial sum
        tab[-1, :] = 0.0
        for col in art_cols:
            tab[-1, col] = 1.0
        for i in range(m):
            if basis[i] >= art_start:
                tab[-1] -= tab[i]
        allowed = np.ones(n_cols, dtype=bool)
        status, p = _run_simplex(tab, basis, n_cols, allowed)
        total_pivots += p
        if status != "optimal":  # phase-1 objective is bounded below by 0
            raise RuntimeError("phase 1 reported unbounded")
        if -tab[-1, -1] > _FEAS_TOL:
            return LpSolution("infeasible", None, None, total_pivots)
        # drive surviving artificials out of the basis
        drop_rows = []
        for i in range(m):
            if basis[i] >= art_start:
                row = tab[i, :art_start]
                cand = np.flatnonzero(np.abs(row) > 1e-9)
                if len(cand):
                    _pivot(tab, i, int(cand[0]), basis)
                    total_pivots += 1
                else:
                    drop_rows.append(i)  # redundant constraint
        if drop_rows:
            keep = [i for i in range(m) if i not in drop_rows]
            tab = tab[keep + [m]]
            basis = basis[keep]
            m = len(keep)

    # phase 2
    tab[-1, :] = 0.0
    tab[-1, :n] = c
    for i in range(m):
        if tab[-1, basis[i]] != 0.0:
            tab[-1] -= tab[-1, basis[i]] * tab[i]
    allowed = np.ones(n_cols, dtype=bool)
    allowed[art_start:] = False
    status, p = _run_simplex(tab, basis, n_cols, allowed)
    total_pivots += p
    if status == "unbounded":
        return LpSolution("unbounded", None, None, total_pivots)

    y = np.zeros(n_cols)
    y[basis] = tab[:m, -1]
    x = y[:n] + lb
    objective = float(np.dot(lp.c, y[:n])) + obj_shift
    residual = _constraint_violation(lp, x)
    return LpSolution("optimal", x, objective, total_pivots, residual)


def _constraint_violation(lp: LinearProgram, x: np.ndarray) -> float:
    ax = lp.a @ x
    worst = 0.0
    scale = np.maximum(1.0, np.abs(lp.b))
    for i, rel in enumerate(lp.relations):
        if rel == "<=":
            v = (ax[i] - lp.b[i]) / scale[i]
        elif rel == ">=":
            v = (lp.b[i] - ax[i]) / scale[i]
        else:
            v = abs(ax[i] - lp.b[i]) / scale[i]
        worst = max(worst, float(v))
    worst = max(worst, float(np.max(lp.lower_bounds - x, initial=0.0)))
    return worst
