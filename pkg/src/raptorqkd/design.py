"""Degree-distribution design by linear programming.

Two programs are built over a grid of mean-LLR targets mu_1 < ... < mu_N:

* the general program minimizes the inverse design rate alpha*sum(w_d/d)
  over edge-perspective weights w subject to the per-grid-point growth
  condition alpha*sum(w_d f_d(mu_j)) >= mu_j, valid at any SNR;

* the low-SNR program maximizes beta = sum(d*Omega_d) subject to
  sum(d*Omega_d phi(mu_j)^(d-1)) >= eta*(mu_j + eps)/(4 ln 2), and the
  largest efficiency eta for which it stays feasible is located by
  bisection over a discretized eta range (feasibility is monotone in eta).

The low-SNR constraint set also carries the mu -> 0+ limit row
Omega_1 >= eta*eps/(4 ln 2): the grid's smallest point does not enforce it
on coarse grids, and a zero Omega_1 leaves the iterative decoder with no
way to start from zero-knowledge messages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .degree import DegreeDistribution
from .exitchart import ExitTable, build_exit_table, capacity, phi_many
from .simplex import LinearProgram, LpSolution, solve

LN4 = 4.0 * math.log(2.0)


class DesignError(ValueError):
    pass


def mu_grid(mu_o: float, n_grid: int) -> np.ndarray:
    """n_grid equally spaced values in (0, mu_o], last exactly mu_o."""
    if mu_o <= 0 or n_grid < 1:
        raise DesignError("mu_o and n_grid must be positive")
    return np.arange(1, n_grid + 1, dtype=np.float64) * (mu_o / n_grid)


@dataclass(frozen=True)
class DesignSpecGeneral:
    alpha: float
    max_degree: int
    mu_o: float
    gamma: float
    n_grid: int = 200
    f_method: str = "exact"
    samples: int = 200_000
    seed: int = 0
    delta: float = 1e-6

    def __post_init__(self):
        if self.alpha <= 0 or self.mu_o <= 0 or self.max_degree < 1:
            raise DesignError("alpha, mu_o, max_degree must be positive")
        if self.gamma <= 0:
            raise DesignError("gamma must be positive")


@dataclass(frozen=True)
class DesignSpecLowSnr:
    max_degree: int
    mu_o: float
    eps: float
    n_grid: int = 200
    eta_min: float = 0.80
    eta_max: float = 1.00
    eta_step: float = 5e-4
    delta: float = 1e-6

    def __post_init__(self):
        if self.eps <= 0:
            raise DesignError("eps must be > 0 (a zero eps forces Omega_1 = 0)")
        if self.max_degree < 1 or self.mu_o <= 0:
            raise DesignError("max_degree and mu_o must be positive")
        if not (0 < self.eta_min <= self.eta_max <= 1.0):
            raise DesignError("eta range must satisfy 0 < eta_min <= eta_max <= 1")


@dataclass(frozen=True)
class DesignResult:
    distribution: DegreeDistribution | None
    eta: float | None
    beta: float | None
    feasible: bool
    design_rate: float | None = None
    diagnostics: dict = field(default_factory=dict)


def _coeff_matrix(max_degree: int, phi_values: np.ndarray) -> np.ndarray:
    """A[j, d-1] = d * phi(mu_j)^(d-1); underflow of huge powers is benign."""
    d = np.arange(1, max_degree + 1, dtype=np.float64)
    with np.errstate(under="ignore"):
        return d[None, :] * phi_values[:, None] ** (d[None, :] - 1.0)


def build_low_snr_lp(
    spec: DesignSpecLowSnr, eta: float, phi_values: np.ndarray | None = None
) -> LinearProgram:
    """Variables Omega_1..Omega_D; maximize beta subject to growth rows."""
    if not (0.0 < eta <= 1.0):
        raise DesignError(f"eta must be in (0, 1], got {eta}")
    grid = mu_grid(spec.mu_o, spec.n_grid)
    if phi_values is None:
        phi_values = phi_many(grid)
    if len(phi_values) != spec.n_grid:
        raise DesignError("phi grid size mismatch")
    dd = spec.max_degree
    growth = _coeff_matrix(dd, phi_values)
    limit_row = np.zeros((1, dd))
    limit_row[0, 0] = 1.0
    ones = np.ones((1, dd))
    a = np.vstack([growth, limit_row, ones])
    b = np.concatenate(
        [
            eta * (grid + spec.eps) / LN4 + spec.delta,
            [eta * spec.eps / LN4 + spec.delta],
            [1.0],
        ]
    )
    relations = [">="] * (spec.n_grid + 1) + ["="]
    objective = np.arange(1, dd + 1, dtype=np.float64)
    return LinearProgram(objective, "max", a, b, relations)


def replay_low_snr(
    entries: dict[int, float], mu_o: float, eps: float, eta: float, n_grid: int = 200
) -> dict:
    """Evaluate the low-SNR constraint set on raw entries, no validation.

    Returns the worst growth-row margin (LHS - RHS, negative means
    violated), the limit-row margin, and the deviation of the probability
    sum from one.  Used to audit external distributions arithmetically.
    """
    grid = mu_grid(mu_o, n_grid)
    ph = phi_many(grid)
    lhs = np.zeros(n_grid)
    for d, p in entries.items():
        with np.errstate(under="ignore"):
            lhs += d * p * ph ** (d - 1)
    rhs = eta * (grid + eps) / LN4
    margins = lhs - rhs
    worst = int(np.argmin(margins))
    return {
        "worst_margin": float(margins[worst]),
        "worst_mu": float(grid[worst]),
        "margins": margins,
        "limit_margin": float(entries.get(1, 0.0) - eta * eps / LN4),
        "sum_error": float(sum(entries.values()) - 1.0),
    }


def efficiency_ceiling(
    dist: DegreeDistribution, mu_o: float, eps: float, n_grid: int = 200
) -> float:
    """Largest eta the distribution satisfies in the mean-LLR model.

    min over constraint rows of LHS_j * 4 ln 2 / (mu_j + eps), including the
    mu -> 0+ limit row.  A rate above this ceiling cannot converge in the
    density-evolution sense no matter how many iterations are spent.
    """
    grid = mu_grid(mu_o, n_grid)
    ph = phi_many(grid)
    lhs = np.zeros(n_grid)
    for d, p in dist.entries.items():
        with np.errstate(under="ignore"):
            lhs += d * p * ph ** (d - 1)
    ratios = lhs * LN4 / (grid + eps)
    limit = dist.entries.get(1, 0.0) * LN4 / eps
    return float(min(np.min(ratios), limit))


def _extract_distribution(values: np.ndarray, max_degree: int) -> DegreeDistribution:
    x = np.clip(values, 0.0, None)
    x[x < 1e-12] = 0.0
    total = float(x.sum())
    entries = {d + 1: float(v / total) for d, v in enumerate(x) if v > 0.0}
    return DegreeDistribution(entries, max_degree)


def optimize_low_snr(spec: DesignSpecLowSnr) -> DesignResult:
    """Largest-eta feasible design over the discretized eta range."""
    grid = mu_grid(spec.mu_o, spec.n_grid)
    ph = phi_many(grid)
    steps = int(round((spec.eta_max - spec.eta_min) / spec.eta_step))
    etas = spec.eta_min + spec.eta_step * np.arange(steps + 1)
    etas = np.clip(etas, None, spec.eta_max)

    solutions: dict[int, LpSolution] = {}

    def probe(t: int) -> bool:
        sol = solve(build_low_snr_lp(spec, float(etas[t]), ph))
        solutions[t] = sol
        return sol.status == "optimal"

    probes = 0
    if not probe(0):
        raise DesignError(
            f"no feasible efficiency in [{spec.eta_min}, {spec.eta_max}] "
            f"for D={spec.max_degree}, mu_o={spec.mu_o}, eps={spec.eps}"
        )
    probes += 1
    lo, hi = 0, len(etas) - 1
    if probe(hi):
        lo = hi
    probes += 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        probes += 1
        if probe(mid):
            lo = mid
        else:
            hi = mid
    sol = solutions[lo]
    dist = _extract_distribution(sol.values, spec.max_degree)
    return DesignResult(
        distribution=dist,
        eta=float(etas[lo]),
        beta=float(sol.objective),
        feasible=True,
        diagnostics={
            "probes": probes,
            "pivots": sol.pivots,
            "max_violation": sol.max_violation,
            "eta_step": spec.eta_step,
        },
    )


def build_general_lp(spec: DesignSpecGeneral, table: ExitTable) -> LinearProgram:
    """Variables w_1..w_D (edge perspective); minimize alpha*sum(w_d/d)."""
    grid = mu_grid(spec.mu_o, spec.n_grid)
    if table.max_degree < spec.max_degree:
        raise DesignError("table does not cover the requested degree range")
    if len(table.mu_grid) != len(grid) or not np.allclose(table.mu_grid, grid):
        raise DesignError("table grid does not match the design grid")
    if table.gamma != spec.gamma:
        raise DesignError("table SNR does not match the design SNR")
    dd = spec.max_degree
    a_growth = spec.alpha * table.values[:dd, :].T  # rows j, cols d
    ones = np.ones((1, dd))
    a = np.vstack([a_growth, ones])
    b = np.concatenate([grid + spec.delta, [1.0]])
    relations = [">="] * spec.n_grid + ["="]
    objective = spec.alpha / np.arange(1, dd + 1, dtype=np.float64)
    return LinearProgram(objective, "min", a, b, relations)


def optimize_general(spec: DesignSpecGeneral, table: ExitTable | None = None) -> DesignResult:
    """Rate-optimal edge distribution at the requested SNR; reports eta vs capacity."""
    if table is None:
        table = build_exit_table(
            spec.max_degree,
            mu_grid(spec.mu_o, spec.n_grid),
            spec.gamma,
            method=spec.f_method,
            samples=spec.samples,
            seed=spec.seed,
        )
    lp = build_general_lp(spec, table)
    sol = solve(lp)
    if sol.status != "optimal":
        return DesignResult(
            distribution=None,
            eta=None,
            beta=None,
            feasible=False,
            diagnostics={"lp_status": sol.status, "threshold_gamma": spec.mu_o / (2 * spec.alpha)},
        )
    w = np.clip(sol.values, 0.0, None)
    inv_beta = float(np.sum(w / np.arange(1, spec.max_degree + 1)))
    beta = 1.0 / inv_beta
    omega = w * beta / np.arange(1, spec.max_degree + 1)
    dist = _extract_distribution(omega, spec.max_degree)
    design_rate = beta / spec.alpha
    eta = design_rate / capacity(spec.gamma, "bi_awgn_exact")
    return DesignResult(
        distribution=dist,
        eta=float(eta),
        beta=float(dist.mean_degree()),
        feasible=True,
        design_rate=float(design_rate),
        diagnostics={
            "pivots": sol.pivots,
            "max_violation": sol.max_violation,
            "objective": sol.objective,
        },
    )
