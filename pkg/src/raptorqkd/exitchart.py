"""Mean-LLR convergence analysis for the iterative decoder.

Messages in the decoder are modeled as symmetric Gaussians (variance twice
the mean).  The functions here evaluate the mean of the check-node output
f_d(mu), its low-SNR simplification 2*gamma*phi(mu)^(d-1), odd moments of
the symmetric Gaussian, and channel capacity helpers.  All deterministic
evaluation is Gauss-Hermite quadrature; Monte Carlo serves the exact
check-node expectation (nested quadrature over d-1 dimensions is not
tractable for d up to several hundred) and test oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .rng import CounterRng

_GH_NODES, _GH_WEIGHTS = hermgauss(64)
_SQRT_PI = math.sqrt(math.pi)

LN2 = math.log(2.0)


def phi(mu: float) -> float:
    """phi(mu) = E[tanh(X/2)] with X ~ N(mu, 2*mu).

    Strictly increasing from phi(0)=0 toward 1.  Evaluated with 64-node
    Gauss-Hermite after substituting u = mu + 2*sqrt(mu)*t.
    """
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if mu == 0.0:
        return 0.0
    u = mu + 2.0 * math.sqrt(mu) * _GH_NODES
    return float(np.dot(_GH_WEIGHTS, np.tanh(0.5 * u)) / _SQRT_PI)


def phi_many(mu_values) -> np.ndarray:
    mu = np.asarray(mu_values, dtype=np.float64)
    if np.any(mu < 0):
        raise ValueError("mu must be >= 0")
    u = mu[:, None] + 2.0 * np.sqrt(mu)[:, None] * _GH_NODES[None, :]
    out = np.tanh(0.5 * u) @ _GH_WEIGHTS / _SQRT_PI
    out[mu == 0] = 0.0
    return out


def _double_factorial_odd(j: int) -> int:
    # (2j-1)!! with (-1)!! = 1
    out = 1
    for v in range(2 * j - 1, 0, -2):
        out *= v
    return out


def gaussian_odd_moment(n: int, x: float) -> float:
    """(2n-1)-th raw moment of N(x, 2x).

    M_{2n-1}(x, 2x) = sum_{j=0}^{n-1} C(2n-1, 2j) (2j-1)!! 2^j x^{2n-1-j}.
    The lowest power of x present is x^n (the j = n-1 term).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    total = 0.0
    for j in range(n):
        total += math.comb(2 * n - 1, 2 * j) * _double_factorial_odd(j) * (2.0**j) * x ** (2 * n - 1 - j)
    return total


def gaussian_odd_moment_terms(n: int) -> dict[int, int]:
    """Coefficients of M_{2n-1}(x,2x) as {power of x: integer coefficient}."""
    return {
        2 * n - 1 - j: math.comb(2 * n - 1, 2 * j) * _double_factorial_odd(j) * 2**j
        for j in range(n)
    }


def f_d(
    d: int,
    mu: float,
    gamma: float,
    method: str = "low_snr",
    samples: int = 200_000,
    seed: int = 0,
) -> float:
    """Mean of the LLR message leaving a check node of degree d.

    exact:   2 E[atanh(tanh(Z/2) prod_{q<d} tanh(X_q/2))] with
             Z ~ N(2*gamma, 4*gamma), X_q ~ N(mu, 2*mu) i.i.d., by Monte
             Carlo with the given sample count and seed.
    low_snr: 2*gamma*phi(mu)^(d-1).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if method == "low_snr":
        return 2.0 * gamma * phi(mu) ** (d - 1)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if d == 1:
        # empty product; the expectation collapses to E[Z] = 2*gamma
        return 2.0 * gamma
    if mu == 0.0:
        return 0.0
    rng = CounterRng(seed)
    z = 2.0 * gamma + math.sqrt(4.0 * gamma) * rng.normals(samples)
    prod = np.tanh(0.5 * z)
    sd = math.sqrt(2.0 * mu)
    for _ in range(d - 1):
        prod *= np.tanh(0.5 * (mu + sd * rng.normals(samples)))
    np.clip(prod, -1.0 + 1e-15, 1.0 - 1e-15, out=prod)
    return float(2.0 * np.mean(np.arctanh(prod)))


def capacity(gamma: float, model: str = "bi_awgn_exact") -> float:
    """Channel capacity in bits per use at linear SNR gamma.

    shannon_approx: 0.5*log2(1+gamma), the Gaussian-input ceiling.
    bi_awgn_exact:  binary-input AWGN capacity 1 - E[log2(1+e^-L)] with
                    L ~ N(2*gamma, 4*gamma), by Gauss-Hermite quadrature.
    The two coincide as gamma -> 0; bi_awgn_exact is never larger.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if model == "shannon_approx":
        return 0.5 * math.log2(1.0 + gamma)
    if model != "bi_awgn_exact":
        raise ValueError(f"unknown capacity model {model!r}")
    mean = 2.0 * gamma
    sd = 2.0 * math.sqrt(gamma)
    llr = mean + math.sqrt(2.0) * sd * _GH_NODES
    # log1p(exp(-L)) evaluated stably on both tails
    val = np.logaddexp(0.0, -llr) / LN2
    return float(1.0 - np.dot(_GH_WEIGHTS, val) / _SQRT_PI)


@dataclass(frozen=True)
class ExitTable:
    """f_d(mu_j) on an ascending grid, for d = 1..max_degree.

    values[d-1, j] = f_d(mu_j).  Rows are nonincreasing in d at fixed mu
    (higher-degree checks pass weaker messages); columns are nondecreasing
    in mu for d > 1.
    """

    gamma: float
    mu_grid: np.ndarray
    values: np.ndarray
    method: str

    def __post_init__(self):
        if self.values.shape != (self.values.shape[0], len(self.mu_grid)):
            raise ValueError("table shape mismatch")
        if np.any(np.diff(self.mu_grid) <= 0):
            raise ValueError("mu grid must be ascending")

    @property
    def max_degree(self) -> int:
        return self.values.shape[0]

    def row(self, d: int) -> np.ndarray:
        return self.values[d - 1]

    def check_monotonicity(self, atol: float = 0.0) -> None:
        """Raise if the structural monotonicity invariants are violated.

        atol > 0 admits Monte-Carlo noise for the exact method.
        """
        if np.any(np.diff(self.values, axis=0) > atol):
            raise ValueError("f_d must be nonincreasing in d at fixed mu")
        if self.values.shape[0] > 1 and np.any(np.diff(self.values[1:], axis=1) < -atol):
            raise ValueError("f_d must be nondecreasing in mu for d > 1")

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("# gamma " + repr(self.gamma) + "\n")
            fh.write("d," + ",".join(repr(m) for m in self.mu_grid.tolist()) + "\n")
            for d in range(1, self.max_degree + 1):
                fh.write(str(d) + "," + ",".join(repr(v) for v in self.row(d).tolist()) + "\n")


def build_exit_table(
    max_degree: int,
    mu_grid,
    gamma: float,
    method: str = "low_snr",
    samples: int = 200_000,
    seed: int = 0,
) -> ExitTable:
    """Tabulate f_d over the grid for every degree up to max_degree.

    The exact method reuses one set of Gaussian draws per grid point,
    extending the tanh product incrementally from degree to degree, so the
    cost is O(max_degree * grid * samples) element operations.
    """
    mu = np.asarray(mu_grid, dtype=np.float64)
    if method == "low_snr":
        ph = phi_many(mu)
        d = np.arange(1, max_degree + 1, dtype=np.float64)
        with np.errstate(under="ignore"):
            values = 2.0 * gamma * ph[None, :] ** (d[:, None] - 1.0)
        return ExitTable(gamma, mu, values, method)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    values = np.empty((max_degree, len(mu)), dtype=np.float64)
    for j, mu_j in enumerate(mu):
        rng = CounterRng(seed).child(j)
        z = 2.0 * gamma + math.sqrt(4.0 * gamma) * rng.normals(samples)
        half_z = np.tanh(0.5 * z)
        prod = np.ones_like(half_z)
        sd = math.sqrt(2.0 * mu_j)
        for d in range(1, max_degree + 1):
            if d > 1:
                prod *= np.tanh(0.5 * (mu_j + sd * rng.normals(samples)))
            t = np.clip(half_z * prod, -1.0 + 1e-15, 1.0 - 1e-15)
            values[d - 1, j] = 2.0 * np.mean(np.arctanh(t))
    return ExitTable(gamma, mu, values, method)
