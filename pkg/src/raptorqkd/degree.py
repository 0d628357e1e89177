"""Output-degree distributions for rateless encoding.

A distribution assigns probability Omega_d to each output degree d and is
stored sparsely (only nonzero degrees), since optimized distributions touch
a dozen degrees out of hundreds.  The edge-perspective companion
omega_d = d*Omega_d / beta shows up in the rate-design linear programs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .rng import CounterRng

SUM_TOL = 1e-9


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeDistribution:
    """Sparse node-perspective degree distribution Omega.

    entries: mapping degree -> probability, all degrees in [1, max_degree].
    Probabilities must sum to 1 within 1e-9; inputs off by more are rejected,
    never silently renormalized.
    """

    entries: dict[int, float]
    max_degree: int
    _degrees: np.ndarray = field(init=False, repr=False, compare=False)
    _probs: np.ndarray = field(init=False, repr=False, compare=False)
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.max_degree < 1:
            raise DistributionError(f"max_degree must be >= 1, got {self.max_degree}")
        if not self.entries:
            raise DistributionError("empty distribution")
        degs = sorted(self.entries)
        probs = [float(self.entries[d]) for d in degs]
        for d, p in zip(degs, probs):
            if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
                raise DistributionError(f"degree {d!r} is not an integer")
            if d < 1 or d > self.max_degree:
                raise DistributionError(f"degree {d} outside [1, {self.max_degree}]")
            if not np.isfinite(p) or p < 0.0:
                raise DistributionError(f"probability for degree {d} invalid: {p}")
        total = float(np.sum(probs))
        if abs(total - 1.0) > SUM_TOL:
            raise DistributionError(f"probabilities sum to {total!r}, not 1 within {SUM_TOL}")
        object.__setattr__(self, "entries", {int(d): float(self.entries[d]) for d in degs})
        object.__setattr__(self, "_degrees", np.array(degs, dtype=np.int64))
        object.__setattr__(self, "_probs", np.array(probs, dtype=np.float64))
        object.__setattr__(self, "_cum", np.cumsum(probs))

    @classmethod
    def renormalized(cls, entries: dict[int, float], max_degree: int) -> "DegreeDistribution":
        """Build from entries that are individually valid but sum to ~1.

        Explicit escape hatch for externally rounded data (published tables
        carry four decimals); the entries are divided by their exact sum.
        """
        total = float(sum(entries.values()))
        if total <= 0:
            raise DistributionError("entries sum must be positive")
        return cls({d: p / total for d, p in entries.items()}, max_degree)

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def probabilities(self) -> np.ndarray:
        return self._probs

    def mean_degree(self) -> float:
        """beta = sum(d * Omega_d), the average output-node degree."""
        return float(np.dot(self._degrees, self._probs))

    def to_edge_perspective(self) -> "EdgeDistribution":
        beta = self.mean_degree()
        return EdgeDistribution(
            {int(d): float(d * p / beta) for d, p in zip(self._degrees, self._probs)},
            self.max_degree,
        )

    def sample(self, rng: CounterRng) -> int:
        """Draw one degree; deterministic given the rng's seed and cursor."""
        u = rng.next_uniform()
        return int(self._degrees[np.searchsorted(self._cum, u, side="right")])

    def sample_many(self, rng: CounterRng, count: int) -> np.ndarray:
        u = rng.uniforms(count)
        idx = np.minimum(np.searchsorted(self._cum, u, side="right"), len(self._degrees) - 1)
        return self._degrees[idx]

    def save(self, path) -> None:
        lines = [f"# max_degree {self.max_degree}"]
        lines += [f"{int(d)} {float(p)!r}" for d, p in zip(self._degrees, self._probs)]
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "DegreeDistribution":
        max_degree = None
        entries: dict[int, float] = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    parts = line[1:].split()
                    if len(parts) == 2 and parts[0] == "max_degree":
                        max_degree = int(parts[1])
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise DistributionError(f"{path}:{lineno}: expected 'd prob', got {line!r}")
                try:
                    d = int(parts[0])
                    p = float(parts[1])
                except ValueError as exc:
                    raise DistributionError(f"{path}:{lineno}: {exc}") from exc
                if d in entries:
                    raise DistributionError(f"{path}:{lineno}: duplicate degree {d}")
                entries[d] = p
        if max_degree is None:
            raise DistributionError(f"{path}: missing '# max_degree D' header")
        return cls(entries, max_degree)

    def to_json(self) -> str:
        return json.dumps(
            {"D": self.max_degree, "omega": {str(d): p for d, p in self.entries.items()}}
        )

    @classmethod
    def from_json(cls, text: str) -> "DegreeDistribution":
        obj = json.loads(text)
        return cls({int(d): float(p) for d, p in obj["omega"].items()}, int(obj["D"]))


@dataclass(frozen=True)
class EdgeDistribution:
    """Edge-perspective distribution omega_d = d*Omega_d / beta."""

    entries: dict[int, float]
    max_degree: int

    def __post_init__(self):
        total = sum(self.entries.values())
        if abs(total - 1.0) > SUM_TOL:
            raise DistributionError(f"edge probabilities sum to {total!r}")
        for d, p in self.entries.items():
            if d < 1 or d > self.max_degree or p < 0:
                raise DistributionError(f"invalid edge entry {d}: {p}")

    def to_node_perspective(self) -> DegreeDistribution:
        beta_tilde = 1.0 / sum(p / d for d, p in self.entries.items())
        entries = {d: p * beta_tilde / d for d, p in self.entries.items()}
        total = sum(entries.values())
        return DegreeDistribution({d: p / total for d, p in entries.items()}, self.max_degree)
