"""Uniform time grids used by dynamics, capacity curves and measures."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``n`` nodes on [0, t_max], in the model's time unit."""

    t_max: float
    n: int

    def __post_init__(self):
        if not self.t_max > 0.0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")

    @property
    def step(self) -> float:
        return self.t_max / (self.n - 1)

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n)

    def refined(self) -> "TimeGrid":
        """Same horizon, halved step (shares every node of the parent grid)."""
        return TimeGrid(self.t_max, 2 * self.n - 1)

    def extended(self) -> "TimeGrid":
        """Doubled horizon, same step."""
        return TimeGrid(2.0 * self.t_max, 2 * self.n - 1)

    def scaled(self, factor: float) -> "TimeGrid":
        """Grid with the node count multiplied by ``factor`` (>= 2 nodes)."""
        if factor <= 0:
            raise ValueError("grid scale factor must be positive")
        return TimeGrid(self.t_max, max(2, round((self.n - 1) * factor) + 1))
