"""Uniform grids and sampled scalar fields passed between modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError("Grid needs at least 3 points")
        if not self.x_max > self.x_min:
            raise ValueError("Grid requires x_max > x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


class ScalarField:
    """A function sampled on a strictly increasing grid."""

    def __init__(self, xs, values):
        self.xs = np.asarray(xs, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.xs.ndim != 1 or self.xs.shape != self.values.shape:
            raise ValueError("xs and values must be 1-d arrays of equal length")
        if not np.all(np.diff(self.xs) > 0):
            raise ValueError("xs must be strictly increasing")

    def __len__(self) -> int:
        return len(self.xs)

    @classmethod
    def sample(cls, fn, grid: Grid, threads: int = 1) -> "ScalarField":
        xs = grid.xs
        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            chunks = np.array_split(np.arange(len(xs)), threads * 4)
            values = np.empty_like(xs)

            def work(idx):
                for i in idx:
                    values[i] = fn(xs[i])

            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(work, chunks))
        else:
            values = np.array([fn(x) for x in xs])
        return cls(xs, values)
