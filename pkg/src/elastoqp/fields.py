"""Grid and field containers shared by all solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTime, EmptyGrid

__all__ = ["Grid", "FieldGrid"]


@dataclass(frozen=True)
class Grid:
    """Tensor grid of the quarter plane: x >= 0 columns, t rows."""

    x: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        t = np.asarray(self.t, dtype=float)
        if x.ndim != 1 or t.ndim != 1:
            raise ValueError("x and t must be one-dimensional")
        if x.size == 0 or t.size == 0:
            raise EmptyGrid("grid has no nodes")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(t))):
            raise ValueError("grid coordinates must be finite")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("grid coordinates must be strictly increasing")
        if x[0] < 0.0:
            raise ValueError("x must be >= 0")
        if t[0] < 0.0:
            raise ValueError("t must be >= 0")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", t)

    @classmethod
    def regular(cls, x_max: float, t_max: float, nx: int, nt: int,
                include_t0: bool = False) -> "Grid":
        """Uniform grid with nx columns on [0, x_max] and nt rows.

        Exact solvers are defined for t > 0 only, so by default the t rows
        are t_max * i / nt for i = 1..nt; include_t0 switches to nt points
        from 0 to t_max inclusive (for linear and viscous output).
        """
        if nx < 2 or nt < 2:
            raise ValueError("need nx >= 2 and nt >= 2")
        x = np.linspace(0.0, float(x_max), nx)
        if include_t0:
            t = np.linspace(0.0, float(t_max), nt)
        else:
            t = float(t_max) * np.arange(1, nt + 1) / nt
        return cls(x, t)

    def require_positive_time(self):
        if self.t[0] <= 0.0:
            raise DegenerateTime("this solver requires t > 0 on every row")

    @property
    def shape(self) -> tuple[int, int]:
        return self.t.size, self.x.size


@dataclass
class FieldGrid:
    """Solver output sampled on a Grid: arrays are (nt, nx), row t, col x.

    `case` holds the analytic case label used at each node (solver specific,
    e.g. "C4" or "L2"), `branch` the sub-formula within the case ("fan",
    "boundary", ...).  `meta` carries solver extras such as variational
    minimizer locations, keyed by name, each an (nt, nx) array.
    """

    grid: Grid
    u: np.ndarray
    sigma: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    case: np.ndarray
    branch: np.ndarray
    meta: dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def allocate(cls, grid: Grid) -> "FieldGrid":
        shape = grid.shape
        return cls(
            grid=grid,
            u=np.zeros(shape),
            sigma=np.zeros(shape),
            w1=np.zeros(shape),
            w2=np.zeros(shape),
            case=np.full(shape, "", dtype="<U16"),
            branch=np.full(shape, "", dtype="<U16"),
        )

    def fill_invariants(self, k: float):
        """Populate w1, w2 from u, sigma."""
        self.w1 = self.sigma - k * self.u
        self.w2 = self.sigma + k * self.u
