"""Core state algebra and piecewise data for the quarter-plane system.

The model is a 2x2 nonconservative first-order system for velocity u and
stress sigma with constant wave speed k > 0:

    u_t + u u_x - sigma_x   = 0
    sigma_t + u sigma_x - k^2 u_x = 0

Its Riemann invariants w1 = sigma - k u and w2 = sigma + k u are transported
at speeds u + k and u - k respectively.  Data confined to a level set
sigma + (-1)^j k u = c of the j-th invariant reduce the system to a scalar
Burgers equation in the shifted velocity v = u - (-1)^{j+1} k; everything
downstream (variational, Riemann, viscous solvers) builds on that reduction.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import MissingBoundaryData

__all__ = [
    "State",
    "ModelConstants",
    "PiecewiseFn",
    "ProblemSpec",
    "LevelSetReport",
    "riemann_invariants",
    "state_from_invariants",
    "characteristic_speeds",
    "check_level_set",
]


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class State:
    """Pointwise state (u, sigma) of the system."""

    u: float
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "u", _require_finite("u", self.u))
        object.__setattr__(self, "sigma", _require_finite("sigma", self.sigma))


@dataclass(frozen=True)
class ModelConstants:
    """Model parameters: wave speed k > 0, invariant index j, level c.

    j selects which invariant is held constant on the level set
    sigma + (-1)^j k u = c (j = 1 fixes w1, j = 2 fixes w2).
    """

    k: float
    j: int
    c: float

    def __post_init__(self):
        object.__setattr__(self, "k", _require_finite("k", self.k))
        object.__setattr__(self, "c", _require_finite("c", self.c))
        if self.k <= 0.0:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.j not in (1, 2):
            raise ValueError(f"j must be 1 or 2, got {self.j!r}")

    @property
    def shift(self) -> float:
        """(-1)^{j+1} k: the offset between u and the shifted velocity v."""
        return self.k if self.j == 1 else -self.k

    @property
    def level_sign(self) -> int:
        """(-1)^j: sign of the k u term in the level-set relation."""
        return -1 if self.j == 1 else 1


def riemann_invariants(state: State, k: float) -> tuple[float, float]:
    """Return (w1, w2) = (sigma - k u, sigma + k u)."""
    if k <= 0.0:
        raise ValueError(f"k must be positive, got {k}")
    return state.sigma - k * state.u, state.sigma + k * state.u


def state_from_invariants(w1: float, w2: float, k: float) -> State:
    """Invert the invariant map: u = (w2 - w1)/(2k), sigma = (w1 + w2)/2."""
    if k <= 0.0:
        raise ValueError(f"k must be positive, got {k}")
    return State(u=(w2 - w1) / (2.0 * k), sigma=0.5 * (w1 + w2))


def characteristic_speeds(state: State, k: float) -> tuple[float, float]:
    """Return (lambda1, lambda2) = (u - k, u + k); always lambda1 < lambda2."""
    if k <= 0.0:
        raise ValueError(f"k must be positive, got {k}")
    return state.u - k, state.u + k


@dataclass(frozen=True)
class PiecewiseFn:
    """Piecewise-affine function on [0, inf), right-continuous at breaks.

    Piece i covers [breakpoints[i], breakpoints[i+1]) (the last piece extends
    to infinity) with value values[i] + slopes[i] * (x - breakpoints[i]).
    The first breakpoint must be 0.  Instances are immutable and hashable so
    they can serve as cache keys for derived lookup tables.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    slopes: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        va = tuple(float(v) for v in self.values)
        sl = tuple(float(s) for s in self.slopes)
        if not bp or bp[0] != 0.0:
            raise ValueError("breakpoints must start at 0")
        if len(bp) != len(va) or len(bp) != len(sl):
            raise ValueError("breakpoints, values, slopes need equal length")
        for seq, name in ((bp, "breakpoint"), (va, "value"), (sl, "slope")):
            for x in seq:
                _require_finite(name, x)
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", va)
        object.__setattr__(self, "slopes", sl)

    @classmethod
    def constant(cls, value: float) -> "PiecewiseFn":
        return cls((0.0,), (float(value),), (0.0,))

    @classmethod
    def step(cls, x0: float, left: float, right: float) -> "PiecewiseFn":
        """Constant `left` on [0, x0), constant `right` from x0 on."""
        if x0 <= 0.0:
            raise ValueError(f"step location must be positive, got {x0}")
        return cls((0.0, float(x0)), (float(left), float(right)), (0.0, 0.0))

    @classmethod
    def from_knots(cls, xs, ys) -> "PiecewiseFn":
        """Continuous piecewise-affine interpolant of (xs, ys) knots.

        Constant extrapolation past the last knot; xs[0] must be 0.
        """
        xs = [float(x) for x in xs]
        ys = [float(y) for y in ys]
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("need matching xs, ys with at least two knots")
        slopes = [
            (y2 - y1) / (x2 - x1)
            for (x1, x2, y1, y2) in zip(xs, xs[1:], ys, ys[1:])
        ]
        slopes.append(0.0)
        return cls(tuple(xs), tuple(ys), tuple(slopes))

    def _piece_index(self, x: float) -> int:
        return bisect_right(self.breakpoints, x) - 1

    def __call__(self, x: float) -> float:
        if x < 0.0:
            raise ValueError(f"argument must be >= 0, got {x}")
        i = self._piece_index(x)
        return self.values[i] + self.slopes[i] * (x - self.breakpoints[i])

    def eval_many(self, x: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; raises on any negative argument."""
        x = np.asarray(x, dtype=float)
        if x.size and float(x.min()) < 0.0:
            raise ValueError("arguments must be >= 0")
        bp = np.asarray(self.breakpoints)
        idx = np.searchsorted(bp, x, side="right") - 1
        va = np.asarray(self.values)
        sl = np.asarray(self.slopes)
        return va[idx] + sl[idx] * (x - bp[idx])

    def integral(self, y: float) -> float:
        """Exact antiderivative int_0^y f(s) ds (y >= 0)."""
        if y < 0.0:
            raise ValueError(f"argument must be >= 0, got {y}")
        total = 0.0
        for i, b in enumerate(self.breakpoints):
            hi = self.breakpoints[i + 1] if i + 1 < len(self.breakpoints) else y
            if y <= b:
                break
            h = min(y, hi) - b
            total += self.values[i] * h + 0.5 * self.slopes[i] * h * h
        return total

    def shifted(self, delta: float) -> "PiecewiseFn":
        """Return f + delta."""
        return PiecewiseFn(
            self.breakpoints,
            tuple(v + delta for v in self.values),
            self.slopes,
        )

    def scaled(self, factor: float) -> "PiecewiseFn":
        """Return factor * f."""
        return PiecewiseFn(
            self.breakpoints,
            tuple(factor * v for v in self.values),
            tuple(factor * s for s in self.slopes),
        )

    @classmethod
    def combine(cls, a: float, f: "PiecewiseFn", b: float, g: "PiecewiseFn") -> "PiecewiseFn":
        """Return a*f + b*g on the merged breakpoint set."""
        xs = sorted(set(f.breakpoints) | set(g.breakpoints))
        vals, slps = [], []
        for x in xs:
            i, j = f._piece_index(x), g._piece_index(x)
            vals.append(a * f(x) + b * g(x))
            slps.append(a * f.slopes[i] + b * g.slopes[j])
        return cls(tuple(xs), tuple(vals), tuple(slps))

    def bounds_on(self, lo: float, hi: float) -> tuple[float, float]:
        """Exact (min, max) of f over [lo, hi] (affine pieces attain extrema
        at clipped piece endpoints)."""
        if hi < lo:
            raise ValueError("need lo <= hi")
        cands = [self(lo), self(hi)]
        for b in self.breakpoints:
            if lo < b <= hi:
                cands.append(self(b))
        return min(cands), max(cands)

    def max_abs_on(self, lo: float, hi: float) -> float:
        mn, mx = self.bounds_on(lo, hi)
        return max(abs(mn), abs(mx))

    @property
    def is_constant(self) -> bool:
        return (
            all(s == 0.0 for s in self.slopes)
            and all(v == self.values[0] for v in self.values)
        )


@dataclass(frozen=True)
class ProblemSpec:
    """Quarter-plane problem data: constants plus initial/boundary traces.

    u0 and sigma0 are the data on {t = 0, x >= 0}; ub and sigmab the data on
    {x = 0, t >= 0}.  Boundary data may be omitted (None) for operations that
    never look at them; ops that need them raise MissingBoundaryData.
    """

    constants: ModelConstants
    u0: PiecewiseFn
    sigma0: PiecewiseFn
    ub: PiecewiseFn | None = None
    sigmab: PiecewiseFn | None = None

    @classmethod
    def on_level_set(cls, constants: ModelConstants, u0: PiecewiseFn,
                     ub: PiecewiseFn | None = None) -> "ProblemSpec":
        """Build a spec whose stresses follow from the level-set relation
        sigma = (-1)^{j+1} k u + c."""
        sh, c = constants.shift, constants.c
        sigma0 = u0.scaled(sh).shifted(c)
        sigmab = ub.scaled(sh).shifted(c) if ub is not None else None
        return cls(constants, u0, sigma0, ub, sigmab)

    def require_boundary(self) -> PiecewiseFn:
        if self.ub is None:
            raise MissingBoundaryData("problem spec has no boundary velocity")
        return self.ub

    def shifted_initial(self) -> PiecewiseFn:
        """v0 = u0 - (-1)^{j+1} k, the Burgers-frame initial velocity."""
        return self.u0.shifted(-self.constants.shift)

    def shifted_boundary(self) -> PiecewiseFn:
        """vb = ub - (-1)^{j+1} k, the Burgers-frame boundary velocity."""
        return self.require_boundary().shifted(-self.constants.shift)


@dataclass(frozen=True)
class LevelSetReport:
    """Outcome of a level-set consistency check."""

    ok: bool
    max_residual: float
    tol: float
    samples: int = field(default=0)


def _level_residual(u_fn: PiecewiseFn, s_fn: PiecewiseFn,
                    constants: ModelConstants) -> tuple[float, int]:
    xs = sorted(set(u_fn.breakpoints) | set(s_fn.breakpoints))
    pts = list(xs)
    pts.extend(0.5 * (a + b) for a, b in zip(xs, xs[1:]))
    pts.append(xs[-1] + 1.0)
    sign, k, c = constants.level_sign, constants.k, constants.c
    worst = 0.0
    for x in pts:
        r = abs(s_fn(x) + sign * k * u_fn(x) - c)
        worst = max(worst, r)
    return worst, len(pts)


def check_level_set(spec: ProblemSpec, tol: float = 1e-12) -> LevelSetReport:
    """Verify sigma + (-1)^j k u = c on both data traces.

    Sampling at all breakpoints, interval midpoints, and one point past the
    last breakpoint is exact for piecewise-affine data: a nonzero affine
    residual on a piece is nonzero at one of these points.
    """
    worst, n = _level_residual(spec.u0, spec.sigma0, spec.constants)
    if spec.ub is not None:
        if spec.sigmab is None:
            raise MissingBoundaryData("ub given without sigmab")
        w2, n2 = _level_residual(spec.ub, spec.sigmab, spec.constants)
        worst, n = max(worst, w2), n + n2
    return LevelSetReport(ok=worst <= tol, max_residual=worst, tol=tol, samples=n)
