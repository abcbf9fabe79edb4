"""Independent reference implementations used as test oracles.

Everything here is deliberately written from the problem statement alone --
plain callables, dense scans, generic quadrature -- with no imports from
elastoqp, so agreement with the package is meaningful.  The price is speed:
these are fine for dozens of query points, not for grids.

Shifted variables throughout: v = u - shift solves Burgers, where
shift = +k for j = 1 and -k for j = 2.  Oracles take v-data directly.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "brute_value",
    "riemann_v",
    "hopf_cole_whole_line",
    "linear_traces_case3",
    "linear_trace_case2",
]

_T_EDGE = 1.0 - 1e-9  # tau2 stays strictly below t


class _Potential:
    """U0(y) = integral of v0 on [0, y], tabulated densely and interpolated."""

    def __init__(self, v0, y_hi, n=160_001):
        self.grid = np.linspace(0.0, y_hi, n)
        vals = np.asarray([v0(y) for y in self.grid])
        self.cum = np.concatenate(
            ([0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(self.grid)))
        )

    def __call__(self, y):
        return float(np.interp(y, self.grid, self.cum))


class _StayIntegral:
    """Q(s) = integral of ((vb)^+)^2 / 2 on [0, s], tabulated densely."""

    def __init__(self, vb, t_hi, n=160_001):
        self.grid = np.linspace(0.0, t_hi, n)
        vals = np.asarray([max(vb(s), 0.0) ** 2 / 2.0 for s in self.grid])
        self.cum = np.concatenate(
            ([0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(self.grid)))
        )

    def __call__(self, s):
        return float(np.interp(s, self.grid, self.cum))


def _scan_then_polish(f, lo, hi, n):
    """Dense scan plus bounded local refinement; returns (min, argmin)."""
    xs = np.linspace(lo, hi, n)
    vals = np.asarray([f(x) for x in xs])
    i = int(np.argmin(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n - 1)]
    if a == b:
        return float(vals[i]), float(xs[i])
    res = minimize_scalar(f, bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    if res.fun < vals[i]:
        return float(res.fun), float(res.x)
    return float(vals[i]), float(xs[i])


def brute_value(v0, vb, x, t, v_bound, n_y=2001, n_tau=201):
    """U(x, t) by direct minimization over (y, tau1, tau2) paths.

    v0, vb are plain callables (shifted data); v_bound bounds |v0| and |vb|.
    Returns a dict with value, branch ('interior'/'boundary'), p, and the
    minimizers.  Branch choice at near-ties follows the smaller value, so
    exact ties may disagree with any particular convention.
    """
    y_hi = x + (2.0 * v_bound + 1.0) * t + 1.0
    U0 = _Potential(v0, y_hi)
    Q = _StayIntegral(vb, t)

    # interior: (x - y)^2 / 2t + U0(y)
    def interior(y):
        return (x - y) ** 2 / (2.0 * t) + U0(y)

    a_min, y_a = _scan_then_polish(interior, 0.0, y_hi, n_y)

    # boundary: for fixed (tau1, tau2), best y solves y^2/2tau1 + U0(y);
    # tau1 = 0 forces y = 0.
    def g_of(tau1):
        if tau1 <= 0.0:
            return 0.0, 0.0
        return _scan_then_polish(
            lambda y: y * y / (2.0 * tau1) + U0(y), 0.0, y_hi, n_y // 4
        )

    taus = np.linspace(0.0, t * _T_EDGE, n_tau)
    g_tab = [g_of(tau) for tau in taus]
    best = (math.inf, 0.0, 0.0)
    for i1, tau1 in enumerate(taus):
        g1 = g_tab[i1][0]
        for i2 in range(i1, n_tau):
            tau2 = taus[i2]
            val = g1 - (Q(tau2) - Q(tau1)) + x * x / (2.0 * (t - tau2))
            if val < best[0]:
                best = (val, tau1, tau2)
    # coordinate-wise polish around the best grid pair
    _, tau1, tau2 = best
    for _ in range(4):
        lo1 = max(0.0, tau1 - t / n_tau)
        hi1 = min(tau2, tau1 + t / n_tau)
        if hi1 > lo1:
            r1 = minimize_scalar(
                lambda s: g_of(s)[0] + Q(s), bounds=(lo1, hi1),
                method="bounded", options={"xatol": 1e-12})
            tau1 = float(r1.x)
        lo2 = max(tau1, tau2 - t / n_tau)
        hi2 = min(t * _T_EDGE, tau2 + t / n_tau)
        if hi2 > lo2:
            r2 = minimize_scalar(
                lambda s: -Q(s) + x * x / (2.0 * (t - s)), bounds=(lo2, hi2),
                method="bounded", options={"xatol": 1e-12})
            tau2 = float(r2.x)
    g1, y_b = g_of(tau1)
    b_min = g1 - (Q(tau2) - Q(tau1)) + x * x / (2.0 * (t - tau2))

    if a_min <= b_min:
        return {"value": a_min, "branch": "interior", "p": (x - y_a) / t,
                "y": y_a, "tau1": None, "tau2": None}
    p = x / (t - tau2) if x > 0.0 else max(vb(t), 0.0)
    return {"value": b_min, "branch": "boundary", "p": p,
            "y": y_b, "tau1": tau1, "tau2": tau2}


def riemann_v(v0, vb, x, t):
    """Closed-form Burgers quarter-plane solution for constant shifted data.

    Right-continuous at thresholds; raises ValueError on the degenerate
    parameter boundaries (equalities between v0, vb, 0 and v0 + vb = 0).
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    if v0 == vb:
        if v0 == 0.0:
            raise ValueError("degenerate: v0 = vb = 0")
        return v0  # cases 1 and 2
    if vb == 0.0 or v0 + vb == 0.0:
        raise ValueError("degenerate parameter boundary")
    if 0.0 < vb < v0:  # case 3: two-sided fan
        if x < vb * t:
            return vb
        if x < v0 * t:
            return x / t
        return v0
    if vb < 0.0 < v0:  # case 4: fan from the corner
        return min(x / t, v0) if x > 0.0 else 0.0
    if vb < 0.0 and v0 < 0.0:  # case 5: pure outflow
        return v0
    if v0 < vb and v0 + vb > 0.0:  # case 6: shock
        s = 0.5 * (v0 + vb)
        return vb if x < s * t else v0
    raise ValueError("parameters out of the six-case range")


def hopf_cole_whole_line(v0, xs, t, eps, y_lo, y_hi, n=40_001):
    """Exact whole-line viscous Burgers solution by Hopf-Cole quadrature.

    v(x,t) = (int (x-y)/t e^{-H/2eps} dy) / (int e^{-H/2eps} dy) with
    H(y) = (x-y)^2/2t + int_0^y v0.  Log-sum-exp keeps the weights finite.
    The y-window [y_lo, y_hi] must cover the essential support for every x.
    """
    ys = np.linspace(y_lo, y_hi, n)
    vals = np.asarray([v0(y) for y in ys])
    pot = np.concatenate(
        ([0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(ys)))
    )
    pot -= pot[ys.searchsorted(0.0)]
    out = np.empty(len(xs))
    for i, x in enumerate(np.asarray(xs, dtype=float)):
        H = (x - ys) ** 2 / (2.0 * t) + pot
        w = np.exp(-(H - H.min()) / (2.0 * eps))
        out[i] = np.trapezoid((x - ys) / t * w, ys) / np.trapezoid(w, ys)
    return out


def linear_trace_case2(ubar, k, alpha, beta, gamma_t, w20_at):
    """Boundary trace w1(0, t) in the one-condition case, by direct solve.

    At x = 0 the outgoing invariant w2 is known: w2(0,t) = w20((k - ubar) t).
    The condition alpha*u + beta*sigma = gamma with u = (w2 - w1)/2k,
    sigma = (w1 + w2)/2 is linear in w1; solve it numerically.
    """
    coef_w1 = beta / 2.0 - alpha / (2.0 * k)
    coef_w2 = beta / 2.0 + alpha / (2.0 * k)
    return (gamma_t - coef_w2 * w20_at) / coef_w1


def linear_traces_case3(k, combos, t_vals):
    """Boundary traces (w1, w2)(0, t) in the two-condition case.

    combos is [(alpha1, beta1, gamma1_fn), (alpha2, beta2, gamma2_fn)]; the
    2x2 system in (u, sigma) is solved with numpy per sample time, then
    converted to invariants.
    """
    (a1, b1, g1), (a2, b2, g2) = combos
    mat = np.asarray([[a1, b1], [a2, b2]], dtype=float)
    w1 = np.empty(len(t_vals))
    w2 = np.empty(len(t_vals))
    for i, t in enumerate(t_vals):
        u, sigma = np.linalg.solve(mat, [g1(t), g2(t)])
        w1[i] = sigma - k * u
        w2[i] = sigma + k * u
    return w1, w2
