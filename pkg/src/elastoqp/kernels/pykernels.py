"""NumPy implementations of the hot kernels.

This module is the always-available backend; `elastoqp.kernels` swaps in the
compiled Cython twin when it is importable.  Both backends implement the
same algorithms with the same candidate ordering so results agree to
rounding.  Everything here works on plain float64 arrays; no package types
cross this boundary.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

_TINY_TAU = 1e-300
_INVPHI = 0.6180339887498949


def q_eval(tau, sq, qs, Qv):
    """Piecewise-linear cumulative boundary integral Q(tau)."""
    idx = np.searchsorted(sq, tau, side="right") - 1
    return Qv[idx] + qs[idx] * (tau - sq[idx])


def u0_quad_min(xv, tv, yb, a, s, P, ymax):
    """Exact min over y in [0, ymax] of (xv - y)^2/(2 tv) + U0(y).

    U0 is the piecewise quadratic tabulated by (yb, a, s, P): on piece i,
    U0(y) = P[i] + a[i] (y - yb[i]) + s[i] (y - yb[i])^2 / 2.  Per piece the
    objective is a 1-D quadratic, so the candidates are the clipped piece
    endpoints and the vertex when it is interior and the curvature positive.
    Vectorized over broadcastable xv, tv, ymax; returns (values, argmins).
    """
    xv = np.asarray(xv, dtype=float)
    tv = np.asarray(tv, dtype=float)
    ymax = np.asarray(ymax, dtype=float)
    shape = np.broadcast(xv, tv, ymax).shape
    best = np.full(shape, np.inf)
    ybest = np.zeros(shape)
    inv_t = 1.0 / tv
    m = yb.size
    for i in range(m):
        lo = yb[i]
        hi = np.minimum(yb[i + 1] if i + 1 < m else np.inf, ymax)
        live = hi >= lo
        denom = inv_t + s[i]
        safe = np.where(denom > 0.0, denom, 1.0)
        yv = (xv * inv_t - a[i] + s[i] * lo) / safe
        cands = (
            (np.broadcast_to(float(lo), shape), live),
            (hi, live),
            (yv, live & (denom > 0.0) & (yv > lo) & (yv < hi)),
        )
        for yc, ok in cands:
            d = yc - lo
            f = 0.5 * inv_t * (xv - yc) ** 2 + P[i] + a[i] * d + 0.5 * s[i] * d * d
            upd = ok & (f < best)
            best = np.where(upd, f, best)
            ybest = np.where(upd, yc, ybest)
    return best, ybest


def golden_vec(f, lo, hi, tol, max_iter=100):
    """Lockstep golden-section minimization over arrays of brackets."""
    a = np.asarray(lo, dtype=float).copy()
    b = np.asarray(hi, dtype=float).copy()
    for _ in range(max_iter):
        w = b - a
        if float(w.max()) <= tol:
            break
        c = b - _INVPHI * w
        d = a + _INVPHI * w
        keep_left = f(c) <= f(d)
        b = np.where(keep_left, d, b)
        a = np.where(keep_left, a, c)
    xm = 0.5 * (a + b)
    return f(xm), xm


def minimize_grid(xs, ts, yb, a, s, P, sq, qs, Qv,
                  growth, y_override, n_tau, search_tol):
    """Interior and boundary branch minima on the tensor grid ts x xs.

    Returns (nt, nx) arrays (iv, iy, bv, by, bt1, bt2, bp): interior value
    and argmin, boundary value, its y / tau1 / tau2, and the boundary slope
    x/(t - tau2).  The per-node y horizon is x + growth*t unless y_override
    is positive; the boundary leg's G search shares the row's widest horizon
    (G is row-common by construction).
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    nt, nx = ts.size, xs.size
    iv = np.empty((nt, nx))
    iy = np.empty((nt, nx))
    bv = np.full((nt, nx), np.inf)
    by = np.zeros((nt, nx))
    bt1 = np.zeros((nt, nx))
    bt2 = np.zeros((nt, nx))
    bp = np.zeros((nt, nx))
    has_boundary = sq.size > 0
    idx = np.arange(n_tau)

    for r in range(nt):
        t = ts[r]
        ymax_node = xs + growth * t if y_override <= 0.0 else np.full(nx, y_override)
        iv[r], iy[r] = u0_quad_min(xs, t, yb, a, s, P, ymax_node)
        if not has_boundary:
            continue
        ymax_g = float(ymax_node.max())
        th = t * (1.0 - 1e-12)
        taus = np.linspace(0.0, th, n_tau)
        q_grid = q_eval(taus, sq, qs, Qv)
        gv, _ = u0_quad_min(0.0, np.maximum(taus[1:], _TINY_TAU),
                            yb, a, s, P, ymax_g)
        F1 = np.concatenate(([0.0], q_grid[1:] + gv))
        rm = np.minimum.accumulate(F1)
        prev = np.concatenate(([np.inf], rm[:-1]))
        rmi = np.maximum.accumulate(np.where(F1 < prev, idx, 0))
        with np.errstate(over="ignore"):
            F2 = -q_grid[None, :] + np.where(
                xs[:, None] > 0.0,
                0.5 * xs[:, None] ** 2 / (t - taus)[None, :],
                0.0,
            )
        tot = rm[None, :] + F2
        j = np.argmin(tot, axis=1)
        i1 = rmi[j]
        best = tot[np.arange(nx), j]
        t1b, t2b = taus[i1], taus[j]

        def f1(tau):
            tau = np.maximum(tau, _TINY_TAU)
            g, _ = u0_quad_min(0.0, tau, yb, a, s, P, ymax_g)
            return q_eval(tau, sq, qs, Qv) + g

        def f2(tau):
            return -q_eval(tau, sq, qs, Qv) + np.where(
                xs > 0.0, 0.5 * xs * xs / (t - tau), 0.0)

        lo1 = taus[np.maximum(i1 - 1, 0)]
        hi1 = taus[np.minimum(i1 + 1, n_tau - 1)]
        v1, t1 = golden_vec(f1, lo1, hi1, search_tol)
        lo2 = taus[np.maximum(j - 1, 0)]
        hi2 = taus[np.minimum(j + 1, n_tau - 1)]
        v2, t2 = golden_vec(f2, lo2, hi2, search_tol)
        snap1 = (lo1 == 0.0) & (v1 >= 0.0)
        v1, t1 = np.where(snap1, 0.0, v1), np.where(snap1, 0.0, t1)
        f20 = f2(np.zeros(nx))
        snap2 = (lo2 == 0.0) & (f20 <= v2)
        v2, t2 = np.where(snap2, f20, v2), np.where(snap2, 0.0, t2)
        split = np.where(t1 <= t2, v1 + v2, np.inf)
        upd = split < best
        best = np.where(upd, split, best)
        t1b = np.where(upd, t1, t1b)
        t2b = np.where(upd, t2, t2b)

        lod = taus[np.maximum(np.minimum(i1, j) - 1, 0)]
        hid = taus[np.minimum(j + 1, n_tau - 1)]
        vd, td = golden_vec(lambda tau: f1(tau) + f2(tau), lod, hid, search_tol)
        upd = vd < best
        best = np.where(upd, vd, best)
        t1b = np.where(upd, td, t1b)
        t2b = np.where(upd, td, t2b)

        _, gy = u0_quad_min(0.0, np.maximum(t1b, _TINY_TAU), yb, a, s, P, ymax_g)
        bv[r] = best
        by[r] = np.where(t1b > 0.0, gy, 0.0)
        bt1[r] = t1b
        bt2[r] = t2b
        bp[r] = np.where(xs > 0.0, xs / (t - t2b), 0.0)
    return iv, iy, bv, by, bt1, bt2, bp


def _upwind(field, speed, dx):
    """First-order upwind advection term speed * field_x on interior nodes."""
    fc = field[1:-1]
    sp = speed[1:-1]
    return np.where(sp > 0.0, sp * (fc - field[:-2]),
                    sp * (field[2:] - fc)) / dx


def _implicit_diffusion_matrix(n_interior, r):
    ab = np.empty((3, n_interior))
    ab[0, :] = -r
    ab[1, :] = 1.0 + 2.0 * r
    ab[2, :] = -r
    return ab


def burgers_run(v0, vb_steps, dx, dt, eps, nsteps, snap_steps,
                far, scheme, guard_tol):
    """March viscous Burgers with Dirichlet inflow and frozen far field.

    scheme 0: explicit upwind advection + explicit centered diffusion;
    scheme 1: same advection, implicit (backward Euler) diffusion.
    Snapshots are taken after the steps listed in snap_steps (sorted, may
    start with 0).  Returns (snaps, status): status is -1 on success, or the
    step index at which the penultimate node drifted beyond guard_tol.
    """
    v = np.array(v0, dtype=float)
    n = v.size
    snaps = np.zeros((len(snap_steps), n))
    pos = 0
    if len(snap_steps) and snap_steps[0] == 0:
        snaps[0] = v
        pos = 1
    guard_ref = v[n - 2]
    rdif = eps * dt / (dx * dx)
    ab = _implicit_diffusion_matrix(n - 2, rdif) if scheme == 1 else None
    for step in range(1, nsteps + 1):
        adv = _upwind(v, v, dx)
        if scheme == 0:
            vnew = v[1:-1] - dt * adv + rdif * (v[2:] - 2.0 * v[1:-1] + v[:-2])
        else:
            rhs = v[1:-1] - dt * adv
            rhs[0] += rdif * vb_steps[step]
            rhs[-1] += rdif * far
            vnew = solve_banded((1, 1), ab, rhs)
        v[1:-1] = vnew
        v[0] = vb_steps[step]
        v[-1] = far
        if abs(v[n - 2] - guard_ref) > guard_tol:
            return snaps, step
        if pos < len(snap_steps) and snap_steps[pos] == step:
            snaps[pos] = v
            pos += 1
    return snaps, -1


def system_run(w1_0, w2_0, w1b_steps, w2b_steps, k, dx, dt, eps, nsteps,
               snap_steps, far1, far2, scheme, guard_tol):
    """March the 2x2 viscous system in invariant form.

    w1 is advected at u + k and w2 at u - k with u = (w2 - w1)/(2k); both
    share the centered diffusion.  Returns (snaps1, snaps2, status) with the
    same conventions as burgers_run.
    """
    w1 = np.array(w1_0, dtype=float)
    w2 = np.array(w2_0, dtype=float)
    n = w1.size
    snaps1 = np.zeros((len(snap_steps), n))
    snaps2 = np.zeros((len(snap_steps), n))
    pos = 0
    if len(snap_steps) and snap_steps[0] == 0:
        snaps1[0], snaps2[0] = w1, w2
        pos = 1
    ref1, ref2 = w1[n - 2], w2[n - 2]
    rdif = eps * dt / (dx * dx)
    ab = _implicit_diffusion_matrix(n - 2, rdif) if scheme == 1 else None
    for step in range(1, nsteps + 1):
        u = (w2 - w1) / (2.0 * k)
        adv1 = _upwind(w1, u + k, dx)
        adv2 = _upwind(w2, u - k, dx)
        if scheme == 0:
            n1 = w1[1:-1] - dt * adv1 + rdif * (w1[2:] - 2.0 * w1[1:-1] + w1[:-2])
            n2 = w2[1:-1] - dt * adv2 + rdif * (w2[2:] - 2.0 * w2[1:-1] + w2[:-2])
        else:
            rhs1 = w1[1:-1] - dt * adv1
            rhs2 = w2[1:-1] - dt * adv2
            rhs1[0] += rdif * w1b_steps[step]
            rhs1[-1] += rdif * far1
            rhs2[0] += rdif * w2b_steps[step]
            rhs2[-1] += rdif * far2
            n1 = solve_banded((1, 1), ab, rhs1)
            n2 = solve_banded((1, 1), ab, rhs2)
        w1[1:-1] = n1
        w2[1:-1] = n2
        w1[0] = w1b_steps[step]
        w2[0] = w2b_steps[step]
        w1[-1] = far1
        w2[-1] = far2
        if max(abs(w1[n - 2] - ref1), abs(w2[n - 2] - ref2)) > guard_tol:
            return snaps1, snaps2, step
        if pos < len(snap_steps) and snap_steps[pos] == step:
            snaps1[pos], snaps2[pos] = w1, w2
            pos += 1
    return snaps1, snaps2, -1
