# cython: language_level=3
"""Cython implementations of the hot kernels.

Compiled twin of pykernels: same algorithms, same candidate ordering, and
the same floating-point expression shapes, so both backends agree to
rounding.  The semi-implicit diffusion solve mirrors LAPACK dgtsv's
no-pivot branch (the tridiagonal is strictly diagonally dominant, so dgtsv
never row-swaps and a Thomas sweep reproduces it operation for operation).
"""

import numpy as np

from libc.math cimport INFINITY, fabs

cdef double _TINY_TAU = 1e-300
cdef double _INVPHI = 0.6180339887498949


cdef Py_ssize_t _bisect_right(const double[::1] arr, double x) noexcept:
    cdef Py_ssize_t lo = 0, hi = arr.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if x < arr[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef double _q_eval(double tau, const double[::1] sq, const double[::1] qs,
                    const double[::1] Qv) noexcept:
    """Piecewise-linear cumulative boundary integral Q(tau)."""
    cdef Py_ssize_t idx = _bisect_right(sq, tau) - 1
    return Qv[idx] + qs[idx] * (tau - sq[idx])


cdef void _u0_min(double xv, double tv, double ymax,
                  const double[::1] yb, const double[::1] a,
                  const double[::1] s, const double[::1] P,
                  double* out_val, double* out_y) noexcept:
    """Exact min over y in [0, ymax] of (xv - y)^2/(2 tv) + U0(y).

    Scalar form of pykernels.u0_quad_min: per piece the objective is a 1-D
    quadratic, so the candidates are the clipped piece endpoints and the
    vertex when it is interior and the curvature positive.
    """
    cdef Py_ssize_t m = yb.shape[0], i
    cdef int cand
    cdef double best = INFINITY, ybest = 0.0
    cdef double inv_t = 1.0 / tv
    cdef double lo, hi, denom, safe, yv, yc, d, f
    cdef bint live, ok
    for i in range(m):
        lo = yb[i]
        hi = yb[i + 1] if i + 1 < m else INFINITY
        if ymax < hi:
            hi = ymax
        live = hi >= lo
        denom = inv_t + s[i]
        safe = denom if denom > 0.0 else 1.0
        yv = (xv * inv_t - a[i] + s[i] * lo) / safe
        for cand in range(3):
            if cand == 0:
                yc = lo
                ok = live
            elif cand == 1:
                yc = hi
                ok = live
            else:
                yc = yv
                ok = live and denom > 0.0 and yv > lo and yv < hi
            if not ok:
                continue
            d = yc - lo
            f = (0.5 * inv_t * ((xv - yc) * (xv - yc)) + P[i]
                 + a[i] * d + 0.5 * s[i] * d * d)
            if f < best:
                best = f
                ybest = yc
    out_val[0] = best
    out_y[0] = ybest


cdef double _f1(double tau, double ymax_g,
                const double[::1] yb, const double[::1] a,
                const double[::1] s, const double[::1] P,
                const double[::1] sq, const double[::1] qs,
                const double[::1] Qv) noexcept:
    """Boundary-leg first factor Q(tau) + G(tau) at the clamped tau."""
    cdef double tcl = tau if tau > _TINY_TAU else _TINY_TAU
    cdef double g, gy
    _u0_min(0.0, tcl, ymax_g, yb, a, s, P, &g, &gy)
    return _q_eval(tcl, sq, qs, Qv) + g


cdef double _f2(double tau, double x, double t,
                const double[::1] sq, const double[::1] qs,
                const double[::1] Qv) noexcept:
    """Boundary-leg second factor -Q(tau) + x^2 / (2 (t - tau))."""
    cdef double val = 0.0
    if x > 0.0:
        val = 0.5 * x * x / (t - tau)
    return -_q_eval(tau, sq, qs, Qv) + val


cdef double _lane_f(int which, double tau, double x, double t, double ymax_g,
                    const double[::1] yb, const double[::1] a,
                    const double[::1] s, const double[::1] P,
                    const double[::1] sq, const double[::1] qs,
                    const double[::1] Qv) noexcept:
    if which == 0:
        return _f1(tau, ymax_g, yb, a, s, P, sq, qs, Qv)
    if which == 1:
        return _f2(tau, x, t, sq, qs, Qv)
    return (_f1(tau, ymax_g, yb, a, s, P, sq, qs, Qv)
            + _f2(tau, x, t, sq, qs, Qv))


cdef void _golden_lanes(int which, double[::1] ga, double[::1] gb,
                        const double[::1] xs, double t, double ymax_g,
                        const double[::1] yb, const double[::1] a,
                        const double[::1] s, const double[::1] P,
                        const double[::1] sq, const double[::1] qs,
                        const double[::1] Qv, double tol,
                        double[::1] out_v, double[::1] out_x) noexcept:
    """Lockstep golden-section minimization over per-lane brackets.

    Mirrors pykernels.golden_vec: the stopping test uses the widest bracket
    across all lanes, so every lane runs the same iteration count.
    """
    cdef Py_ssize_t n = ga.shape[0], l
    cdef int it
    cdef double w, wmax, c, d, fc, fd, xm
    for it in range(100):
        wmax = 0.0
        for l in range(n):
            w = gb[l] - ga[l]
            if w > wmax:
                wmax = w
        if wmax <= tol:
            break
        for l in range(n):
            w = gb[l] - ga[l]
            c = gb[l] - _INVPHI * w
            d = ga[l] + _INVPHI * w
            fc = _lane_f(which, c, xs[l], t, ymax_g, yb, a, s, P, sq, qs, Qv)
            fd = _lane_f(which, d, xs[l], t, ymax_g, yb, a, s, P, sq, qs, Qv)
            if fc <= fd:
                gb[l] = d
            else:
                ga[l] = c
    for l in range(n):
        xm = 0.5 * (ga[l] + gb[l])
        out_x[l] = xm
        out_v[l] = _lane_f(which, xm, xs[l], t, ymax_g, yb, a, s, P,
                           sq, qs, Qv)


def minimize_grid(xs, ts, yb, a, s, P, sq, qs, Qv,
                  double growth, double y_override, Py_ssize_t n_tau,
                  double search_tol):
    """Interior and boundary branch minima on the tensor grid ts x xs.

    Same contract as pykernels.minimize_grid; see there for the layout of
    the seven returned (nt, nx) arrays.
    """
    xs_arr = np.ascontiguousarray(xs, dtype=np.float64)
    ts_arr = np.ascontiguousarray(ts, dtype=np.float64)
    cdef const double[::1] cxs = xs_arr
    cdef const double[::1] cts = ts_arr
    cdef const double[::1] cyb = np.ascontiguousarray(yb, dtype=np.float64)
    cdef const double[::1] ca = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] cs = np.ascontiguousarray(s, dtype=np.float64)
    cdef const double[::1] cP = np.ascontiguousarray(P, dtype=np.float64)
    cdef const double[::1] csq = np.ascontiguousarray(sq, dtype=np.float64)
    cdef const double[::1] cqs = np.ascontiguousarray(qs, dtype=np.float64)
    cdef const double[::1] cQv = np.ascontiguousarray(Qv, dtype=np.float64)
    cdef Py_ssize_t nt = cts.shape[0], nx = cxs.shape[0]
    cdef bint has_boundary = csq.shape[0] > 0

    iv_arr = np.empty((nt, nx))
    iy_arr = np.empty((nt, nx))
    bv_arr = np.full((nt, nx), np.inf)
    by_arr = np.zeros((nt, nx))
    bt1_arr = np.zeros((nt, nx))
    bt2_arr = np.zeros((nt, nx))
    bp_arr = np.zeros((nt, nx))
    cdef double[:, ::1] iv = iv_arr, iy = iy_arr, bv = bv_arr, by = by_arr
    cdef double[:, ::1] bt1 = bt1_arr, bt2 = bt2_arr, bp = bp_arr

    cdef double[::1] ymax_node = np.empty(nx)
    cdef double[::1] taus = np.empty(n_tau)
    cdef double[::1] q_grid = np.empty(n_tau)
    cdef double[::1] F1 = np.empty(n_tau)
    cdef double[::1] rm = np.empty(n_tau)
    cdef Py_ssize_t[::1] rmi = np.empty(n_tau, dtype=np.intp)
    cdef Py_ssize_t[::1] jrow = np.empty(nx, dtype=np.intp)
    cdef Py_ssize_t[::1] i1row = np.empty(nx, dtype=np.intp)
    cdef double[::1] bestrow = np.empty(nx)
    cdef double[::1] t1brow = np.empty(nx)
    cdef double[::1] t2brow = np.empty(nx)
    cdef double[::1] lo1 = np.empty(nx), lo2 = np.empty(nx)
    cdef double[::1] ga = np.empty(nx), gb = np.empty(nx)
    cdef double[::1] v1 = np.empty(nx), t1 = np.empty(nx)
    cdef double[::1] v2 = np.empty(nx), t2 = np.empty(nx)
    cdef double[::1] vd = np.empty(nx), td = np.empty(nx)

    cdef Py_ssize_t r, ix, i, idx, imin, cur_i
    cdef double t, gt, ymax_g, th, stp, val, yy, tcl, g, gy
    cdef double x, tot, cur, best, f20, split, v1l, v2l, t1l, t2l

    for r in range(nt):
        t = cts[r]
        gt = growth * t
        for ix in range(nx):
            ymax_node[ix] = cxs[ix] + gt if y_override <= 0.0 else y_override
            _u0_min(cxs[ix], t, ymax_node[ix], cyb, ca, cs, cP, &val, &yy)
            iv[r, ix] = val
            iy[r, ix] = yy
        if not has_boundary:
            continue
        ymax_g = ymax_node[0]
        for ix in range(1, nx):
            if ymax_node[ix] > ymax_g:
                ymax_g = ymax_node[ix]
        th = t * (1.0 - 1e-12)
        stp = th / (n_tau - 1)
        for i in range(n_tau):
            taus[i] = i * stp
        taus[n_tau - 1] = th
        for i in range(n_tau):
            q_grid[i] = _q_eval(taus[i], csq, cqs, cQv)
        F1[0] = 0.0
        for i in range(1, n_tau):
            tcl = taus[i] if taus[i] > _TINY_TAU else _TINY_TAU
            _u0_min(0.0, tcl, ymax_g, cyb, ca, cs, cP, &g, &gy)
            F1[i] = q_grid[i] + g
        cur = INFINITY
        cur_i = 0
        for i in range(n_tau):
            if F1[i] < cur:
                cur = F1[i]
                cur_i = i
            rm[i] = cur
            rmi[i] = cur_i

        for ix in range(nx):
            x = cxs[ix]
            best = INFINITY
            idx = 0
            for i in range(n_tau):
                if x > 0.0:
                    val = 0.5 * (x * x) / (t - taus[i])
                else:
                    val = 0.0
                tot = rm[i] + (-q_grid[i] + val)
                if tot < best:
                    best = tot
                    idx = i
            jrow[ix] = idx
            i1row[ix] = rmi[idx]
            bestrow[ix] = best
            t1brow[ix] = taus[i1row[ix]]
            t2brow[ix] = taus[idx]

        # split leg: independent refinements of the two factors
        for ix in range(nx):
            idx = i1row[ix]
            lo1[ix] = taus[idx - 1] if idx >= 1 else taus[0]
            ga[ix] = lo1[ix]
            gb[ix] = taus[idx + 1] if idx + 1 < n_tau else taus[n_tau - 1]
        _golden_lanes(0, ga, gb, cxs, t, ymax_g, cyb, ca, cs, cP,
                      csq, cqs, cQv, search_tol, v1, t1)
        for ix in range(nx):
            if lo1[ix] == 0.0 and v1[ix] >= 0.0:
                v1[ix] = 0.0
                t1[ix] = 0.0
        for ix in range(nx):
            idx = jrow[ix]
            lo2[ix] = taus[idx - 1] if idx >= 1 else taus[0]
            ga[ix] = lo2[ix]
            gb[ix] = taus[idx + 1] if idx + 1 < n_tau else taus[n_tau - 1]
        _golden_lanes(1, ga, gb, cxs, t, ymax_g, cyb, ca, cs, cP,
                      csq, cqs, cQv, search_tol, v2, t2)
        for ix in range(nx):
            f20 = _f2(0.0, cxs[ix], t, csq, cqs, cQv)
            if lo2[ix] == 0.0 and f20 <= v2[ix]:
                v2[ix] = f20
                t2[ix] = 0.0
        for ix in range(nx):
            v1l = v1[ix]
            v2l = v2[ix]
            t1l = t1[ix]
            t2l = t2[ix]
            split = v1l + v2l if t1l <= t2l else INFINITY
            if split < bestrow[ix]:
                bestrow[ix] = split
                t1brow[ix] = t1l
                t2brow[ix] = t2l

        # diagonal leg: both taus equal, one bracket spanning the scan pair
        for ix in range(nx):
            imin = i1row[ix] if i1row[ix] < jrow[ix] else jrow[ix]
            ga[ix] = taus[imin - 1] if imin >= 1 else taus[0]
            idx = jrow[ix]
            gb[ix] = taus[idx + 1] if idx + 1 < n_tau else taus[n_tau - 1]
        _golden_lanes(2, ga, gb, cxs, t, ymax_g, cyb, ca, cs, cP,
                      csq, cqs, cQv, search_tol, vd, td)
        for ix in range(nx):
            if vd[ix] < bestrow[ix]:
                bestrow[ix] = vd[ix]
                t1brow[ix] = td[ix]
                t2brow[ix] = td[ix]

        for ix in range(nx):
            tcl = t1brow[ix] if t1brow[ix] > _TINY_TAU else _TINY_TAU
            _u0_min(0.0, tcl, ymax_g, cyb, ca, cs, cP, &g, &gy)
            bv[r, ix] = bestrow[ix]
            by[r, ix] = gy if t1brow[ix] > 0.0 else 0.0
            bt1[r, ix] = t1brow[ix]
            bt2[r, ix] = t2brow[ix]
            x = cxs[ix]
            bp[r, ix] = x / (t - t2brow[ix]) if x > 0.0 else 0.0
    return iv_arr, iy_arr, bv_arr, by_arr, bt1_arr, bt2_arr, bp_arr


cdef void _factor_tridiag(double diag, double off, double[::1] dfac,
                          double[::1] lfac) noexcept:
    """dgtsv-style LU of the constant tridiagonal (no pivoting needed)."""
    cdef Py_ssize_t n = dfac.shape[0], i
    dfac[0] = diag
    for i in range(1, n):
        lfac[i] = off / dfac[i - 1]
        dfac[i] = diag - lfac[i] * off


cdef void _solve_tridiag(const double[::1] dfac, const double[::1] lfac,
                         double off, double[::1] rhs) noexcept:
    """Forward/back sweeps matching dgtsv's elimination order."""
    cdef Py_ssize_t n = dfac.shape[0], i
    for i in range(1, n):
        rhs[i] = rhs[i] - lfac[i] * rhs[i - 1]
    rhs[n - 1] = rhs[n - 1] / dfac[n - 1]
    for i in range(n - 2, -1, -1):
        rhs[i] = (rhs[i] - off * rhs[i + 1]) / dfac[i]


def burgers_run(v0, vb_steps, double dx, double dt, double eps,
                Py_ssize_t nsteps, snap_steps, double far, int scheme,
                double guard_tol):
    """March viscous Burgers with Dirichlet inflow and frozen far field.

    Same contract as pykernels.burgers_run: scheme 0 is explicit upwind
    advection + explicit centered diffusion, scheme 1 the same advection
    with backward-Euler diffusion; returns (snaps, status).
    """
    v_arr = np.array(v0, dtype=float)
    cdef double[::1] v = v_arr
    cdef const double[::1] vb = np.ascontiguousarray(vb_steps,
                                                     dtype=np.float64)
    cdef const Py_ssize_t[::1] snap = np.ascontiguousarray(snap_steps,
                                                           dtype=np.intp)
    cdef Py_ssize_t n = v.shape[0], n_int = n - 2
    cdef Py_ssize_t nsnap = snap.shape[0], pos = 0, step, i, node
    snaps_arr = np.zeros((nsnap, n))
    cdef double[:, ::1] snaps = snaps_arr
    if nsnap > 0 and snap[0] == 0:
        for i in range(n):
            snaps[0, i] = v[i]
        pos = 1
    cdef double guard_ref = v[n - 2]
    cdef double rdif = eps * dt / (dx * dx)
    cdef double off = -rdif
    cdef double[::1] work = np.empty(n_int)
    cdef double[::1] dfac = np.empty(n_int)
    cdef double[::1] lfac = np.empty(n_int)
    cdef double sp, adv
    if scheme == 1:
        _factor_tridiag(1.0 + 2.0 * rdif, off, dfac, lfac)
    for step in range(1, nsteps + 1):
        for i in range(n_int):
            node = i + 1
            sp = v[node]
            if sp > 0.0:
                adv = sp * (v[node] - v[node - 1])
            else:
                adv = sp * (v[node + 1] - v[node])
            adv = adv / dx
            if scheme == 0:
                work[i] = (v[node] - dt * adv
                           + rdif * (v[node + 1] - 2.0 * v[node]
                                     + v[node - 1]))
            else:
                work[i] = v[node] - dt * adv
        if scheme == 1:
            work[0] = work[0] + rdif * vb[step]
            work[n_int - 1] = work[n_int - 1] + rdif * far
            _solve_tridiag(dfac, lfac, off, work)
        for i in range(n_int):
            v[i + 1] = work[i]
        v[0] = vb[step]
        v[n - 1] = far
        if fabs(v[n - 2] - guard_ref) > guard_tol:
            return snaps_arr, step
        if pos < nsnap and snap[pos] == step:
            for i in range(n):
                snaps[pos, i] = v[i]
            pos += 1
    return snaps_arr, -1


def system_run(w1_0, w2_0, w1b_steps, w2b_steps, double k, double dx,
               double dt, double eps, Py_ssize_t nsteps, snap_steps,
               double far1, double far2, int scheme, double guard_tol):
    """March the 2x2 viscous system in invariant form.

    Same contract as pykernels.system_run: w1 is advected at u + k and w2
    at u - k with u = (w2 - w1)/(2k); both share the centered diffusion.
    """
    w1_arr = np.array(w1_0, dtype=float)
    w2_arr = np.array(w2_0, dtype=float)
    cdef double[::1] w1 = w1_arr, w2 = w2_arr
    cdef const double[::1] w1b = np.ascontiguousarray(w1b_steps,
                                                      dtype=np.float64)
    cdef const double[::1] w2b = np.ascontiguousarray(w2b_steps,
                                                      dtype=np.float64)
    cdef const Py_ssize_t[::1] snap = np.ascontiguousarray(snap_steps,
                                                           dtype=np.intp)
    cdef Py_ssize_t n = w1.shape[0], n_int = n - 2
    cdef Py_ssize_t nsnap = snap.shape[0], pos = 0, step, i, node
    snaps1_arr = np.zeros((nsnap, n))
    snaps2_arr = np.zeros((nsnap, n))
    cdef double[:, ::1] snaps1 = snaps1_arr, snaps2 = snaps2_arr
    if nsnap > 0 and snap[0] == 0:
        for i in range(n):
            snaps1[0, i] = w1[i]
            snaps2[0, i] = w2[i]
        pos = 1
    cdef double ref1 = w1[n - 2], ref2 = w2[n - 2]
    cdef double rdif = eps * dt / (dx * dx)
    cdef double off = -rdif, twok = 2.0 * k
    cdef double[::1] work1 = np.empty(n_int), work2 = np.empty(n_int)
    cdef double[::1] dfac = np.empty(n_int), lfac = np.empty(n_int)
    cdef double u, sp, adv1, adv2, d1, d2
    if scheme == 1:
        _factor_tridiag(1.0 + 2.0 * rdif, off, dfac, lfac)
    for step in range(1, nsteps + 1):
        for i in range(n_int):
            node = i + 1
            u = (w2[node] - w1[node]) / twok
            sp = u + k
            if sp > 0.0:
                adv1 = sp * (w1[node] - w1[node - 1])
            else:
                adv1 = sp * (w1[node + 1] - w1[node])
            adv1 = adv1 / dx
            sp = u - k
            if sp > 0.0:
                adv2 = sp * (w2[node] - w2[node - 1])
            else:
                adv2 = sp * (w2[node + 1] - w2[node])
            adv2 = adv2 / dx
            if scheme == 0:
                work1[i] = (w1[node] - dt * adv1
                            + rdif * (w1[node + 1] - 2.0 * w1[node]
                                      + w1[node - 1]))
                work2[i] = (w2[node] - dt * adv2
                            + rdif * (w2[node + 1] - 2.0 * w2[node]
                                      + w2[node - 1]))
            else:
                work1[i] = w1[node] - dt * adv1
                work2[i] = w2[node] - dt * adv2
        if scheme == 1:
            work1[0] = work1[0] + rdif * w1b[step]
            work1[n_int - 1] = work1[n_int - 1] + rdif * far1
            work2[0] = work2[0] + rdif * w2b[step]
            work2[n_int - 1] = work2[n_int - 1] + rdif * far2
            _solve_tridiag(dfac, lfac, off, work1)
            _solve_tridiag(dfac, lfac, off, work2)
        for i in range(n_int):
            w1[i + 1] = work1[i]
            w2[i + 1] = work2[i]
        w1[0] = w1b[step]
        w2[0] = w2b[step]
        w1[n - 1] = far1
        w2[n - 1] = far2
        d1 = fabs(w1[n - 2] - ref1)
        d2 = fabs(w2[n - 2] - ref2)
        if (d1 if d1 > d2 else d2) > guard_tol:
            return snaps1_arr, snaps2_arr, step
        if pos < nsnap and snap[pos] == step:
            for i in range(n):
                snaps1[pos, i] = w1[i]
                snaps2[pos, i] = w2[i]
            pos += 1
    return snaps1_arr, snaps2_arr, -1
