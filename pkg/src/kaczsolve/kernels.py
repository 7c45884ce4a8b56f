"""Compiled per-iteration loops for the randomized solvers.

Every kernel advances solver state in place over one segment of presampled
row indices; all trace bookkeeping (residual strides, early exit, snapshots)
lives in the Python wrappers, which call the kernels on index segments. This
keeps the kernels pure: running one segment of length s+t is bit-identical to
running segments of lengths s and t back to back.

Schedule arrays use the `AccelSchedule` layout: gamma[k+1] holds gamma_k
(index 0 is the seed value for k = -1), while alpha/beta/p/q/r are indexed
directly by k. `k0` is the absolute iteration number of the segment start.
"""

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def rk_csr(indptr, indices, data, b, sq, x, idx):
    for t in range(idx.shape[0]):
        i = idx[t]
        lo, hi = indptr[i], indptr[i + 1]
        s = -b[i]
        for p in range(lo, hi):
            s += data[p] * x[indices[p]]
        s /= sq[i]
        for p in range(lo, hi):
            x[indices[p]] -= s * data[p]


@njit(**_JIT)
def rk_dense(A, b, sq, x, idx):
    n = x.shape[0]
    for t in range(idx.shape[0]):
        i = idx[t]
        s = -b[i]
        for j in range(n):
            s += A[i, j] * x[j]
        s /= sq[i]
        for j in range(n):
            x[j] -= s * A[i, j]


@njit(**_JIT)
def ark_reference_csr(indptr, indices, data, b, sq, x, v, y, idx, gamma, alpha, beta, k0):
    """Three-sequence accelerated update, exactly as the reference recursion.

    x and v persist across segments; y is scratch holding the most recent
    mixing iterate on return.
    """
    n = x.shape[0]
    for t in range(idx.shape[0]):
        k = k0 + t
        ak = alpha[k]
        bk = beta[k]
        gk = gamma[k + 1]
        i = idx[t]
        lo, hi = indptr[i], indptr[i + 1]
        for j in range(n):
            y[j] = ak * v[j] + (1.0 - ak) * x[j]
        s = -b[i]
        for p in range(lo, hi):
            s += data[p] * y[indices[p]]
        s /= sq[i]
        for j in range(n):
            x[j] = y[j]
            v[j] = bk * v[j] + (1.0 - bk) * y[j]
        gs = gk * s
        for p in range(lo, hi):
            c = indices[p]
            x[c] -= s * data[p]
            v[c] -= gs * data[p]


@njit(**_JIT)
def ark_efficient_csr(indptr, indices, data, b, sq, x, y, idx, gamma, alpha, k0, m):
    """Two-vector form of the accelerated update (same iterates, fewer ops)."""
    n = x.shape[0]
    for t in range(idx.shape[0]):
        k = k0 + t
        gk = gamma[k + 1]
        an = alpha[k + 1]
        i = idx[t]
        lo, hi = indptr[i], indptr[i + 1]
        s = -b[i]
        for p in range(lo, hi):
            s += data[p] * y[indices[p]]
        s /= sq[i]
        c1 = an * (1.0 - m * gk)
        c2 = 1.0 - an + m * an * gk
        rc = (1.0 - an + an * gk) * s
        for j in range(n):
            xo = x[j]
            yo = y[j]
            x[j] = yo
            y[j] = c1 * xo + c2 * yo
        for p in range(lo, hi):
            c = indices[p]
            x[c] -= s * data[p]
            y[c] -= rc * data[p]


@njit(**_JIT)
def sark_csr(indptr, indices, data, b, sq, x, y, z, w, act, in_act, scal,
             idx, p_seq, q_seq, r_seq, T, k0, t_in, act_count):
    """Cycle-cached accelerated update for sparse rows.

    Between cycle closes, x and y hold the cycle-base vectors and the true
    iterates are  x_k = rho*x + tau*y + z  and  y_k = sigma*x + nu*y + w.
    scal holds [rho, tau, sigma, nu]; t_in/act_count are the in-cycle position
    and active-support size at segment start, returned updated. A pending
    close (t == T) is performed lazily before the next projection step;
    callers reconstruct explicit iterates via the combination above.
    """
    rho, tau, sig, nu = scal[0], scal[1], scal[2], scal[3]
    t = t_in
    n = x.shape[0]
    for step in range(idx.shape[0]):
        if t == T:
            for j in range(n):
                xo = x[j]
                yo = y[j]
                x[j] = rho * xo + tau * yo + z[j]
                y[j] = sig * xo + nu * yo + w[j]
            for a in range(act_count):
                j = act[a]
                z[j] = 0.0
                w[j] = 0.0
                in_act[j] = False
            act_count = 0
            rho, tau, sig, nu = 1.0, 0.0, 0.0, 1.0
            t = 0
        k = k0 + step
        i = idx[step]
        lo, hi = indptr[i], indptr[i + 1]
        dx = 0.0
        dy = 0.0
        dw = 0.0
        for p in range(lo, hi):
            c = indices[p]
            vv = data[p]
            dx += vv * x[c]
            dy += vv * y[c]
            dw += vv * w[c]
        s = (sig * dx + nu * dy + dw - b[i]) / sq[i]
        for p in range(lo, hi):
            c = indices[p]
            if not in_act[c]:
                in_act[c] = True
                act[act_count] = c
                act_count += 1
        pk = p_seq[k]
        qk = q_seq[k]
        rk = r_seq[k]
        for a in range(act_count):
            j = act[a]
            zo = z[j]
            wo = w[j]
            z[j] = wo
            w[j] = pk * zo + qk * wo
        rs = rk * s
        for p in range(lo, hi):
            c = indices[p]
            vv = data[p]
            z[c] -= s * vv
            w[c] -= rs * vv
        rho_n = sig
        tau_n = nu
        sig_n = pk * rho + qk * sig
        nu_n = pk * tau + qk * nu
        rho, tau, sig, nu = rho_n, tau_n, sig_n, nu_n
        t += 1
    scal[0], scal[1], scal[2], scal[3] = rho, tau, sig, nu
    return t, act_count


@njit(**_JIT)
def jacobi_onesided(W, V, tol, max_sweeps):
    """Cyclic one-sided Jacobi orthogonalization with rotation accumulation.

    W holds the working columns as rows (n x m); V accumulates the applied
    rotations as rows (n x n). Converged when every column pair satisfies
    |<wp, wq>| <= tol * |wp| * |wq| over a full sweep. Returns the number of
    sweeps used, or -1 if max_sweeps was reached without converging.
    """
    n = W.shape[0]
    mm = W.shape[1]
    nv = V.shape[1]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = 0.0
                aqq = 0.0
                apq = 0.0
                for t in range(mm):
                    wp = W[p, t]
                    wq = W[q, t]
                    app += wp * wp
                    aqq += wq * wq
                    apq += wp * wq
                if app <= 0.0 or aqq <= 0.0:
                    continue
                rel = abs(apq) / np.sqrt(app * aqq)
                if rel > off:
                    off = rel
                if rel <= tol:
                    continue
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    tt = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    tt = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + tt * tt)
                s = tt * c
                for t in range(mm):
                    wp = W[p, t]
                    wq = W[q, t]
                    W[p, t] = c * wp - s * wq
                    W[q, t] = s * wp + c * wq
                for t in range(nv):
                    vp = V[p, t]
                    vq = V[q, t]
                    V[p, t] = c * vp - s * vq
                    V[q, t] = s * vp + c * vq
        if off <= tol:
            return sweep + 1
    return -1
