# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled symmetric eigensolver kernels.

Mirrors the API of ``pyeig``: Householder tridiagonalization, implicit
shift QL, band-to-tridiagonal Givens reduction, and tridiagonal inverse
iteration.  These routines dominate the diagonalization cost and are the
hot kernels the method benchmark instruments.
"""

import numpy as np

from libc.math cimport fabs, sqrt, hypot, copysign

cdef double _EPS = 2.220446049250313e-16


class EigenConvergenceError(RuntimeError):
    """QL iteration exceeded its sweep budget."""


def householder_tridiag(a, bint vectors=True):
    """Reduce a symmetric matrix to tridiagonal form; see pyeig twin."""
    w_arr = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] w = w_arr
    cdef Py_ssize_t n = w.shape[0]
    if w.shape[1] != n:
        raise ValueError("square matrix required")
    d_arr = np.empty(n, dtype=np.float64)
    e_arr = np.empty(max(n - 1, 0), dtype=np.float64)
    betas_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double[::1] betas = betas_arr
    v_arr = np.empty(n, dtype=np.float64)
    p_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] p = p_arr
    cdef Py_ssize_t k, i, j, m
    cdef double sigma, x0, mu, v0, beta, acc, pv, half, sub, ti, vi

    for k in range(n - 2):
        m = n - k - 1          # size of trailing block below the pivot
        sigma = 0.0
        for i in range(1, m):
            sigma += w[k + 1 + i, k] * w[k + 1 + i, k]
        x0 = w[k + 1, k]
        v[0] = 1.0
        if sigma == 0.0:
            beta = 0.0
            for i in range(1, m):
                v[i] = 0.0
        else:
            mu = sqrt(x0 * x0 + sigma)
            if x0 <= 0.0:
                v0 = x0 - mu
            else:
                v0 = -sigma / (x0 + mu)
            beta = 2.0 * v0 * v0 / (sigma + v0 * v0)
            for i in range(1, m):
                v[i] = w[k + 1 + i, k] / v0
        betas[k] = beta
        if beta != 0.0:
            # p = beta * B v on the trailing symmetric block B
            for i in range(m):
                acc = 0.0
                for j in range(m):
                    acc += w[k + 1 + i, k + 1 + j] * v[j]
                p[i] = beta * acc
            pv = 0.0
            for i in range(m):
                pv += p[i] * v[i]
            half = 0.5 * beta * pv
            for i in range(m):
                p[i] -= half * v[i]
            for i in range(m):
                vi = v[i]
                ti = p[i]
                for j in range(m):
                    w[k + 1 + i, k + 1 + j] -= vi * p[j] + ti * v[j]
        acc = 0.0
        for i in range(m):
            acc += v[i] * w[k + 1 + i, k]
        sub = w[k + 1, k] - beta * acc
        w[k + 1, k] = sub
        w[k, k + 1] = sub
        for i in range(1, m):
            w[k + 1 + i, k] = v[i]

    for i in range(n):
        d[i] = w[i, i]
    for i in range(n - 1):
        e[i] = w[i + 1, i]

    if not vectors:
        return d_arr, e_arr, None

    q_arr = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] q = q_arr
    for k in range(n - 3, -1, -1):
        beta = betas[k]
        if beta == 0.0:
            continue
        m = n - k - 1
        v[0] = 1.0
        for i in range(1, m):
            v[i] = w[k + 1 + i, k]
        for j in range(k + 1, n):
            acc = 0.0
            for i in range(m):
                acc += v[i] * q[k + 1 + i, j]
            acc *= beta
            for i in range(m):
                q[k + 1 + i, j] -= v[i] * acc
    return d_arr, e_arr, np.ascontiguousarray(q_arr.T)


def tql(d, e, zt=None, int max_sweeps=50):
    """Implicit-shift QL on a symmetric tridiagonal matrix; see pyeig twin."""
    d_arr = np.array(d, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = d_arr.shape[0]
    ee_arr = np.zeros(n, dtype=np.float64)
    ee_arr[: n - 1] = e
    cdef double[::1] dv = d_arr
    cdef double[::1] ee = ee_arr
    cdef double[:, ::1] zv
    cdef bint with_z = zt is not None
    if with_z:
        if zt.shape[0] != n or zt.shape[1] != n:
            raise ValueError("zt shape mismatch")
        zv = zt
    cdef Py_ssize_t l, m, i, sweeps, kcol
    cdef double dd, g, r, s, c, pshift, f, b, ri, rj
    cdef bint broke

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(dv[m]) + fabs(dv[m + 1])
                if fabs(ee[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise EigenConvergenceError(
                    "QL failed to converge at index %d after %d sweeps" % (l, max_sweeps)
                )
            g = (dv[l + 1] - dv[l]) / (2.0 * ee[l])
            r = hypot(g, 1.0)
            g = dv[m] - dv[l] + ee[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            pshift = 0.0
            broke = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    dv[i + 1] -= pshift
                    ee[m] = 0.0
                    broke = True
                    break
                s = f / r
                c = g / r
                g = dv[i + 1] - pshift
                r = (dv[i] - g) * s + 2.0 * c * b
                pshift = s * r
                dv[i + 1] = g + pshift
                g = c * r - b
                if with_z:
                    for kcol in range(n):
                        ri = zv[i, kcol]
                        rj = zv[i + 1, kcol]
                        zv[i, kcol] = c * ri - s * rj
                        zv[i + 1, kcol] = s * ri + c * rj
            if broke:
                continue
            dv[l] -= pshift
            ee[l] = g
            ee[m] = 0.0
    order = np.argsort(d_arr, kind="stable")
    d_arr = d_arr[order]
    if with_z:
        zt[:] = np.asarray(zt)[order]
    return d_arr


def band_to_tridiag(ab):
    """Givens reduction of a symmetric band matrix; see pyeig twin."""
    ab_arr = np.asarray(ab, dtype=np.float64)
    cdef Py_ssize_t mb = ab_arr.shape[0]
    cdef Py_ssize_t n = ab_arr.shape[1]
    cdef Py_ssize_t m = mb - 1
    if m >= n:
        raise ValueError("half-bandwidth must be smaller than the dimension")
    w_arr = np.zeros((m + 2, n), dtype=np.float64)
    w_arr[: m + 1] = ab_arr
    cdef double[:, ::1] w = w_arr
    cdef Py_ssize_t r, j, jj, p, q, j2, i, tp, tq, tgt_level, bulge_row, lim
    cdef double piv, val, h, c, s, ap, aq, app, aqq, apq, aip, aiq

    for r in range(m, 1, -1):
        for j in range(0, n - r):
            if w[r, j] == 0.0:
                continue
            jj = j
            tgt_level = r
            p = j + r - 1
            while True:
                if tgt_level == r:
                    piv = w[r - 1, jj]
                    val = w[r, jj]
                else:
                    piv = w[r, jj]
                    val = w[r + 1, jj]
                if val == 0.0:
                    break
                h = hypot(piv, val)
                c = piv / h
                s = val / h
                # rotate plane (p, p+1) within band extent r+1
                q = p + 1
                j2 = p - r - 1
                if j2 < 0:
                    j2 = 0
                while j2 < p:
                    tp = p - j2
                    tq = q - j2
                    ap = w[tp, j2]
                    if tq <= r + 1:
                        aq = w[tq, j2]
                        w[tp, j2] = c * ap + s * aq
                        w[tq, j2] = -s * ap + c * aq
                    else:
                        w[tp, j2] = c * ap
                    j2 += 1
                app = w[0, p]
                aqq = w[0, q]
                apq = w[1, p]
                w[0, p] = c * c * app + 2.0 * c * s * apq + s * s * aqq
                w[0, q] = s * s * app - 2.0 * c * s * apq + c * c * aqq
                w[1, p] = c * s * (aqq - app) + (c * c - s * s) * apq
                lim = p + r + 2
                if lim > n:
                    lim = n
                for i in range(q + 1, lim):
                    tp = i - p
                    tq = i - q
                    aiq = w[tq, q]
                    if tp <= r + 1:
                        aip = w[tp, p]
                        w[tp, p] = c * aip + s * aiq
                        w[tq, q] = -s * aip + c * aiq
                    else:
                        w[tq, q] = c * aiq
                if tgt_level == r:
                    w[r, jj] = 0.0
                else:
                    w[r + 1, jj] = 0.0
                bulge_row = p + r + 1
                if bulge_row > n - 1:
                    break
                jj = p
                p = bulge_row - 1
                tgt_level = r + 1
    return w_arr[0].copy(), w_arr[1, : n - 1].copy()


def tridiag_eigenvector(d, e, double lam, b0, int n_iter=3):
    """Inverse iteration for one tridiagonal eigenvector; see pyeig twin."""
    d_arr = np.asarray(d, dtype=np.float64)
    e_arr = np.asarray(e, dtype=np.float64)
    cdef Py_ssize_t n = d_arr.shape[0]
    x_arr = np.array(b0, dtype=np.float64, copy=True)
    x_arr /= np.linalg.norm(x_arr)
    cdef double scale = float(np.max(np.abs(d_arr)))
    if n > 1:
        scale += float(np.max(np.abs(e_arr)))
    cdef double tiny = _EPS * (scale if scale > 1.0 else 1.0)
    a_arr = np.zeros(n, dtype=np.float64)
    b_arr = np.empty(n, dtype=np.float64)
    c_arr = np.zeros(n, dtype=np.float64)
    f_arr = np.zeros(n, dtype=np.float64)
    y_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] av = a_arr
    cdef double[::1] bv = b_arr
    cdef double[::1] cv = c_arr
    cdef double[::1] fv = f_arr
    cdef double[::1] yv = y_arr
    cdef double[::1] dv = d_arr
    cdef double[::1] ev = e_arr
    cdef double[::1] xv = x_arr
    cdef Py_ssize_t it, i
    cdef double tmp, mult, nrm

    for it in range(n_iter):
        for i in range(n):
            bv[i] = dv[i] - lam
            yv[i] = xv[i]
            fv[i] = 0.0
        for i in range(n - 1):
            av[i + 1] = ev[i]
            cv[i] = ev[i]
        cv[n - 1] = 0.0
        av[0] = 0.0
        for i in range(n - 1):
            if fabs(av[i + 1]) > fabs(bv[i]):
                tmp = bv[i]; bv[i] = av[i + 1]; av[i + 1] = tmp
                tmp = cv[i]; cv[i] = bv[i + 1]; bv[i + 1] = tmp
                if i + 1 < n - 1:
                    fv[i] = cv[i + 1]
                    cv[i + 1] = 0.0
                tmp = yv[i]; yv[i] = yv[i + 1]; yv[i + 1] = tmp
            if fabs(bv[i]) < tiny:
                bv[i] = tiny
            mult = av[i + 1] / bv[i]
            bv[i + 1] -= mult * cv[i]
            if i + 1 < n - 1:
                cv[i + 1] -= mult * fv[i]
            yv[i + 1] -= mult * yv[i]
        if fabs(bv[n - 1]) < tiny:
            bv[n - 1] = tiny
        yv[n - 1] /= bv[n - 1]
        if n > 1:
            yv[n - 2] = (yv[n - 2] - cv[n - 2] * yv[n - 1]) / bv[n - 2]
        for i in range(n - 3, -1, -1):
            yv[i] = (yv[i] - cv[i] * yv[i + 1] - fv[i] * yv[i + 2]) / bv[i]
        nrm = 0.0
        for i in range(n):
            nrm += yv[i] * yv[i]
        nrm = sqrt(nrm)
        for i in range(n):
            xv[i] = yv[i] / nrm
    i = int(np.argmax(np.abs(x_arr)))
    if x_arr[i] < 0:
        x_arr = -x_arr
    return x_arr
