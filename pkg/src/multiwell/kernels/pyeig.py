"""Pure-Python (numpy) symmetric eigensolver kernels.

Same API as the compiled module ``_ceig``: Householder reduction to
tridiagonal form, implicit-shift QL iteration, Givens-based reduction of
symmetric band matrices, and inverse iteration for tridiagonal
eigenvectors.  This module is the import-time fallback when the compiled
extension is unavailable and the reference implementation it is tested
against.
"""

import numpy as np

_EPS = np.finfo(float).eps


class EigenConvergenceError(RuntimeError):
    """QL iteration exceeded its sweep budget."""


def _house(x):
    """Householder vector v (v[0]=1) and beta with (I - beta v v^T)x = ||x|| e1."""
    sigma = float(x[1:] @ x[1:])
    v = x.copy()
    v[0] = 1.0
    if sigma == 0.0:
        return v, 0.0
    x0 = float(x[0])
    mu = np.sqrt(x0 * x0 + sigma)
    if x0 <= 0.0:
        v0 = x0 - mu
    else:
        v0 = -sigma / (x0 + mu)
    beta = 2.0 * v0 * v0 / (sigma + v0 * v0)
    v = x / v0
    v[0] = 1.0
    return v, beta


def householder_tridiag(a, vectors=True):
    """Reduce a symmetric matrix to tridiagonal form.

    Returns (d, e, qt) with d the diagonal, e the n-1 subdiagonal entries
    and qt the transposed orthogonal factor (rows of qt are the columns of
    Q, A = Q T Q^T), or qt=None when vectors is False.
    """
    w = np.array(a, dtype=float, copy=True)
    n = w.shape[0]
    if w.shape != (n, n):
        raise ValueError("square matrix required")
    betas = np.zeros(n)
    for k in range(n - 2):
        x = w[k + 1:, k]
        v, beta = _house(x)
        betas[k] = beta
        if beta != 0.0:
            blk = w[k + 1:, k + 1:]
            p = beta * (blk @ v)
            t = p - (0.5 * beta * (p @ v)) * v
            blk -= np.outer(v, t) + np.outer(t, v)
        sub = x[0] - beta * (v @ x)
        w[k + 1, k] = sub
        w[k, k + 1] = sub
        # store the Householder vector tail in the zeroed column
        w[k + 2:, k] = v[1:]
    d = np.diag(w).copy()
    e = np.diag(w, -1).copy()
    qt = None
    if vectors:
        q = np.eye(n)
        for k in range(n - 3, -1, -1):
            beta = betas[k]
            if beta == 0.0:
                continue
            v = np.empty(n - k - 1)
            v[0] = 1.0
            v[1:] = w[k + 2:, k]
            blk = q[k + 1:, k + 1:]
            blk -= np.outer(beta * v, v @ blk)
        qt = np.ascontiguousarray(q.T)
    return d, e, qt


def tql(d, e, zt=None, max_sweeps=50):
    """Implicit-shift QL eigenvalues of a symmetric tridiagonal matrix.

    d (n) and e (n-1) are consumed as copies.  If zt is given (n, n),
    its rows accumulate the rotations in place; on return row k of zt is
    the eigenvector of the k-th (ascending) eigenvalue.  Returns the
    ascending eigenvalues.
    """
    d = np.array(d, dtype=float, copy=True)
    n = d.shape[0]
    ee = np.zeros(n)
    ee[: n - 1] = e
    if zt is not None and zt.shape != (n, n):
        raise ValueError("zt shape mismatch")
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise EigenConvergenceError(
                    f"QL failed to converge at index {l} after {max_sweeps} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            broke = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = np.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    broke = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    ri = zt[i].copy()
                    rj = zt[i + 1]
                    zt[i] = c * ri - s * rj
                    zt[i + 1] = s * ri + c * rj
            if broke:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    order = np.argsort(d, kind="stable")
    d = d[order]
    if zt is not None:
        zt[:] = zt[order]
    return d


def band_to_tridiag(ab):
    """Reduce a symmetric band matrix to tridiagonal form by Givens chasing.

    ab is the lower band storage, ab[t, j] = A[j+t, j] for t = 0..m where
    m is the half-bandwidth.  Returns (d, e).  O(m n^2) operations.
    """
    ab = np.asarray(ab, dtype=float)
    mb, n = ab.shape
    m = mb - 1
    if m >= n:
        raise ValueError("half-bandwidth must be smaller than the dimension")
    w = np.zeros((m + 2, n))
    w[: m + 1] = ab

    def rotate(p, c, s, r):
        # plane (p, p+1); band extent during the pass is r+1
        q = p + 1
        for j2 in range(max(0, p - r - 1), p):
            tp = p - j2
            tq = q - j2
            ap = w[tp, j2]
            aq = w[tq, j2] if tq <= r + 1 else 0.0
            w[tp, j2] = c * ap + s * aq
            if tq <= r + 1:
                w[tq, j2] = -s * ap + c * aq
        app = w[0, p]
        aqq = w[0, q]
        apq = w[1, p]
        w[0, p] = c * c * app + 2.0 * c * s * apq + s * s * aqq
        w[0, q] = s * s * app - 2.0 * c * s * apq + c * c * aqq
        w[1, p] = c * s * (aqq - app) + (c * c - s * s) * apq
        for i in range(q + 1, min(n, p + r + 2)):
            tp = i - p
            tq = i - q
            aip = w[tp, p] if tp <= r + 1 else 0.0
            aiq = w[tq, q]
            if tp <= r + 1:
                w[tp, p] = c * aip + s * aiq
            w[tq, q] = -s * aip + c * aiq

    for r in range(m, 1, -1):
        for j in range(0, n - r):
            if w[r, j] == 0.0:
                continue
            # zero A[j+r, j] against A[j+r-1, j], then chase the bulge
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
                h = np.hypot(piv, val)
                c = piv / h
                s = val / h
                rotate(p, c, s, r)
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
    return w[0].copy(), w[1, : n - 1].copy()


def tridiag_eigenvector(d, e, lam, b0, n_iter=3):
    """Inverse iteration for one eigenvector of a tridiagonal matrix."""
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    n = d.shape[0]
    x = np.array(b0, dtype=float, copy=True)
    x /= np.linalg.norm(x)
    scale = np.max(np.abs(d)) + np.max(np.abs(e), initial=0.0)
    tiny = _EPS * max(scale, 1.0)
    for _ in range(n_iter):
        x = _solve_shifted(d, e, lam, x, tiny)
        x /= np.linalg.norm(x)
    k = int(np.argmax(np.abs(x)))
    if x[k] < 0:
        x = -x
    return x


def _solve_shifted(d, e, lam, rhs, tiny):
    """Solve (T - lam I) y = rhs with partial pivoting (Gaussian, 2 superdiags)."""
    n = d.shape[0]
    a = np.zeros(n)      # subdiagonal (row i couples i-1)
    b = d - lam          # diagonal
    c = np.zeros(n)      # first superdiagonal
    f = np.zeros(n)      # second superdiagonal (fill-in)
    a[1:] = e
    c[: n - 1] = e
    y = np.array(rhs, dtype=float, copy=True)
    for i in range(n - 1):
        if abs(a[i + 1]) > abs(b[i]):
            # swap rows i and i+1
            b[i], a[i + 1] = a[i + 1], b[i]
            c_i = c[i]
            c[i] = b[i + 1]
            b[i + 1] = c_i
            if i + 1 < n - 1:
                f[i] = c[i + 1]
                c[i + 1] = 0.0
            y[i], y[i + 1] = y[i + 1], y[i]
        if abs(b[i]) < tiny:
            b[i] = tiny
        mult = a[i + 1] / b[i]
        b[i + 1] -= mult * c[i]
        if i + 1 < n - 1:
            c[i + 1] -= mult * f[i]
        y[i + 1] -= mult * y[i]
    if abs(b[n - 1]) < tiny:
        b[n - 1] = tiny
    # back substitution
    y[n - 1] /= b[n - 1]
    if n > 1:
        y[n - 2] = (y[n - 2] - c[n - 2] * y[n - 1]) / b[n - 2]
    for i in range(n - 3, -1, -1):
        y[i] = (y[i] - c[i] * y[i + 1] - f[i] * y[i + 2]) / b[i]
    return y
