"""Special functions for the solvable-model construction.

Parabolic cylinder functions D_nu for real order nu < 1/2 (evaluated by an
asymptotic series seeded at large argument and adaptive Runge-Kutta
integration of Weber's equation inward), a Lanczos gamma function, stable
Hermite recurrences, oscillator eigenfunctions, and Gauss-Hermite rules
built from the in-repo tridiagonal eigensolver.
"""

import math

import numpy as np
from scipy.integrate import solve_ivp

from . import kernels
from .errors import DomainError, EvaluationOverflow, NumericalError

# Lanczos approximation, g = 7, 9 coefficients; ~1e-13 relative accuracy
# for real arguments of order unity to a few tens.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x):
    """Gamma function for real x, poles excluded."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"gamma pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def hermite_phys(n, u):
    """Physicists' Hermite polynomial H_n(u) by the three-term recurrence."""
    n = int(n)
    if not 0 <= n <= 400:
        raise DomainError("hermite order outside [0, 400]")
    u = np.asarray(u, dtype=float)
    h_prev = np.ones_like(u)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    with np.errstate(over="ignore", invalid="ignore"):
        h = 2.0 * u
        for k in range(1, n):
            h, h_prev = 2.0 * u * h - 2.0 * k * h_prev, h
    if not np.all(np.isfinite(h)):
        raise EvaluationOverflow(f"H_{n} overflows at |u| ~ {np.max(np.abs(u)):.3g}")
    return h if h.ndim else float(h)


def ho_eigenstate(n, xi):
    """Normalized oscillator eigenfunction psi_n(xi), unit frequency, hbar=1."""
    psi, _ = ho_eigenstate_pair(n, xi)
    return psi


def ho_eigenstate_pair(n, xi):
    """(psi_n, psi_n') via the weighted recurrence; stable up to large n."""
    n = int(n)
    if n < 0:
        raise DomainError("negative oscillator index")
    xi = np.asarray(xi, dtype=float)
    p0 = np.pi ** -0.25 * np.exp(-0.5 * xi ** 2)
    if n == 0:
        return p0, -xi * p0
    p1 = np.sqrt(2.0) * xi * p0
    prev, cur = p0, p1
    for k in range(2, n + 1):
        prev, cur = cur, np.sqrt(2.0 / k) * xi * cur - np.sqrt((k - 1.0) / k) * prev
    dcur = np.sqrt(2.0 * n) * prev - xi * cur
    return cur, dcur


_GH_CACHE = {}


def gauss_hermite(order):
    """Gauss-Hermite nodes and exp(+u^2)-folded weights.

    Returns (u, w_mod) such that sum(w_mod * f(u)) integrates f(u) du
    exactly when f = exp(-u^2) * polynomial of degree <= 2*order - 1.
    Nodes are eigenvalues of the Jacobi matrix (Golub-Welsch); the
    modified weights come from the Christoffel sums of the orthonormal
    oscillator functions, which avoids under/overflow at extreme nodes.
    """
    order = int(order)
    if order < 1:
        raise DomainError("quadrature order must be positive")
    if order in _GH_CACHE:
        return _GH_CACHE[order]
    d = np.zeros(order)
    e = np.sqrt(np.arange(1, order) / 2.0)
    nodes = kernels.tql(d, e, None)
    # Christoffel: w_mod = 1 / sum_{k<order} h_k(u)^2 with h_k orthonormal
    # oscillator functions carrying the exp(-u^2/2) factor.
    acc = np.zeros_like(nodes)
    p0 = np.pi ** -0.25 * np.exp(-0.5 * nodes ** 2)
    acc += p0 ** 2
    if order > 1:
        p1 = np.sqrt(2.0) * nodes * p0
        acc += p1 ** 2
        prev, cur = p0, p1
        for k in range(2, order):
            prev, cur = cur, np.sqrt(2.0 / k) * nodes * cur - np.sqrt((k - 1.0) / k) * prev
            acc += cur ** 2
    weights = 1.0 / acc
    _GH_CACHE[order] = (nodes, weights)
    return nodes, weights


def _weber_rhs(z, y, nu):
    return (y[1], (0.25 * z * z - nu - 0.5) * y[0])


class CylinderEvaluator:
    """Parabolic cylinder D_nu(z) and derivative for real nu < 1/2.

    Values at z >= switch_point come from the asymptotic series; below it
    Weber's equation is integrated inward (adaptive high-order
    Runge-Kutta) from a series seed at the switch point.  Inward
    integration follows the growing direction, so the recessive solution
    stays clean.  Results for a given grid are cached.
    """

    def __init__(self, nu, switch_point=30.0, rtol=1e-12):
        nu = float(nu)
        if nu >= 0.5:
            raise DomainError("order must satisfy nu < 1/2 (non-oscillatory regime)")
        self.nu = nu
        self.switch_point = float(switch_point)
        self.rtol = rtol
        self.method = "asymptotic-series/ODE-integration"
        self._cache = {}

    # -- asymptotic series ------------------------------------------------

    def _series_sum(self, nu, z):
        # S with D_nu(z) = exp(-z^2/4) z^nu S, valid for large positive z
        s = np.ones_like(z)
        term = np.ones_like(z)
        zz2 = 2.0 * z * z
        for k in range(60):
            term = term * (-(nu - 2 * k) * (nu - 2 * k - 1)) / ((k + 1) * zz2)
            if np.all(np.abs(term) < 1e-18 * np.abs(s)):
                break
            s = s + term
        return s

    def _series(self, z):
        z = np.asarray(z, dtype=float)
        d = np.exp(-0.25 * z * z) * z ** self.nu * self._series_sum(self.nu, z)
        d_lower = np.exp(-0.25 * z * z) * z ** (self.nu - 1.0) * self._series_sum(self.nu - 1.0, z)
        dp = self.nu * d_lower - 0.5 * z * d
        return d, dp

    # -- evaluation --------------------------------------------------------

    def _check_overflow(self, z_min):
        if self.nu == 0.0:
            return
        # growing-branch magnitude estimate at negative argument
        log_mag = (
            0.25 * z_min * z_min
            + (-self.nu - 1.0) * math.log(max(abs(z_min), 1.0))
            + 0.5 * math.log(2.0 * math.pi)
            - math.lgamma(-self.nu)
        )
        if log_mag > 700.0:
            raise EvaluationOverflow(
                f"D_{self.nu}({z_min:.3g}) exceeds double-precision range"
            )

    def evaluate(self, z, derivative=False):
        """D_nu at z (scalar or array); optionally also dD/dz."""
        z_arr = np.atleast_1d(np.asarray(z, dtype=float))
        if np.max(np.abs(z_arr)) > 60.0:
            raise EvaluationOverflow("argument outside supported range |z| <= 60")
        key = (z_arr.shape, z_arr.tobytes())
        if key in self._cache:
            d, dp = self._cache[key]
        else:
            d = np.empty_like(z_arr)
            dp = np.empty_like(z_arr)
            high = z_arr >= self.switch_point
            if np.any(high):
                d[high], dp[high] = self._series(z_arr[high])
            low = ~high
            if np.any(low):
                z_low = z_arr[low]
                self._check_overflow(float(np.min(z_low)))
                targets = np.unique(z_low)[::-1]  # descending
                y0 = np.array(self._series(np.array([self.switch_point]))).ravel()
                sol = solve_ivp(
                    _weber_rhs,
                    (self.switch_point, targets[-1]),
                    y0,
                    t_eval=targets,
                    args=(self.nu,),
                    method="DOP853",
                    rtol=self.rtol,
                    atol=0.0,
                )
                if not sol.success:
                    raise NumericalError(f"Weber integration failed: {sol.message}")
                table = {t: (sol.y[0, i], sol.y[1, i]) for i, t in enumerate(sol.t)}
                d[low] = [table[t][0] for t in z_low]
                dp[low] = [table[t][1] for t in z_low]
            if len(self._cache) > 8:
                self._cache.clear()
            self._cache[key] = (d, dp)
        if np.isscalar(z) or np.asarray(z).ndim == 0:
            return (float(d[0]), float(dp[0])) if derivative else float(d[0])
        return (d.copy(), dp.copy()) if derivative else d.copy()

    def self_check(self):
        """Relative disagreement of series and ODE routes at the switch point."""
        zs = self.switch_point
        direct = self._series(np.array([zs]))[0][0]
        seed = np.array(self._series(np.array([zs + 5.0]))).ravel()
        sol = solve_ivp(
            _weber_rhs,
            (zs + 5.0, zs),
            seed,
            t_eval=[zs],
            args=(self.nu,),
            method="DOP853",
            rtol=self.rtol,
            atol=0.0,
        )
        integrated = sol.y[0, 0]
        return abs(integrated - direct) / abs(direct)


_EVAL_CACHE = {}


def _evaluator(nu):
    nu = float(nu)
    if nu not in _EVAL_CACHE:
        if len(_EVAL_CACHE) > 16:
            _EVAL_CACHE.clear()
        _EVAL_CACHE[nu] = CylinderEvaluator(nu)
    return _EVAL_CACHE[nu]


def cylinder_d(nu, z, derivative=False):
    """Parabolic cylinder function D_nu(z); nu < 1/2 and |z| <= 60."""
    return _evaluator(nu).evaluate(z, derivative=derivative)


def cylinder_pair_xi(nu, xi, evaluator=None):
    """The solution pair phi1 = D_nu(sqrt2 xi), phi2 = D_nu(-sqrt2 xi) and
    their xi-derivatives, sampled on an array of xi values."""
    ev = evaluator or _evaluator(nu)
    xi = np.asarray(xi, dtype=float)
    root2 = math.sqrt(2.0)
    dp, dpp = ev.evaluate(root2 * xi, derivative=True)
    dm, dmp = ev.evaluate(-root2 * xi, derivative=True)
    phi1 = dp
    dphi1 = root2 * dpp
    phi2 = dm
    dphi2 = -root2 * dmp
    return phi1, dphi1, phi2, dphi2


def wronskian_pair(nu):
    """Closed-form xi-Wronskian of the pair D_nu(+-sqrt2 xi): 2 sqrt(pi)/Gamma(-nu).

    The value refers to the dimensionless variable xi; in the physical
    coordinate x = xi / sqrt(omega) it picks up a factor sqrt(omega).
    """
    nu = float(nu)
    if nu >= 0.0:
        raise DomainError("wronskian_pair requires nu < 0")
    return 2.0 * math.sqrt(math.pi) / gamma(-nu)


def wronskian_numeric(nu, xi):
    """Numeric xi-Wronskian phi1 phi2' - phi1' phi2 at the given points."""
    phi1, dphi1, phi2, dphi2 = cylinder_pair_xi(nu, np.asarray(xi, dtype=float))
    return phi1 * dphi2 - dphi1 * phi2
