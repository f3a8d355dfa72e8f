"""Basis diagonalization of one- and two-dimensional Hamiltonians.

Basis families: oscillator product, particle-in-a-box (plane-wave) product
and the mixed box/oscillator hybrid, plus a finite-difference grid solver
used as an independent oracle for the exactly solvable models.  The
eigensolver is the in-repo kernel suite (Householder + implicit-shift QL,
band reduction for banded assemblies); matrix elements are analytic where
the potential is polynomial and Gauss-Hermite or cosine-transform
quadrature otherwise.
"""

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.fft import dct

from . import kernels, specfun
from .errors import DomainError, NumericalError, QuadratureError
from .grid import Grid1D, Grid2D, WaveFunction
from .potentials import Polynomial1D, Polynomial2D


@dataclass
class SpectrumResult:
    """Energies (ascending) with per-level error estimates and a method tag."""

    energies: np.ndarray
    errors: np.ndarray | None = None
    method: str = ""
    vectors: np.ndarray | None = None  # columns, when available
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.energies)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("index,energy,error,method\n")
            for i, en in enumerate(self.energies):
                err = self.errors[i] if self.errors is not None else float("nan")
                fh.write(f"{i},{en:.17g},{err:.17g},{self.method}\n")


@dataclass(frozen=True)
class BasisSpec:
    """A truncatable product basis.

    family: 'ho1d', 'pw1d', 'ho2d', 'pw2d' or 'mixed2d'.  The mixed family
    uses the box along x and the oscillator along y.
    """

    family: str
    omega_x: float = 1.0
    omega_y: float = 1.0
    a_x: float = 1.0
    a_y: float = 1.0

    @staticmethod
    def ho1d(omega=1.0):
        return BasisSpec("ho1d", omega_x=omega)

    @staticmethod
    def pw1d(a=1.0):
        return BasisSpec("pw1d", a_x=a)

    @staticmethod
    def ho2d(omega_x=1.0, omega_y=None):
        return BasisSpec("ho2d", omega_x=omega_x, omega_y=omega_x if omega_y is None else omega_y)

    @staticmethod
    def pw2d(a_x=1.0, a_y=None):
        return BasisSpec("pw2d", a_x=a_x, a_y=a_x if a_y is None else a_y)

    @staticmethod
    def mixed2d(a=1.0, omega=1.0):
        return BasisSpec("mixed2d", a_x=a, omega_y=omega)

    @property
    def is_2d(self):
        return self.family in ("ho2d", "pw2d", "mixed2d")

    def axis_kinds(self):
        return {
            "ho1d": ("ho",),
            "pw1d": ("pw",),
            "ho2d": ("ho", "ho"),
            "pw2d": ("pw", "pw"),
            "mixed2d": ("pw", "ho"),
        }[self.family]

    def axis_param(self, axis):
        kind = self.axis_kinds()[axis]
        if kind == "ho":
            return self.omega_x if axis == 0 else self.omega_y
        return self.a_x if axis == 0 else self.a_y


def _axis_energy(kind, param, idx):
    if kind == "ho":
        return param * (idx + 0.5)
    return 0.5 * (math.pi * idx / (2.0 * param)) ** 2


def _axis_start(kind):
    return 0 if kind == "ho" else 1


def truncation_order(basis, n, dim=None):
    """Deterministic index ordering by unperturbed energy, ties lexicographic."""
    kinds = basis.axis_kinds()
    if dim is not None and dim != len(kinds):
        raise DomainError("dimension does not match the basis family")
    if len(kinds) == 1:
        start = _axis_start(kinds[0])
        return [(k,) for k in range(start, start + n)]
    params = (basis.axis_param(0), basis.axis_param(1))
    starts = (_axis_start(kinds[0]), _axis_start(kinds[1]))

    def energy(ix, iy):
        return _axis_energy(kinds[0], params[0], ix) + _axis_energy(kinds[1], params[1], iy)

    heap = [(energy(*starts), starts)]
    seen = {starts}
    out = []
    while heap and len(out) < n:
        _, idx = heapq.heappop(heap)
        out.append(idx)
        for nxt in ((idx[0] + 1, idx[1]), (idx[0], idx[1] + 1)):
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (energy(*nxt), nxt))
    return out


@dataclass
class HamiltonianMatrix:
    """Assembled symmetric matrix, dense or lower-band storage."""

    n: int
    storage: str
    array: np.ndarray
    basis: BasisSpec | None = None
    indices: list | None = None
    meta: dict = field(default_factory=dict)

    @property
    def bandwidth(self):
        if self.storage == "banded":
            return self.array.shape[0] - 1
        return self.n - 1

    def to_dense(self):
        if self.storage == "dense":
            return self.array
        bw = self.array.shape[0] - 1
        dense = np.zeros((self.n, self.n))
        for t in range(bw + 1):
            for j in range(self.n - t):
                dense[j + t, j] = self.array[t, j]
                dense[j, j + t] = self.array[t, j]
        return dense


# -- one-dimensional building blocks ---------------------------------------


def _kinetic_ho(n, omega):
    t = np.zeros((n, n))
    idx = np.arange(n)
    t[idx, idx] = omega * (2 * idx + 1) / 4.0
    for m in range(n - 2):
        val = -omega * math.sqrt((m + 1) * (m + 2)) / 4.0
        t[m, m + 2] = val
        t[m + 2, m] = val
    return t


def _kinetic_pw(n, a):
    k = np.arange(1, n + 1)
    return np.diag(0.5 * (math.pi * k / (2.0 * a)) ** 2)


def _position_power_ho(n, omega, power):
    """Exact <m|x^p|n> in the oscillator basis (computed in an enlarged space)."""
    big = n + power
    x = np.zeros((big, big))
    for m in range(big - 1):
        x[m, m + 1] = x[m + 1, m] = math.sqrt((m + 1) / (2.0 * omega))
    out = np.linalg.matrix_power(x, power) if power > 0 else np.eye(big)
    return out[:n, :n]


@lru_cache(maxsize=None)
def _int_tj_cos(j, m):
    """Exact integral of t^j cos(m pi t) over [0, 1]."""
    if m == 0:
        return 1.0 / (j + 1)
    if j == 0:
        return 0.0
    return -(j / (m * math.pi)) * _int_tj_sin(j - 1, m)


@lru_cache(maxsize=None)
def _int_tj_sin(j, m):
    """Exact integral of t^j sin(m pi t) over [0, 1]."""
    if m == 0:
        return 0.0
    cosm = -1.0 if m % 2 else 1.0
    if j == 0:
        return (1.0 - cosm) / (m * math.pi)
    return -cosm / (m * math.pi) + (j / (m * math.pi)) * _int_tj_cos(j - 1, m)


def _cos_moment_poly(power, a, m):
    """Exact integral of x^p cos(m pi t) dt with x = a (2t - 1), t in [0, 1]."""
    acc = 0.0
    for j in range(power + 1):
        acc += (
            math.comb(power, j)
            * (2.0 ** j)
            * ((-1.0) ** (power - j))
            * _int_tj_cos(j, m)
        )
    return (a ** power) * acc


def _position_power_pw(n, a, power):
    """Exact <k'|x^p|k''> in the box basis via cosine moments."""
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            kp, kq = i + 1, j + 1
            val = _cos_moment_poly(power, a, kq - kp) - _cos_moment_poly(power, a, kq + kp)
            out[i, j] = out[j, i] = val
    return out


def _ho_basis_table(n, nodes):
    """Rows: orthonormal oscillator functions (with Gaussian factor) at nodes."""
    table = np.empty((n, nodes.size))
    p0 = np.pi ** -0.25 * np.exp(-0.5 * nodes ** 2)
    table[0] = p0
    if n > 1:
        table[1] = math.sqrt(2.0) * nodes * p0
    for k in range(2, n):
        table[k] = math.sqrt(2.0 / k) * nodes * table[k - 1] - math.sqrt((k - 1.0) / k) * table[k - 2]
    return table


def _potential_matrix_ho_quadrature(u_fn, n, omega, order):
    nodes, weights = specfun.gauss_hermite(order)
    table = _ho_basis_table(n, nodes)
    gram = (table * weights) @ table.T
    dev = np.max(np.abs(gram - np.eye(n)))
    if dev > 1e-8:
        raise QuadratureError(
            f"Gram deviation {dev:.2e} at quadrature order {order}; increase the order"
        )
    u_vals = u_fn(nodes / math.sqrt(omega))
    return (table * (weights * u_vals)) @ table.T


def _potential_matrix_pw_dct(u_fn, n, a, oversample=2):
    """Cosine-transform matrix elements for a sampled potential on [-a, a]."""
    m_cos = 2 * n + 1
    samples = oversample * 2 * m_cos
    t = np.linspace(0.0, 1.0, samples + 1)
    u = u_fn(a * (2.0 * t - 1.0))
    c = dct(u, type=1) / (2.0 * samples)  # c[m] ~ integral of U cos(m pi t) dt
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            kp, kq = i + 1, j + 1
            out[i, j] = out[j, i] = c[kq - kp] - c[kq + kp]
    return out


def _axis_operators(kind, param, n_axis, powers, potential=None, quadrature_order=None):
    """Kinetic matrix and x^p operator matrices for one axis."""
    if kind == "ho":
        kin = _kinetic_ho(n_axis, param)
        ops = {p: _position_power_ho(n_axis, param, p) for p in powers}
    else:
        kin = _kinetic_pw(n_axis, param)
        ops = {p: _position_power_pw(n_axis, param, p) for p in powers}
    return kin, ops


def assemble(potential, basis, n, quadrature_order=None):
    """Hamiltonian matrix of -(1/2) Laplacian + potential in the basis.

    Polynomial potentials get analytic matrix elements (banded storage for
    the 1D oscillator basis); other 1D potentials are integrated by
    Gauss-Hermite quadrature (oscillator basis) or cosine transforms (box
    basis).  2D assembly requires a Polynomial2D potential.
    """
    if n < 1:
        raise DomainError("basis size must be positive")
    if not basis.is_2d:
        return _assemble_1d(potential, basis, n, quadrature_order)
    if not isinstance(potential, Polynomial2D):
        raise DomainError("2D assembly requires a polynomial potential")
    return _assemble_2d(potential, basis, n)


def _assemble_1d(potential, basis, n, quadrature_order):
    kind = basis.axis_kinds()[0]
    param = basis.axis_param(0)
    if isinstance(potential, Polynomial1D):
        powers = sorted(potential.coeffs)
        kin, ops = _axis_operators(kind, param, n, powers)
        h = kin.copy()
        for p, c in potential.coeffs.items():
            h += c * ops[p]
        h = 0.5 * (h + h.T)
        if kind == "ho":
            bw = max(2, potential.degree)
            ab = np.zeros((bw + 1, n))
            for t in range(bw + 1):
                ab[t, : n - t] = np.diagonal(h, -t)
            beyond = np.abs(h - HamiltonianMatrix(n, "banded", ab).to_dense()).max()
            if beyond > 1e-12 * max(1.0, np.abs(h).max()):
                raise NumericalError("banded extraction lost matrix content")
            return HamiltonianMatrix(n, "banded", ab, basis, meta={"dense_equiv": h})
        return HamiltonianMatrix(n, "dense", h, basis)
    # numeric potential
    u_fn = potential.evaluate if hasattr(potential, "evaluate") else potential
    if kind == "ho":
        order = quadrature_order or max(2 * n + 32, n + 64)
        v = _potential_matrix_ho_quadrature(u_fn, n, param, order)
        h = _kinetic_ho(n, param) + v
    else:
        v = _potential_matrix_pw_dct(u_fn, n, param)
        h = _kinetic_pw(n, param) + v
    asym = np.abs(h - h.T).max() / max(1.0, np.abs(h).max())
    if asym > 1e-10:
        raise NumericalError(f"assembled matrix asymmetric at {asym:.2e}")
    return HamiltonianMatrix(n, "dense", 0.5 * (h + h.T), basis)


def _assemble_2d(potential, basis, n):
    kinds = basis.axis_kinds()
    params = (basis.axis_param(0), basis.axis_param(1))
    indices = truncation_order(basis, n)
    ix = np.array([i[0] for i in indices])
    iy = np.array([i[1] for i in indices])
    n_x = int(ix.max()) + 1
    n_y = int(iy.max()) + 1
    powers_x = sorted({p for p, _ in potential.coeffs})
    powers_y = sorted({q for _, q in potential.coeffs})
    kin_x, ops_x = _axis_operators(kinds[0], params[0], n_x + max(powers_x, default=0), powers_x)
    kin_y, ops_y = _axis_operators(kinds[1], params[1], n_y + max(powers_y, default=0), powers_y)
    off_x = _axis_start(kinds[0])
    off_y = _axis_start(kinds[1])
    jx = ix - off_x
    jy = iy - off_y
    h = np.zeros((n, n))
    # kinetic: T_x (x) 1 + 1 (x) T_y restricted to the index list
    h += kin_x[np.ix_(jx, jx)] * (jy[:, None] == jy[None, :])
    h += kin_y[np.ix_(jy, jy)] * (jx[:, None] == jx[None, :])
    eye_x = np.eye(kin_x.shape[0])
    eye_y = np.eye(kin_y.shape[0])
    for (p, q), c in potential.coeffs.items():
        mx = ops_x[p] if p else eye_x
        my = ops_y[q] if q else eye_y
        h += c * mx[np.ix_(jx, jx)] * my[np.ix_(jy, jy)]
    h = 0.5 * (h + h.T)
    return HamiltonianMatrix(n, "dense", h, basis, indices=indices)


def eigen_lowest(matrix, n_levels, vectors=True):
    """Lowest eigenvalues (and vectors) of an assembled Hamiltonian."""
    if n_levels > matrix.n:
        raise DomainError("more levels requested than the matrix dimension")
    try:
        if matrix.storage == "banded" and not vectors:
            w = kernels.banded_eigvals(matrix.array)
            return SpectrumResult(w[:n_levels], method="md-banded")
        dense = matrix.to_dense()
        w, v = kernels.symmetric_eigh(dense, vectors=vectors)
    except kernels.EigenConvergenceError as exc:
        raise NumericalError(str(exc)) from exc
    tag = "md-dense" if matrix.storage == "dense" else "md-banded-dense"
    vec = v[:, :n_levels] if vectors else None
    return SpectrumResult(w[:n_levels].copy(), method=tag, vectors=vec)


def grid_eigen_1d(potential, grid, n_levels, vectors=False, tol=None):
    """Richardson-extrapolated three-point finite-difference levels.

    Solves on the grid and on the doubled grid, returns the extrapolated
    levels with error estimates |E_h - E_h/2| / 3.  Eigenvectors, when
    requested, are inverse-iteration vectors on the input grid.
    """
    u_fn = potential.evaluate if hasattr(potential, "evaluate") else potential

    def solve(g):
        x = g.nodes()
        d = 1.0 / g.dx ** 2 + np.asarray(u_fn(x), dtype=float)
        e = np.full(g.n_points - 1, -0.5 / g.dx ** 2)
        try:
            w = kernels.tql(d, e, None)
        except kernels.EigenConvergenceError as exc:
            raise NumericalError(str(exc)) from exc
        return w, d, e

    if n_levels > grid.n_points // 4:
        raise DomainError("too many levels for this grid")
    w1, d1, e1 = solve(grid)
    fine = grid.with_doubled_resolution()
    w2, _, _ = solve(fine)
    w1 = w1[:n_levels]
    w2 = w2[:n_levels]
    energies = (4.0 * w2 - w1) / 3.0
    errors = np.abs(w2 - w1) / 3.0
    flagged = tol is not None and bool(np.any(errors > tol))
    vecs = None
    if vectors:
        rng = np.random.default_rng(1234)
        cols = []
        for k in range(n_levels):
            v = kernels.tridiag_eigenvector(d1, e1, w1[k], rng.standard_normal(grid.n_points))
            cols.append(v / math.sqrt(grid.dx))
        vecs = np.column_stack(cols)
    return SpectrumResult(
        energies,
        errors=errors,
        method="fd-richardson",
        vectors=vecs,
        meta={"grid": grid, "flagged": flagged, "raw_coarse": w1, "raw_fine": w2},
    )


def basis_values_on_axis(kind, param, indices, x):
    """Values of 1D basis functions (rows) at the points x."""
    x = np.asarray(x, dtype=float)
    if kind == "ho":
        n_max = max(indices) + 1
        u = math.sqrt(param) * x
        table = _ho_basis_table(n_max, u) * param ** 0.25
        return table[np.asarray(indices)]
    a = param
    out = np.zeros((len(indices), x.size))
    inside = np.abs(x) <= a
    for row, k in enumerate(indices):
        out[row, inside] = np.sin(k * math.pi * (x[inside] + a) / (2.0 * a)) / math.sqrt(a)
    return out


def synthesize_state_2d(matrix, coeffs, grid2d):
    """Real-space wavefunction from basis coefficients of a 2D assembly."""
    if matrix.indices is None or matrix.basis is None:
        raise DomainError("matrix does not carry 2D basis metadata")
    basis = matrix.basis
    kinds = basis.axis_kinds()
    idx_x = sorted({i[0] for i in matrix.indices})
    idx_y = sorted({i[1] for i in matrix.indices})
    bx = basis_values_on_axis(kinds[0], basis.axis_param(0), idx_x, grid2d.x.nodes())
    by = basis_values_on_axis(kinds[1], basis.axis_param(1), idx_y, grid2d.y.nodes())
    pos_x = {k: i for i, k in enumerate(idx_x)}
    pos_y = {k: i for i, k in enumerate(idx_y)}
    c2 = np.zeros((len(idx_x), len(idx_y)))
    for coeff, (kx, ky) in zip(coeffs, matrix.indices):
        c2[pos_x[kx], pos_y[ky]] = coeff
    values = by.T @ (c2.T @ bx)
    return WaveFunction(grid2d, values.astype(complex))
