"""Uniform spatial grids, wavefunction storage and grid-level observables.

Units are hbar = m = 1 throughout the package.  Grids are half-open
uniform lattices with a power-of-two node count (FFT efficiency), and the
momentum lattice follows the periodic convention k_j = 2*pi*j'/(N*dx) with
j' the signed FFT frequency index.  Quadrature is the plain Riemann sum on
the lattice, which is what keeps the spatial and momentum norms in exact
Parseval agreement.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError, NormalizationError, NumericalError

MIN_EXPONENT = 4
MAX_EXPONENT = 24


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    """Half-open uniform lattice [x_min, x_max) with 2**k nodes."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise DomainError("x_max must exceed x_min")
        if not _is_power_of_two(self.n_points) or self.n_points < 2 ** MIN_EXPONENT:
            raise DomainError("n_points must be a power of two >= 16")

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.n_points

    @property
    def volume_element(self):
        return self.dx

    @property
    def shape(self):
        return (self.n_points,)

    def nodes(self):
        return self.x_min + self.dx * np.arange(self.n_points)

    def momenta(self):
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def with_doubled_resolution(self):
        return Grid1D(self.x_min, self.x_max, 2 * self.n_points)


def make_grid(x_min, x_max, k):
    """Grid with 2**k nodes on [x_min, x_max); 4 <= k <= 24."""
    if not (MIN_EXPONENT <= int(k) <= MAX_EXPONENT):
        raise DomainError(f"grid exponent k={k} outside [{MIN_EXPONENT}, {MAX_EXPONENT}]")
    if not x_max > x_min:
        raise DomainError("x_max must exceed x_min")
    return Grid1D(float(x_min), float(x_max), 2 ** int(k))


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid; values are stored row-major with x the fastest axis."""

    x: Grid1D
    y: Grid1D

    @property
    def shape(self):
        return (self.y.n_points, self.x.n_points)

    @property
    def volume_element(self):
        return self.x.dx * self.y.dx

    def meshes(self):
        return np.meshgrid(self.x.nodes(), self.y.nodes(), indexing="xy")

    def momenta_squared(self):
        kx = self.x.momenta()
        ky = self.y.momenta()
        return kx[None, :] ** 2 + ky[:, None] ** 2


def make_grid_2d(x_min, x_max, kx, y_min=None, y_max=None, ky=None):
    y_min = x_min if y_min is None else y_min
    y_max = x_max if y_max is None else y_max
    ky = kx if ky is None else ky
    return Grid2D(make_grid(x_min, x_max, kx), make_grid(y_min, y_max, ky))


class WaveFunction:
    """Complex amplitudes sampled on a Grid1D or Grid2D."""

    def __init__(self, grid, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != grid.shape:
            raise GridMismatchError(
                f"value shape {values.shape} does not match grid shape {grid.shape}"
            )
        self.grid = grid
        self.values = values

    @property
    def is_2d(self):
        return isinstance(self.grid, Grid2D)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.volume_element))

    def normalized(self):
        n = self.norm()
        if n == 0.0:
            raise NormalizationError("cannot normalize the zero state")
        return WaveFunction(self.grid, self.values / n)

    def copy(self):
        return WaveFunction(self.grid, self.values.copy())

    def real_part_dominant(self, tol=1e-8):
        scale = np.max(np.abs(self.values))
        return scale == 0.0 or np.max(np.abs(self.values.imag)) <= tol * scale

    def realified(self):
        """Rotate the global phase to make the state real; error if impossible."""
        idx = np.unravel_index(np.argmax(np.abs(self.values)), self.values.shape)
        phase = self.values[idx] / abs(self.values[idx])
        rotated = WaveFunction(self.grid, self.values / phase)
        if not rotated.real_part_dominant(tol=1e-6):
            raise NormalizationError("state has a non-trivial complex structure")
        return WaveFunction(self.grid, rotated.values.real.astype(complex))


def inner_product(a, b):
    """<a|b> as the Riemann sum conj(a_j) b_j times the cell volume."""
    if a.grid != b.grid:
        raise GridMismatchError("wavefunctions live on different grids")
    return complex(np.sum(np.conj(a.values) * b.values) * a.grid.volume_element)


def momentum_representation(wf):
    """FFT coefficients scaled so the momentum-grid norm equals the spatial one."""
    if wf.is_2d:
        vol = wf.grid.volume_element
        n = wf.values.size
        vals = np.fft.fft2(wf.values) * vol / np.sqrt(2.0 * np.pi) ** 2
    else:
        vol = wf.grid.volume_element
        n = wf.values.size
        vals = np.fft.fft(wf.values) * vol / np.sqrt(2.0 * np.pi)
    return vals


def momentum_norm(wf):
    vals = momentum_representation(wf)
    if wf.is_2d:
        dk = (2.0 * np.pi) ** 2 / (wf.values.size * wf.grid.volume_element)
    else:
        dk = 2.0 * np.pi / (wf.values.size * wf.grid.volume_element)
    return float(np.sqrt(np.sum(np.abs(vals) ** 2) * dk))


def apply_kinetic(wf):
    """Spectral kinetic operator -(1/2) Laplacian applied to the state."""
    if wf.is_2d:
        k2 = wf.grid.momenta_squared()
        out = np.fft.ifft2(0.5 * k2 * np.fft.fft2(wf.values))
    else:
        k2 = wf.grid.momenta() ** 2
        out = np.fft.ifft(0.5 * k2 * np.fft.fft(wf.values))
    return WaveFunction(wf.grid, out)


def apply_hamiltonian(wf, potential_values):
    out = apply_kinetic(wf)
    return WaveFunction(wf.grid, out.values + potential_values * wf.values)


def potential_on_grid(potential, grid):
    """Sample a Potential (or accept a ready array) on the grid."""
    if hasattr(potential, "on_grid"):
        return potential.on_grid(grid)
    arr = np.asarray(potential, dtype=float)
    if arr.shape != grid.shape:
        raise GridMismatchError("potential samples do not match the grid")
    return arr


def expectation_energy(wf, potential, norm_tol=1e-8):
    """<psi|H|psi> with the kinetic term evaluated spectrally."""
    if abs(wf.norm() - 1.0) > norm_tol:
        raise NormalizationError(f"state norm {wf.norm():.12f} != 1")
    u = potential_on_grid(potential, wf.grid)
    h_psi = apply_hamiltonian(wf, u)
    raw = inner_product(wf, h_psi)
    if abs(raw.imag) >= 1e-10:
        raise NumericalError(f"energy expectation has imaginary part {raw.imag:.3e}")
    return float(raw.real)


def residual_norm(wf, potential, energy):
    """||(H - E) psi|| / ||psi|| with H applied spectrally."""
    u = potential_on_grid(potential, wf.grid)
    h_psi = apply_hamiltonian(wf, u)
    res = WaveFunction(wf.grid, h_psi.values - energy * wf.values)
    return res.norm() / wf.norm()


_MAGIC = b"MWF1"


def save_wavefunction(wf, path):
    """Binary dump: little-endian header (dims, per-axis n/x_min/x_max), re/im payload."""
    axes = (wf.grid.x, wf.grid.y) if wf.is_2d else (wf.grid,)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(axes)))
        for ax in axes:
            fh.write(struct.pack("<Qdd", ax.n_points, ax.x_min, ax.x_max))
        flat = np.ascontiguousarray(wf.values).ravel()
        payload = np.empty(2 * flat.size)
        payload[0::2] = flat.real
        payload[1::2] = flat.imag
        fh.write(payload.astype("<f8").tobytes())


def load_wavefunction(path):
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise DomainError("not a wavefunction dump")
        (dims,) = struct.unpack("<I", fh.read(4))
        axes = []
        for _ in range(dims):
            n, x_min, x_max = struct.unpack("<Qdd", fh.read(24))
            axes.append(Grid1D(x_min, x_max, int(n)))
        if dims == 1:
            grid = axes[0]
        elif dims == 2:
            grid = Grid2D(axes[0], axes[1])
        else:
            raise DomainError(f"unsupported dimensionality {dims}")
        payload = np.frombuffer(fh.read(), dtype="<f8")
        values = payload[0::2] + 1j * payload[1::2]
        return WaveFunction(grid, values.reshape(grid.shape))


def wavefunction_to_csv(wf, path):
    """CSV rows: node coordinates, Re psi, Im psi (row-major, x fastest)."""
    with open(path, "w") as fh:
        if wf.is_2d:
            fh.write("x,y,re,im\n")
            xs, ys = wf.grid.meshes()
            for yv, xv, val in zip(ys.ravel(), xs.ravel(), wf.values.ravel()):
                fh.write(f"{xv:.17g},{yv:.17g},{val.real:.17g},{val.imag:.17g}\n")
        else:
            fh.write("x,re,im\n")
            for xv, val in zip(wf.grid.nodes(), wf.values):
                fh.write(f"{xv:.17g},{val.real:.17g},{val.imag:.17g}\n")
