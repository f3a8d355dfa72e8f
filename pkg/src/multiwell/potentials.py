"""Parametric potential library with analytic derivatives.

Covers the oscillator, the quadrupole-oscillation (QO) surface, the lower
umbilic D5 family, general sparse polynomials in one or two coordinates,
and numeric one-dimensional potentials supplied as callables.  A Newton
critical-point finder classifies minima/saddles/maxima from the Hessian.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError


class Potential:
    """Base class: evaluation, gradient and Hessian callables."""

    dim = None
    kind = "generic"

    def evaluate(self, *coords):
        raise NotImplementedError

    def gradient(self, *coords):
        raise NotImplementedError

    def hessian(self, *coords):
        raise NotImplementedError

    def on_grid(self, grid):
        """Sample on a Grid1D/Grid2D (x fastest, row-major)."""
        if self.dim == 1:
            return self.evaluate(grid.nodes())
        xs, ys = grid.meshes()
        return self.evaluate(xs, ys)

    def __call__(self, *coords):
        return self.evaluate(*coords)


class Polynomial1D(Potential):
    """Sparse polynomial sum(c_p x^p); derivatives are exact."""

    dim = 1

    def __init__(self, coeffs, kind="polynomial1d", params=None):
        self.coeffs = {int(p): float(c) for p, c in coeffs.items() if c != 0.0}
        self.kind = kind
        self.params = params or {}

    @property
    def degree(self):
        return max(self.coeffs, default=0)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for p, c in self.coeffs.items():
            out += c * x ** p
        return out

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for p, c in self.coeffs.items():
            if p >= 1:
                out += c * p * x ** (p - 1)
        return out

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for p, c in self.coeffs.items():
            if p >= 2:
                out += c * p * (p - 1) * x ** (p - 2)
        return out


class Polynomial2D(Potential):
    """Sparse polynomial sum(c_pq x^p y^q); derivatives are exact."""

    dim = 2

    def __init__(self, coeffs, kind="polynomial2d", params=None):
        self.coeffs = {
            (int(p), int(q)): float(c) for (p, q), c in coeffs.items() if c != 0.0
        }
        self.kind = kind
        self.params = params or {}

    @property
    def degree(self):
        return max((p + q for p, q in self.coeffs), default=0)

    def scaled(self, factor, kind=None):
        return Polynomial2D(
            {k: factor * c for k, c in self.coeffs.items()},
            kind=kind or self.kind,
            params=dict(self.params, scale=factor),
        )

    def _poly(self, x, y, shift_p=0, shift_q=0, mult=None):
        out = np.zeros(np.broadcast(x, y).shape)
        for (p, q), c in self.coeffs.items():
            pp, qq = p - shift_p, q - shift_q
            if pp < 0 or qq < 0:
                continue
            m = c * (mult(p, q) if mult else 1.0)
            out += m * x ** pp * y ** qq
        return out

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self._poly(x, y)

    def gradient(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gx = self._poly(x, y, 1, 0, lambda p, q: p)
        gy = self._poly(x, y, 0, 1, lambda p, q: q)
        return np.stack([gx, gy], axis=-1)

    def hessian(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        hxx = self._poly(x, y, 2, 0, lambda p, q: p * (p - 1))
        hyy = self._poly(x, y, 0, 2, lambda p, q: q * (q - 1))
        hxy = self._poly(x, y, 1, 1, lambda p, q: p * q)
        out = np.empty(np.broadcast(x, y).shape + (2, 2))
        out[..., 0, 0] = hxx
        out[..., 0, 1] = hxy
        out[..., 1, 0] = hxy
        out[..., 1, 1] = hyy
        return out


class CallablePotential1D(Potential):
    """1D potential from callables (value, optional derivative pair)."""

    dim = 1

    def __init__(self, fn, dfn=None, d2fn=None, kind="numeric1d", params=None):
        self._fn = fn
        self._dfn = dfn
        self._d2fn = d2fn
        self.kind = kind
        self.params = params or {}

    def evaluate(self, x):
        return self._fn(np.asarray(x, dtype=float))

    def gradient(self, x):
        if self._dfn is None:
            raise DomainError("no analytic gradient available")
        return self._dfn(np.asarray(x, dtype=float))

    def hessian(self, x):
        if self._d2fn is None:
            raise DomainError("no analytic hessian available")
        return self._d2fn(np.asarray(x, dtype=float))


def harmonic_1d(omega=1.0):
    if omega <= 0:
        raise DomainError("omega must be positive")
    return Polynomial1D({2: 0.5 * omega ** 2}, kind="ho1d", params={"omega": omega})


def harmonic_2d(omega_x=1.0, omega_y=None):
    omega_y = omega_x if omega_y is None else omega_y
    if omega_x <= 0 or omega_y <= 0:
        raise DomainError("frequencies must be positive")
    return Polynomial2D(
        {(2, 0): 0.5 * omega_x ** 2, (0, 2): 0.5 * omega_y ** 2},
        kind="ho2d",
        params={"omega_x": omega_x, "omega_y": omega_y},
    )


def qo_potential(w):
    """Quadrupole-oscillation surface (x^2+y^2)/(2W) + x y^2 - x^3/3 + (x^2+y^2)^2."""
    if w <= 0:
        raise DomainError("shape parameter W must be positive")
    return Polynomial2D(
        {
            (2, 0): 0.5 / w,
            (0, 2): 0.5 / w,
            (1, 2): 1.0,
            (3, 0): -1.0 / 3.0,
            (4, 0): 1.0,
            (0, 4): 1.0,
            (2, 2): 2.0,
        },
        kind="qo",
        params={"W": w},
    )


def d5_potential(a=2.0, b=1.0):
    """Lower umbilic family x^4/4 + x y^2 + a y^2 - b x^2 (a=2, b=1 default).

    Under the Maxwell condition b = a^2/4 all saddles are degenerate in
    energy.
    """
    return Polynomial2D(
        {(4, 0): 0.25, (1, 2): 1.0, (0, 2): float(a), (2, 0): -float(b)},
        kind="d5",
        params={"a": float(a), "b": float(b)},
    )


def eval_qo(x, y, w):
    """QO potential value at a point."""
    return float(qo_potential(w).evaluate(np.float64(x), np.float64(y)))


def eval_d5(x, y):
    """D5 potential value at a point (a=2, b=1)."""
    return float(d5_potential().evaluate(np.float64(x), np.float64(y)))


@dataclass(frozen=True)
class CriticalPoint:
    position: tuple
    energy: float
    classification: str
    hessian_eigenvalues: tuple


@dataclass
class CriticalPointSet:
    """Search result: the points plus how many seeds failed to converge."""

    points: list
    unconverged_seeds: int = 0

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def of_class(self, classification):
        return [p for p in self.points if p.classification == classification]


def _classify(eigs, degenerate_tol=1e-8):
    if np.any(np.abs(eigs) < degenerate_tol):
        return "degenerate"
    if np.all(eigs > 0):
        return "minimum"
    if np.all(eigs < 0):
        return "maximum"
    return "saddle"


def find_critical_points(
    potential,
    box,
    seeds_per_axis=21,
    max_iter=200,
    grad_tol=1e-12,
    dedup_tol=1e-6,
):
    """Newton search for gradient zeros from a regular seed lattice.

    box is ((x_lo, x_hi), (y_lo, y_hi)) or a single symmetric bound.
    Non-converging seeds are counted, not raised.
    """
    if potential.dim != 2:
        raise DomainError("critical-point search implemented for 2D potentials")
    if np.isscalar(box):
        box = ((-box, box), (-box, box))
    (x_lo, x_hi), (y_lo, y_hi) = box
    xs = np.linspace(x_lo, x_hi, seeds_per_axis)
    ys = np.linspace(y_lo, y_hi, seeds_per_axis)
    found = []
    unconverged = 0
    span = max(x_hi - x_lo, y_hi - y_lo)
    for x0 in xs:
        for y0 in ys:
            pos = np.array([x0, y0])
            ok = False
            for _ in range(max_iter):
                g = potential.gradient(pos[0], pos[1])
                if np.linalg.norm(g) < grad_tol:
                    ok = True
                    break
                h = potential.hessian(pos[0], pos[1])
                try:
                    step = np.linalg.solve(h, g)
                except np.linalg.LinAlgError:
                    break
                if np.linalg.norm(step) > span:  # runaway step
                    step *= span / np.linalg.norm(step)
                pos = pos - step
                if not np.all(np.isfinite(pos)) or np.max(np.abs(pos)) > 100 * span:
                    break
            if not ok:
                unconverged += 1
                continue
            if not (x_lo - 1e-9 <= pos[0] <= x_hi + 1e-9 and y_lo - 1e-9 <= pos[1] <= y_hi + 1e-9):
                continue
            if any(np.hypot(pos[0] - p.position[0], pos[1] - p.position[1]) < dedup_tol for p in found):
                continue
            h = potential.hessian(pos[0], pos[1])
            eigs = np.linalg.eigvalsh(h)
            found.append(
                CriticalPoint(
                    position=(float(pos[0]), float(pos[1])),
                    energy=float(potential.evaluate(pos[0], pos[1])),
                    classification=_classify(eigs),
                    hessian_eigenvalues=tuple(float(v) for v in eigs),
                )
            )
    found.sort(key=lambda p: (p.energy, p.position))
    return CriticalPointSet(found, unconverged)


def critical_points_to_csv(result, path):
    with open(path, "w") as fh:
        fh.write("x,y,E,class\n")
        for p in result:
            fh.write(f"{p.position[0]:.17g},{p.position[1]:.17g},{p.energy:.17g},{p.classification}\n")


def potential_from_config(text):
    """Build a potential from key-value text.

    Recognized keys: kind (qo|d5|ho1d|ho2d|polynomial1d|polynomial2d),
    the kind's parameters (W, a, b, omega, omega_x, omega_y), and for
    polynomials repeated 'coeff = p q c' (2D) or 'coeff = p c' (1D) lines.
    """
    kind = None
    params = {}
    coeffs = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {ln}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "kind":
            kind = value.lower()
        elif key == "coeff":
            parts = value.split()
            try:
                coeffs.append(tuple(float(v) for v in parts))
            except ValueError as exc:
                raise DomainError(f"config line {ln}: bad coefficient {value!r}") from exc
        else:
            try:
                params[key] = float(value)
            except ValueError as exc:
                raise DomainError(f"config line {ln}: bad value for {key!r}") from exc
    if kind is None:
        raise DomainError("config missing 'kind'")
    if kind == "qo":
        return qo_potential(params.get("W", params.get("w", 18.0)))
    if kind == "d5":
        return d5_potential(params.get("a", 2.0), params.get("b", 1.0))
    if kind == "ho1d":
        return harmonic_1d(params.get("omega", 1.0))
    if kind == "ho2d":
        return harmonic_2d(params.get("omega_x", params.get("omega", 1.0)), params.get("omega_y"))
    if kind == "polynomial2d":
        return Polynomial2D({(int(p), int(q)): c for p, q, c in coeffs})
    if kind == "polynomial1d":
        return Polynomial1D({int(p): c for p, c in coeffs})
    raise DomainError(f"unknown potential kind {kind!r}")
