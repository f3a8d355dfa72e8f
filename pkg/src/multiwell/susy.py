"""Exactly solvable double- and triple-well models seeded by the oscillator.

A factorization energy eps < omega/2 below the oscillator ground state,
together with a nodeless combination of the two parabolic-cylinder
solutions at that energy, generates an isospectral partner potential whose
spectrum is the oscillator ladder plus the added level.  Repeating the step
with a second energy eps1 < eps adds another level and yields triple
wells.  Everything is built on the dimensionless coordinate xi = sqrt(omega) x,
in which the reference Hamiltonian is -(1/2) d^2/dxi^2 + xi^2/2 with levels
n + 1/2 and the added levels sit at eps/omega; physical energies are the
dimensionless ones times omega.

All second logarithmic derivatives entering the potentials are evaluated
analytically through the cylinder-function ODE (never by finite
differences of samples), so the potentials are smooth to machine precision
for the downstream diagonalization cross-checks.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionError, DomainError
from .grid import Grid1D, WaveFunction, make_grid
from .potentials import CallablePotential1D
from .specfun import CylinderEvaluator, cylinder_pair_xi, gamma, ho_eigenstate_pair

_MIN_LEVEL_SPLIT = 1e-12


@dataclass(frozen=True)
class SusyParams:
    """Parameter tuple of a solvable family.

    eps_bar is the reduced factorization energy eps/omega (< 1/2), lam the
    positive weight of the growing-at-plus-infinity branch in the auxiliary
    combination.  Triple wells add eps1_bar < eps_bar with weight lam1.
    The cylinder orders are nu = eps_bar - 1/2 and mu = eps1_bar - 1/2.
    """

    eps_bar: float
    lam: float = 1.0
    eps1_bar: float = None
    lam1: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not self.eps_bar < 0.5:
            raise DomainError("factorization energy must lie below the ground state")
        if not self.lam > 0:
            raise DomainError("weight lam must be positive (lam = 1 + lambda > 0)")
        if self.omega <= 0:
            raise DomainError("omega must be positive")
        if self.eps1_bar is not None:
            if not self.lam1 > 0:
                raise DomainError("weight lam1 must be positive")
            if not self.eps1_bar < self.eps_bar:
                raise DomainError("second factorization energy must lie below the first")
            if self.eps_bar - self.eps1_bar <= _MIN_LEVEL_SPLIT:
                raise ConstructionError(
                    "degenerate factorization energies: normalization constants vanish"
                )

    @property
    def nu(self):
        return self.eps_bar - 0.5

    @property
    def mu(self):
        if self.eps1_bar is None:
            raise DomainError("no second factorization energy in this parameter set")
        return self.eps1_bar - 0.5

    @property
    def is_triple(self):
        return self.eps1_bar is not None

    @staticmethod
    def from_orders(nu, lam=1.0, mu=None, lam1=1.0, omega=1.0):
        """Build from the cylinder orders nu (and mu) instead of energies."""
        return SusyParams(
            eps_bar=nu + 0.5,
            lam=lam,
            eps1_bar=None if mu is None else mu + 0.5,
            lam1=lam1,
            omega=omega,
        )


def default_grid():
    """|xi| <= 25 with 2^12 nodes; cylinder tails underflow beyond."""
    return make_grid(-25.0, 25.0, 12)


def _check_finite(name, *arrays):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise ConstructionError(f"{name} overflowed; reduce the grid extent")


def _require_positive(name, xi, values):
    if np.all(values > 0.0):
        return
    idx = int(np.argmax(values <= 0.0))
    raise ConstructionError(f"{name} loses positivity at xi = {xi[idx]:.6g}")


def superpotential(params, grid=None):
    """Sampled superpotential -(1/2) ln(phi_lam / phi_sym) on the grid."""
    grid = grid or default_grid()
    xi = grid.nodes()
    phi1, _, phi2, _ = cylinder_pair_xi(params.nu, xi)
    phi_sym = phi1 + phi2
    phi_lam = phi1 + params.lam * phi2
    _check_finite("auxiliary solution", phi_sym, phi_lam)
    _require_positive("symmetric auxiliary combination", xi, phi_sym)
    _require_positive("weighted auxiliary combination", xi, phi_lam)
    return -0.5 * np.log(phi_lam / phi_sym)


@dataclass
class SolvableModel:
    """A constructed isospectral model on its working grid.

    levels are dimensionless (units of omega) in the unshifted oscillator
    reference: the added level(s) first, then n + 1/2.  states rows are
    grid-normalized wavefunctions in xi.
    """

    params: SusyParams
    grid: Grid1D
    potential: np.ndarray
    potential_fn: object
    levels: np.ndarray
    states: np.ndarray
    family_tag: str
    norm_info: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_levels(self):
        return len(self.levels)

    @property
    def n_added(self):
        return 2 if self.params.is_triple else 1

    def state(self, level_index):
        return susy_state(self, level_index)

    def energies(self, shifted=False, physical=False):
        """Levels; shifted counts energy from the lowest added level."""
        lv = self.levels.copy()
        if shifted:
            lv = lv - self.levels[0]
        if physical:
            lv = lv * self.params.omega
        return lv

    def as_potential(self):
        """PotentialSpec handle for the diagonalization/propagation modules."""
        return CallablePotential1D(
            self.potential_fn, kind="susy-numeric", params={"family": self.family_tag}
        )

    def physical_x(self):
        return self.grid.nodes() / math.sqrt(self.params.omega)


def _normalize_state(xi, dx, raw, analytic_constant=None, tol=1e-6):
    """Grid-normalize; optionally check the analytic normalization constant."""
    nrm2 = float(np.sum(raw ** 2) * dx)
    if nrm2 <= 0 or not math.isfinite(nrm2):
        raise ConstructionError("state normalization integral is not finite")
    measured = 1.0 / math.sqrt(nrm2)
    if analytic_constant is not None:
        deviation = abs(nrm2 * analytic_constant ** 2 - 1.0)
        if deviation > tol:
            # a wrong integral at the analytic constant means lost tail mass
            raise ConstructionError(
                f"normalization integral off by {deviation:.2e}; grid too small"
            )
    state = raw / math.sqrt(nrm2)
    k = int(np.argmax(np.abs(state) > 1e-3 * np.max(np.abs(state))))
    if state[k] < 0:
        state = -state
    return state, measured


def _count_sign_changes(values):
    scale = np.max(np.abs(values))
    live = np.abs(values) > 1e-9 * scale
    sig = np.sign(values[live])
    return int(np.sum(sig[1:] * sig[:-1] < 0))


def build_double_well(params, grid=None, n_ho_states=8):
    """Isospectral double-well model: oscillator ladder plus one added level.

    The symmetric family is the lam = 1 member; other weights deform the
    well asymmetrically while leaving the spectrum untouched
    (form-invariance).
    """
    if params.is_triple:
        raise DomainError("parameter set carries a second level; use build_triple_well")
    if n_ho_states < 1:
        raise DomainError("need at least one oscillator state")
    grid = grid or default_grid()
    xi = grid.nodes()
    dx = grid.dx
    nu = params.nu
    eps = params.eps_bar
    lam = params.lam
    evaluator = CylinderEvaluator(nu)

    def aux(pts):
        phi1, dphi1, phi2, dphi2 = cylinder_pair_xi(nu, pts, evaluator)
        return phi1 + lam * phi2, dphi1 + lam * dphi2, (phi1, dphi1, phi2, dphi2)

    phi_lam, dphi_lam, parts = aux(xi)
    phi_sym = parts[0] + parts[2]
    _check_finite("auxiliary solution", phi_lam, dphi_lam)
    _require_positive("symmetric auxiliary combination", xi, phi_sym)
    _require_positive("weighted auxiliary combination", xi, phi_lam)

    def potential_fn(pts):
        pts = np.asarray(pts, dtype=float)
        phi, dphi, _ = aux(pts)
        if np.any(phi <= 0):
            raise ConstructionError("auxiliary combination not positive at request")
        return 2.0 * eps - 0.5 * pts ** 2 + (dphi / phi) ** 2

    potential = 2.0 * eps - 0.5 * xi ** 2 + (dphi_lam / phi_lam) ** 2
    _check_finite("partner potential", potential)

    levels = np.concatenate(([eps], np.arange(n_ho_states) + 0.5))
    states = np.empty((len(levels), xi.size))
    norm_info = {}

    n_added_const = math.sqrt(2.0 * lam * math.sqrt(math.pi) / gamma(-nu))
    states[0], measured = _normalize_state(xi, dx, 1.0 / phi_lam, n_added_const)
    norm_info["added"] = {
        "analytic": n_added_const,
        "measured": measured,
        "ratio": measured / n_added_const,
    }
    partner_norms = []
    for n in range(n_ho_states):
        h, hp = ho_eigenstate_pair(n, xi)
        wr = h * dphi_lam - hp * phi_lam
        raw = wr / (math.sqrt(2.0 * (levels[n + 1] - eps)) * phi_lam)
        partner_norms.append(float(np.sqrt(np.sum(raw ** 2) * dx)))
        states[n + 1], _ = _normalize_state(xi, dx, raw)
    norm_info["mapped_ho_norms"] = partner_norms

    tag = "double_sym" if lam == 1.0 else "double_asym"
    diag = {
        "asymptotic_delta_plus": float(
            (parts[0][-1] - parts[2][-1]) / (parts[0][-1] + parts[2][-1])
        ),
        "node_counts": [_count_sign_changes(s) for s in states],
    }
    return SolvableModel(params, grid, potential, potential_fn, levels, states, tag, norm_info, diag)


def symmetric_double_potential(params, grid=None):
    """The lam-independent symmetric-family potential (dedicated route).

    Built from the literal sum of the two cylinder branches; used to check
    form-invariance against the weighted construction at lam = 1.
    """
    grid = grid or default_grid()
    xi = grid.nodes()
    phi1, dphi1, phi2, dphi2 = cylinder_pair_xi(params.nu, xi)
    phi = phi1 + phi2
    dphi = dphi1 + dphi2
    _require_positive("symmetric auxiliary combination", xi, phi)
    return 2.0 * params.eps_bar - 0.5 * xi ** 2 + (dphi / phi) ** 2


def build_triple_well(params, grid=None, n_ho_states=8):
    """Two-step construction: oscillator ladder plus levels at eps and eps1.

    The second-step auxiliary solution is the ratio of the 2x2 Wronskian
    of phi_a = D_mu(sqrt2 xi) - lam1 D_mu(-sqrt2 xi) (note the minus sign:
    it is what gives the pair the correct decaying/growing asymptotics)
    and phi_b = D_nu(sqrt2 xi) + lam D_nu(-sqrt2 xi).  That Wronskian must
    be nodeless on the grid.
    """
    if not params.is_triple:
        raise DomainError("parameter set has no second level; use build_double_well")
    if n_ho_states < 1:
        raise DomainError("need at least one oscillator state")
    grid = grid or default_grid()
    xi = grid.nodes()
    dx = grid.dx
    nu, mu = params.nu, params.mu
    eps, eps1 = params.eps_bar, params.eps1_bar
    lam, lam1 = params.lam, params.lam1
    ev_b = CylinderEvaluator(nu)
    ev_a = CylinderEvaluator(mu)

    def aux(pts):
        p1b, d1b, p2b, d2b = cylinder_pair_xi(nu, pts, ev_b)
        p1a, d1a, p2a, d2a = cylinder_pair_xi(mu, pts, ev_a)
        phi_b = p1b + lam * p2b
        dphi_b = d1b + lam * d2b
        phi_a = p1a - lam1 * p2a
        dphi_a = d1a - lam1 * d2a
        w2 = phi_a * dphi_b - dphi_a * phi_b
        return phi_a, dphi_a, phi_b, dphi_b, w2, (p1a, d1a, p2a, d2a)

    phi_a, dphi_a, phi_b, dphi_b, w2, parts_a = aux(xi)
    _check_finite("step-two Wronskian", w2)
    sign = np.sign(w2[0])
    if sign == 0 or np.any(np.sign(w2) != sign):
        bad = int(np.argmax(np.sign(w2) != sign))
        raise ConstructionError(
            f"step-two Wronskian has a node at xi = {xi[bad]:.6g}; "
            "parameters do not give a solvable model"
        )
    w2 = sign * w2  # work with the positive branch
    dphi_a_s, phi_a_s = sign * dphi_a, sign * phi_a  # keep w2 expressions consistent

    de = eps1 - eps  # negative
    w2p = 2.0 * de * phi_a_s * phi_b
    w2pp = 2.0 * de * (dphi_a_s * phi_b + phi_a_s * dphi_b)
    potential = 0.5 * xi ** 2 - (w2pp / w2 - (w2p / w2) ** 2)
    _check_finite("partner potential", potential)

    def potential_fn(pts):
        pts = np.asarray(pts, dtype=float)
        pa, dpa, pb, dpb, ww, _ = aux(pts)
        if np.any(ww == 0):
            raise ConstructionError("step-two Wronskian vanishes at request")
        wwp = 2.0 * de * pa * pb
        wwpp = 2.0 * de * (dpa * pb + pa * dpb)
        return 0.5 * pts ** 2 - (wwpp / ww - (wwp / ww) ** 2)

    # asymptotics of the two step-two branches (decay on opposite sides)
    p1a, d1a, p2a, d2a = parts_a
    chi1 = (p1a * dphi_b - d1a * phi_b) / phi_b
    chi2 = -(p2a * dphi_b - d2a * phi_b) / phi_b
    for name, chi, edge in (("chi1", chi1, -1), ("chi2", chi2, 0)):
        rel = abs(chi[edge]) / np.max(np.abs(chi))
        if rel > 1e-8:
            raise ConstructionError(f"{name} fails its decay asymptotics ({rel:.2e})")

    levels = np.concatenate(([eps1, eps], np.arange(n_ho_states) + 0.5))
    states = np.empty((len(levels), xi.size))
    norm_info = {}

    const_ground = math.sqrt(lam1 * 4.0 * (nu - mu) * math.sqrt(math.pi) / gamma(-mu))
    states[0], measured0 = _normalize_state(xi, dx, phi_b / w2, const_ground)
    norm_info["added_ground"] = {
        "analytic": const_ground,
        "measured": measured0,
        "ratio": measured0 / const_ground,
    }
    const_first = math.sqrt(lam * 4.0 * (nu - mu) * math.sqrt(math.pi) / gamma(-nu))
    states[1], measured1 = _normalize_state(xi, dx, phi_a_s / w2, const_first)
    norm_info["added_first"] = {
        "analytic": const_first,
        "measured": measured1,
        "ratio": measured1 / const_first,
    }

    partner_norms = []
    for n in range(n_ho_states):
        en = n + 0.5
        h, hp = ho_eigenstate_pair(n, xi)
        w_bh = phi_b * hp - dphi_b * h
        num = 2.0 * (eps - eps1) * phi_a_s * w_bh - 2.0 * (en - eps) * h * w2
        raw = num / (w2 * math.sqrt(4.0 * (en - eps) * (en - eps1)))
        partner_norms.append(float(np.sqrt(np.sum(raw ** 2) * dx)))
        states[n + 2], _ = _normalize_state(xi, dx, raw)
    norm_info["mapped_ho_norms"] = partner_norms

    tag = "triple_sym" if (lam == 1.0 and lam1 == 1.0) else "triple_asym"
    diag = {"node_counts": [_count_sign_changes(s) for s in states]}
    return SolvableModel(params, grid, potential, potential_fn, levels, states, tag, norm_info, diag)


def build_model(params, grid=None, n_ho_states=8):
    """Dispatch on the parameter set."""
    if params.is_triple:
        return build_triple_well(params, grid, n_ho_states)
    return build_double_well(params, grid, n_ho_states)


def susy_state(model, level_index):
    """Grid wavefunction of the level_index-th level (ascending)."""
    if not 0 <= level_index < model.n_levels:
        raise DomainError(f"level index {level_index} outside 0..{model.n_levels - 1}")
    return WaveFunction(model.grid, model.states[level_index].astype(complex))


def potential_extrema(model):
    """Interior minima and maxima of the sampled potential (xi positions)."""
    u = model.potential
    xi = model.grid.nodes()
    interior = slice(1, -1)
    du_sign = np.sign(np.diff(u))
    minima, maxima = [], []
    for i in range(1, len(u) - 1):
        if u[i] < u[i - 1] and u[i] <= u[i + 1]:
            minima.append(xi[i])
        elif u[i] > u[i - 1] and u[i] >= u[i + 1]:
            maxima.append(xi[i])
    return np.array(minima), np.array(maxima)


def region_probability(model, level_index, lo, hi):
    """Probability of the level's state inside [lo, hi]."""
    xi = model.grid.nodes()
    mask = (xi >= lo) & (xi <= hi)
    return float(np.sum(model.states[level_index][mask] ** 2) * model.grid.dx)


def central_well_bounds(model):
    """Bounds of the central well: the innermost barrier maxima around 0."""
    _, maxima = potential_extrema(model)
    left = maxima[maxima < 0]
    right = maxima[maxima > 0]
    if len(left) == 0 or len(right) == 0:
        raise DomainError("potential has no barrier pair around the origin")
    return float(left.max()), float(right.min())


def export_model_csv(model, path):
    """Columns: xi, U, then one column per stored state."""
    xi = model.grid.nodes()
    with open(path, "w") as fh:
        cols = ",".join(f"psi{i}" for i in range(model.n_levels))
        fh.write(f"xi,U,{cols}\n")
        for j in range(xi.size):
            vals = ",".join(f"{model.states[i][j]:.17g}" for i in range(model.n_levels))
            fh.write(f"{xi[j]:.17g},{model.potential[j]:.17g},{vals}\n")


def export_model_record(model, path):
    """Text record of parameters, levels and normalization constants."""
    p = model.params
    record = {
        "family": model.family_tag,
        "omega": p.omega,
        "eps_bar": p.eps_bar,
        "lam": p.lam,
        "eps1_bar": p.eps1_bar,
        "lam1": p.lam1 if p.is_triple else None,
        "nu": p.nu,
        "mu": p.mu if p.is_triple else None,
        "levels_dimensionless": [float(v) for v in model.levels],
        "levels_physical": [float(v * p.omega) for v in model.levels],
        "grid": {
            "xi_min": model.grid.x_min,
            "xi_max": model.grid.x_max,
            "n_points": model.grid.n_points,
        },
        "normalization": {
            k: v for k, v in model.norm_info.items() if k != "mapped_ho_norms"
        },
        "node_counts": model.diagnostics.get("node_counts"),
    }
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
