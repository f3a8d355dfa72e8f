"""Potential library and critical-point finder contracts."""

import numpy as np
import pytest

from multiwell import potentials as pot
from multiwell.errors import DomainError

E_SADDLE_QO18 = 1.0 / 20736.0


def test_eval_qo_origin():
    assert pot.eval_qo(0.0, 0.0, 18.0) == 0.0


def test_eval_qo_saddle_point_value():
    # saddle abscissa 1/12 solves x/W - x^2 + 4x^3 = 0 for W = 18
    assert pot.eval_qo(1.0 / 12.0, 0.0, 18.0) == pytest.approx(E_SADDLE_QO18, abs=1e-18)


def test_eval_qo_peripheral_minimum():
    # peripheral root x = (1 + sqrt(1 - 16/W))/8 = 1/6 at W = 18, energy 0
    assert abs(pot.eval_qo(1.0 / 6.0, 0.0, 18.0)) < 1e-16


def test_eval_qo_requires_positive_w():
    with pytest.raises(DomainError):
        pot.eval_qo(0.1, 0.1, 0.0)


def test_eval_d5_values():
    assert pot.eval_d5(np.sqrt(2.0), 0.0) == pytest.approx(-1.0, abs=1e-14)
    assert pot.eval_d5(-2.0, 2.0) == 0.0
    assert pot.eval_d5(0.0, 0.0) == 0.0


def test_qo_c3_symmetry():
    qo = pot.qo_potential(18.0)
    rng = np.random.default_rng(7)
    pts = rng.uniform(-1.0, 1.0, (50, 2))
    c, s = np.cos(2 * np.pi / 3), np.sin(2 * np.pi / 3)
    rot = pts @ np.array([[c, s], [-s, c]]).T
    dev = np.abs(qo.evaluate(pts[:, 0], pts[:, 1]) - qo.evaluate(rot[:, 0], rot[:, 1]))
    assert dev.max() < 1e-12


def test_d5_even_in_y():
    d5 = pot.d5_potential()
    rng = np.random.default_rng(8)
    pts = rng.uniform(-2.0, 2.0, (40, 2))
    np.testing.assert_array_equal(
        d5.evaluate(pts[:, 0], pts[:, 1]), d5.evaluate(pts[:, 0], -pts[:, 1])
    )


@pytest.mark.parametrize("potential", [pot.qo_potential(18.0), pot.d5_potential(1.7, 0.4)])
def test_gradient_matches_finite_differences(potential):
    rng = np.random.default_rng(11)
    h = 1e-6
    for _ in range(20):
        x, y = rng.uniform(-0.8, 0.8, 2)
        g = potential.gradient(x, y)
        fd_x = (potential.evaluate(x + h, y) - potential.evaluate(x - h, y)) / (2 * h)
        fd_y = (potential.evaluate(x, y + h) - potential.evaluate(x, y - h)) / (2 * h)
        scale = max(1.0, abs(fd_x), abs(fd_y))
        assert abs(g[0] - fd_x) / scale < 1e-6
        assert abs(g[1] - fd_y) / scale < 1e-6


def test_hessian_matches_finite_differences():
    potential = pot.qo_potential(18.0)
    h = 1e-5
    x, y = 0.11, -0.07
    hess = potential.hessian(x, y)
    fd_xx = (potential.evaluate(x + h, y) - 2 * potential.evaluate(x, y) + potential.evaluate(x - h, y)) / h ** 2
    assert abs(hess[0, 0] - fd_xx) < 1e-5


def test_qo18_critical_points():
    res = pot.find_critical_points(pot.qo_potential(18.0), 0.3)
    assert len(res) == 7
    minima = res.of_class("minimum")
    saddles = res.of_class("saddle")
    assert len(minima) == 4
    assert len(saddles) == 3
    for p in minima:
        assert abs(p.energy) < 1e-10
    for p in saddles:
        assert abs(p.energy - E_SADDLE_QO18) < 1e-10
    for p in res:
        g = pot.qo_potential(18.0).gradient(*p.position)
        assert np.linalg.norm(g) < 1e-10


def test_qo13_single_minimum():
    res = pot.find_critical_points(pot.qo_potential(13.0), 0.3)
    assert len(res) == 1
    assert res[0].classification == "minimum"
    assert np.hypot(*res[0].position) < 1e-10


def test_d5_critical_points():
    res = pot.find_critical_points(pot.d5_potential(), ((-3.0, 3.0), (-3.0, 3.0)))
    assert len(res) == 5
    minima = res.of_class("minimum")
    saddles = res.of_class("saddle")
    assert len(minima) == 2 and len(saddles) == 3
    for p in minima:
        assert abs(p.energy + 1.0) < 1e-10
    for p in saddles:
        assert abs(p.energy) < 1e-10


def test_d5_maxwell_condition_degenerate_saddles():
    # b = a^2/4 makes all saddle energies coincide
    a = 1.6
    res = pot.find_critical_points(pot.d5_potential(a, a * a / 4.0), ((-3.5, 3.5), (-3.5, 3.5)))
    saddles = res.of_class("saddle")
    assert len(saddles) == 3
    energies = [p.energy for p in saddles]
    assert max(energies) - min(energies) < 1e-10


def test_critical_point_csv(tmp_path):
    res = pot.find_critical_points(pot.qo_potential(18.0), 0.3)
    path = tmp_path / "cp.csv"
    pot.critical_points_to_csv(res, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,E,class"
    assert len(lines) == 8


def test_potential_from_config_qo():
    p = pot.potential_from_config("kind = qo\nW = 18\n")
    assert p.kind == "qo"
    assert p.evaluate(1 / 12, 0.0) == pytest.approx(E_SADDLE_QO18)


def test_potential_from_config_polynomial():
    p = pot.potential_from_config("kind = polynomial2d\ncoeff = 2 0 0.5\ncoeff = 0 2 0.5\n")
    assert p.evaluate(1.0, 1.0) == pytest.approx(1.0)


def test_potential_from_config_errors():
    with pytest.raises(DomainError):
        pot.potential_from_config("W = 18\n")
    with pytest.raises(DomainError):
        pot.potential_from_config("kind = qo\nW eighteen\n")
