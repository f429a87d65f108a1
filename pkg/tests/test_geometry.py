import pickle

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from src.common.exceptions import ConfigError, DegenerateMetric
from src.core.settings import NUMERICS, NumericsSettings
from src.geometry import (
    SurfaceChart,
    SystemConfig,
    ThetaBounds,
    build_system,
    check_hypotheses,
    christoffel,
    christoffel_exact,
    lorentz_force,
    preset,
    sectional_curvature,
    theta_norm_bounds,
)
from src.geometry.expressions import parse_expression


def test_appendix_metric_and_form(appendix):
    q = np.array([[0.0, 0.3], [1.0, 0.0], [-2.0, 0.7]])
    beta = 1.0 + np.exp(q[:, 0])
    g = appendix.chart.metric(q)
    assert_allclose(g[:, 0, 0], 1.0)
    assert_allclose(g[:, 0, 1], 0.0)
    assert_allclose(g[:, 1, 1], beta**2)
    assert_allclose(appendix.theta(q), np.column_stack([np.zeros(3), beta]))
    assert_allclose(appendix.field_strength(q), np.exp(q[:, 0]))


def test_appendix_curvature_is_negative(appendix):
    xs = np.linspace(-5.0, 5.0, 11)
    q = np.column_stack([xs, np.zeros_like(xs)])
    expected = -np.exp(xs) / (1.0 + np.exp(xs))
    assert_allclose(sectional_curvature(appendix.chart, q), expected, rtol=1e-10)


def test_warped_christoffel_matches_symbolic(appendix):
    q = np.array([[0.4, 0.1], [-1.3, 0.5]])
    assert_allclose(christoffel(appendix.chart, q), christoffel_exact(appendix.chart, q), atol=1e-12)


def test_finite_difference_christoffel_on_general_chart():
    chart = SurfaceChart.from_strings("2 + sin(2*pi*y)/2", "x/(4*(1 + x**2))", "1 + x**2")
    q = np.array([[0.3, 0.2], [-0.7, 0.9]])
    assert not chart.warped
    assert_allclose(christoffel(chart, q), christoffel_exact(chart, q), atol=1e-6)


def test_lorentz_force_is_skew(systems):
    rng = np.random.default_rng(7)
    for system in systems.values():
        q = np.column_stack([rng.uniform(-2, 2, 20), rng.uniform(0, 1, 20)])
        v = rng.standard_normal((20, 2))
        force = lorentz_force(system, q, v)
        g = system.chart.metric(q)
        assert_allclose(np.einsum("ni,nij,nj->n", force, g, v), 0.0, atol=1e-12)


def test_lorentz_force_matches_field(appendix):
    # <Y u, w> = -d theta(u, w) with d theta = e^x dx ^ dy
    q = np.array([0.0, 0.0])
    force = lorentz_force(appendix, q, np.array([1.0, 0.0]))
    assert_allclose(force, [0.0, -0.25])
    assert_allclose(force @ appendix.chart.metric(q) @ np.array([0.0, 1.0]), -1.0)


def test_flat_has_no_force(flat):
    v = np.array([0.3, -1.2])
    assert_allclose(lorentz_force(flat, [0.5, 0.5], v), 0.0)


def test_bump_profile(bump):
    assert_allclose(bump.theta([0.0, 0.0]), [0.0, 0.5])
    assert_allclose(bump.theta([[1.0, 0.0], [1.5, 0.0], [-3.0, 0.2]])[:, 1], 0.0)
    # even bump: no field at the crest
    assert_allclose(bump.field_strength([0.0, 0.0]), 0.0, atol=1e-15)


def test_energy_and_hamiltonian_agree(appendix):
    q = np.array([0.2, 0.4])
    v = np.array([0.3, -0.7])
    p = appendix.chart.metric(q) @ v + appendix.theta(q)
    assert_allclose(appendix.hamiltonian(q, p), appendix.energy(q, v))
    assert_allclose(appendix.lagrangian(q, v), appendix.energy(q, v) + appendix.theta(q) @ v)


def test_reversed_field(bump):
    reversed_ = bump.with_reversed_field()
    assert_allclose(reversed_.theta([0.0, 0.0]), -bump.theta([0.0, 0.0]))
    assert reversed_.identity_hash != bump.identity_hash


def test_identity_hash_is_stable():
    assert preset("bump-cylinder").identity_hash == preset("bump-cylinder").identity_hash
    assert preset("bump-cylinder").identity_hash != preset("bump-cylinder", amplitude=0.4).identity_hash


def test_symmetry_flags(systems):
    assert all(s.is_symmetric for s in systems.values())
    twisted = build_system(SystemConfig(g11="1", g22="1", theta2="sin(2*pi*y)"))
    assert not twisted.is_symmetric


def test_systems_pickle(bump):
    clone = pickle.loads(pickle.dumps(bump))
    assert clone.identity_hash == bump.identity_hash
    assert_allclose(clone.theta([0.2, 0.0]), bump.theta([0.2, 0.0]))


def test_degenerate_metric_is_reported():
    system = build_system(SystemConfig(g11="1", g22="x"))
    with pytest.raises(DegenerateMetric):
        lorentz_force(system, [-1.0, 0.0], [1.0, 0.0])


@pytest.mark.parametrize("text", ["exp(z)", "foo(x)", "x +* 2"])
def test_bad_expressions(text):
    with pytest.raises(ConfigError):
        parse_expression(text, "g22")


def test_config_rejects_mixed_preset():
    with pytest.raises(ValidationError):
        SystemConfig(preset="flat-cylinder", g11="1", g22="1")
    with pytest.raises(ValidationError):
        SystemConfig(g11="1")


def test_hypotheses_on_bump(bump):
    report = check_hypotheses(bump, (-10.0, 10.0))
    assert report.metric_positive
    assert report.theta_bounded
    assert report.field_decays
    assert report.curvature_nonpositive_at_ends
    assert report.bounds.sup_theta == pytest.approx(0.5, abs=1e-3)


def test_curvature_on_conformal_chart():
    # g = exp(2 phi) (dx^2 + dy^2) with phi = 0.1 x^2 + 0.3 sin(2 pi y): K = -exp(-2 phi) laplacian(phi)
    chart = SurfaceChart.from_strings("exp(0.2*x**2 + 0.6*sin(2*pi*y))", "0", "exp(0.2*x**2 + 0.6*sin(2*pi*y))")
    assert not chart.warped
    q = np.array([[0.3, 0.2], [-0.7, 0.9], [1.1, 0.45], [0.0, 0.75]])
    phi = 0.1 * q[:, 0] ** 2 + 0.3 * np.sin(2 * np.pi * q[:, 1])
    laplacian = 0.2 - 1.2 * np.pi**2 * np.sin(2 * np.pi * q[:, 1])
    assert_allclose(sectional_curvature(chart, q), -np.exp(-2 * phi) * laplacian, rtol=1e-6)


def test_theta_norm_bounds(appendix, flat, bump):
    # |beta dy| is 1 in the metric diag(1, beta^2)
    bounds = theta_norm_bounds(appendix, (-5.0, 5.0), 101)
    assert bounds.sup_theta == pytest.approx(1.0, abs=1e-12)
    assert bounds.sup_dtheta == pytest.approx(np.exp(5.0) / (1.0 + np.exp(5.0)))

    assert theta_norm_bounds(flat, (-3.0, 3.0), 51) == ThetaBounds(sup_theta=0.0, sup_dtheta=0.0, sup_grad_dtheta=0.0)
    assert theta_norm_bounds(bump, (-2.0, 2.0), 401).sup_theta == pytest.approx(0.5)


def test_chart_step_follows_numerics_settings(monkeypatch):
    monkeypatch.setattr(NUMERICS, "h_geo", 1e-4)
    assert SurfaceChart.from_strings("1", "0", "1 + x**2").h_geo == 1e-4
    monkeypatch.undo()
    assert SurfaceChart.from_strings("1", "0", "1").h_geo == NumericsSettings().h_geo
