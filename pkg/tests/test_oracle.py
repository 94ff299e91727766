from heat_enclosure.errors import QuadratureConvergenceError
from heat_enclosure.geometry import analytic_constant, build_cone, simplex_constant
from heat_enclosure.oracle import (
    calibration_report,
    finite_tau_constant,
    moment,
    reference_quadrature,
    unit_density,
    visibility_limit_numeric,
)
from heat_enclosure.space_time import SpaceTimePoint, make_probe, make_z
from heat_enclosure.variables import VisibilityFit
import numpy as np
import pytest

TARGET = SpaceTimePoint([0.5], 0.5)


@pytest.fixture(scope="module")
def triangle():
    return build_cone(TARGET, make_probe(1.0, [1]), 0.1)


@pytest.fixture(scope="module")
def fit(triangle):
    return visibility_limit_numeric(triangle, taus=[50.0, 100.0, 200.0, 400.0])


def test_visibility_exponent_and_constant(fit):
    assert abs(fit.mu_fit - 3) < 0.05
    assert fit.mu_used == 3
    assert fit.residual < 0.05
    expected = -(1 + 1j) / 4
    assert abs(fit.C_fit - expected) / abs(expected) < 1e-2


def test_fit_table(fit):
    df = fit.to_dataframe()
    assert list(df.columns) == ["tau", "re_moment", "im_moment", "re_scaled", "im_scaled"]
    assert len(df) == 4
    np.testing.assert_allclose(df.tau, [50, 100, 200, 400])


def test_calibration_report(triangle, fit):
    report = calibration_report(triangle, fit)
    assert len(report) == 1
    row = report.iloc[0]
    assert row.mu_analytic == 3
    assert abs(row.ratio_fit_analytic - 1) < 1e-2
    np.testing.assert_almost_equal(row.re_C_triangle, -0.05)
    np.testing.assert_almost_equal(row.ratio_analytic_triangle, 5.0)
    assert "ratio_analytic_simplex" not in report


def test_calibration_report_for_a_tetrahedron():
    cone = build_cone(SpaceTimePoint([0.5, 0.5], 0.5), make_probe(2.0, [0.6, 0.8], [-0.8, 0.6]), 0.1)
    simplex = simplex_constant(cone).C
    fit = VisibilityFit(mu_fit=3.01, C_fit=1.02 * simplex, per_tau=[(100.0, simplex)], residual=0.0, mu_used=3.0)
    row = calibration_report(cone, fit).iloc[0]
    np.testing.assert_almost_equal(row.re_C_simplex, simplex.real)
    np.testing.assert_almost_equal(row.im_C_simplex, simplex.imag)
    np.testing.assert_allclose(row.ratio_analytic_simplex, 1.0, rtol=1e-12)
    np.testing.assert_allclose(row.ratio_fit_simplex, 1.02, rtol=1e-12)
    assert "re_C_triangle" not in row


def test_moment_is_linear_in_the_density(triangle):
    z = make_z(triangle.probe, 20.0)

    def ramp(points):
        return points[:, 0] - points[:, 1]

    combined = moment(triangle, z, lambda p: 2 * unit_density(p) + 3 * ramp(p))
    separate = 2 * moment(triangle, z) + 3 * moment(triangle, z, ramp)
    np.testing.assert_allclose(combined, separate, rtol=1e-9)


def test_finite_tau_constant_matches_the_moment(triangle):
    z = make_z(triangle.probe, 20.0)
    np.testing.assert_allclose(finite_tau_constant(triangle, z, 3), 20.0**3 * moment(triangle, z), rtol=1e-8)


def test_moment_needs_refinement_levels(triangle):
    with pytest.raises(QuadratureConvergenceError):
        moment(triangle, make_z(triangle.probe, 20.0), max_levels=0)


def test_zero_density_gives_an_undefined_fit(triangle):
    fit = visibility_limit_numeric(triangle, lambda p: np.zeros(len(p)), taus=[2.0, 3.0, 4.0, 5.0])
    assert np.isnan(fit.mu_fit)
    assert np.isnan(fit.C_fit)
    assert all(m == 0 for m in fit.moments)


def test_density_vanishing_at_the_vertex(triangle):
    def rise(points):
        return points[:, 1] - TARGET.t

    fit = visibility_limit_numeric(triangle, rise, taus=[20.0, 40.0, 80.0, 160.0])
    assert fit.mu_fit > 3.5
    assert np.isnan(fit.C_fit)


def test_fit_needs_four_increasing_taus(triangle):
    with pytest.raises(ValueError):
        visibility_limit_numeric(triangle, taus=[50.0, 100.0, 200.0])
    with pytest.raises(ValueError):
        visibility_limit_numeric(triangle, taus=[50.0, 100.0, 80.0, 200.0])


def test_closed_form_for_c_two():
    cone = build_cone(TARGET, make_probe(2.0, [1]), 0.1)
    np.testing.assert_almost_equal(analytic_constant(cone).C, -0.03125 * (1 + 1j))


def test_reference_quadrature_intervals():
    value, error = reference_quadrature(lambda x: np.exp(x**2), (0.0, 1.0))
    np.testing.assert_almost_equal(value, 1.4626517459, decimal=9)
    assert error < 1e-11
    value, __ = reference_quadrature(np.ones_like, (-1.0, 1.0))
    np.testing.assert_almost_equal(value, 2.0)
    value, __ = reference_quadrature(lambda x: np.cos(100 * x), (0.0, 1.0))
    np.testing.assert_almost_equal(value, np.sin(100) / 100, decimal=11)


def test_reference_quadrature_regions(triangle):
    value, __ = reference_quadrature(lambda p: p[:, 0] * p[:, 1], [(0.0, 1.0), (0.0, 2.0)])
    np.testing.assert_almost_equal(value, 1.0)
    value, __ = reference_quadrature(lambda p: np.ones(len(p)), triangle)
    np.testing.assert_almost_equal(value, triangle.volume())
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    value, __ = reference_quadrature(lambda p: np.exp(p[:, 0]), vertices)
    np.testing.assert_almost_equal(value, np.e - 2)


def test_reference_quadrature_reports_failure():
    with pytest.raises(QuadratureConvergenceError):
        reference_quadrature(lambda x: 1 / np.sqrt(x), (0.0, 1.0), max_levels=2)
