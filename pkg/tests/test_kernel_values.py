from heat_enclosure.kernel import (
    eval_G_z,
    eval_K_z,
    eval_K_z_exterior,
    eval_K_z_split,
    eval_w_z,
    grad_K_z,
    kernel_samples,
)
from heat_enclosure.errors import KernelConfigError, KernelSingularityError, QuadratureConvergenceError
from heat_enclosure.kernel.radial import radial_integrals
from heat_enclosure.space_time import SpaceTimePoint, complex_frequency, make_probe, make_z
from heat_enclosure.variables import KernelConfig
import numpy as np
import pytest
from scipy.special import erf, erfi

Z_I = complex_frequency([1j])


def test_w_z_at_the_origin():
    np.testing.assert_almost_equal(eval_w_z(Z_I, SpaceTimePoint([0.0], 0.0)).value.to_complex(), -1 / np.pi)
    z = complex_frequency([2j, 0])
    np.testing.assert_almost_equal(eval_w_z(z, SpaceTimePoint([0.0, 0.0], 0.0)).value.to_complex(), -1 / np.pi)


def test_w_z_backward_time():
    value = eval_w_z(Z_I, SpaceTimePoint([0.0], -1.0)).value.to_complex()
    np.testing.assert_allclose(value, -erf(1) / (2 * np.sqrt(np.pi)), rtol=1e-10)


def test_K_z_forward_time():
    value = eval_K_z(Z_I, SpaceTimePoint([0.0], 1.0)).value.to_complex()
    np.testing.assert_allclose(value, -erfi(1) / (2 * np.sqrt(np.pi)), rtol=1e-10)


def test_K_z_at_time_zero():
    value = eval_K_z(Z_I, SpaceTimePoint([1.0], 0.0)).value.to_complex()
    np.testing.assert_allclose(value, -np.sin(1) / np.pi, rtol=1e-10)


def test_G_z_removes_the_phase():
    K = eval_K_z(Z_I, SpaceTimePoint([0.0], 1.0)).value.to_complex()
    G = eval_G_z(Z_I, SpaceTimePoint([0.0], 1.0)).value.to_complex()
    np.testing.assert_allclose(G, K * np.exp(-1.0), rtol=1e-12)


def test_gradient_vanishes_at_the_symmetry_point():
    grad = grad_K_z(Z_I, SpaceTimePoint([0.0], 1.0)).to_complex()
    assert grad.shape == (1,)
    assert abs(grad[0]) < 1e-12


def test_singular_point():
    with pytest.raises(KernelSingularityError):
        eval_K_z(Z_I, SpaceTimePoint([0.0], 0.0))
    with pytest.raises(KernelSingularityError):
        eval_K_z(complex_frequency([1j, 0]), SpaceTimePoint([0.0, 0.0], 0.0))


def test_arrays_of_points():
    z = make_z(make_probe(1.0, [1]), 2.0)
    x = np.array([0.3, -0.2, 0.5])
    t = np.array([0.4, -0.6, -3.0])
    values = eval_K_z(z, (x, t)).value.to_complex()
    single = [eval_K_z(z, SpaceTimePoint([xi], ti)).value.to_complex() for xi, ti in zip(x, t)]
    assert values.shape == (3,)
    np.testing.assert_allclose(values, single, rtol=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_gradient_against_finite_differences(n):
    if n == 1:
        z = make_z(make_probe(1.0, [1]), 2.0)
    else:
        z = make_z(make_probe(1.0, [0.6, 0.8], [-0.8, 0.6]), 2.0)
    rng = np.random.default_rng(5)
    x = rng.uniform(-0.8, 0.8, (6, n))
    t = np.array([0.4, 0.9, -0.3, -0.7, 0.2, -1.5])
    grad = grad_K_z(z, (x, t)).to_complex().real
    for k in range(n):
        h = np.zeros(n)
        h[k] = 1e-5
        plus = eval_K_z(z, (x + h, t)).value.to_complex().real
        minus = eval_K_z(z, (x - h, t)).value.to_complex().real
        fd = (plus - minus) / 2e-5
        scale = np.maximum(np.abs(fd), np.abs(eval_K_z(z, (x, t)).value.to_complex()))
        np.testing.assert_array_less(np.abs(grad[:, k] - fd) / scale, 1e-4)


def test_heat_split_matches_exterior_form():
    z = make_z(make_probe(2.0, [1]), 3.0)
    x = np.array([-0.5, 0.1, 0.7])
    t = -np.array([0.2, 1.0, 1.8]) / z.b_norm**2
    split = eval_K_z_split(z, (x, t)).value.to_complex()
    exterior = eval_K_z_exterior(z, (x, t)).value.to_complex()
    np.testing.assert_allclose(split, exterior, rtol=1e-8)
    with pytest.raises(ValueError):
        eval_K_z_split(z, (x, -t))


def test_decay_on_the_good_side():
    """|K_z| at (-0.3, 0.2) stays below exp(-0.8 tau) |b|/pi for c=2"""
    probe = make_probe(2.0, [1])
    p = (np.array([-0.3]), np.array([0.2]))
    for tau in (5.0, 10.0, 20.0):
        z = make_z(probe, tau)
        log_mag = eval_K_z(z, p).value.log_mag[0]
        assert log_mag <= -0.8 * tau + np.log(z.b_norm / np.pi) + 1e-9


def test_samples_are_finite_for_large_tau():
    z = make_z(make_probe(2.0, [1]), 400.0)
    x = np.array([[0.5], [-0.5]])
    t = np.array([-0.5, 0.5])
    samples = kernel_samples(z, x, t, gradient=True)
    assert np.all(np.isfinite(samples.log_scale))
    assert np.all(np.isfinite(samples.value))
    assert np.all(np.isfinite(samples.gradient))


def test_kernel_config():
    with pytest.raises(KernelConfigError):
        KernelConfig(quad_tol=-1.0)
    with pytest.raises(KernelConfigError):
        KernelConfig(quad_tol=1e-10, exterior_cutoff_eps=1e-9)


def test_capped_radial_panels_raise():
    capped = KernelConfig(max_panels=1)
    eta, alpha = np.array([200.0]), np.array([0.0])
    lower, upper = np.array([0.0]), np.array([1.0])
    with pytest.raises(QuadratureConvergenceError):
        radial_integrals(1, eta, alpha, lower, upper, capped)
    value, __, error = radial_integrals(1, eta, alpha, lower, upper, KernelConfig())
    np.testing.assert_allclose(value, 2 * np.sin(200.0) / 200.0, rtol=1e-9)
    assert error[0] < 1e-10

    z = make_z(make_probe(2.0, [1]), 16.0)
    with pytest.raises(QuadratureConvergenceError):
        eval_K_z(z, SpaceTimePoint([0.5], 0.5), capped)


def test_exterior_form_is_the_default_for_negative_time():
    z = make_z(make_probe(2.0, [1]), 3.0)
    x = np.array([[-0.5], [0.1], [0.7]])
    t = -np.array([0.2, 0.6, 0.9]) / z.b_norm**2
    default = kernel_samples(z, x, t).phased().to_complex()
    exterior = eval_K_z_exterior(z, (x[:, 0], t)).value.to_complex()
    np.testing.assert_allclose(default, exterior, rtol=1e-12)

    split = kernel_samples(z, x, t, split=True).phased().to_complex()
    np.testing.assert_allclose(split, eval_K_z_split(z, (x[:, 0], t)).value.to_complex(), rtol=1e-12)
    np.testing.assert_allclose(default, split, rtol=1e-8)


def test_heat_split_takes_over_next_to_time_zero():
    z = make_z(make_probe(1.0, [1]), 2.0)
    x = np.array([[0.4], [-0.7]])
    below = kernel_samples(z, x, np.full(2, -1e-12)).phased().to_complex()
    above = kernel_samples(z, x, np.full(2, 1e-12)).phased().to_complex()
    np.testing.assert_allclose(below, above, rtol=1e-8)
