from heat_enclosure.caloric import add_noise, analytic_solution, extract_traces, piece_rule, solve_forward, suggest_panels
from heat_enclosure.space_time import SpaceTimePoint, make_probe
from heat_enclosure.variables import BoundaryPiece, Box, ScenarioGeometry
import numpy as np
import pytest


@pytest.fixture
def geom_1d():
    return ScenarioGeometry(
        domain=Box((0.0,), (1.0,)),
        T=2.0,
        gamma=[BoundaryPiece("x_hi", (0.0, 2.0))],
        U=Box((0.0,), (1.0,)),
        target=SpaceTimePoint([0.5], 0.5),
    )


@pytest.fixture
def geom_2d():
    return ScenarioGeometry(
        domain=Box((0.0, 0.0), (1.0, 1.0)),
        T=1.0,
        gamma=[BoundaryPiece("x_hi", (0.0, 1.0)), BoundaryPiece("y_lo", (0.0, 0.5), span=(0.0, 0.5))],
        U=Box((-1.0, 0.0), (0.5, 1.0)),
        target=SpaceTimePoint([0.5, 0.5], 0.5),
    )


@pytest.fixture
def heat_kernel():
    return analytic_solution("heat_kernel", {"source_x": [0.3], "source_t": -0.5})


def test_traces_1d(geom_1d, heat_kernel):
    data = extract_traces(heat_kernel, geom_1d, rho=0.5, time_panels=4, order=8)
    assert len(data.gamma_t) == 32
    np.testing.assert_array_equal(data.gamma_x, 1.0)
    np.testing.assert_array_equal(data.normal, 1.0)
    np.testing.assert_almost_equal(data.weight.sum(), 2.0)
    np.testing.assert_almost_equal(data.initial_weight.sum(), 1.0)
    np.testing.assert_allclose(data.flux, heat_kernel.gradient(data.gamma_x, data.gamma_t)[:, 0])
    np.testing.assert_allclose(data.h0, data.flux + 0.5 * data.u)
    np.testing.assert_allclose(data.initial_u, heat_kernel.value(data.initial_x, 0.0))


def test_initial_integral(geom_1d):
    field = analytic_solution("mode", {"wavevector": [np.pi]})
    data = extract_traces(field, geom_1d, initial_panels=2, order=16)
    np.testing.assert_almost_equal(data.initial_weight @ data.initial_u, 2 / np.pi)


def test_traces_2d(geom_2d):
    field = analytic_solution("exponential", {"drift": [1.0, -0.5]})
    data = extract_traces(field, geom_2d, time_panels=2, space_panels=2, initial_panels=2, order=4)
    # x_hi: 2 x 2 panels, y_lo: half a face over half the horizon, 1 x 1 panel
    assert len(data.gamma_t) == 64 + 16
    np.testing.assert_almost_equal(data.weight.sum(), 1.0 + 0.25)
    on_y_lo = data.normal[:, 1] == -1
    np.testing.assert_array_equal(data.gamma_x[on_y_lo, 1], 0.0)
    assert data.gamma_t[on_y_lo].max() < 0.5
    np.testing.assert_allclose(data.flux[on_y_lo], 0.5 * data.u[on_y_lo])
    # U is clipped to the domain
    np.testing.assert_almost_equal(data.initial_weight.sum(), 0.5)
    assert data.initial_x[:, 0].min() > 0


def test_piece_rule(geom_2d):
    x, t, w = piece_rule(geom_2d.gamma[1], geom_2d, time_panels=2, space_panels=4, order=4)
    assert x.shape == (len(t), 2)
    np.testing.assert_almost_equal(w @ (x[:, 0] * t), 0.125 * 0.125)


def test_grid_traces_use_one_sided_flux(geom_1d):
    geom = ScenarioGeometry(
        domain=geom_1d.domain,
        T=0.5,
        gamma=[BoundaryPiece("x_hi", (0.0, 0.5))],
        U=geom_1d.U,
        target=SpaceTimePoint([0.5], 0.25),
    )
    solved = solve_forward(
        geom, initial=lambda x: np.sin(np.pi * x), h0=lambda x, t: -np.pi * np.exp(-(np.pi**2) * t), grid=(64, 128)
    )
    data = extract_traces(solved, geom, time_panels=2, order=8)
    np.testing.assert_allclose(data.flux, -np.pi * np.exp(-(np.pi**2) * data.gamma_t), atol=2e-2)


def test_dimension_mismatch(geom_2d, heat_kernel):
    with pytest.raises(ValueError):
        extract_traces(heat_kernel, geom_2d)


def test_dataset_and_combinations(geom_1d, heat_kernel):
    data = extract_traces(heat_kernel, geom_1d, time_panels=2, order=4)
    ds = data.ds()
    assert set(ds.dims) == {"gamma", "initial"}
    for name in ["u", "flux", "h0", "x", "nu_x", "initial_x", "initial_u"]:
        assert name in ds
    double = data.combine(data, 1.0, 1.0)
    np.testing.assert_allclose(double.u, 2 * data.u)
    zero = data.zero_gamma()
    assert np.all(zero.u == 0) and np.all(zero.flux == 0)
    np.testing.assert_array_equal(zero.initial_u, data.initial_u)
    other = extract_traces(heat_kernel, geom_1d, time_panels=3, order=4)
    with pytest.raises(ValueError):
        data.combine(other, 1.0, 1.0)


def test_noise(geom_1d, heat_kernel):
    data = extract_traces(heat_kernel, geom_1d, time_panels=2, order=4)
    same = add_noise(data, 0.0)
    np.testing.assert_array_equal(same.u, data.u)
    uniform = add_noise(data, 1e-3, kind="uniform", seed=4)
    assert np.max(np.abs(uniform.u - data.u)) <= 1e-3
    assert np.any(uniform.flux != data.flux)
    relative = add_noise(data, 0.1, kind="uniform", relative=True)
    assert np.all(np.abs(relative.u - data.u) <= 0.1 * np.abs(data.u))
    np.testing.assert_array_equal(add_noise(data, 1e-2, seed=7).u, add_noise(data, 1e-2, seed=7).u)
    with pytest.raises(ValueError):
        add_noise(data, -1.0)
    with pytest.raises(ValueError):
        add_noise(data, 1.0, kind="pink")


def test_suggested_panels_grow_with_tau(geom_1d):
    probe = make_probe(2.0, [1])
    low = suggest_panels(geom_1d, probe, 4.0)
    high = suggest_panels(geom_1d, probe, 16.0)
    assert set(low) == {"time_panels", "space_panels", "initial_panels"}
    assert all(isinstance(v, int) and v >= 1 for v in low.values())
    assert all(high[k] > low[k] for k in low)
