from heat_enclosure.caloric import GridField, analytic_solution, backward_solution
from heat_enclosure.decorators import FIELD_KINDS, add_field_kind
from heat_enclosure.errors import DimensionError, FieldParameterError
import numpy as np
import pytest
import xarray as xr

FIELDS = [
    ("constant", {"value": 2.5}),
    ("exponential", {"drift": [1.0]}),
    ("exponential", {"drift": [0.5, -1.0]}),
    ("heat_kernel", {"source_x": [0.3], "source_t": -0.5}),
    ("heat_kernel", {"source_x": [0.3, 0.6], "source_t": -0.5}),
    ("polynomial", {"n": 2}),
    ("mode", {"wavevector": [np.pi], "phase": 0.3}),
    ("mode", {"wavevector": [np.pi, 1.0]}),
]


def sample_points(n, count=8, seed=1):
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 1.0, (count, n)), rng.uniform(0.1, 1.0, count)


def sine_grid(nx=64, nt=32, T=0.5):
    x = np.linspace(0.0, 1.0, nx + 1)
    t = np.linspace(0.0, T, nt + 1)
    values = np.exp(-(np.pi**2) * t)[:, None] * np.sin(np.pi * x)[None, :]
    return GridField(xr.DataArray(values, dims=("t", "x"), coords={"t": t, "x": x}))


@pytest.mark.parametrize("kind, params", FIELDS)
def test_fields_are_caloric(kind, params):
    field = analytic_solution(kind, params)
    x, t = sample_points(field.n)
    scale = 1.0 + np.max(np.abs(field.value(x, t)))
    assert np.max(np.abs(field.residual(x, t))) / scale < 1e-5


@pytest.mark.parametrize("kind, params", FIELDS)
def test_gradients_against_finite_differences(kind, params):
    field = analytic_solution(kind, params)
    x, t = sample_points(field.n, seed=2)
    grad = field.gradient(x, t)
    assert grad.shape == x.shape
    for k in range(field.n):
        h = np.zeros(field.n)
        h[k] = 1e-6
        fd = (field.value(x + h, t) - field.value(x - h, t)) / 2e-6
        np.testing.assert_allclose(grad[:, k], fd, rtol=1e-6, atol=1e-6)


@pytest.mark.parametrize("kind, params", FIELDS)
def test_time_reversal_is_backward_caloric(kind, params):
    params = dict(params)
    if kind == "heat_kernel":
        params["source_t"] = -1.5
    field = backward_solution(kind, params)
    x, t = sample_points(field.n, seed=3)
    scale = 1.0 + np.max(np.abs(field.value(x, t)))
    assert np.max(np.abs(field.residual(x, t, backward=True))) / scale < 1e-5
    np.testing.assert_allclose(field.value(x, t), analytic_solution(kind, params).value(x, -t))


def test_flat_positions_are_one_dimensional():
    field = analytic_solution("exponential", {"drift": [1.0]})
    np.testing.assert_allclose(field([0.0, 1.0], 0.0), [1.0, np.e])
    np.testing.assert_allclose(field.normal_derivative([1.0], 0.0, [[-1.0]]), [-np.e])


def test_heat_kernel_value():
    field = analytic_solution("heat_kernel", {"source_x": [0.0], "source_t": -1.0})
    np.testing.assert_almost_equal(field.value([0.0], 0.0)[0], 1 / np.sqrt(4 * np.pi))


def test_parameter_errors():
    with pytest.raises(FieldParameterError):
        analytic_solution("bogus")
    with pytest.raises(FieldParameterError):
        analytic_solution("exponential", {})
    with pytest.raises(FieldParameterError):
        analytic_solution("exponential", {"drift": [1.0, 2.0]}, n=1)
    with pytest.raises(FieldParameterError):
        analytic_solution("heat_kernel", {"source_x": [0.0], "source_t": 0.5})
    with pytest.raises(FieldParameterError):
        analytic_solution("mode", {"wavevector": [np.inf]})
    with pytest.raises(DimensionError):
        analytic_solution("constant", n=4)
    with pytest.raises(DimensionError):
        analytic_solution("constant", n=2).value(np.zeros((3, 1)), 0.0)


def test_kinds_can_not_be_registered_twice():
    assert {"constant", "exponential", "heat_kernel", "polynomial", "mode", "grid"} <= set(FIELD_KINDS)
    with pytest.raises(ValueError):
        add_field_kind("constant")(type("Other", (), {}))


def test_grid_field_interpolation():
    grid = sine_grid()
    exact = analytic_solution("mode", {"wavevector": [np.pi]})
    x, t = np.array([0.13, 0.5, 0.91]), np.array([0.05, 0.2, 0.44])
    np.testing.assert_allclose(grid.value(x, t), exact.value(x, t), atol=1e-2)
    np.testing.assert_allclose(grid.gradient(x, t)[:, 0], exact.gradient(x, t)[:, 0], atol=5e-2)


def test_grid_field_boundary_flux():
    grid = sine_grid()
    t = grid.t[::4]
    decay = np.exp(-(np.pi**2) * t)
    np.testing.assert_allclose(grid.boundary_flux("x_hi", t), -np.pi * decay, rtol=1e-5)
    np.testing.assert_allclose(grid.boundary_flux("x_lo", t), -np.pi * decay, rtol=1e-5)
    with pytest.raises(FieldParameterError):
        grid.boundary_flux("y_lo", t)


def test_grid_field_csv(tmp_path):
    grid = sine_grid(nx=8, nt=4)
    path = tmp_path / "grid.csv"
    grid.to_csv(path)
    assert path.read_text().startswith("# heat-enclosure grid field Nx=8 Nt=4")
    loaded = analytic_solution("grid", {"path": str(path)})
    np.testing.assert_array_equal(loaded.data.values, grid.data.values)
    np.testing.assert_array_equal(loaded.x, grid.x)

    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3\n")
    with pytest.raises(FieldParameterError):
        GridField.from_csv(bad)


def test_grid_field_needs_points():
    data = xr.DataArray(np.zeros((3, 4)), dims=("t", "x"), coords={"t": [0, 1, 2], "x": [0, 1, 2, 3]})
    with pytest.raises(FieldParameterError):
        GridField(data)
