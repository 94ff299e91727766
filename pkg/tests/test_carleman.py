from heat_enclosure.caloric import analytic_solution, extract_traces, suggest_panels
from heat_enclosure.errors import ConfigurationRejectedError, DimensionError, KernelSingularityError
from heat_enclosure.reconstruct import CarlemanTestFunction, assemble_I_tau, boundary_functional, carleman_estimate
from heat_enclosure.space_time import SpaceTimePoint, complex_frequency, make_probe, make_z
from heat_enclosure.variables import BoundaryPiece, Box, ScenarioGeometry
import numpy as np
import pytest

PROBE = make_probe(2.0, [1])


@pytest.fixture(scope="module")
def geom():
    return ScenarioGeometry(
        domain=Box((0.0,), (1.0,)),
        T=2.0,
        gamma=[BoundaryPiece("x_hi", (0.0, 2.0))],
        U=Box((0.0,), (1.0,)),
        target=SpaceTimePoint([0.8], 0.3),
    )


@pytest.fixture(scope="module")
def heat_kernel():
    return analytic_solution("heat_kernel", {"source_x": [0.3], "source_t": -0.5})


@pytest.fixture(scope="module")
def data(geom, heat_kernel):
    return extract_traces(heat_kernel, geom, **suggest_panels(geom, PROBE, 8.0))


def test_zero_data_give_zero(geom, data):
    zero = data.combine(data, 0.0, 0.0)
    result = carleman_estimate(zero, geom, PROBE, 4.0)
    assert result.estimate == 0
    assert result.quad_error == 0


def test_converges_to_the_heat_kernel(geom, data, heat_kernel):
    truth = heat_kernel.value(geom.target.x, geom.target.t)[0]
    errors = [abs(carleman_estimate(data, geom, PROBE, tau).estimate - truth) / truth for tau in (2.0, 4.0, 8.0)]
    assert errors[2] < min(errors[:2])
    assert errors[2] < 1e-2


def test_constant_field(geom):
    data = extract_traces(analytic_solution("constant"), geom, **suggest_panels(geom, PROBE, 8.0))
    result = carleman_estimate(data, geom, PROBE, 8.0)
    assert result.method == "carleman"
    assert result.tau == 8.0
    assert abs(result.estimate - 1.0) < 1e-2


def test_linearity(geom, data):
    a = carleman_estimate(data, geom, PROBE, 4.0).estimate
    b = carleman_estimate(data.combine(data, 2.0, 0.5), geom, PROBE, 4.0).estimate
    np.testing.assert_allclose(b, 2.5 * a, rtol=1e-10)


def test_rejected_probe(geom, data):
    with pytest.raises(ConfigurationRejectedError):
        carleman_estimate(data, geom, make_probe(0.25, [1]), 8.0)
    with pytest.raises(ConfigurationRejectedError):
        carleman_estimate(data, geom, PROBE, 4.0, min_margin=1.0)


def test_explicit_target_is_validated(geom, data):
    with pytest.raises(ConfigurationRejectedError) as err:
        carleman_estimate(data, geom, PROBE, 4.0, target=SpaceTimePoint([0.5], 1.9))
    assert err.value.hypothesis == 1
    from_array = carleman_estimate(data, geom, PROBE, 4.0, target=np.array([0.8, 0.3]))
    assert from_array.estimate == carleman_estimate(data, geom, PROBE, 4.0).estimate


def test_assemble_I_tau(geom, data):
    z = make_z(PROBE, 4.0)
    v_eval = CarlemanTestFunction(z, geom.target)
    value = assemble_I_tau(data, v_eval, geom, 4.0)
    np.testing.assert_allclose(-value, carleman_estimate(data, geom, PROBE, 4.0).estimate, rtol=1e-12)
    with pytest.raises(ValueError):
        assemble_I_tau(data, v_eval, geom, 5.0)


def test_boundary_functional_needs_matching_dimensions(data):
    v_eval = CarlemanTestFunction(complex_frequency([2.0, 1j]), SpaceTimePoint([0.5, 0.5], 0.5))
    with pytest.raises(DimensionError):
        boundary_functional(data, v_eval)


def test_test_function_is_singular_at_the_target(geom):
    v_eval = CarlemanTestFunction(make_z(PROBE, 4.0), geom.target)
    with pytest.raises(KernelSingularityError):
        v_eval.evaluate(np.array([[0.8]]), np.array([0.3]))
    values = v_eval.evaluate(np.array([[1.0], [0.0]]), np.array([0.5, 0.1]), np.array([[1.0], [-1.0]]))
    assert values.v.shape == (2,)
    assert values.dv.shape == (2,)
    assert np.all(np.isfinite(values.log_error))


@pytest.fixture(scope="module")
def centred():
    return ScenarioGeometry(
        domain=Box((0.0,), (1.0,)),
        T=2.0,
        gamma=[BoundaryPiece("x_hi", (0.0, 2.0))],
        U=Box((0.0,), (1.0,)),
        target=SpaceTimePoint([0.5], 0.5),
    )


@pytest.mark.parametrize(
    "kind, params, expected",
    [
        ("constant", {}, 1.0),
        ("exponential", {"drift": [1.0]}, 2.7182818),
        ("heat_kernel", {"source_x": [0.3], "source_t": -0.5}, 0.2792829),
    ],
)
def test_converges_at_the_centre(centred, kind, params, expected):
    field = analytic_solution(kind, params)
    truth = field.value(centred.target.x, centred.target.t)[0]
    np.testing.assert_allclose(truth, expected, rtol=1e-7)
    data = extract_traces(field, centred, **suggest_panels(centred, PROBE, 16.0))
    errors = [abs(carleman_estimate(data, centred, PROBE, tau).estimate - truth) / truth for tau in (4.0, 8.0, 16.0)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 0.02
