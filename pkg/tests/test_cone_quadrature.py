from heat_enclosure.geometry import (
    box_rule,
    build_cone,
    concatenate,
    cone_quadrature,
    enclosure_rule,
    interval_rule,
    phase_adapted_rule,
    simplex_panel_rule,
)
from heat_enclosure.space_time import SpaceTimePoint, make_probe, make_z
import numpy as np
import pytest


@pytest.fixture
def triangle():
    return build_cone(SpaceTimePoint([0.5], 0.5), make_probe(1.0, [1]), 0.1)


@pytest.fixture
def tetrahedron():
    return build_cone(SpaceTimePoint([0.5, 0.5], 0.5), make_probe(2.0, [0.6, 0.8], [-0.8, 0.6]), 0.1)


def test_weights_sum_to_the_volume(triangle, tetrahedron):
    for cone in (triangle, tetrahedron):
        points, weights = cone_quadrature(cone, 6)
        assert np.all(weights > 0)
        np.testing.assert_allclose(weights.sum(), cone.volume(), rtol=1e-13)
        assert cone.closure_contains(points).all()


def test_linear_functions_integrate_to_the_centroid(triangle, tetrahedron):
    for cone in (triangle, tetrahedron):
        points, weights = cone_quadrature(cone, 3)
        centroid = cone.vertices.mean(axis=0)
        np.testing.assert_allclose(weights @ points / cone.volume(), centroid, rtol=1e-13)


def test_quadratic_on_the_triangle(triangle):
    # the integral of a squared barycentric coordinate is area/6
    points, weights = cone_quadrature(triangle, 4)
    lam = triangle.barycentric(points)
    np.testing.assert_allclose(weights @ lam[:, 0] ** 2, triangle.volume() / 6, rtol=1e-12)


def test_order_must_be_positive(triangle):
    with pytest.raises(ValueError):
        cone_quadrature(triangle, 0)


def test_phase_adapted_rule_covers_the_cone(tetrahedron):
    z = make_z(tetrahedron.probe, 5.0)
    rule = concatenate(phase_adapted_rule(tetrahedron, z, order=8))
    np.testing.assert_allclose(rule.weights.sum(), tetrahedron.volume(), rtol=1e-12)
    np.testing.assert_allclose(rule.points - rule.offsets, np.tile(tetrahedron.vertices[0], (len(rule.weights), 1)))


def test_phase_adapted_rule_resolves_the_phase(triangle):
    z = make_z(triangle.probe, 50.0)
    phase = np.append(z.z, -z.zz)
    coarse = concatenate(phase_adapted_rule(triangle, z, order=16))
    fine = concatenate(phase_adapted_rule(triangle, z, order=16, radians_per_panel=np.pi / 2))
    integral = coarse.weights @ np.exp(coarse.offsets @ phase)
    reference = fine.weights @ np.exp(fine.offsets @ phase)
    np.testing.assert_allclose(integral, reference, rtol=1e-8)


def test_cutoff_shrinks_the_rule(triangle):
    z = make_z(triangle.probe, 100.0)
    full = concatenate(phase_adapted_rule(triangle, z))
    cut = concatenate(phase_adapted_rule(triangle, z, cutoff=5.0))
    assert cut.weights.sum() < full.weights.sum()


def test_enclosure_rule_is_chunked(triangle):
    z = make_z(triangle.probe, 100.0)
    chunks = list(enclosure_rule(triangle, z, order=8, max_nodes=4096))
    assert len(chunks) > 1
    np.testing.assert_allclose(sum(c.weights.sum() for c in chunks), triangle.volume(), rtol=1e-12)


def test_simplex_panel_rule():
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    rule = concatenate(simplex_panel_rule(vertices, panels=3, order=8))
    np.testing.assert_allclose(rule.weights.sum(), 0.5, rtol=1e-13)
    np.testing.assert_allclose(rule.weights @ np.exp(rule.points[:, 0]), np.e - 2, rtol=1e-10)


def test_interval_and_box_rules():
    x, w = interval_rule(0.0, np.pi, panels=2)
    np.testing.assert_almost_equal(w @ np.sin(x), 2.0)
    nodes, weights = box_rule([0.0, 0.0], [1.0, 2.0], panels=1, order=4)
    assert nodes.shape == (16, 2)
    np.testing.assert_almost_equal(weights @ (nodes[:, 0] * nodes[:, 1]), 1.0)
