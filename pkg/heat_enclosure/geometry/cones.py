"""Space-time cones with a vertex at the target and their visibility constants."""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..errors import ConeDegenerateError, ConeOrientationError, ConePlaneError, DimensionError
from ..space_time import ProbeDirection, SpaceTimePoint, halfspace_margin
from ..variables import ConeRegion, ScenarioGeometry, VisibilityConstant

logger = logging.getLogger(__name__)

PLANE_TOL = 1e-8
VERTEX_TOL = 1e-10


def _orthonormal_complement(omega: np.ndarray) -> np.ndarray:
    """Rows e1, e2 orthogonal to omega (n=3) with det[omega, e1, e2] > 0"""
    helper = np.eye(3)[np.argmin(np.abs(omega))]
    e1 = np.cross(omega, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(omega, e1)
    return np.array([e1, e2])


def default_aux_points(
    target: SpaceTimePoint, probe: ProbeDirection, delta: float, spread: Optional[float] = None
) -> Optional[np.ndarray]:
    """Positively oriented auxiliary points on the base plane; None for n=1"""
    n = target.n
    if n == 1:
        return None
    h = delta * np.sqrt(1 + probe.c**2) / probe.c
    spread = spread or h
    base = target.x - h * probe.omega
    if n == 2:
        rotated = np.array([-probe.omega[1], probe.omega[0]])
        return np.array([base + spread * rotated, base - spread * rotated])
    e1, e2 = _orthonormal_complement(probe.omega)
    return np.array([base + spread * e1, base, base + spread * e2])


def _orientation(omega: np.ndarray, aux: np.ndarray) -> float:
    if len(aux) == 2:
        return float(np.linalg.det(np.array([omega, aux[0] - aux[1]])))
    return float(np.linalg.det(np.array([omega, aux[0] - aux[1], aux[2] - aux[1]])))


def build_cone(
    target: SpaceTimePoint,
    probe: ProbeDirection,
    delta: float,
    aux_points: Optional[np.ndarray] = None,
) -> ConeRegion:
    """Triangle (n=1), tetrahedron (n=2) or 4-simplex (n=3) with its vertex at the target.

    The base vertices lie on (x,t)·omega(c) = (x0,t0)·omega(c) - delta, the
    top vertex is (x0, t0 + delta*sqrt(1+c²))."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    n = target.n
    if probe.n != n:
        raise DimensionError(probe.n, n)
    s = np.sqrt(1 + probe.c**2)
    top = np.append(target.x, target.t + delta * s)

    if n == 1:
        base = np.append(target.x - delta * s / probe.c * probe.omega, target.t)
        vertices = np.array([target.as_array(), base, top])
        aux = None
    else:
        aux = default_aux_points(target, probe, delta) if aux_points is None else aux_points
        aux = np.atleast_2d(np.asarray(aux, dtype=float))
        if aux.shape != (n, n):
            raise DimensionError(aux.shape[0], n)
        plane = target.x @ probe.omega - delta * s / probe.c
        for k, x in enumerate(aux):
            offset = abs(x @ probe.omega - plane)
            if offset > PLANE_TOL:
                raise ConePlaneError(k + 1, offset)
        det = _orientation(probe.omega, aux)
        if not det > 0:
            raise ConeOrientationError(det)
        bottom = np.hstack([aux, np.full((n, 1), target.t)])
        vertices = np.vstack([target.as_array(), bottom, top])

    cone = ConeRegion(target=target, probe=probe, delta=float(delta), vertices=vertices, aux_points=aux)
    if cone.volume() <= 0:
        raise ConeDegenerateError()
    margins = halfspace_margin(probe, target, (vertices[1:, :-1], vertices[1:, -1]))
    if np.max(np.abs(margins - delta)) > VERTEX_TOL * max(1.0, delta):
        raise ConePlaneError(int(np.argmax(np.abs(margins - delta))) + 1, float(np.max(np.abs(margins - delta))))
    return cone


def fit_cone(
    geom: ScenarioGeometry,
    probe: ProbeDirection,
    delta: float,
    aux_points: Optional[np.ndarray] = None,
    max_halvings: int = 20,
) -> ConeRegion:
    """build_cone, halving delta until the closed cone lies inside the space-time cylinder"""
    for __ in range(max_halvings + 1):
        cone = build_cone(geom.target, probe, delta, aux_points)
        inside = geom.domain.contains(cone.vertices[:, :-1]) & (cone.vertices[:, -1] > 0) & (
            cone.vertices[:, -1] < geom.T
        )
        if np.all(inside):
            return cone
        if aux_points is not None:
            raise ConeDegenerateError("the cone with the given auxiliary points leaves the cylinder")
        logger.info("Cone with delta=%g leaves the cylinder, halving", delta)
        delta /= 2
    raise ConeDegenerateError(f"no cone inside the cylinder after {max_halvings} halvings")


def theta(probe: ProbeDirection) -> np.ndarray:
    """(c(omega + i omega_perp), -1), the large-tau direction of (z, -z·z)/(c tau) for n>=2"""
    return np.append(probe.c * (probe.omega + 1j * probe.omega_perp), -1.0)


def simplex_constant(cone: ConeRegion) -> VisibilityConstant:
    """(-1)^(n+1) |det E| / prod(e_i·theta) for n>=2, mu = n+1"""
    if cone.n == 1:
        raise DimensionError(1, (2, 3))
    edges = cone.edges()
    products = edges @ theta(cone.probe)
    if np.any(np.abs(products) == 0):
        raise ConeDegenerateError("an edge is orthogonal to the probe")
    C = (-1) ** (cone.n + 1) * abs(np.linalg.det(edges)) / np.prod(products)
    return VisibilityConstant(mu=cone.n + 1, C=C)


def _outward_normal(face: np.ndarray, opposite: np.ndarray) -> np.ndarray:
    """Normal of a triangle in R^3 pointing away from the opposite vertex"""
    normal = np.cross(face[1] - face[0], face[2] - face[0])
    norm = np.linalg.norm(normal)
    if norm == 0:
        raise ConeDegenerateError("a face has zero area")
    normal /= norm
    if normal @ (opposite - face[0]) > 0:
        normal = -normal
    return normal


def face_normals(cone: ConeRegion) -> np.ndarray:
    """Outward unit normals nu_1, nu_2, nu_3 of the tetrahedron faces through the vertex.

    Face 1 holds x1 and the top vertex, face 2 holds x2 and the top vertex and
    face 3 is the flat face through x1 and x2, so nu_3 = (0, 0, -1)."""
    if cone.n != 2:
        raise DimensionError(cone.n, 2)
    P, X1, X2, top = cone.vertices
    faces = [(np.array([P, X1, top]), X2), (np.array([P, X2, top]), X1), (np.array([P, X1, X2]), top)]
    return np.array([_outward_normal(face, opposite) for face, opposite in faces])


def face_normal_constant(cone: ConeRegion) -> VisibilityConstant:
    """|(nu_3 x nu_2) x (nu_1 x nu_3)| / (((nu_3 x nu_2)·theta) ((nu_1 x nu_3)·theta)), mu = 3"""
    nu1, nu2, nu3 = face_normals(cone)
    towards_x2, towards_x1 = np.cross(nu3, nu2), np.cross(nu1, nu3)
    th = theta(cone.probe)
    C = np.linalg.norm(np.cross(towards_x2, towards_x1)) / ((towards_x2 @ th) * (towards_x1 @ th))
    return VisibilityConstant(mu=3, C=complex(C))


def analytic_constant(cone: ConeRegion) -> VisibilityConstant:
    """Closed-form visibility constant.

    n=1: C = -(1+i)/(4c³), mu=3.
    n=2: the face-normal form of face_normal_constant, mu=3.
    n=3: C = -sqrt(det(A^T A)) / ((a·theta)(b·theta)(c·theta)) for the base edges a, b, c, mu=4.
    """
    c = cone.probe.c
    if cone.n == 1:
        return VisibilityConstant(mu=3, C=-(1 + 1j) / (4 * c**3))
    if cone.n == 2:
        return face_normal_constant(cone)
    th = theta(cone.probe)
    A = cone.edges()[:3].T
    gram = np.linalg.det(A.T @ A)
    if gram <= 0:
        raise ConeDegenerateError("the base face has zero volume")
    C = -np.sqrt(gram) / np.prod(A.T @ th)
    return VisibilityConstant(mu=4, C=C)


def triangle_limit_constant(cone: ConeRegion) -> complex:
    """The delta-dependent n=1 candidate -(1+i) delta (1+c²) / (4c⁴), for calibration reports"""
    if cone.n != 1:
        raise DimensionError(cone.n, 1)
    c = cone.probe.c
    return complex(-(1 + 1j) * cone.delta * (1 + c**2) / (4 * c**4))
