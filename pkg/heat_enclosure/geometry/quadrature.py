"""Collapsed (Duffy) tensor rules on simplices.

A point of the unit cube u is mapped to barycentric coordinates
lambda_1 = u_1, lambda_k = u_k * prod_{j<k}(1 - u_j), with Jacobian
prod_k (1 - u_k)^(d-k). The Jacobian is either absorbed in Gauss-Jacobi
weights (single-panel rules) or multiplied into composite Gauss-Legendre
weights (panelled rules).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from ..space_time import ComplexFrequency
from ..variables import ConeRegion

logger = logging.getLogger(__name__)

MAX_CHUNK_NODES = 2**20


@dataclass
class CubatureChunk:
    """Nodes as rows (x..., t), weights, and node offsets from the cone vertex"""

    points: np.ndarray
    weights: np.ndarray
    offsets: np.ndarray


def jacobi_axis(order: int, exponent: int) -> tuple[np.ndarray, np.ndarray]:
    """Rule for int_0^1 (1-u)^exponent g(u) du"""
    if exponent == 0:
        x, w = roots_legendre(order)
    else:
        x, w = roots_jacobi(order, exponent, 0)
    return (1 + x) / 2, w / 2 ** (exponent + 1)


def panelled_axis(order: int, panels: int, exponent: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre on [0,1] with the weight (1-u)^exponent multiplied in"""
    x, w = roots_legendre(order)
    u = ((np.arange(panels)[:, None] + (1 + x[None, :]) / 2) / panels).ravel()
    weights = np.tile(w / 2, panels) / panels * (1 - u) ** exponent
    return u, weights


def _collapse(U: np.ndarray) -> np.ndarray:
    lam = np.empty_like(U)
    remaining = np.ones(len(U))
    for k in range(U.shape[1]):
        lam[:, k] = U[:, k] * remaining
        remaining = remaining * (1 - U[:, k])
    return lam


def tensor_chunks(
    axes: list[tuple[np.ndarray, np.ndarray]],
    origin: np.ndarray,
    edges: np.ndarray,
    max_nodes: int = MAX_CHUNK_NODES,
) -> Iterator[CubatureChunk]:
    """Chunks of the collapsed tensor rule, split along the first axis"""
    volume_factor = abs(np.linalg.det(edges))
    rest_u = np.array(np.meshgrid(*[u for u, __ in axes[1:]], indexing="ij")).reshape(len(axes) - 1, -1).T
    rest_w = np.prod(np.array(np.meshgrid(*[w for __, w in axes[1:]], indexing="ij")).reshape(len(axes) - 1, -1), axis=0)
    first_u, first_w = axes[0]
    block = max(1, max_nodes // len(rest_w))
    for start in range(0, len(first_u), block):
        u1 = first_u[start : start + block]
        w1 = first_w[start : start + block]
        U = np.hstack([np.repeat(u1, len(rest_w))[:, None], np.tile(rest_u, (len(u1), 1))])
        weights = volume_factor * np.repeat(w1, len(rest_w)) * np.tile(rest_w, len(u1))
        offsets = _collapse(U) @ edges
        yield CubatureChunk(points=origin + offsets, weights=weights, offsets=offsets)


def concatenate(chunks: Iterator[CubatureChunk]) -> CubatureChunk:
    chunks = list(chunks)
    return CubatureChunk(
        points=np.vstack([c.points for c in chunks]),
        weights=np.concatenate([c.weights for c in chunks]),
        offsets=np.vstack([c.offsets for c in chunks]),
    )


def cone_quadrature(cone: ConeRegion, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed Gauss-Jacobi rule: positive weights summing to the cone volume, nodes inside D"""
    if order < 1:
        raise ValueError(f"order must be at least 1, got {order}")
    d = cone.n + 1
    axes = [jacobi_axis(order, d - k) for k in range(1, d + 1)]
    rule = concatenate(tensor_chunks(axes, cone.vertices[0], cone.edges()))
    return rule.points, rule.weights


def simplex_panel_rule(
    vertices: np.ndarray, panels: int, order: int = 8, max_nodes: int = MAX_CHUNK_NODES
) -> Iterator[CubatureChunk]:
    """Uniform composite collapsed rule on the simplex spanned by the vertex rows"""
    vertices = np.asarray(vertices, dtype=float)
    d = vertices.shape[1]
    axes = [panelled_axis(order, panels, d - k) for k in range(1, d + 1)]
    return tensor_chunks(axes, vertices[0], vertices[1:] - vertices[0], max_nodes)


def phase_rates(edges: np.ndarray, z: ComplexFrequency) -> np.ndarray:
    """Phase increments (x,t)·(z, -z·z) along each edge"""
    return edges @ np.append(z.z, -z.zz)


def phase_adapted_rule(
    cone: ConeRegion,
    z: ComplexFrequency,
    order: int = 16,
    radians_per_panel: float = 2 * np.pi,
    rate_multiplier: float = 1.0,
    efolds_per_panel: float = 8.0,
    cutoff: Optional[float] = None,
    max_nodes: int = MAX_CHUNK_NODES,
) -> Iterator[CubatureChunk]:
    """Collapsed rule resolving exp(phase) on the cone.

    Edges are ordered by decreasing oscillation. Axis k gets panels for the
    phase rate |Im phi_k| + max_{i>k}|Im phi_i| (times rate_multiplier) and
    for the decay rate of Re phi. With a cutoff the simplex is shrunk
    towards the vertex where exp(Re phase) has decayed by exp(-cutoff)."""
    edges = cone.edges()
    phi = phase_rates(edges, z)
    decay = np.max(-phi.real)
    if cutoff is not None and decay > cutoff:
        scale = cutoff / decay
        edges, phi = edges * scale, phi * scale
        logger.debug("Truncating cone to %.3g of its size", scale)

    order_idx = np.argsort(-np.abs(phi.imag), kind="stable")
    edges, phi = edges[order_idx], phi[order_idx]
    d = len(edges)
    axes = []
    for k in range(d):
        tail_im = np.max(np.abs(phi.imag[k + 1 :]), initial=0.0)
        tail_re = np.max(np.abs(phi.real[k + 1 :]), initial=0.0)
        rate = rate_multiplier * (abs(phi[k].imag) + tail_im)
        decay_k = abs(phi[k].real) + tail_re
        panels = int(max(1, np.ceil(rate / radians_per_panel), np.ceil(decay_k / efolds_per_panel)))
        axes.append(panelled_axis(order, panels, d - k - 1))
    logger.debug("Phase-adapted cone rule with %s panels", [len(u) // order for u, __ in axes])
    return tensor_chunks(axes, cone.vertices[0], edges, max_nodes)


def interval_rule(a: float, b: float, panels: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [a, b]"""
    u, w = panelled_axis(order, max(1, int(panels)), 0)
    return a + (b - a) * u, (b - a) * w


def box_rule(lower, upper, panels: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Tensor composite Gauss-Legendre rule on an axis-aligned box; nodes as rows"""
    rules = [interval_rule(lo, hi, panels, order) for lo, hi in zip(lower, upper)]
    nodes = np.array(np.meshgrid(*[r[0] for r in rules], indexing="ij")).reshape(len(rules), -1).T
    weights = np.prod(np.array(np.meshgrid(*[r[1] for r in rules], indexing="ij")).reshape(len(rules), -1), axis=0)
    return nodes, weights


def enclosure_rule(
    cone: ConeRegion, z: ComplexFrequency, order: int = 16, max_nodes: int = MAX_CHUNK_NODES
) -> Iterator[CubatureChunk]:
    """The cone rule shared by the enclosure test function and its finite-tau constant"""
    return phase_adapted_rule(
        cone, z, order=order, radians_per_panel=2 * np.pi, rate_multiplier=2.0, max_nodes=max_nodes
    )
