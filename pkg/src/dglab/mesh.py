"""Uniform 1D meshes and the per-element solution container."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import legendre_table, modal_to_nodal, nodal_to_modal, orthonormal_scale

BOUNDARY_KINDS = ("periodic", "dirichlet_outflow")


@dataclass(frozen=True)
class Mesh:
    n_elements: int
    x_left: float = 0.0
    x_right: float = 1.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("mesh needs at least one element")
        if not self.x_right > self.x_left:
            raise ValueError("x_right must exceed x_left")
        if self.boundary not in BOUNDARY_KINDS:
            raise ValueError(f"boundary must be one of {BOUNDARY_KINDS}, got {self.boundary!r}")

    @property
    def periodic(self):
        return self.boundary == "periodic"

    @property
    def length(self):
        return self.x_right - self.x_left

    @property
    def h(self):
        return self.length / self.n_elements

    @property
    def vertices(self):
        return np.linspace(self.x_left, self.x_right, self.n_elements + 1)

    def map_to_physical(self, r):
        """Physical coordinates of reference points ``r``, shape ``(I, len(r))``."""
        r = np.asarray(r, dtype=float)
        return self.vertices[:-1, None] + 0.5 * self.h * (r[None, :] + 1.0)

    def element_of(self, x):
        idx = np.floor((np.asarray(x, dtype=float) - self.x_left) / self.h).astype(int)
        return np.clip(idx, 0, self.n_elements - 1)


@dataclass
class Field:
    """Nodal solution values with shape ``(n_vars, I, p + 1)``."""

    values: np.ndarray
    mesh: Mesh
    elem: object

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expected = (self.mesh.n_elements, self.elem.n_nodes)
        if self.values.ndim != 3 or self.values.shape[1:] != expected:
            raise ValueError(f"field shape {self.values.shape} inconsistent with {expected}")

    @property
    def n_vars(self):
        return self.values.shape[0]

    @property
    def modal(self):
        return nodal_to_modal(self.values, self.elem)

    @classmethod
    def from_modal(cls, coeffs, mesh, elem):
        return cls(modal_to_nodal(coeffs, elem), mesh, elem)

    @property
    def x(self):
        return self.mesh.map_to_physical(self.elem.nodes)


def project(func, mesh, elem, n_quad=None):
    """L2 projection of ``func(x) -> (n_vars, ...)`` onto the nodal DG space.

    Uses Gauss-Legendre quadrature per element, which handles initial data
    with jumps inside an element.
    """
    p = elem.degree
    n_quad = n_quad or max(2 * p + 2, 24)
    rq, wq = np.polynomial.legendre.leggauss(n_quad)
    xq = mesh.map_to_physical(rq)
    vals = np.asarray(func(xq), dtype=float)
    if vals.ndim == 2:
        vals = vals[None]
    scale = orthonormal_scale(p)
    phi_q = legendre_table(p, rq) * scale
    phi_nodes = legendre_table(p, elem.nodes) * scale
    # orthonormal basis: coefficient_k = int u phi_k dr
    coeffs = np.einsum("viq,q,qk->vik", vals, wq, phi_q)
    return coeffs @ phi_nodes.T


def sample_points_per_element(p):
    return 4 * (p + 1)


def sample_reference_points(p):
    """Cell-centred equispaced reference points, ``4(p + 1)`` per element."""
    n = sample_points_per_element(p)
    return -1.0 + (2.0 * np.arange(n) + 1.0) / n


def sample_grid(mesh, p):
    return mesh.map_to_physical(sample_reference_points(p)).ravel()


def sample_field(u, mesh, elem):
    """Evaluate the nodal field on :func:`sample_grid`; returns ``(x, values)``."""
    u = np.asarray(u, dtype=float)
    r = sample_reference_points(elem.degree)
    interp = elem.interpolation_matrix(r)
    vals = u @ interp.T
    return mesh.map_to_physical(r).ravel(), vals.reshape(u.shape[0], -1)
