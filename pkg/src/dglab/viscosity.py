"""Viscosity distributions and assembly of the per-element viscosity field.

A viscosity field is ``eps(x) = eps_i * nu(r)`` on element ``i``, where ``r``
is the reference coordinate.  The compact distributions vanish at ``r = +-1``
(the super-Gaussian only down to machine precision), which is what makes the
viscous boundary terms drop out between elements.

``c0_linear`` is the vertex-max / linear-interpolation smoothing of a
piecewise-constant field; it is continuous across elements but spreads the
viscosity into neighbours.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MACHINE_EPS = 1e-16
GEVREY_EDGE_TOL = 1e-12

KINDS = ("none", "piecewise_constant", "c0_linear", "legendre", "gegenbauer", "super_gaussian", "gevrey")
COMPACT_KINDS = ("legendre", "gegenbauer", "super_gaussian", "gevrey")
DEFAULT_SHAPE = {"gegenbauer": 0.1, "super_gaussian": 100.0, "gevrey": 100.0}


@dataclass(frozen=True)
class ViscosityDistribution:
    kind: str = "super_gaussian"
    lam: float | None = None
    eps_machine: float = MACHINE_EPS

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown viscosity kind {self.kind!r}; expected one of {KINDS}")
        if self.lam is None:
            object.__setattr__(self, "lam", DEFAULT_SHAPE.get(self.kind, 1.0))
        if not self.lam > 0:
            raise ValueError("shape parameter lambda must be positive")
        if not 0 < self.eps_machine < 1:
            raise ValueError("eps_machine must lie in (0, 1)")

    @property
    def alpha(self):
        return -math.log(self.eps_machine)

    @property
    def compact(self):
        return self.kind in COMPACT_KINDS

    def __call__(self, x):
        return distribution_value(self, x)


def distribution_value(dist, x):
    """Evaluate ``nu(x)`` on the reference element; ``|x| > 1`` raises ``ValueError``."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-14):
        raise ValueError("viscosity distribution evaluated outside [-1, 1]")
    x = np.clip(x, -1.0, 1.0)
    kind = dist.kind
    if kind in ("piecewise_constant", "none"):
        out = np.ones_like(x) if kind == "piecewise_constant" else np.zeros_like(x)
    elif kind == "legendre":
        out = 1.0 - x**2
    elif kind == "gegenbauer":
        out = np.power(np.maximum(1.0 - x**2, 0.0), dist.lam)
    elif kind == "super_gaussian":
        # x^(2 lam) computed through |x| so non-integer lam stays real
        out = np.exp(-dist.alpha * np.abs(x) ** (2.0 * dist.lam))
    elif kind == "gevrey":
        x2 = x**2
        inner = np.abs(x) < 1.0 - GEVREY_EDGE_TOL
        out = np.zeros_like(x)
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            out[inner] = np.exp(x2[inner] / (dist.lam * (x2[inner] - 1.0)))
    elif kind == "c0_linear":
        raise ValueError("c0_linear has no pointwise shape; use build_viscosity_field")
    else:  # pragma: no cover - guarded in __post_init__
        raise ValueError(kind)
    return float(out) if out.ndim == 0 else out


@dataclass
class ViscosityField:
    """Nodal samples of ``eps(x)`` with shape ``(I, p + 1)``."""

    nodal: np.ndarray
    strengths: np.ndarray
    dist: ViscosityDistribution
    vertex_values: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    @property
    def max(self):
        return float(np.max(self.nodal)) if self.nodal.size else 0.0

    def sample(self, r):
        """``eps`` at reference points ``r`` in every element, shape ``(I, len(r))``."""
        r = np.asarray(r, dtype=float)
        if self.dist.kind == "c0_linear":
            left, right = self.vertex_values[:-1, None], self.vertex_values[1:, None]
            return 0.5 * (1.0 - r[None, :]) * left + 0.5 * (1.0 + r[None, :]) * right
        if self.dist.kind == "none":
            return np.zeros((self.strengths.size, r.size))
        return self.strengths[:, None] * distribution_value(self.dist, r)[None, :]


def klockner_smooth(strengths, mesh):
    """Continuous piecewise-linear viscosity from per-element strengths.

    Each vertex takes the maximum strength of its adjacent elements; every
    element then carries the linear interpolant of its two vertex values.
    Returns ``(vertex_values, element_interpolant)`` where the interpolant maps
    reference points ``r`` to values of shape ``(I, len(r))``.
    """
    eps = np.asarray(strengths, dtype=float)
    if eps.shape != (mesh.n_elements,):
        raise ValueError(f"expected {mesh.n_elements} strengths, got shape {eps.shape}")
    if np.any(eps < 0):
        raise ValueError("viscosity strengths must be non-negative")
    vertex = np.empty(mesh.n_elements + 1)
    vertex[1:-1] = np.maximum(eps[:-1], eps[1:])
    if mesh.periodic:
        vertex[0] = vertex[-1] = max(eps[0], eps[-1])
    else:
        vertex[0], vertex[-1] = eps[0], eps[-1]

    def interpolant(r):
        r = np.asarray(r, dtype=float)
        # convex form: exact vertex values at r = -1 and r = 1
        return 0.5 * (1.0 - r[None, :]) * vertex[:-1, None] + 0.5 * (1.0 + r[None, :]) * vertex[1:, None]

    return vertex, interpolant


def build_viscosity_field(strengths, dist, mesh, elem):
    eps = np.asarray(strengths, dtype=float)
    if eps.shape != (mesh.n_elements,):
        raise ValueError(f"expected {mesh.n_elements} strengths, got shape {eps.shape}")
    if np.any(eps < 0):
        raise ValueError("viscosity strengths must be non-negative")
    if dist.kind == "c0_linear":
        vertex, interp = klockner_smooth(eps, mesh)
        return ViscosityField(interp(elem.nodes), eps, dist, vertex_values=vertex)
    if dist.kind == "none":
        return ViscosityField(np.zeros((mesh.n_elements, elem.n_nodes)), np.zeros_like(eps), dist)
    nu = distribution_value(dist, elem.nodes)
    return ViscosityField(eps[:, None] * nu[None, :], eps, dist)


def conservation_violation_functional(u, visc, mesh, elem):
    """Sum over elements of ``eps * du/dx`` at the element ends (right minus left).

    This is the term by which the total of ``u`` changes under the viscous
    operator when element traces are used.  ``u`` has shape ``(I, p + 1)`` or
    ``(n_vars, I, p + 1)``; the result has one entry per variable (or a float).
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 2
    if scalar:
        u = u[None]
    dudx = (2.0 / mesh.h) * u @ elem.diff_nodal.T
    ends = visc.sample(np.array([-1.0, 1.0]))
    contrib = ends[None, :, 1] * dudx[..., -1] - ends[None, :, 0] * dudx[..., 0]
    total = contrib.sum(axis=1)
    return float(total[0]) if scalar else total
