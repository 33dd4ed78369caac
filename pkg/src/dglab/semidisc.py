"""DG spatial operators: strong-form flux divergence and the local-DG viscous term.

Everything works on nodal arrays of shape ``(n_vars, I, p + 1)``.  Per element
the derivative of a nodal quantity ``w`` carrying interface values ``w*`` is

    dw/dx = (2/h) [ D w - L B (R w - w*) ]

with ``D`` the nodal differentiation matrix, ``R`` the end-point restriction
(left end first), ``B = diag(-1, 1)`` and ``L`` the lift by the GLL mass.  The
hyperbolic tendency is ``-dw/dx`` with ``w = f(u)`` and ``w* = f_num``; the
viscous tendency is two such passes with central interface values.
"""
from __future__ import annotations

import numpy as np

from .equations import numerical_flux


def _traces(w):
    return w[..., 0], w[..., -1]


def interface_states(u, mesh, ghost=None):
    """Left/right states at the ``I + 1`` interfaces, each of shape ``(n_vars, I + 1)``.

    ``ghost`` is an optional pair of outer states for non-periodic meshes;
    without it the interior trace is copied (transmissive boundary).
    """
    left_tr, right_tr = _traces(u)
    n_vars = u.shape[0]
    u_minus = np.empty((n_vars, mesh.n_elements + 1))
    u_plus = np.empty_like(u_minus)
    u_minus[:, 1:] = right_tr
    u_plus[:, :-1] = left_tr
    if mesh.periodic:
        u_minus[:, 0] = right_tr[:, -1]
        u_plus[:, -1] = left_tr[:, 0]
    elif ghost is None:
        u_minus[:, 0] = left_tr[:, 0]
        u_plus[:, -1] = right_tr[:, -1]
    else:
        u_minus[:, 0] = ghost[0]
        u_plus[:, -1] = ghost[1]
    return u_minus, u_plus


def dg_derivative(w, w_star, mesh, elem):
    """Strong-form DG derivative of ``w`` given interface values ``w_star`` (``(n_vars, I+1)``)."""
    left_tr, right_tr = _traces(w)
    jumps = np.stack([left_tr - w_star[:, :-1], right_tr - w_star[:, 1:]], axis=-1)
    correction = (jumps @ elem.boundary) @ elem.lift.T
    return (2.0 / mesh.h) * (w @ elem.diff_nodal.T - correction)


def hyperbolic_rhs(u, law, flux_kind, mesh, elem, ghost=None):
    u = np.asarray(u, dtype=float)
    f = law.flux(u)
    u_minus, u_plus = interface_states(u, mesh, ghost)
    f_num = numerical_flux(law, flux_kind, u_minus, u_plus)
    return -dg_derivative(f, f_num, mesh, elem)


def _central(w, mesh):
    """Average of the two traces; physical boundaries keep the interior trace."""
    w_minus, w_plus = interface_states(w, mesh)
    return 0.5 * (w_minus + w_plus)


def auxiliary_gradient(u, visc_nodal, mesh, elem):
    """``q = eps * du/dx`` with central interface values for ``u``."""
    g = dg_derivative(u, _central(u, mesh), mesh, elem)
    return visc_nodal[None, :, :] * g


def viscous_rhs(u, visc, mesh, elem):
    """Local-DG discretisation of ``d/dx (eps(x) du/dx)`` applied to every variable."""
    u = np.asarray(u, dtype=float)
    eps = visc.nodal if hasattr(visc, "nodal") else np.asarray(visc, dtype=float)
    if np.any(eps < 0.0):
        raise ValueError("negative viscosity sample")
    if not np.any(eps):
        return np.zeros_like(u)
    q = auxiliary_gradient(u, eps, mesh, elem)
    return dg_derivative(q, _central(q, mesh), mesh, elem)


def full_rhs(u, law, flux_kind, visc, mesh, elem, ghost=None):
    rhs = hyperbolic_rhs(u, law, flux_kind, mesh, elem, ghost)
    if visc is not None:
        rhs = rhs + viscous_rhs(u, visc, mesh, elem)
    return rhs
