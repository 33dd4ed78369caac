"""Legendre polynomials, Gauss-Lobatto-Legendre nodes and reference-element operators.

The modal basis is the orthonormalised Legendre family
``phi_k = P_k * sqrt((2k + 1) / 2)`` on ``[-1, 1]``.  Solution values are
stored at the ``p + 1`` GLL nodes; ``vandermonde`` maps modal coefficients to
nodal values.

Two families of matrices live on a :class:`ReferenceElement`:

* the modal matrices ``mass``, ``stiffness``, ``diff``, ``restriction`` and
  ``boundary`` with exact integrals, i.e. the DG matrix form
  ``du/dt = -D f + M^-1 R^T B (R f - f_num)``;
* their nodal (collocated) counterparts ``diff_nodal`` and ``lift`` built with
  the GLL quadrature as the mass matrix.  The solver uses these.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

GLL_TOL = 1e-14
GLL_MAX_ITER = 100
DOMAIN_TOL = 1e-14
MAX_DEGREE = 30


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + DOMAIN_TOL):
        raise ValueError("Legendre evaluation outside [-1, 1]")
    return x


def legendre_table(n, x):
    """Return ``P_0 .. P_n`` at ``x`` as an array of shape ``x.shape + (n + 1,)``."""
    x = np.asarray(x, dtype=float)
    P = np.empty(x.shape + (n + 1,))
    P[..., 0] = 1.0
    if n >= 1:
        P[..., 1] = x
    for k in range(2, n + 1):
        P[..., k] = ((2 * k - 1) * x * P[..., k - 1] - (k - 1) * P[..., k - 2]) / k
    return P


def legendre_derivative_table(n, x):
    """Derivatives ``P_k'(x)`` for ``k = 0..n`` via ``P'_{k+1} = P'_{k-1} + (2k+1) P_k``."""
    P = legendre_table(n, x)
    dP = np.zeros_like(P)
    if n >= 1:
        dP[..., 1] = 1.0
    for k in range(1, n):
        dP[..., k + 1] = dP[..., k - 1] + (2 * k + 1) * P[..., k]
    return dP


def legendre_eval(k, x, kmax=MAX_DEGREE + 1):
    """Unnormalised Legendre polynomial ``P_k(x)`` by the three-term recurrence.

    ``x`` may be a scalar or an array; values further than 1e-14 outside
    ``[-1, 1]`` raise ``ValueError``.
    """
    if k < 0 or k > kmax:
        raise ValueError(f"Legendre index {k} outside [0, {kmax}]")
    x = _check_domain(x)
    val = legendre_table(k, x)[..., k]
    return float(val) if val.ndim == 0 else val


def orthonormal_scale(n):
    k = np.arange(n + 1)
    return np.sqrt((2 * k + 1) / 2.0)


def gll_nodes_weights(p):
    """Gauss-Lobatto-Legendre nodes and weights on ``[-1, 1]`` (``p + 1`` points).

    Newton iteration for the roots of ``(1 - x^2) P_p'(x)`` started from the
    Chebyshev-Gauss-Lobatto points.
    """
    n = p
    x = -np.cos(np.pi * np.arange(n + 1) / n)
    for _ in range(GLL_MAX_ITER):
        P = legendre_table(n, x)
        x_old = x
        x = x_old - (x * P[:, n] - P[:, n - 1]) / ((n + 1) * P[:, n])
        if np.max(np.abs(x - x_old)) < GLL_TOL:
            break
    else:
        raise RuntimeError(f"GLL Newton iteration did not converge for p={p}")
    # symmetrise to remove round-off asymmetry
    x = 0.5 * (x - x[::-1])
    x[0], x[-1] = -1.0, 1.0
    P = legendre_table(n, x)
    w = 2.0 / (n * (n + 1) * P[:, n] ** 2)
    return x, w


def _readonly(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ReferenceElement:
    degree: int
    nodes: np.ndarray
    quad_weights: np.ndarray
    vandermonde: np.ndarray
    inv_vandermonde: np.ndarray
    mass: np.ndarray
    stiffness: np.ndarray
    diff: np.ndarray
    restriction: np.ndarray
    boundary: np.ndarray
    eigenvalues: np.ndarray
    diff_nodal: np.ndarray
    lift: np.ndarray
    normalized: bool = True

    @property
    def n_nodes(self):
        return self.degree + 1

    def interpolation_matrix(self, r):
        """Matrix evaluating the nodal interpolant at reference points ``r``."""
        basis = legendre_table(self.degree, _check_domain(r))
        if self.normalized:
            basis = basis * orthonormal_scale(self.degree)
        return basis @ self.inv_vandermonde


@lru_cache(maxsize=None)
def build_reference_element(p, normalized=True):
    """Assemble the reference element of degree ``p`` (1 <= p <= 30).

    With ``normalized=False`` the modal matrices use plain ``P_k`` (so the mass
    matrix is ``diag(2 / (2k + 1))``); the nodal operators are unaffected.
    """
    if not isinstance(p, (int, np.integer)) or not 1 <= p <= MAX_DEGREE:
        raise ValueError(f"degree must be an integer in [1, {MAX_DEGREE}], got {p!r}")
    p = int(p)
    nodes, weights = gll_nodes_weights(p)
    scale = orthonormal_scale(p) if normalized else np.ones(p + 1)

    V = legendre_table(p, nodes) * scale
    Vinv = np.linalg.inv(V)

    # exact modal integrals: Gauss-Legendre with p + 2 points is exact to degree 2p + 3
    xq, wq = np.polynomial.legendre.leggauss(p + 2)
    Pq = legendre_table(p, xq) * scale
    dPq = legendre_derivative_table(p, xq) * scale
    M = Pq.T @ (wq[:, None] * Pq)
    S = Pq.T @ (wq[:, None] * dPq)
    D = np.linalg.solve(M, S)

    ends = np.array([-1.0, 1.0])
    R = legendre_table(p, ends) * scale
    B = np.diag([-1.0, 1.0])

    k = np.arange(p + 1)
    eigenvalues = (k * (k + 1)).astype(float)

    # nodal operators: differentiation is exact on P_p, mass is the GLL quadrature
    dV = legendre_derivative_table(p, nodes) * scale
    Dn = dV @ Vinv
    # rows annihilate constants exactly (negative-sum diagonal)
    np.fill_diagonal(Dn, 0.0)
    np.fill_diagonal(Dn, -Dn.sum(axis=1))
    E = np.zeros((p + 1, 2))
    E[0, 0] = 1.0
    E[-1, 1] = 1.0
    lift = E / weights[:, None]

    return ReferenceElement(
        degree=p,
        nodes=_readonly(nodes),
        quad_weights=_readonly(weights),
        vandermonde=_readonly(V),
        inv_vandermonde=_readonly(Vinv),
        mass=_readonly(M),
        stiffness=_readonly(S),
        diff=_readonly(D),
        restriction=_readonly(R),
        boundary=_readonly(B),
        eigenvalues=_readonly(eigenvalues),
        diff_nodal=_readonly(Dn),
        lift=_readonly(lift),
        normalized=normalized,
    )


def nodal_to_modal(values, elem):
    """Modal coefficients of nodal data; the last axis must have length ``p + 1``."""
    values = np.asarray(values, dtype=float)
    if values.shape[-1] != elem.n_nodes:
        raise ValueError(
            f"expected {elem.n_nodes} nodal values on the last axis, got {values.shape[-1]}"
        )
    return values @ elem.inv_vandermonde.T


def modal_to_nodal(coeffs, elem):
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[-1] != elem.n_nodes:
        raise ValueError(
            f"expected {elem.n_nodes} modal coefficients on the last axis, got {coeffs.shape[-1]}"
        )
    return coeffs @ elem.vandermonde.T


def apply_legendre_viscous_operator(modal_coeffs, elem):
    """Modal coefficients of ``d/dx (1 - x^2) d/dx u``: mode ``k`` maps to ``-k(k+1) u_k``."""
    modal_coeffs = np.asarray(modal_coeffs, dtype=float)
    return -elem.eigenvalues * modal_coeffs
