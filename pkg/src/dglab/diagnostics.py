"""Conservation and entropy tracking, exact/reference solutions and error norms."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import build_reference_element
from .equations import EULER, EulerState
from .mesh import Mesh, project, sample_field, sample_grid
from .semidisc import hyperbolic_rhs
from .timeint import STEPPERS, BlowUpError, StepControl, advective_dt


def total_integral(u, elem, mesh):
    """GLL quadrature of each variable over the domain, shape ``(n_vars,)``."""
    u = np.asarray(u, dtype=float)
    return 0.5 * mesh.h * np.einsum("vij,j->v", u, elem.quad_weights)


def total_entropy(u, law, elem, mesh):
    U, _ = law.entropy_pair(np.asarray(u, dtype=float))
    return float(0.5 * mesh.h * np.einsum("ij,j->", U, elem.quad_weights))


def entropy_rate(u, rhs, law, elem, mesh):
    """Quadrature estimate of ``d/dt int U(u)`` given the tendency ``rhs``."""
    w = law.entropy_variables(u)
    return float(0.5 * mesh.h * np.einsum("vij,vij,j->", w, rhs, elem.quad_weights))


@dataclass
class RunTrace:
    variables: tuple
    rows: list = field(default_factory=list)

    @property
    def columns(self):
        return ["t", *[f"mass_{v}" for v in self.variables], "entropy", "max_eps", "flagged", "dt"]

    def record(self, t, mass, entropy, max_eps, flagged, dt):
        if self.rows and not t > self.rows[-1][0]:
            raise ValueError("trace times must increase strictly")
        row = [float(t), *map(float, mass), float(entropy), float(max_eps), int(flagged), float(dt)]
        if not all(math.isfinite(v) for v in row):
            raise ValueError(f"non-finite trace entry at t={t}")
        self.rows.append(row)

    def column(self, name):
        idx = self.columns.index(name)
        return np.array([r[idx] for r in self.rows])


# -- exact solutions -----------------------------------------------------------

def advection_exact(initial_profile, t, x, x_left=0.0, x_right=1.0, speed=1.0):
    """``u0(x - a t)`` wrapped into the periodic domain."""
    L = x_right - x_left
    xs = np.mod(np.asarray(x, dtype=float) - speed * t - x_left, L) + x_left
    return initial_profile(xs)


class RiemannError(RuntimeError):
    pass


def _pressure_function(p, rho, P, c, gamma):
    """Toro's f_K(p) and its derivative for one side of the Riemann problem."""
    if p > P:
        A = 2.0 / ((gamma + 1.0) * rho)
        B = (gamma - 1.0) / (gamma + 1.0) * P
        sq = math.sqrt(A / (p + B))
        return (p - P) * sq, sq * (1.0 - 0.5 * (p - P) / (B + p))
    ratio = p / P
    f = 2.0 * c / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
    df = 1.0 / (rho * c) * ratio ** (-(gamma + 1.0) / (2.0 * gamma))
    return f, df


@dataclass(frozen=True)
class RiemannSolution:
    left: tuple
    right: tuple
    gamma: float
    p_star: float
    v_star: float
    iterations: int

    def pressure_residual(self, p):
        rl, vl, pl = self.left
        rr, vr, pr = self.right
        g = self.gamma
        cl, cr = math.sqrt(g * pl / rl), math.sqrt(g * pr / rr)
        return (_pressure_function(p, rl, pl, cl, g)[0]
                + _pressure_function(p, rr, pr, cr, g)[0] + vr - vl)

    def star_density(self, side):
        rho, _, P = self.left if side == "left" else self.right
        g, ps = self.gamma, self.p_star
        if ps > P:
            r = (g - 1.0) / (g + 1.0)
            return rho * (ps / P + r) / (r * ps / P + 1.0)
        return rho * (ps / P) ** (1.0 / g)

    def shock_speed(self, side):
        rho, v, P = self.left if side == "left" else self.right
        g = self.gamma
        c = math.sqrt(g * P / rho)
        term = c * math.sqrt((g + 1.0) / (2.0 * g) * self.p_star / P + (g - 1.0) / (2.0 * g))
        return v - term if side == "left" else v + term

    def sample(self, xi):
        """Primitive ``(rho, v, P)`` at similarity coordinates ``xi = (x - x0) / t``."""
        xi = np.asarray(xi, dtype=float)
        g = self.gamma
        rl, vl, pl = self.left
        rr, vr, pr = self.right
        cl, cr = math.sqrt(g * pl / rl), math.sqrt(g * pr / rr)
        ps, us = self.p_star, self.v_star
        rho = np.empty_like(xi)
        v = np.empty_like(xi)
        P = np.empty_like(xi)

        left_side = xi < us
        # left of the contact
        if ps > pl:
            sl = self.shock_speed("left")
            pre = left_side & (xi < sl)
            post = left_side & ~pre
            rho[pre], v[pre], P[pre] = rl, vl, pl
            rho[post], v[post], P[post] = self.star_density("left"), us, ps
        else:
            head = vl - cl
            tail = us - cl * (ps / pl) ** ((g - 1.0) / (2.0 * g))
            pre = left_side & (xi < head)
            fan = left_side & (xi >= head) & (xi < tail)
            post = left_side & (xi >= tail)
            rho[pre], v[pre], P[pre] = rl, vl, pl
            base = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * cl) * (vl - xi[fan])
            rho[fan] = rl * base ** (2.0 / (g - 1.0))
            v[fan] = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * vl + xi[fan])
            P[fan] = pl * base ** (2.0 * g / (g - 1.0))
            rho[post], v[post], P[post] = self.star_density("left"), us, ps
        right_side = ~left_side
        if ps > pr:
            sr = self.shock_speed("right")
            pre = right_side & (xi > sr)
            post = right_side & ~pre
            rho[pre], v[pre], P[pre] = rr, vr, pr
            rho[post], v[post], P[post] = self.star_density("right"), us, ps
        else:
            head = vr + cr
            tail = us + cr * (ps / pr) ** ((g - 1.0) / (2.0 * g))
            pre = right_side & (xi > head)
            fan = right_side & (xi <= head) & (xi > tail)
            post = right_side & (xi <= tail)
            rho[pre], v[pre], P[pre] = rr, vr, pr
            base = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * cr) * (vr - xi[fan])
            rho[fan] = rr * base ** (2.0 / (g - 1.0))
            v[fan] = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * vr + xi[fan])
            P[fan] = pr * base ** (2.0 * g / (g - 1.0))
            rho[post], v[post], P[post] = self.star_density("right"), us, ps
        return rho, v, P


def solve_riemann(left, right, gamma=1.4, tol=1e-12, max_iter=100):
    """Star-region pressure and velocity by Newton iteration on the pressure function.

    ``left`` and ``right`` are primitive ``(rho, v, P)`` triples.
    """
    rl, vl, pl = map(float, left)
    rr, vr, pr = map(float, right)
    if min(rl, pl, rr, pr) <= 0:
        raise RiemannError("Riemann data must have positive density and pressure")
    g = gamma
    cl, cr = math.sqrt(g * pl / rl), math.sqrt(g * pr / rr)
    if 2.0 / (g - 1.0) * (cl + cr) <= vr - vl:
        raise RiemannError("initial data generate vacuum")
    # two-rarefaction guess is exact when both waves are rarefactions
    z = (g - 1.0) / (2.0 * g)
    p = ((cl + cr - 0.5 * (g - 1.0) * (vr - vl)) / (cl / pl**z + cr / pr**z)) ** (1.0 / z)
    p = max(p, 1e-10)
    for it in range(1, max_iter + 1):
        fl, dfl = _pressure_function(p, rl, pl, cl, g)
        fr, dfr = _pressure_function(p, rr, pr, cr, g)
        p_new = max(p - (fl + fr + vr - vl) / (dfl + dfr), 1e-14)
        change = 2.0 * abs(p_new - p) / (p_new + p)
        p = p_new
        if change < tol:
            break
    else:
        raise RiemannError(f"Newton iteration did not converge in {max_iter} iterations")
    fl, _ = _pressure_function(p, rl, pl, cl, g)
    fr, _ = _pressure_function(p, rr, pr, cr, g)
    v = 0.5 * (vl + vr) + 0.5 * (fr - fl)
    return RiemannSolution((rl, vl, pl), (rr, vr, pr), g, p, v, it)


def sod_exact(x, t, left=(1.0, 0.0, 1.0), right=(0.125, 0.0, 0.1), gamma=1.4, x0=0.5):
    """Exact Riemann solution as an :class:`EulerState` sampled at ``x`` and time ``t > 0``."""
    if t <= 0:
        raise ValueError("sod_exact needs t > 0")
    sol = solve_riemann(left, right, gamma)
    rho, v, P = sol.sample((np.asarray(x, dtype=float) - x0) / t)
    return EulerState.from_primitive(rho, v, P, gamma)


# -- limited p = 1 reference run -----------------------------------------------

def minmod(a, b, c):
    s = np.sign(a)
    same = (s == np.sign(b)) & (s == np.sign(c))
    return np.where(same, s * np.minimum(np.abs(a), np.minimum(np.abs(b), np.abs(c))), 0.0)


def slope_limit_p1(u, mesh, ghost=None):
    """Minmod limiting of the element slopes of a degree-1 nodal field (GLL end points)."""
    mean = 0.5 * (u[..., 0] + u[..., 1])
    slope = (u[..., 1] - u[..., 0]) / mesh.h
    if mesh.periodic:
        left_mean = np.roll(mean, 1, axis=-1)
        right_mean = np.roll(mean, -1, axis=-1)
    else:
        outer_l = mean[:, :1] if ghost is None else np.asarray(ghost[0])[:, None]
        outer_r = mean[:, -1:] if ghost is None else np.asarray(ghost[1])[:, None]
        left_mean = np.concatenate([outer_l, mean[:, :-1]], axis=1)
        right_mean = np.concatenate([mean[:, 1:], outer_r], axis=1)
    limited = minmod(slope, (right_mean - mean) / mesh.h, (mean - left_mean) / mesh.h)
    half = 0.5 * mesh.h * limited
    return np.stack([mean - half, mean + half], axis=-1)


@dataclass
class ReferenceSolution:
    scenario: str
    t: float
    x: np.ndarray
    values: np.ndarray
    law: object
    mass_history: list = field(default_factory=list)
    mean_range: tuple = ()
    final_state: np.ndarray | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.stack([np.interp(x, self.x, v) for v in self.values])

    def primitive_columns(self):
        if self.law.name == "euler":
            rho, v, P = self.law.primitives(self.values, check=False)
            return {"rho": rho, "v": v, "P": P}
        return {name: self.values[i] for i, name in enumerate(self.law.variables)}

    def to_csv(self, path):
        cols = self.primitive_columns()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", *cols])
            for i, xi in enumerate(self.x):
                w.writerow([f"{xi:.17g}", *(f"{c[i]:.17g}" for c in cols.values())])


def limited_reference_run(scenario, n_elements=2000, degree=1, cfl=0.38, t_final=None,
                          integrator="ssprk33", initial=None):
    """Degree-1 DG with minmod slope limiting after every stage.

    ``scenario`` is a scenario name or a :class:`~dglab.scenarios.Scenario`.
    Returns a :class:`ReferenceSolution` sampled on the standard snapshot grid.
    """
    from .scenarios import get_scenario

    if degree != 1:
        raise ValueError("the limited reference run is defined for degree 1")
    sc = get_scenario(scenario) if isinstance(scenario, str) else scenario
    law = sc.law
    mesh = Mesh(n_elements, sc.x_left, sc.x_right, sc.boundary)
    elem = build_reference_element(1)
    ghost = sc.ghost_states()
    flux = "upwind" if law.name == "advection" else "local_lax_friedrichs"
    u = project(initial or sc.initial, mesh, elem)
    u = slope_limit_p1(u, mesh, ghost)
    t_end = sc.t_final if t_final is None else t_final
    control = StepControl(cfl=cfl)
    stepper = STEPPERS[integrator]

    def rhs(v):
        return hyperbolic_rhs(v, law, flux, mesh, elem, ghost)

    def limited_rhs_step(v, dt, step):
        # limiter after every stage: wrap the stage update
        def limited(w):
            return rhs(slope_limit_p1(w, mesh, ghost))
        return slope_limit_p1(stepper(v, dt, limited, step), mesh, ghost)

    mean0 = 0.5 * (u[..., 0] + u[..., 1])
    mean_range = (float(mean0.min()), float(mean0.max()))
    masses = [total_integral(u, elem, mesh)]
    t, step = 0.0, 0
    while t < t_end * (1 - 1e-14):
        lam = float(np.max(law.max_wave_speed(u)))
        dt = min(advective_dt(lam, mesh, elem, control), t_end - t)
        u = limited_rhs_step(u, dt, step)
        if not np.all(np.isfinite(u)):
            raise BlowUpError("limited reference run blew up", step)
        t += dt
        step += 1
        masses.append(total_integral(u, elem, mesh))
    x, vals = sample_field(u, mesh, elem)
    return ReferenceSolution(sc.name, t, x, vals, law, masses, mean_range, u)


# -- error norms ---------------------------------------------------------------

@dataclass(frozen=True)
class Norms:
    l1: np.ndarray
    l2: np.ndarray
    linf: np.ndarray


def grid_norms(diff, dx):
    diff = np.atleast_2d(np.asarray(diff, dtype=float))
    a = np.abs(diff)
    return Norms(a.sum(axis=1) * dx, np.sqrt((a**2).sum(axis=1) * dx), a.max(axis=1))


def error_norms(u, reference_sampler, elem, mesh):
    """L1, L2 and Linf of ``u - reference`` by the midpoint rule on the snapshot grid."""
    x, vals = sample_field(u, mesh, elem)
    ref = np.atleast_2d(reference_sampler(x))
    dx = mesh.h / (x.size // mesh.n_elements)
    return grid_norms(vals - ref, dx)


__all__ = [
    "EULER", "Norms", "ReferenceSolution", "RiemannError", "RiemannSolution", "RunTrace",
    "advection_exact", "entropy_rate", "error_norms", "grid_norms", "limited_reference_run",
    "minmod", "slope_limit_p1", "sod_exact", "solve_riemann", "total_entropy",
    "total_integral", "sample_grid",
]
