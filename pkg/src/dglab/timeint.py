"""SSP Runge-Kutta steppers, time-step control and the modal-filter splitting step."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import modal_to_nodal, nodal_to_modal


class BlowUpError(RuntimeError):
    def __init__(self, message, step=None, stage=None):
        super().__init__(message)
        self.step = step
        self.stage = stage


def _check_finite(u, step, stage):
    if not np.all(np.isfinite(u)):
        raise BlowUpError(f"non-finite state in step {step}, stage {stage}", step, stage)


# Shu-Osher form: row i gives u^(i+1) = sum_j alpha_ij u^(j) + dt * beta_ij L(u^(j)),
# with u^(0) the state at the start of the step.
SSPRK33_ALPHA = (
    (1.0,),
    (3.0 / 4.0, 1.0 / 4.0),
    (1.0 / 3.0, 0.0, 2.0 / 3.0),
)
SSPRK33_BETA = (
    (1.0,),
    (0.0, 1.0 / 4.0),
    (0.0, 0.0, 2.0 / 3.0),
)

# Spiteri & Ruuth five-stage fourth-order scheme
SSPRK54_ALPHA = (
    (1.0,),
    (0.444370493651235, 0.555629506348765),
    (0.620101851488403, 0.0, 0.379898148511597),
    (0.178079954393132, 0.0, 0.0, 0.821920045606868),
    (0.0, 0.0, 0.517231671970585, 0.096059710526147, 0.386708617503269),
)
SSPRK54_BETA = (
    (0.391752226571890,),
    (0.0, 0.368410593050371),
    (0.0, 0.0, 0.251891774271694),
    (0.0, 0.0, 0.0, 0.544974750228521),
    (0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906),
)

TABLEAUX = {
    "ssprk33": (SSPRK33_ALPHA, SSPRK33_BETA),
    "ssprk54": (SSPRK54_ALPHA, SSPRK54_BETA),
}


def _shu_osher_step(u, dt, rhs, alpha, beta, step):
    stages = [np.asarray(u, dtype=float)]
    slopes = []
    for i, (a_row, b_row) in enumerate(zip(alpha, beta)):
        slopes.append(rhs(stages[i]))
        new = np.zeros_like(stages[0])
        for j, (a, b) in enumerate(zip(a_row, b_row)):
            if a:
                new = new + a * stages[j]
            if b:
                new = new + (b * dt) * slopes[j]
        _check_finite(new, step, i + 1)
        stages.append(new)
    return stages[-1]


def ssprk33_step(u, dt, rhs, step=None):
    """Three-stage third-order SSP Runge-Kutta step."""
    return _shu_osher_step(u, dt, rhs, SSPRK33_ALPHA, SSPRK33_BETA, step)


def ssprk54_step(u, dt, rhs, step=None):
    """Five-stage fourth-order SSP Runge-Kutta step."""
    return _shu_osher_step(u, dt, rhs, SSPRK54_ALPHA, SSPRK54_BETA, step)


STEPPERS = {"ssprk33": ssprk33_step, "ssprk54": ssprk54_step}


@dataclass(frozen=True)
class StepControl:
    cfl: float = 0.38
    visc_safety: float = 0.25
    fixed_dt: float | None = None

    def __post_init__(self):
        if not self.cfl > 0:
            raise ValueError("CFL number must be positive")
        if not self.visc_safety > 0:
            raise ValueError("parabolic safety constant must be positive")
        if self.fixed_dt is not None and not self.fixed_dt > 0:
            raise ValueError("fixed_dt must be positive")


def min_node_spacing(mesh, elem):
    return 0.5 * mesh.h * float(np.min(np.diff(elem.nodes)))


def advective_dt(lam_max, mesh, elem, control):
    if lam_max <= 0:
        return math.inf
    return control.cfl * mesh.h / ((2 * elem.degree + 1) * lam_max)


def parabolic_dt(eps_max, mesh, elem, control):
    """``C_visc * dx^2 / ||eps||_inf`` with ``dx`` the smallest nodal spacing."""
    if eps_max <= 0:
        return math.inf
    return control.visc_safety * min_node_spacing(mesh, elem) ** 2 / eps_max


def compute_dt(u, law, visc_max, mesh, elem, control):
    """Stable step: the smaller of the advective and parabolic bounds (or ``fixed_dt``)."""
    if control.fixed_dt is not None:
        return control.fixed_dt
    lam = float(np.max(law.max_wave_speed(u)))
    dt = min(advective_dt(lam, mesh, elem, control), parabolic_dt(visc_max, mesh, elem, control))
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError(f"time step is not positive and finite: {dt}")
    return dt


def filter_factors(strengths, dt, mesh, elem):
    """``exp(-eps_i k(k+1) dt (2/h)^2)`` per element and mode, shape ``(I, p + 1)``."""
    eps = np.asarray(strengths, dtype=float)
    return np.exp(-np.outer(eps, elem.eigenvalues) * dt * (2.0 / mesh.h) ** 2)


def modal_filter_step(u, strengths, dt, mesh, elem):
    """Exact solution over ``dt`` of ``du/dt = eps_i d/dx (1 - r^2) d/dx u`` per element."""
    u = np.asarray(u, dtype=float)
    modal = nodal_to_modal(u, elem) * filter_factors(strengths, dt, mesh, elem)[None]
    return modal_to_nodal(modal, elem)


def operator_split_advance(u, dt, hyperbolic, strengths, mesh, elem, kind="legendre",
                           integrator="ssprk33", step=None):
    """Lie splitting: one SSPRK step of the hyperbolic part, then the modal filter."""
    if kind != "legendre":
        raise ValueError(f"modal filter splitting requires legendre viscosity, got {kind!r}")
    u = STEPPERS[integrator](u, dt, hyperbolic, step)
    return modal_filter_step(u, strengths, dt, mesh, elem)
