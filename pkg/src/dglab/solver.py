"""Time-marching driver: sensor, viscosity field, step size and stepper per step."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import RunTrace, total_entropy, total_integral
from .semidisc import full_rhs, hyperbolic_rhs
from .sensor import SensorConfig, sense
from .timeint import STEPPERS, StepControl, compute_dt, modal_filter_step
from .viscosity import ViscosityDistribution, build_viscosity_field

MODES = ("unsplit", "split_filter")
TIME_TOL = 1e-12


@dataclass
class StepInfo:
    dt: float
    max_eps: float
    flagged: int


@dataclass
class Simulation:
    law: object
    mesh: object
    elem: object
    flux: str
    dist: ViscosityDistribution
    sensor: SensorConfig = field(default_factory=SensorConfig)
    control: StepControl = field(default_factory=StepControl)
    integrator: str = "ssprk33"
    mode: str = "unsplit"
    ghost: tuple | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"time mode must be one of {MODES}, got {self.mode!r}")
        if self.integrator not in STEPPERS:
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.mode == "split_filter" and self.dist.kind != "legendre":
            raise ValueError("split_filter mode needs legendre viscosity")

    @property
    def viscous(self):
        return self.dist.kind != "none"

    def viscosity(self, u):
        """Sensor output and the matching viscosity field (``None`` without viscosity)."""
        out = sense(u, self.law, self.sensor, self.mesh, self.elem)
        if not self.viscous:
            return out, None
        return out, build_viscosity_field(out.eps, self.dist, self.mesh, self.elem)

    def rhs(self, u, visc=None):
        if self.sensor.per_stage and self.viscous and self.mode == "unsplit":
            visc = self.viscosity(u)[1]
        return full_rhs(u, self.law, self.flux, visc, self.mesh, self.elem, self.ghost)

    def step(self, u, dt_cap=math.inf, step=None):
        """Advance one step of at most ``dt_cap``; returns ``(u_new, StepInfo)``."""
        out, visc = self.viscosity(u)
        vmax = visc.max if visc is not None else 0.0
        # the filter is exact, so split mode has no parabolic restriction
        dt = compute_dt(u, self.law, vmax if self.mode == "unsplit" else 0.0,
                        self.mesh, self.elem, self.control)
        dt = min(dt, dt_cap)
        stepper = STEPPERS[self.integrator]
        if self.mode == "split_filter":
            u_new = stepper(u, dt, lambda v: hyperbolic_rhs(
                v, self.law, self.flux, self.mesh, self.elem, self.ghost), step)
            u_new = modal_filter_step(u_new, out.eps, dt, self.mesh, self.elem)
        else:
            u_new = stepper(u, dt, lambda v: self.rhs(v, visc), step)
        return u_new, StepInfo(dt, vmax, out.flagged)

    def record(self, trace, t, u, info):
        trace.record(t, total_integral(u, self.elem, self.mesh),
                     total_entropy(u, self.law, self.elem, self.mesh),
                     info.max_eps, info.flagged, info.dt)

    def run(self, u0, t_final, snapshot_times=(), on_snapshot=None, series_every=1,
            max_steps=None, on_step=None, trace=None):
        """March to ``t_final``, landing exactly on every snapshot time.

        Returns ``(u, t, trace)``.  ``on_snapshot(t, u)`` fires at each requested
        time; ``on_step(t, u)`` after every accepted step.  Pass ``trace`` to keep
        the partial series if the run raises.
        """
        u = np.asarray(u0, dtype=float).copy()
        if trace is None:
            trace = RunTrace(tuple(self.law.variables))
        out, visc = self.viscosity(u)
        self.record(trace, 0.0, u, StepInfo(0.0, visc.max if visc is not None else 0.0, out.flagged))
        targets = sorted({float(s) for s in snapshot_times if 0 < s < t_final} | {float(t_final)})
        t, n = 0.0, 0
        for target in targets:
            while target - t > TIME_TOL * max(1.0, target):
                if max_steps is not None and n >= max_steps:
                    return u, t, trace
                u, info = self.step(u, target - t, n)
                n += 1
                t = target if target - (t + info.dt) <= TIME_TOL * max(1.0, target) else t + info.dt
                if on_step is not None:
                    on_step(t, u)
                if n % series_every == 0 or t == target:
                    self.record(trace, t, u, info)
            if on_snapshot is not None:
                on_snapshot(t, u)
        return u, t, trace
