"""Initial/boundary data and default settings for the named test problems."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .equations import ADVECTION, EULER


def square_wave(x, a=0.25, b=0.75, low=0.0, high=1.0, period=1.0, x0=0.0):
    xm = np.mod(np.asarray(x, dtype=float) - x0, period) + x0
    return np.where((xm > a) & (xm < b), high, low)


@dataclass(frozen=True)
class Scenario:
    name: str
    law: object
    x_left: float
    x_right: float
    boundary: str
    t_final: float
    initial: Callable
    n_elements: int
    degree: int
    viscosity: str
    flux: str
    sensor_c: float
    description: str = ""
    split_point: float | None = None
    extra: dict = field(default_factory=dict)

    def ghost_states(self):
        """Outer states frozen at the initial data, or ``None`` when periodic."""
        if self.boundary == "periodic":
            return None
        u = np.asarray(self.initial(np.array([self.x_left, self.x_right])), dtype=float)
        return u[:, 0].copy(), u[:, 1].copy()

    @property
    def period(self):
        return self.x_right - self.x_left


SOD_RIGHT = (0.125, 0.0, 0.1)  # rho, v, P
SHU_OSHER_LEFT = (3.857143, 2.629369, 10.33333)


def sod_states(variant="classical"):
    left = (1.0, 1.0 if variant == "paper_literal" else 0.0, 1.0)
    return left, SOD_RIGHT


def _riemann_initial(left, right, x0):
    def initial(x):
        x = np.asarray(x, dtype=float)
        rho = np.where(x < x0, left[0], right[0])
        v = np.where(x < x0, left[1], right[1])
        P = np.where(x < x0, left[2], right[2])
        return EULER.conserved(rho, v, P)

    return initial


def _shu_osher_initial(x0, freq):
    def initial(x):
        x = np.asarray(x, dtype=float)
        left = x < x0
        rho = np.where(left, SHU_OSHER_LEFT[0], 1.0 + 0.2 * np.sin(freq * x))
        v = np.where(left, SHU_OSHER_LEFT[1], 0.0)
        P = np.where(left, SHU_OSHER_LEFT[2], 1.0)
        return EULER.conserved(rho, v, P)

    return initial


SCENARIO_NAMES = ("advection_square", "advection_sine", "advection_fig5", "sod", "shu_osher")
PRESET_VARIANTS = ("classical", "paper_literal")


def get_scenario(name, variant="classical"):
    if variant not in PRESET_VARIANTS:
        raise ValueError(f"preset_variant must be one of {PRESET_VARIANTS}, got {variant!r}")
    if name == "advection_square":
        return Scenario(
            name, ADVECTION, 0.0, 1.0, "periodic", 1.0,
            lambda x: square_wave(x)[None], 20, 9, "none", "upwind", 1.0,
            "square wave, 20 elements of degree 9, one period",
        )
    if name == "advection_sine":
        return Scenario(
            name, ADVECTION, 0.0, 1.0, "periodic", 1.0,
            lambda x: np.sin(2 * np.pi * np.asarray(x))[None], 20, 9, "none", "upwind", 1.0,
            "smooth sine wave, one period",
        )
    if name == "advection_fig5":
        return Scenario(
            name, ADVECTION, 0.0, 1.0, "periodic", 1.0,
            lambda x: square_wave(x)[None], 12, 10, "legendre", "upwind", 1.0,
            "square wave on 12 elements of degree 10; jumps sit on element boundaries",
        )
    if name == "sod":
        left, right = sod_states(variant)
        return Scenario(
            name, EULER, 0.0, 1.0, "dirichlet_outflow", 0.2,
            _riemann_initial(left, right, 0.5), 40, 5, "super_gaussian",
            "local_lax_friedrichs", 4.0, "Sod shock tube", split_point=0.5,
            extra={"left": left, "right": right},
        )
    if name == "shu_osher":
        x0, freq = (-4.0, 5.0) if variant == "classical" else (0.5, 5.0 * np.pi)
        return Scenario(
            name, EULER, -5.0, 5.0, "dirichlet_outflow", 1.8,
            _shu_osher_initial(x0, freq), 80, 5, "super_gaussian",
            "local_lax_friedrichs", 4.0, "Shu-Osher shock/entropy-wave interaction",
            split_point=x0,
        )
    raise ValueError(f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}")
