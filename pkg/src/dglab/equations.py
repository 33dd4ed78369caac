"""Conservation laws, entropy pairs and interface fluxes.

States are arrays whose first axis runs over the conserved variables, so a
scalar law takes shape ``(1, ...)`` and the Euler system ``(3, ...)``.  All
functions broadcast over the trailing axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InadmissibleStateError(ValueError):
    """Raised when density or pressure is not positive."""


class UnsupportedFluxError(ValueError):
    pass


@dataclass(frozen=True)
class LinearAdvection:
    speed: float = 1.0
    n_vars: int = 1
    name: str = "advection"
    variables: tuple = ("u",)

    def flux(self, u):
        return self.speed * np.asarray(u, dtype=float)

    def max_wave_speed(self, u):
        u = np.asarray(u, dtype=float)
        return np.full(u.shape[1:], abs(self.speed))

    def entropy_pair(self, u):
        u = np.asarray(u, dtype=float)[0]
        U = 0.5 * u**2
        return U, self.speed * U

    def entropy_variables(self, u):
        return np.array(u, dtype=float)


@dataclass(frozen=True)
class Euler:
    gamma: float = 1.4
    n_vars: int = 3
    name: str = "euler"
    variables: tuple = ("rho", "m", "E")

    def primitives(self, u, check=True):
        """Return ``(rho, v, P)``; raises :class:`InadmissibleStateError` if requested."""
        u = np.asarray(u, dtype=float)
        rho, m, E = u[0], u[1], u[2]
        with np.errstate(divide="ignore", invalid="ignore"):
            v = m / rho
            P = (self.gamma - 1.0) * (E - 0.5 * v * m)
        if check and not (np.all(rho > 0.0) and np.all(P > 0.0)):
            raise InadmissibleStateError(
                f"non-positive density or pressure (min rho={np.min(rho):.3e}, "
                f"min P={np.min(P):.3e})"
            )
        return rho, v, P

    def conserved(self, rho, v, P):
        rho, v, P = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (rho, v, P)))
        return np.stack([rho, rho * v, P / (self.gamma - 1.0) + 0.5 * rho * v**2])

    def flux(self, u):
        u = np.asarray(u, dtype=float)
        rho, v, P = self.primitives(u)
        m, E = u[1], u[2]
        return np.stack([m, v * m + P, v * (E + P)])

    def sound_speed(self, u):
        rho, _, P = self.primitives(u)
        return np.sqrt(self.gamma * P / rho)

    def max_wave_speed(self, u):
        rho, v, P = self.primitives(u)
        return np.abs(v) + np.sqrt(self.gamma * P / rho)

    def entropy_pair(self, u):
        rho, v, P = self.primitives(u)
        s = np.log(P) - self.gamma * np.log(rho)
        U = -rho * s
        return U, U * v

    def entropy_variables(self, u):
        rho, v, P = self.primitives(u)
        g = self.gamma
        s = np.log(P) - g * np.log(rho)
        beta = (g - 1.0) * rho / P
        return np.stack([g - s - 0.5 * beta * v**2, beta * v, -beta])


ADVECTION = LinearAdvection()
EULER = Euler()


def physical_flux(law, u):
    return law.flux(u)


def max_wave_speed(law, u):
    return law.max_wave_speed(u)


def entropy_pair(law, u):
    return law.entropy_pair(u)


def entropy_variables(law, u):
    return law.entropy_variables(u)


FLUX_KINDS = ("upwind", "local_lax_friedrichs")


def numerical_flux(law, kind, u_minus, u_plus):
    """Interface flux between the left trace ``u_minus`` and right trace ``u_plus``."""
    u_minus = np.asarray(u_minus, dtype=float)
    u_plus = np.asarray(u_plus, dtype=float)
    if kind == "upwind":
        if not isinstance(law, LinearAdvection):
            raise UnsupportedFluxError("upwind flux is only defined for linear advection")
        return law.flux(u_minus if law.speed >= 0 else u_plus)
    if kind == "local_lax_friedrichs":
        lam = np.maximum(law.max_wave_speed(u_minus), law.max_wave_speed(u_plus))
        return 0.5 * (law.flux(u_minus) + law.flux(u_plus)) - 0.5 * lam * (u_plus - u_minus)
    raise UnsupportedFluxError(f"unknown numerical flux {kind!r}")


@dataclass(frozen=True)
class EulerState:
    """Conserved Euler state (``rho``, ``m``, ``E``); entries may be arrays."""

    rho: object
    m: object
    E: object
    gamma: float = 1.4

    @classmethod
    def from_primitive(cls, rho, v, P, gamma=1.4):
        u = Euler(gamma).conserved(rho, v, P)
        return cls(u[0], u[1], u[2], gamma)

    @property
    def v(self):
        return np.asarray(self.m) / np.asarray(self.rho)

    @property
    def P(self):
        return (self.gamma - 1.0) * (np.asarray(self.E) - 0.5 * self.v * np.asarray(self.m))

    def as_array(self):
        return np.stack(np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (self.rho, self.m, self.E))))
