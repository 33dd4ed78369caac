"""Modal-decay shock sensor mapping each element to a viscosity strength.

The indicator is the fraction of the element's L2 energy carried by the top
Legendre mode.  Its base-10 logarithm (or the clamped ``min(c p^4 S, 1)``
variant) is fed through a sine ramp of half-width ``kappa`` around ``s_ref``
to give a strength between 0 and ``eps_max = 1/2 * max|f'| * h / p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import nodal_to_modal

ENERGY_FLOOR = 1e-28
LOG_FLOOR = -12.0
MODIFIED_S_REF = -2.0


@dataclass(frozen=True)
class SensorConfig:
    mode: str = "modified"
    c: float = 1.0
    kappa: float = 1.0
    eps_max_scale: float = 1.0
    per_stage: bool = False

    def __post_init__(self):
        if self.mode not in ("classic", "modified"):
            raise ValueError(f"sensor mode must be 'classic' or 'modified', got {self.mode!r}")
        if not self.kappa > 0:
            raise ValueError("sensor kappa must be positive")
        if not self.c > 0:
            raise ValueError("sensor c must be positive")
        if not self.eps_max_scale >= 0:
            raise ValueError("sensor eps_max_scale must be non-negative")

    def s_ref(self, p):
        return MODIFIED_S_REF if self.mode == "modified" else -4.0 * math.log10(p)


@dataclass
class SensorOutput:
    S: np.ndarray
    s: np.ndarray
    eps: np.ndarray
    eps_max: float
    s_ref: float

    @property
    def flagged(self):
        return int(np.count_nonzero(self.eps > 0.0))


def smoothness_indicator(modal_coeffs):
    """Top-mode energy fraction ``u_p^2 / sum_k u_k^2`` along the last axis."""
    c = np.asarray(modal_coeffs, dtype=float)
    if c.shape[-1] < 2:
        raise ValueError("smoothness indicator needs degree p >= 1")
    energy = np.sum(c**2, axis=-1)
    top = c[..., -1] ** 2
    safe = np.where(energy < ENERGY_FLOOR, 1.0, energy)
    S = np.where(energy < ENERGY_FLOOR, 0.0, top / safe)
    return float(S) if S.ndim == 0 else S


def _log10_floor(v):
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        s = np.where(v > 0.0, np.log10(np.where(v > 0.0, v, 1.0)), LOG_FLOOR)
    return np.maximum(s, LOG_FLOOR)


def classic_score(S):
    s = _log10_floor(S)
    return float(s) if s.ndim == 0 else s


def modified_score(S, p, c):
    """``log10(min(c p^4 S, 1))`` floored at ``LOG_FLOOR``."""
    F = np.minimum(c * p**4 * np.asarray(S, dtype=float), 1.0)
    s = _log10_floor(F)
    return float(s) if s.ndim == 0 else s


def strength_from_score(s, s_ref, kappa, eps_max):
    """Sine ramp: 0 below ``s_ref - kappa``, ``eps_max`` above ``s_ref + kappa``."""
    s = np.asarray(s, dtype=float)
    ramp = 0.5 * eps_max * (1.0 + np.sin(np.pi * (s - s_ref) / (2.0 * kappa)))
    out = np.where(s < s_ref - kappa, 0.0, np.where(s > s_ref + kappa, eps_max, ramp))
    return float(out) if out.ndim == 0 else out


def max_strength(law, u, h, p):
    """``1/2 * max|lambda| * h / p`` over all nodal states in ``u``."""
    if h <= 0:
        return 0.0
    lam = float(np.max(law.max_wave_speed(u)))
    return 0.5 * lam * h / p


def sense(u, law, config, mesh, elem):
    """Per-element smoothness, score and strength from the first conserved variable.

    For the Euler equations that is the density; the resulting strengths are
    later applied to every conserved variable.
    """
    u = np.asarray(u, dtype=float)
    p = elem.degree
    modal = nodal_to_modal(u[0], elem)
    S = smoothness_indicator(modal)
    if config.mode == "modified":
        s = modified_score(S, p, config.c)
    else:
        s = classic_score(S)
    s = np.atleast_1d(s)
    s_ref = config.s_ref(p)
    eps_max = config.eps_max_scale * max_strength(law, u, mesh.h, p)
    eps = np.atleast_1d(strength_from_score(s, s_ref, config.kappa, eps_max))
    return SensorOutput(S=np.atleast_1d(S), s=s, eps=eps, eps_max=eps_max, s_ref=s_ref)
