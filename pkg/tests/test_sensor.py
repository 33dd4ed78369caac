import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dglab.basis import build_reference_element, nodal_to_modal
from dglab.equations import ADVECTION, EULER
from dglab.mesh import Mesh, project
from dglab.sensor import (
    LOG_FLOOR,
    SensorConfig,
    classic_score,
    max_strength,
    modified_score,
    sense,
    smoothness_indicator,
    strength_from_score,
)


def test_smoothness_indicator_examples():
    assert smoothness_indicator([1, 0, 0, 0]) == 0.0
    assert smoothness_indicator([0, 0, 0, 1]) == 1.0
    assert smoothness_indicator([1, 1]) == 0.5
    assert smoothness_indicator(np.zeros(5)) == 0.0
    assert smoothness_indicator([1e-15, 0, 1e-15]) == 0.0  # below the energy floor


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3), st.booleans())
def test_indicator_scale_invariant(p, seed, scale, flip):
    c = np.random.default_rng(seed).standard_normal(p + 1)
    a = -scale if flip else scale
    assert smoothness_indicator(a * c) == pytest.approx(smoothness_indicator(c), rel=1e-12)
    assert 0.0 <= smoothness_indicator(c) <= 1.0


@pytest.mark.parametrize("p", [2, 5, 9])
def test_degree_p_minus_1_data_gives_zero(p):
    elem = build_reference_element(p)
    rng = np.random.default_rng(p)
    poly = np.polynomial.Polynomial(rng.standard_normal(p))  # degree p - 1
    mesh = Mesh(4)
    u = np.stack([poly(elem.nodes) for _ in range(4)])[None]
    S = smoothness_indicator(nodal_to_modal(u[0], elem))
    assert np.all(S < 1e-24)
    out = sense(u, ADVECTION, SensorConfig(c=1.0), mesh, elem)
    assert not out.eps.any()


def test_modified_score_examples():
    assert modified_score(1 / 16, 2, 1.0) == 0.0
    assert modified_score(0.5, 4, 1.0) == 0.0
    assert modified_score(0.0, 5, 1.0) == LOG_FLOOR
    assert modified_score(1e-6, 3, 2.0) == pytest.approx(math.log10(2 * 81 * 1e-6))


def test_classic_score_and_reference():
    assert classic_score(1e-3) == pytest.approx(-3.0)
    assert classic_score(0.0) == LOG_FLOOR
    assert SensorConfig(mode="classic").s_ref(10) == pytest.approx(-4.0)
    assert SensorConfig().s_ref(10) == -2.0


def test_ramp_endpoints_exact():
    s_ref, kappa, emax = -2.0, 1.0, 0.3
    assert strength_from_score(s_ref, s_ref, kappa, emax) == emax / 2
    assert strength_from_score(s_ref - 2 * kappa, s_ref, kappa, emax) == 0.0
    assert strength_from_score(s_ref - kappa, s_ref, kappa, emax) == 0.0
    assert strength_from_score(s_ref + kappa, s_ref, kappa, emax) == emax
    assert strength_from_score(s_ref + 5, s_ref, kappa, emax) == emax


@settings(max_examples=200, deadline=None)
@given(st.floats(-8, 4), st.floats(-8, 4), st.floats(0.1, 3), st.floats(0, 5))
def test_ramp_monotone_and_bounded(a, b, kappa, emax):
    lo, hi = min(a, b), max(a, b)
    va = strength_from_score(lo, -2.0, kappa, emax)
    vb = strength_from_score(hi, -2.0, kappa, emax)
    assert 0.0 <= va <= vb + 1e-15 <= emax + 1e-15


def test_ramp_is_continuous_at_knots():
    for knot in (-3.0, -1.0):
        left = strength_from_score(knot - 1e-9, -2.0, 1.0, 1.0)
        right = strength_from_score(knot + 1e-9, -2.0, 1.0, 1.0)
        assert abs(left - right) < 1e-8


def test_max_strength_examples():
    assert max_strength(ADVECTION, np.ones((1, 2, 3)), 0.1, 5) == pytest.approx(0.01)
    u = np.broadcast_to(np.array([1.0, 0.0, 2.5])[:, None, None], (3, 2, 6))
    assert max_strength(EULER, u, 1.0, 5) == pytest.approx(0.5 * math.sqrt(1.4) / 5)
    assert max_strength(EULER, u, 1.0, 5) == pytest.approx(0.1183, abs=5e-5)
    assert max_strength(ADVECTION, np.ones((1, 2, 3)), 0.0, 5) == 0.0


def test_sense_constant_field():
    elem = build_reference_element(5)
    mesh = Mesh(6)
    out = sense(np.full((1, 6, 6), 3.0), ADVECTION, SensorConfig(), mesh, elem)
    assert not out.eps.any() and out.flagged == 0


def test_sense_step_inside_one_element_saturates():
    elem = build_reference_element(5)
    mesh = Mesh(8)
    u = project(lambda x: np.where(x < 0.3, 1.0, 0.0)[None], mesh, elem)  # jump inside element 2
    out = sense(u, ADVECTION, SensorConfig(c=1.0), mesh, elem)
    emax = 0.5 * mesh.h / 5
    assert out.eps_max == pytest.approx(emax)
    assert out.eps[2] == pytest.approx(emax)
    assert out.s[2] >= -1.0  # at or above s_ref + kappa
    assert out.eps[0] == 0.0 and out.eps[-1] == 0.0


def test_sense_resolved_sine_is_quiet():
    elem = build_reference_element(9)
    mesh = Mesh(20)
    u = project(lambda x: np.sin(2 * np.pi * x)[None], mesh, elem)
    out = sense(u, ADVECTION, SensorConfig(c=1.0), mesh, elem)
    assert not out.eps.any()


def test_euler_sensor_uses_density():
    elem = build_reference_element(4)
    mesh = Mesh(5, boundary="dirichlet_outflow")
    # smooth density, wildly oscillating energy: no viscosity
    x = mesh.map_to_physical(elem.nodes)
    u = np.stack([np.ones_like(x), np.zeros_like(x), 2.5 + 0.1 * np.cos(40 * x)])
    out = sense(u, EULER, SensorConfig(c=4.0), mesh, elem)
    assert not out.eps.any()


def test_config_validation():
    with pytest.raises(ValueError):
        SensorConfig(mode="fancy")
    with pytest.raises(ValueError):
        SensorConfig(kappa=0)
    with pytest.raises(ValueError):
        SensorConfig(c=-1)
