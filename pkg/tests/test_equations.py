import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dglab.equations import (
    ADVECTION,
    EULER,
    EulerState,
    InadmissibleStateError,
    LinearAdvection,
    UnsupportedFluxError,
    entropy_pair,
    entropy_variables,
    max_wave_speed,
    numerical_flux,
    physical_flux,
)


def col(*v):
    return np.array(v, dtype=float)[:, None]


def jacobian(fun, u, step=1e-6):
    u = np.asarray(u, dtype=float)
    J = np.empty((u.size, u.size))
    for j in range(u.size):
        du = np.zeros_like(u)
        du[j] = step
        J[:, j] = (fun(u + du) - fun(u - du)) / (2 * step)
    return J


def random_euler_state(rng):
    rho = rng.uniform(0.1, 5.0)
    v = rng.uniform(-3.0, 3.0)
    P = rng.uniform(0.1, 10.0)
    return EULER.conserved(rho, v, P)


def test_advection_flux_and_speed():
    assert physical_flux(ADVECTION, col(2.5))[0, 0] == 2.5
    assert max_wave_speed(ADVECTION, col(-7.0))[0] == 1.0
    assert LinearAdvection(speed=-2.0).max_wave_speed(col(1.0))[0] == 2.0


def test_euler_flux_hand_values():
    np.testing.assert_allclose(physical_flux(EULER, col(1, 0, 2.5))[:, 0], [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(physical_flux(EULER, col(1, 1, 3))[:, 0], [1, 2, 4], atol=1e-15)


def test_euler_wave_speed_hand_values():
    assert max_wave_speed(EULER, col(1, 0, 2.5))[0] == pytest.approx(math.sqrt(1.4))
    assert max_wave_speed(EULER, col(1, 1, 3))[0] == pytest.approx(1 + math.sqrt(1.4))


@pytest.mark.parametrize("u", [(1, 0, 2.5), (1, 1, 3), (0.4, -0.3, 1.7)])
def test_wave_speed_equals_jacobian_spectral_radius(u):
    J = jacobian(lambda w: EULER.flux(w[:, None])[:, 0], np.array(u, dtype=float))
    rho = max(abs(np.linalg.eigvals(J)))
    assert max_wave_speed(EULER, col(*u))[0] == pytest.approx(rho, rel=1e-6)


def test_entropy_pair_examples():
    U, F = entropy_pair(ADVECTION, col(3.0))
    assert (U[0], F[0]) == (4.5, 4.5)
    U, F = entropy_pair(EULER, col(1, 0, 2.5))
    assert U[0] == pytest.approx(0.0, abs=1e-15) and F[0] == pytest.approx(0.0, abs=1e-15)
    e = math.e
    U, _ = entropy_pair(EULER, col(e, 0, 1 / 0.4))
    assert U[0] == pytest.approx(1.4 * e, rel=1e-14)


def test_entropy_variables_advection():
    assert entropy_variables(ADVECTION, col(-2.0))[0, 0] == -2.0


@pytest.mark.parametrize("u", [(1, 0.3, 2.8), (1, 0, 2.5), (2.0, -1.0, 4.0)])
def test_entropy_variables_are_gradient_of_entropy(u):
    u = np.array(u, dtype=float)
    step = 1e-5
    fd = np.empty(3)
    for j in range(3):
        du = np.zeros(3)
        du[j] = step
        fd[j] = (EULER.entropy_pair((u + du)[:, None])[0][0] - EULER.entropy_pair((u - du)[:, None])[0][0]) / (2 * step)
    np.testing.assert_allclose(EULER.entropy_variables(u[:, None])[:, 0], fd, atol=1e-7)


def test_euler_entropy_flux_compatibility():
    rng = np.random.default_rng(7)
    for _ in range(100):
        u = random_euler_state(rng)
        w = EULER.entropy_variables(u[:, None])[:, 0]
        fprime = jacobian(lambda s: EULER.flux(s[:, None])[:, 0], u)
        Fprime = jacobian(lambda s: EULER.entropy_pair(s[:, None])[1][0], u)[0]
        np.testing.assert_allclose(w @ fprime, Fprime, atol=1e-5 * max(1, np.abs(Fprime).max()))


@settings(max_examples=60, deadline=None)
@given(st.floats(-10, 10))
def test_scalar_entropy_flux_compatibility(u):
    h = 1e-6
    F = lambda s: ADVECTION.entropy_pair(col(s))[1][0]
    dF = (F(u + h) - F(u - h)) / (2 * h)
    assert dF == pytest.approx(u * ADVECTION.speed, abs=1e-6 * max(1, abs(u)))


def test_numerical_flux_examples():
    assert numerical_flux(ADVECTION, "upwind", col(2.0), col(5.0))[0, 0] == 2.0
    assert numerical_flux(ADVECTION, "local_lax_friedrichs", col(0.0), col(2.0))[0, 0] == 0.0
    left = LinearAdvection(speed=-1.0)
    assert numerical_flux(left, "upwind", col(2.0), col(5.0))[0, 0] == -5.0


def test_flux_errors():
    with pytest.raises(UnsupportedFluxError):
        numerical_flux(EULER, "upwind", col(1, 0, 2.5), col(1, 0, 2.5))
    with pytest.raises(UnsupportedFluxError):
        numerical_flux(ADVECTION, "roe", col(1.0), col(1.0))


def test_inadmissible_states_raise():
    with pytest.raises(InadmissibleStateError):
        EULER.flux(col(-1, 0, 2.5))
    with pytest.raises(InadmissibleStateError):
        EULER.flux(col(1, 3, 2.5))  # kinetic energy exceeds E
    rho, v, P = EULER.primitives(col(1, 3, 2.5), check=False)
    assert P[0] < 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_flux_consistency_and_llf_dissipation(seed):
    rng = np.random.default_rng(seed)
    a, b = random_euler_state(rng)[:, None], random_euler_state(rng)[:, None]
    for kind in ("local_lax_friedrichs",):
        np.testing.assert_allclose(numerical_flux(EULER, kind, a, a), EULER.flux(a), atol=1e-14 * max(1, np.abs(EULER.flux(a)).max()))
    f_num = numerical_flux(EULER, "local_lax_friedrichs", a, b)
    central = 0.5 * (EULER.flux(a) + EULER.flux(b))
    assert float(np.sum((b - a) * (f_num - central))) <= 1e-12
    x, y = rng.normal(size=2)
    for kind in ("upwind", "local_lax_friedrichs"):
        assert numerical_flux(ADVECTION, kind, col(x), col(x))[0, 0] == pytest.approx(x)


def test_euler_state_round_trip():
    st_ = EulerState.from_primitive(0.7, -0.4, 2.2)
    assert st_.v == pytest.approx(-0.4) and st_.P == pytest.approx(2.2)
    np.testing.assert_allclose(st_.as_array(), EULER.conserved(0.7, -0.4, 2.2))
