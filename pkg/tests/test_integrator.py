"""Leapfrog stepping, section returns and long-run energy behavior."""

import math

import numpy as np
import pytest

from warpcsc import (
    BudgetExceeded,
    DomainError,
    EnergyOutOfBand,
    IntegratorConfig,
    ModelParams,
    PhaseState,
    PositivityViolation,
    derive_constants,
    energy,
    energy_drift,
    force,
    integrate_until_section,
    leapfrog_step,
    period_return_map,
)

# mpmath (dps=40) reference period for n=3, R=Rt=2 at c = -0.225
T_REF_N3 = 5.8985046008834841


def test_single_step_matches_hand_kdk(p3):
    x0, v0, dt = 1.2, 0.3, 0.01
    out = leapfrog_step(PhaseState(t=0.0, x=x0, v=v0), dt, p3)
    v_half = v0 - 0.5 * dt * force(x0, p3)
    x1 = x0 + dt * v_half
    v1 = v_half - 0.5 * dt * force(x1, p3)
    assert out.t == pytest.approx(dt, rel=1e-15)
    assert out.x == pytest.approx(x1, rel=1e-15)
    assert out.v == pytest.approx(v1, rel=1e-15)


def test_step_is_time_reversible(p5):
    state = PhaseState(t=0.0, x=1.4, v=-0.2)
    fwd = leapfrog_step(state, 0.01, p5)
    back = leapfrog_step(fwd, -0.01, p5)
    assert back.x == pytest.approx(state.x, abs=1e-15)
    assert back.v == pytest.approx(state.v, abs=1e-15)
    assert back.t == pytest.approx(0.0, abs=1e-18)


def test_energy_wander_scales_quadratically_in_dt(p3, k3):
    c = k3.c_min + 0.5 * abs(k3.c_min)
    coarse = energy_drift(c, p3, k3.T0 / 100.0, 50_000)
    fine = energy_drift(c, p3, k3.T0 / 200.0, 100_000)
    ratio = coarse.max_rel / fine.max_rel
    assert 3.2 < ratio < 4.8


def test_secular_drift_far_below_pointwise_wander(p3, k3):
    c = k3.c_min + 0.5 * abs(k3.c_min)
    rep = energy_drift(c, p3, k3.T0 / 200.0, 200_000)
    assert rep.scale == pytest.approx(abs(k3.c_min), rel=1e-12)
    assert rep.secular_rel < 1e-7
    assert rep.secular_rel < 1e-3 * rep.max_rel
    assert rep.n_steps == 200_000


def test_section_return_on_exactly_harmonic_case(p4, k4):
    """n=4 integrates a plain harmonic oscillation with known phase.

    Launching from the rest point with positive velocity, the velocity
    first crosses zero downward at a quarter period and upward at three
    quarters, where x sits at its minimum.
    """
    v0 = 0.3 * k4.omega * k4.x_star
    cfg = IntegratorConfig(dt=k4.T0 / 2048.0, max_steps=10_000)
    state, elapsed = integrate_until_section(
        PhaseState(t=0.0, x=k4.x_star, v=v0), p4, cfg, direction=1
    )
    assert elapsed == pytest.approx(0.75 * k4.T0, rel=1e-6)
    assert state.x == pytest.approx(k4.x_star - v0 / k4.omega, rel=1e-6)
    assert abs(state.v) < 1e-9 * v0

    state2, elapsed2 = integrate_until_section(
        PhaseState(t=0.0, x=k4.x_star, v=v0), p4, cfg, direction=-1
    )
    assert elapsed2 == pytest.approx(0.25 * k4.T0, rel=1e-6)
    assert state2.x == pytest.approx(k4.x_star + v0 / k4.omega, rel=1e-6)


def test_section_start_at_rest_point_returns_immediately(p3, k3):
    cfg = IntegratorConfig(dt=0.01, max_steps=100)
    state, elapsed = integrate_until_section(
        PhaseState(t=0.0, x=k3.x_star, v=0.0), p3, cfg
    )
    assert elapsed == 0.0
    assert state.x == k3.x_star


def test_section_rejects_unbound_energy(p3, k3):
    cfg = IntegratorConfig(dt=0.01, max_steps=100)
    v_escape = math.sqrt(2.0 * abs(k3.c_min)) * 1.5
    with pytest.raises(EnergyOutOfBand):
        integrate_until_section(PhaseState(t=0.0, x=k3.x_star, v=v_escape), p3, cfg)


def test_section_budget_is_enforced(p3, k3):
    cfg = IntegratorConfig(dt=k3.T0 / 4096.0, max_steps=8)
    with pytest.raises(BudgetExceeded):
        integrate_until_section(
            PhaseState(t=0.0, x=k3.x_star, v=0.3), p3, cfg, direction=1
        )


def test_coarse_step_near_wall_raises_positivity(p3):
    with pytest.raises(PositivityViolation):
        leapfrog_step(PhaseState(t=0.0, x=0.01, v=-10.0), 1.0, p3)


def test_return_map_matches_quadrature_reference(p3):
    T = period_return_map(-0.225, p3)
    assert T == pytest.approx(T_REF_N3, rel=1e-10)


def test_return_map_without_extrapolation_is_coarser_but_close(p3):
    T = period_return_map(-0.225, p3, richardson=False)
    assert T == pytest.approx(T_REF_N3, rel=2e-6)


def test_return_map_rejects_out_of_band_energy(p3, k3):
    with pytest.raises(EnergyOutOfBand):
        period_return_map(0.1, p3)
    with pytest.raises(EnergyOutOfBand):
        period_return_map(k3.c_min, p3)


def test_drift_input_validation(p3, k3):
    c = k3.c_min + 0.5 * abs(k3.c_min)
    with pytest.raises(DomainError):
        energy_drift(c, p3, 0.0, 100)
    with pytest.raises(DomainError):
        energy_drift(c, p3, 0.01, 1)
    with pytest.raises(EnergyOutOfBand):
        energy_drift(0.5, p3, 0.01, 100)


def test_config_validation():
    with pytest.raises(DomainError):
        IntegratorConfig(dt=-0.1, max_steps=10)
    with pytest.raises(DomainError):
        IntegratorConfig(dt=0.1, max_steps=0)
    with pytest.raises(DomainError):
        IntegratorConfig(dt=0.1, max_steps=10, tol=0.1)


def test_long_run_energy_stays_on_shell(p6, k6):
    """Energy error over many periods stays bounded, not growing."""
    c = k6.c_min + 0.3 * abs(k6.c_min)
    state = PhaseState(t=0.0, x=k6.x_star, v=math.sqrt(2.0 * (c - k6.c_min)))
    dt = k6.T0 / 512.0
    for _ in range(20_000):
        state = leapfrog_step(state, dt, p6)
    wander = abs(energy(state.x, state.v, p6) - c) / abs(k6.c_min)
    assert wander < 1e-4
