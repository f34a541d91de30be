"""Turning points, the period quadrature and energy scans."""

import math

import numpy as np
import pytest

from warpcsc import (
    DomainError,
    EnergyOutOfBand,
    ModelParams,
    QuadratureNonConvergence,
    derive_constants,
    energy_grid,
    energy_roots,
    period_quadrature,
    period_scan,
    period_table,
    potential,
    potential_above_min,
    turning_points,
)

# mpmath (dps=40) references, 17 significant digits.
FROZEN_ORBITS = [
    # (n, R, Rt, c, a, b, T)
    (3, 2.0, 2.0, -0.225, 0.091313656401387648, 2.0652376254858012, 5.8985046008834841),
    (5, 2.6, 1.1, -0.63971489931227987, 1.3062510383884438, 4.4911203643815935, 12.096238216042459),
    (6, 2.0, 2.0, -0.015, 0.086640187350716299, 1.7951770649490951, 10.69979269117666),
]

# T/T0 near the contact energy approaches sqrt(n)/2; two stations on the way
FROZEN_CONTACT_RATIO = {
    3: (0.86686807301809501, 0.866026979389022),
    5: (1.1007796204263442, 1.116282907604029),
    6: (1.1737739764223567, 1.2155842463464136),
}

# T/T0 for n=3, R=Rt=2 at s = 1e-6; the limit value is 1
FROZEN_SMALL_AMPLITUDE_RATIO = 0.99999994444441744


@pytest.mark.parametrize("case", FROZEN_ORBITS, ids=lambda c: f"n{c[0]}")
def test_turning_points_match_reference(case):
    n, R, Rt, c, a_ref, b_ref, _ = case
    params = ModelParams(n, R, Rt)
    a, b = turning_points(c, params)
    assert a == pytest.approx(a_ref, rel=1e-13)
    assert b == pytest.approx(b_ref, rel=1e-13)
    # polished roots put the potential on the energy level to roundoff
    depth = abs(derive_constants(params).c_min)
    assert abs(potential(a, params) - c) < 1e-13 * depth
    assert abs(potential(b, params) - c) < 1e-13 * depth


@pytest.mark.parametrize("case", FROZEN_ORBITS, ids=lambda c: f"n{c[0]}")
def test_period_quadrature_matches_reference(case):
    n, R, Rt, c, a_ref, b_ref, T_ref = case
    params = ModelParams(n, R, Rt)
    spec = period_quadrature(c, params)
    assert spec.T == pytest.approx(T_ref, rel=5e-13)
    assert spec.a == pytest.approx(a_ref, rel=1e-13)
    assert spec.b == pytest.approx(b_ref, rel=1e-13)
    assert spec.c == c
    assert spec.amplitude == pytest.approx(b_ref - a_ref, rel=1e-12)


def test_turning_points_bracket_rest_point_and_level_set():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n = int(rng.integers(3, 9))
        params = ModelParams(n, float(rng.uniform(0.2, 8.0)), float(rng.uniform(0.2, 8.0)))
        k = derive_constants(params)
        s = float(rng.uniform(1e-6, 1.0 - 1e-6))
        c = k.c_min + s * abs(k.c_min)
        a, b = turning_points(c, params)
        assert 0.0 < a < k.x_star < b
        e_above = c - k.c_min
        assert potential_above_min(a, params) == pytest.approx(e_above, rel=1e-10)
        assert potential_above_min(b, params) == pytest.approx(e_above, rel=1e-10)


def test_small_amplitude_period_approaches_threshold(p3, k3):
    s = 1e-6
    spec = period_quadrature(k3.c_min + s * abs(k3.c_min), p3)
    assert spec.T / k3.T0 == pytest.approx(FROZEN_SMALL_AMPLITUDE_RATIO, rel=1e-13)
    # leading correction is quadratic in amplitude: ratio - 1 = -s/18 + O(s^2)
    assert (spec.T / k3.T0 - 1.0) == pytest.approx(-s / 18.0, rel=1e-3)


@pytest.mark.parametrize("n", [3, 5, 6])
def test_contact_limit_ratio(n):
    params = ModelParams(n, 2.0, 2.0)
    k = derive_constants(params)
    ref_near, ref_nearer = FROZEN_CONTACT_RATIO[n]
    near = period_quadrature(k.c_min + 0.999 * abs(k.c_min), params).T / k.T0
    nearer = period_quadrature(k.c_min + 0.999999 * abs(k.c_min), params).T / k.T0
    assert near == pytest.approx(ref_near, rel=1e-12)
    assert nearer == pytest.approx(ref_nearer, rel=1e-12)
    # the band ends at sqrt(n)/2 in units of T0, approached monotonically
    edge = math.sqrt(n) / 2.0
    assert abs(nearer - edge) < abs(near - edge)
    assert abs(nearer - edge) < 2e-2 * edge


def test_period_monotone_decreasing_for_n3(p3):
    grid = energy_grid(p3, 12, mode="log", s_lo=1e-6, s_hi=1e-4)
    periods = [period_quadrature(c, p3).T for c in grid]
    assert all(t1 > t2 for t1, t2 in zip(periods, periods[1:]))


@pytest.mark.parametrize("n", [5, 6])
def test_period_monotone_increasing_for_large_n(n):
    params = ModelParams(n, 2.0, 2.0)
    grid = energy_grid(params, 12, mode="log", s_lo=1e-6, s_hi=1e-4)
    periods = [period_quadrature(c, params).T for c in grid]
    assert all(t1 < t2 for t1, t2 in zip(periods, periods[1:]))


def test_n4_period_is_isochronous(p4, k4):
    grid = energy_grid(p4, 20, mode="symlog", s_lo=1e-9, s_hi=1e-6)
    for c in grid:
        spec = period_quadrature(c, p4)
        assert spec.T == pytest.approx(k4.T0, rel=1e-12)


def test_band_edges_rejected(p3, k3):
    for c in (k3.c_min, 0.0, 0.2, k3.c_min - 1.0):
        with pytest.raises(EnergyOutOfBand):
            period_quadrature(c, p3)
        with pytest.raises(EnergyOutOfBand):
            turning_points(c, p3)


def test_energy_grid_spans_requested_clamps(p3, k3):
    depth = abs(k3.c_min)
    grid = energy_grid(p3, 9, mode="log", s_lo=1e-6, s_hi=1e-3)
    s = (grid - k3.c_min) / depth
    assert s[0] == pytest.approx(1e-6, rel=1e-9)
    assert s[-1] == pytest.approx(1.0 - 1e-3, rel=1e-9)
    assert np.all(np.diff(s) > 0.0)

    sym = energy_grid(p3, 11, mode="symlog", s_lo=1e-8, s_hi=1e-8)
    ss = (sym - k3.c_min) / depth
    assert ss[0] == pytest.approx(1e-8, rel=1e-6)
    assert ss[-1] == pytest.approx(1.0 - 1e-8, rel=1e-9)
    assert np.all(np.diff(ss) > 0.0)


def test_energy_grid_validation(p3):
    with pytest.raises(DomainError):
        energy_grid(p3, 1)
    with pytest.raises(DomainError):
        energy_grid(p3, 5, s_lo=0.0)
    with pytest.raises(DomainError):
        energy_grid(p3, 5, mode="linear")


def test_scan_preserves_grid_order_and_reports_failures(p3):
    grid = energy_grid(p3, 8, mode="log", s_lo=1e-4, s_hi=1e-3)
    scan = period_scan(grid, p3)
    assert len(scan.entries) == len(grid)
    assert scan.failures == ()
    for c, spec in zip(grid, scan.entries):
        assert spec.c == pytest.approx(float(c), rel=1e-15)


def test_scan_parallel_workers_agree_bitwise(p3):
    grid = energy_grid(p3, 10, mode="symlog", s_lo=1e-6, s_hi=1e-6)
    serial = period_scan(grid, p3, workers=1)
    parallel = period_scan(grid, p3, workers=2)
    for one, two in zip(serial.entries, parallel.entries):
        assert one.T == two.T
        assert one.a == two.a
        assert one.b == two.b


def test_table_inversion_recovers_energy(p3, k3):
    table = period_table(p3, 96)
    tau = FROZEN_ORBITS[0][6]
    roots = energy_roots(tau, p3, table)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(-0.225, abs=1e-9 * abs(k3.c_min))


def test_table_inversion_outside_band_is_empty(p3, k3):
    table = period_table(p3, 96)
    assert energy_roots(1.5 * k3.T0, p3, table) == []
    assert energy_roots(0.5 * k3.T0, p3, table) == []


def test_quadrature_nonconvergence_surfaces(p3):
    with pytest.raises(QuadratureNonConvergence):
        period_quadrature(-0.225, p3, rtol=1e-16, max_panels=8)
