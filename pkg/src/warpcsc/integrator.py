"""Fixed-step leapfrog integration of the reduced oscillator.

The only vector field here is x'' = -force(x).  Kick-drift-kick leapfrog
preserves the conservative structure, so energy errors oscillate instead
of drifting and long runs stay on the right orbit.  That property is
what makes the return-map period measurement a trustworthy second route,
independent of the turning-point quadrature.

Section crossings (v = 0) are refined below grid resolution by root
finding on the substep map: a partial step of size tau from the stored
pre-crossing state gives

    v(tau) = v0 + tau/2 * (a(x0) + a(x0 + tau v0 + tau^2/2 a(x0))),

which matches the full step at tau = dt exactly, so the refined time is
consistent with the trajectory actually computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import BudgetExceeded, DomainError, EnergyOutOfBand, PositivityViolation
from .model import (
    ModelParams,
    PhaseState,
    _force_coeffs,
    derive_constants,
    energy,
    force,
)

__all__ = [
    "IntegratorConfig",
    "DriftReport",
    "leapfrog_step",
    "integrate_until_section",
    "period_return_map",
    "energy_drift",
]


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size and budgets for section searches.

    tol bounds the residual speed |v| accepted at a refined crossing,
    relative to the velocity scale of the orbit.
    """

    dt: float
    tol: float = 1e-9
    max_steps: int = 20_000_000

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise DomainError(f"dt must be positive and finite, got {self.dt}")
        if not (0.0 < self.tol < 1e-3):
            raise DomainError(f"tol must lie in (0, 1e-3), got {self.tol}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class DriftReport:
    """Energy wander of a long fixed-step run, relative to the well depth."""

    max_rel: float
    secular_rel: float
    scale: float
    n_steps: int


def leapfrog_step(state: PhaseState, dt: float, params: ModelParams) -> PhaseState:
    """One kick-drift-kick step.  Negative dt steps backwards in time."""
    if not math.isfinite(dt):
        raise DomainError(f"dt must be finite, got {dt}")
    half = 0.5 * dt
    vh = state.v - half * force(state.x, params)
    x1 = state.x + dt * vh
    if x1 <= 0.0:
        raise PositivityViolation(
            f"step of size {dt} from x = {state.x} left the positive half-line"
        )
    v1 = vh - half * force(x1, params)
    return PhaseState(t=state.t + dt, x=x1, v=v1)


def _acc(x: float, k1: float, k2: float, e: float, affine: bool) -> float:
    # acceleration -force(x); inlined power for the hot loops
    if affine:
        return k2 - k1 * x
    return k2 * x**e - k1 * x


def _force_gradient(x: float, params: ModelParams) -> float:
    k1, k2, e = _force_coeffs(params)
    if params.n == 4:
        return k1
    return k1 - e * k2 * x ** (e - 1.0)


def _refine_crossing(
    x0: float, v0: float, a0: float, dt: float, k1: float, k2: float, e: float, affine: bool
) -> tuple[float, float, float]:
    """Locate v = 0 inside one step; returns (tau, x(tau), v(tau))."""

    def v_of(tau: float) -> float:
        xm = x0 + tau * (v0 + 0.5 * tau * a0)
        if xm <= 0.0:
            raise PositivityViolation("crossing refinement left the positive half-line")
        return v0 + 0.5 * tau * (a0 + _acc(xm, k1, k2, e, affine))

    v_end = v_of(dt)
    if v0 == 0.0:
        return 0.0, x0, 0.0
    if v0 * v_end > 0.0:
        # roundoff put the sign change outside [0, dt]; take the endpoint
        tau = dt if abs(v_end) < abs(v0) else 0.0
    else:
        tau = brentq(v_of, 0.0, dt, xtol=1e-300, rtol=8.9e-16)
    xm = x0 + tau * (v0 + 0.5 * tau * a0)
    return tau, xm, v_of(tau)


def integrate_until_section(
    state: PhaseState,
    params: ModelParams,
    config: IntegratorConfig,
    direction: int = 1,
) -> tuple[PhaseState, float]:
    """Advance until v changes sign in the given direction.

    direction +1 waits for v going negative to positive, -1 for the
    opposite, 0 accepts either.  A start exactly at the rest point is
    degenerate and returns immediately with zero elapsed time; callers
    that mean to measure oscillation must start off the rest point.
    Energies outside the closed-orbit band are rejected since no return
    is guaranteed there.
    """
    if direction not in (-1, 0, 1):
        raise DomainError(f"direction must be -1, 0 or 1, got {direction}")
    consts = derive_constants(params)
    scale_v = consts.omega * max(consts.x_star, state.x)
    if state.v == 0.0 and abs(force(state.x, params)) <= 1e-12 * consts.omega * scale_v:
        return state, 0.0
    c = energy(state.x, state.v, params)
    if not (consts.c_min < c < 0.0):
        raise EnergyOutOfBand(
            f"energy {c} outside the closed-orbit band ({consts.c_min}, 0)"
        )
    k1, k2, e = _force_coeffs(params)
    affine = params.n == 4
    dt = config.dt
    x, v = state.x, state.v
    acc = _acc(x, k1, k2, e, affine)
    half = 0.5 * dt
    for step in range(config.max_steps):
        vh = v + half * acc
        x1 = x + dt * vh
        if x1 <= 0.0:
            raise PositivityViolation(
                f"section search hit x <= 0 after {step} steps; reduce dt"
            )
        acc1 = _acc(x1, k1, k2, e, affine)
        v1 = vh + half * acc1
        crossed = (v * v1 < 0.0) or (v1 == 0.0 and v != 0.0)
        if crossed:
            sign_after = 1.0 if (v1 > 0.0 or (v1 == 0.0 and v < 0.0)) else -1.0
            if direction == 0 or sign_after == direction:
                tau, xr, vr = _refine_crossing(x, v, acc, dt, k1, k2, e, affine)
                elapsed = step * dt + tau
                if abs(vr) > config.tol * scale_v:
                    raise BudgetExceeded(
                        f"crossing refinement stalled at |v| = {abs(vr)}"
                    )
                return PhaseState(t=state.t + elapsed, x=xr, v=vr), elapsed
        x, v, acc = x1, v1, acc1
    raise BudgetExceeded(
        f"no section crossing within {config.max_steps} steps of size {dt}"
    )


def _rough_inner_turning(e_above_min: float, params: ModelParams) -> float:
    """Crude bisection for the inner turning point, used only to size steps."""
    from .model import potential_above_min

    x_star = (params.R / params.Rt) ** (params.n / 4.0)
    lo = x_star
    for _ in range(80):
        lo *= 0.5
        if potential_above_min(lo, params) >= e_above_min:
            break
    hi = min(2.0 * lo, x_star)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if potential_above_min(mid, params) >= e_above_min:
            lo = mid
        else:
            hi = mid
    return hi


def _step_for_energy(e_above_min: float, params: ModelParams, steps_per_period: int) -> float:
    """Step small enough for both the outer swing and the inner wall.

    Low dimensions steepen sharply near x = 0, so orbits close to the
    contact energy oscillate locally much faster than the linearized
    frequency suggests.  Resolve the stiffest point (the inner turning
    point) with a fixed number of substeps per local cycle.
    """
    consts = derive_constants(params)
    dt = consts.T0 / steps_per_period
    a_rough = _rough_inner_turning(e_above_min, params)
    local = math.sqrt(abs(_force_gradient(a_rough, params)))
    if local > 0.0:
        dt = min(dt, (2.0 * math.pi / 48.0) / local)
    return dt


def _measure_half_gap(
    x0: float, v0: float, dt: float, params: ModelParams, budget: int
) -> tuple[float, float, float]:
    """Times of the first two downward v = 0 crossings from (x0, v0).

    Returns (t_first, t_second, energy_wander).  The gap is one full
    period regardless of where on the orbit the launch point sits.
    """
    k1, k2, e = _force_coeffs(params)
    affine = params.n == 4
    A, Bq, q = _pot_coeffs_cached(params)
    x, v = x0, v0
    acc = _acc(x, k1, k2, e, affine)
    e0 = 0.5 * v0 * v0 + A * x0 * x0 - Bq * x0**q
    wander = 0.0
    half = 0.5 * dt
    times: list[float] = []
    for step in range(budget):
        vh = v + half * acc
        x1 = x + dt * vh
        if x1 <= 0.0:
            raise PositivityViolation("period measurement hit x <= 0; reduce dt")
        acc1 = _acc(x1, k1, k2, e, affine)
        v1 = vh + half * acc1
        if (v > 0.0 and v1 <= 0.0) and not (v1 == 0.0 and v == 0.0):
            tau, _, _ = _refine_crossing(x, v, acc, dt, k1, k2, e, affine)
            times.append(step * dt + tau)
            if len(times) == 2:
                e1 = 0.5 * v1 * v1 + A * x1 * x1 - Bq * x1**q
                wander = max(wander, abs(e1 - e0))
                return times[0], times[1], wander
        x, v, acc = x1, v1, acc1
        if step % 1024 == 0:
            e1 = 0.5 * v1 * v1 + A * x1 * x1 - Bq * x1**q
            wander = max(wander, abs(e1 - e0))
    raise BudgetExceeded(f"fewer than two downward crossings in {budget} steps")


def _pot_coeffs_cached(params: ModelParams) -> tuple[float, float, float]:
    from .model import _potential_coeffs

    return _potential_coeffs(params)


def period_return_map(
    c: float,
    params: ModelParams,
    *,
    steps_per_period: int = 4096,
    richardson: bool = True,
    max_retries: int = 6,
) -> float:
    """Orbit period measured by timing successive downward v = 0 crossings.

    Launches from (x_star, sqrt(2 (c - c_min))), which needs no turning
    point data, so this route shares nothing with the quadrature except
    the vector field itself.  With richardson=True the measurement is
    repeated at half the step and extrapolated, removing the leading
    step-size error.  Retries halve the step when the energy wander of a
    run exceeds one part in 1e6 of the orbit's energy offset.
    """
    consts = derive_constants(params)
    e_above = c - consts.c_min
    if not (e_above > 0.0 and c < 0.0):
        raise EnergyOutOfBand(
            f"energy {c} outside the closed-orbit band ({consts.c_min}, 0)"
        )
    v0 = math.sqrt(2.0 * e_above)
    dt = _step_for_energy(e_above, params, steps_per_period)
    wander_gate = 2e-6 * e_above
    last_err: Exception | None = None
    for _ in range(max_retries):
        budget = int(8.0 * consts.T0 / dt) + 64
        try:
            t1, t2, w1 = _measure_half_gap(consts.x_star, v0, dt, params, budget)
            if not richardson:
                if w1 <= wander_gate:
                    return t2 - t1
                dt *= 0.5
                continue
            s1, s2, w2 = _measure_half_gap(consts.x_star, v0, 0.5 * dt, params, 2 * budget)
            if max(w1, w2) <= wander_gate:
                return (4.0 * (s2 - s1) - (t2 - t1)) / 3.0
            dt *= 0.5
        except PositivityViolation as err:
            last_err = err
            dt *= 0.5
    raise BudgetExceeded(
        f"return-map period did not stabilize after {max_retries} step halvings"
    ) from last_err


def energy_drift(c: float, params: ModelParams, dt: float, n_steps: int) -> DriftReport:
    """Energy wander of an n_steps leapfrog run started at (x_star, v(c)).

    max_rel is the worst pointwise deviation from the initial energy,
    secular_rel compares the mean energy of the second half of the run
    against the first half; both are relative to the well depth.  For a
    symplectic scheme max_rel saturates while secular_rel stays near
    roundoff no matter how long the run.
    """
    if n_steps < 2:
        raise DomainError(f"n_steps must be >= 2, got {n_steps}")
    if not (math.isfinite(dt) and dt > 0.0):
        raise DomainError(f"dt must be positive and finite, got {dt}")
    consts = derive_constants(params)
    e_above = c - consts.c_min
    if not (e_above > 0.0 and c < 0.0):
        raise EnergyOutOfBand(
            f"energy {c} outside the closed-orbit band ({consts.c_min}, 0)"
        )
    k1, k2, e = _force_coeffs(params)
    affine = params.n == 4
    A, Bq, q = _pot_coeffs_cached(params)
    x = consts.x_star
    v = math.sqrt(2.0 * e_above)
    acc = _acc(x, k1, k2, e, affine)
    e0 = 0.5 * v * v + A * x * x - Bq * x**q
    half = 0.5 * dt
    max_dev = 0.0
    halfway = n_steps // 2
    sum_first = 0.0
    sum_second = 0.0
    for step in range(n_steps):
        vh = v + half * acc
        x = x + dt * vh
        if x <= 0.0:
            raise PositivityViolation("drift run hit x <= 0; reduce dt")
        acc = _acc(x, k1, k2, e, affine)
        v = vh + half * acc
        ei = 0.5 * v * v + A * x * x - Bq * x**q
        dev = abs(ei - e0)
        if dev > max_dev:
            max_dev = dev
        if step < halfway:
            sum_first += ei
        else:
            sum_second += ei
    scale = max(abs(consts.c_min), abs(c))
    secular = abs(sum_second / (n_steps - halfway) - sum_first / halfway)
    return DriftReport(
        max_rel=max_dev / scale,
        secular_rel=secular / scale,
        scale=scale,
        n_steps=n_steps,
    )
