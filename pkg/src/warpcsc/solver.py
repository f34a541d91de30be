"""Solving for periodic warp profiles of a prescribed period.

The solver inverts the period map: scan T(c) over the energy band, find
the energies whose orbit period equals the request, then integrate the
reduced oscillator over one full period and push the samples back to
warp coordinates.  A profile is stored as a closed loop of samples
(t, x, v, f, f', f'') with the endpoint repeated at t = T so consumers
can treat it as one period of a periodic function without bookkeeping.

`audit_profile` rechecks a profile three independent ways: the pointwise
curvature identity in warp coordinates, the same identity with the
derivatives of f recomputed by periodic finite differences from the f
samples alone, and conservation of the reduced energy.  The first route
is an algebraic identity of the coordinate change and flags corrupted
data; the other two actually test that the samples trace a solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetExceeded,
    DomainError,
    NoBracket,
    ThresholdViolation,
    TooFewSamples,
)
from .integrator import _acc, _force_gradient
from .model import (
    ModelParams,
    _force_coeffs,
    curvature_residual,
    derive_constants,
    potential,
    to_warp_coords,
)
from .period import (
    BAND_CLAMP,
    energy_roots,
    period_quadrature,
    period_table,
    turning_points,
)

__all__ = [
    "SolutionProfile",
    "ProfileAudit",
    "profile_from_energy",
    "solve_period",
    "audit_profile",
]

SAMPLE_COLUMNS = ("t", "x", "v", "f", "fp", "fpp")


@dataclass(frozen=True, eq=False)
class SolutionProfile:
    """One period of a periodic constant-curvature warp.

    samples has shape (n_samples, 6) with columns t, x, v, f, f', f'';
    rows are uniform in t from 0 to T inclusive, so the last row repeats
    the first up to closure_error.  root_count records how many distinct
    energies attained the requested period when the profile came from
    period inversion (1 when solved directly from an energy).
    """

    params: ModelParams
    T: float
    c: float
    samples: np.ndarray
    residual_sup: float
    closure_error: float
    root_count: int = 1

    def column(self, name: str) -> np.ndarray:
        return self.samples[:, SAMPLE_COLUMNS.index(name)]

    @property
    def t(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def x(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def v(self) -> np.ndarray:
        return self.samples[:, 2]

    @property
    def f(self) -> np.ndarray:
        return self.samples[:, 3]

    @property
    def fp(self) -> np.ndarray:
        return self.samples[:, 4]

    @property
    def fpp(self) -> np.ndarray:
        return self.samples[:, 5]


@dataclass(frozen=True)
class ProfileAudit:
    """Three-route recheck of a solved profile.

    chain_sup   sup of the curvature residual on the stored (f, f', f'')
    fd_sup      sup of the residual with f', f'' recomputed from f alone
                by 4th-order periodic finite differences
    energy_sup  sup of |v^2/2 + potential(x) - c| over the samples

    Each sup comes with the index where it is attained, so a corrupted
    sample is pointed at directly.  breaches names the routes whose sup
    exceeded its threshold; flagged_index is the location of the worst
    relative breach, None when the profile is clean.
    """

    chain_sup: float
    chain_at: int
    fd_sup: float
    fd_at: int
    energy_sup: float
    energy_at: int
    chain_tol_abs: float
    fd_tol_abs: float
    energy_tol_abs: float
    breaches: tuple[str, ...]
    flagged_index: int | None

    @property
    def ok(self) -> bool:
        return not self.breaches


def _wall_limited_step(a: float, b: float, params: ModelParams, omega: float) -> float:
    # resolve the stiffest local oscillation on [a, b] with ~48 substeps;
    # the force gradient is monotone on the orbit range, extremes at a, b
    grad = max(abs(_force_gradient(a, params)), abs(_force_gradient(b, params)), omega**2)
    return (2.0 * math.pi / 48.0) / math.sqrt(grad)


def profile_from_energy(
    c: float,
    params: ModelParams,
    n_samples: int = 512,
    *,
    period: float | None = None,
    quad_rtol: float = 1e-10,
    clamp: float = BAND_CLAMP,
    energy_target: float = 5e-11,
    max_total_steps: int = 20_000_000,
    root_count: int = 1,
) -> SolutionProfile:
    """Integrate one closed orbit at energy c and sample it uniformly.

    The orbit is launched from the inner turning point, fixing the time
    origin at a minimum of the warp.  The substep count per sample is
    sized so the absolute energy wander of the run stays near
    energy_target, which is what keeps the energy-consistency route of
    the audit below its threshold.  Profiles extremely close to the
    contact energy can demand more steps than max_total_steps allows;
    that raises BudgetExceeded rather than silently degrading.
    """
    if n_samples < 16:
        raise TooFewSamples(f"n_samples must be >= 16, got {n_samples}")
    if not (math.isfinite(energy_target) and energy_target > 0.0):
        raise DomainError(f"energy_target must be positive, got {energy_target}")
    consts = derive_constants(params)
    a, b = turning_points(c, params, clamp=clamp)
    if period is None:
        T = period_quadrature(c, params, rtol=quad_rtol, clamp=clamp).T
    else:
        T = float(period)
        if not (math.isfinite(T) and T > 0.0):
            raise DomainError(f"period must be positive, got {period}")

    e_above = c - consts.c_min
    seg = T / (n_samples - 1)
    # oscillatory wander of leapfrog is about e * (omega dt)^2 / 8 at
    # leading order; anharmonic terms push it a few times higher, hence
    # the safety factor on the step
    dt_energy = 0.4 * math.sqrt(8.0 * energy_target / e_above) / consts.omega
    dt_shape = consts.T0 / 256.0
    dt_wall = _wall_limited_step(a, b, params, consts.omega)
    dt_need = min(dt_energy, dt_shape, dt_wall)
    substeps = max(1, math.ceil(seg / dt_need))
    total = (n_samples - 1) * substeps
    if total > max_total_steps:
        raise BudgetExceeded(
            f"profile at c = {c} needs {total} steps, over the budget of "
            f"{max_total_steps}; this energy sits too close to the band edge"
        )
    dt = seg / substeps

    k1, k2, e = _force_coeffs(params)
    affine = params.n == 4
    half = 0.5 * dt
    x, v = a, 0.0
    acc = _acc(x, k1, k2, e, affine)
    xs = np.empty(n_samples)
    vs = np.empty(n_samples)
    xs[0], vs[0] = x, v
    for i in range(1, n_samples):
        for _ in range(substeps):
            vh = v + half * acc
            x = x + dt * vh
            if x <= 0.0:
                raise BudgetExceeded(
                    f"profile integration at c = {c} lost positivity; "
                    "energy_target too loose for this orbit"
                )
            acc = _acc(x, k1, k2, e, affine)
            v = vh + half * acc
        xs[i], vs[i] = x, v

    ts = np.arange(n_samples, dtype=float) * seg
    f, fp, fpp = to_warp_coords(xs, vs, params)
    samples = np.column_stack([ts, xs, vs, f, fp, fpp])
    residual_sup = float(np.max(np.abs(curvature_residual(f, fp, fpp, params))))
    closure = max(
        abs(xs[-1] - xs[0]) / consts.x_star,
        abs(vs[-1] - vs[0]) / (consts.omega * consts.x_star),
    )
    if residual_sup > 1e-8 * params.R:
        raise BudgetExceeded(
            f"profile residual {residual_sup} exceeded 1e-8 * R; "
            "this indicates corrupted arithmetic, not a modeling failure"
        )
    if closure > 1e-8:
        raise BudgetExceeded(
            f"profile failed to close up: relative endpoint gap {closure}; "
            "the supplied period does not match the orbit"
        )
    return SolutionProfile(
        params=params,
        T=T,
        c=float(c),
        samples=samples,
        residual_sup=residual_sup,
        closure_error=float(closure),
        root_count=root_count,
    )


def solve_period(
    T: float,
    params: ModelParams,
    n_samples: int = 512,
    *,
    table_size: int = 160,
    quad_rtol: float = 1e-10,
    clamp: float = BAND_CLAMP,
    workers: int = 1,
    energy_target: float = 5e-11,
) -> SolutionProfile:
    """Profile of a non-constant solution with the prescribed period T.

    Periods at or below the threshold T0 are rejected outright: the
    rest point absorbs the whole band there.  When T(c) is attained at
    several energies the orbit with the smallest energy is returned and
    root_count reports how many there were.  If the scanned period range
    never touches T, NoBracket carries that range so the caller can see
    how far off the request was.
    """
    if not math.isfinite(T):
        raise DomainError(f"period must be finite, got {T}")
    consts = derive_constants(params)
    if not (T > consts.T0 * (1.0 + 1e-9)):
        raise ThresholdViolation(
            f"requested period {T} does not exceed the threshold T0 = {consts.T0}; "
            "only the constant solution exists at or below it"
        )
    if n_samples < 16:
        raise TooFewSamples(f"n_samples must be >= 16, got {n_samples}")
    table = period_table(params, table_size, rtol=quad_rtol, clamp=clamp, workers=workers)
    roots = energy_roots(T, params, table, rtol=quad_rtol, clamp=clamp)
    if not roots:
        t_min, t_max = float(np.min(table[1])), float(np.max(table[1]))
        raise NoBracket(
            f"no orbit of period {T}: scanned periods cover "
            f"[{t_min}, {t_max}] over the energy band",
            t_min=t_min,
            t_max=t_max,
        )
    profile = profile_from_energy(
        roots[0],
        params,
        n_samples,
        period=T,
        quad_rtol=quad_rtol,
        clamp=clamp,
        energy_target=energy_target,
        root_count=len(roots),
    )
    return profile


def audit_profile(
    profile: SolutionProfile,
    *,
    chain_tol: float = 1e-8,
    fd_tol: float = 1e-5,
    energy_tol: float = 1e-10,
) -> ProfileAudit:
    """Recheck a profile three independent ways; see the class docstring.

    chain_tol and fd_tol are relative to the fiber curvature R (the
    natural size of the residual's terms); energy_tol is absolute, as
    the reduced energy is the solver's own convergence control.
    """
    from .geometry import periodic_fd_derivatives, uniform_closed_count

    unique = uniform_closed_count(profile.t, profile.T, 16)
    params = profile.params
    h = profile.T / unique

    chain = np.abs(
        curvature_residual(profile.f, profile.fp, profile.fpp, params)
    )
    chain_at = int(np.argmax(chain))
    chain_sup = float(chain[chain_at])

    f_loop = profile.f[:unique]
    d1, d2 = periodic_fd_derivatives(f_loop, h)
    fd = np.abs(curvature_residual(f_loop, d1, d2, params))
    fd_at = int(np.argmax(fd))
    fd_sup = float(fd[fd_at])

    energy_dev = np.abs(
        0.5 * profile.v**2 + potential(profile.x, params) - profile.c
    )
    energy_at = int(np.argmax(energy_dev))
    energy_sup = float(energy_dev[energy_at])

    chain_abs = chain_tol * params.R
    fd_abs = fd_tol * params.R
    energy_abs = energy_tol
    breaches = []
    worst_ratio = 0.0
    flagged: int | None = None
    for name, sup, tol, at in (
        ("chain", chain_sup, chain_abs, chain_at),
        ("finite_difference", fd_sup, fd_abs, fd_at),
        ("energy", energy_sup, energy_abs, energy_at),
    ):
        if sup > tol:
            breaches.append(name)
            if sup / tol > worst_ratio:
                worst_ratio = sup / tol
                flagged = at
    return ProfileAudit(
        chain_sup=chain_sup,
        chain_at=chain_at,
        fd_sup=fd_sup,
        fd_at=fd_at,
        energy_sup=energy_sup,
        energy_at=energy_at,
        chain_tol_abs=chain_abs,
        fd_tol_abs=fd_abs,
        energy_tol_abs=energy_abs,
        breaches=tuple(breaches),
        flagged_index=flagged,
    )
