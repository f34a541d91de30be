"""Turning points and the orbit period as a function of energy.

For an energy c in the open band (c_min, 0) the orbit oscillates between
turning points a < x_star < b where the potential equals c, and the
period is

    T(c) = sqrt(2) * integral_a^b dx / sqrt(c - potential(x)).

The integrand has inverse square-root endpoint singularities.  The
substitution x = m + r sin(theta) with m = (a+b)/2 and r = (b-a)/2
removes both at once: near a simple turning point c - potential vanishes
linearly in x, so the factor cos(theta) in dx cancels the singularity
and the transformed integrand extends smoothly through the endpoints.
Adaptive Gauss-Legendre panels on theta then converge at spectral rate.

Everything is phrased in the offset energy c - c_min through
`potential_above_min`, which keeps full precision near the well bottom
where the plain difference c - potential(x) would cancel away.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, EnergyOutOfBand, QuadratureNonConvergence
from .model import (
    ModelParams,
    _potential_coeffs,
    derive_constants,
    potential_above_min,
)

__all__ = [
    "OrbitSpec",
    "PeriodScan",
    "turning_points",
    "period_quadrature",
    "period_scan",
    "energy_grid",
    "period_table",
    "energy_roots",
]

# default clamp keeping solves away from the band edges, relative to |c_min|
BAND_CLAMP = 1e-9


@dataclass(frozen=True)
class OrbitSpec:
    """One closed orbit: energy, turning points and period."""

    c: float
    a: float
    b: float
    T: float

    @property
    def amplitude(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class PeriodScan:
    """Result of scanning T(c) over an energy grid.

    entries[i] is the OrbitSpec for grid point i or None when that point
    failed; failures lists (index, exception) pairs.  Per-point failures
    never abort the rest of the scan.
    """

    c_grid: tuple[float, ...]
    entries: tuple[OrbitSpec | None, ...]
    failures: tuple[tuple[int, Exception], ...] = field(default_factory=tuple)

    def table(self) -> tuple[np.ndarray, np.ndarray]:
        """Energies and periods of the successful entries, in grid order."""
        cs = [s.c for s in self.entries if s is not None]
        ts = [s.T for s in self.entries if s is not None]
        return np.asarray(cs), np.asarray(ts)


def _check_band(c: float, params: ModelParams, clamp: float) -> tuple[float, float]:
    """Validate c against the clamped band; returns (c_min, offset energy)."""
    consts = derive_constants(params)
    depth = abs(consts.c_min)
    e_above = c - consts.c_min
    # the boundary itself is admitted; the absolute slack keeps grid
    # points placed exactly on it from bouncing on subtraction roundoff
    edge = clamp * depth - 4e-16 * depth
    if not math.isfinite(c) or e_above < edge or -c < edge:
        raise EnergyOutOfBand(
            f"energy {c} outside the clamped band "
            f"[{consts.c_min * (1.0 - clamp)}, {-clamp * depth}]"
        )
    return consts.c_min, e_above


def turning_points(
    c: float,
    params: ModelParams,
    *,
    clamp: float = BAND_CLAMP,
    rtol: float = 1e-13,
) -> tuple[float, float]:
    """Solve potential(x) = c for the two roots bracketing x_star.

    The inner bracket comes from repeated halving below x_star, the outer
    from repeated doubling above, then each root is polished by Brent's
    method on the offset potential.  Energies within clamp * |c_min| of
    either band edge are rejected rather than solved in noise.
    """
    consts = derive_constants(params)
    _, e_above = _check_band(c, params, clamp)
    x_star = consts.x_star

    def g(x: float) -> float:
        return potential_above_min(x, params) - e_above

    def polish(root: float) -> float:
        # Brent leaves a relative-in-x error near rtol; two Newton steps
        # on the cancellation-free offset (whose derivative is exactly
        # the force) push the potential residue down to roundoff, which
        # the period quadrature needs at its endpoints
        from .model import force

        for _ in range(2):
            slope = force(root, params)
            if slope == 0.0 or not math.isfinite(slope):
                break
            candidate = root - g(root) / slope
            if candidate > 0.0:
                root = candidate
        return root

    lo = x_star
    for _ in range(2000):
        lo *= 0.5
        if g(lo) > 0.0:
            break
    else:
        raise QuadratureNonConvergence(
            f"inner turning point bracket not found below x_star for c = {c}"
        )
    a = polish(brentq(g, lo, min(2.0 * lo, x_star), xtol=1e-300, rtol=rtol))

    hi = 2.0 * x_star
    for _ in range(2000):
        if g(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise QuadratureNonConvergence(
            f"outer turning point bracket not found above x_star for c = {c}"
        )
    b = polish(brentq(g, max(0.5 * hi, x_star), hi, xtol=1e-300, rtol=rtol))
    return float(a), float(b)


@lru_cache(maxsize=8)
def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def period_quadrature(
    c: float,
    params: ModelParams,
    *,
    rtol: float = 1e-10,
    clamp: float = BAND_CLAMP,
    max_panels: int = 4096,
    min_width: float = 1e-13,
) -> OrbitSpec:
    """Period of the orbit at energy c by adaptive endpoint-free quadrature.

    Each panel is estimated with 24- and 48-node Gauss-Legendre rules;
    a panel is accepted when the two agree to the width-prorated share
    of the requested relative tolerance, otherwise it is bisected.
    Exhausting the panel budget, or shrinking a panel below min_width of
    the half-circle, raises QuadratureNonConvergence.
    """
    a, b = turning_points(c, params, clamp=clamp)
    _check_band(c, params, clamp)
    r = 0.5 * (b - a)
    root2 = math.sqrt(2.0)
    A, B, q = _potential_coeffs(params)

    def _gap_from_anchor(x: np.ndarray, d: np.ndarray) -> np.ndarray:
        # potential(x + d) - potential(x), exact rearrangement: no digits
        # are lost even when d is many orders below x
        return A * d * (2.0 * x + d) - B * x**q * np.expm1(q * np.log1p(d / x))

    def panel_values(theta: np.ndarray) -> np.ndarray:
        # Anchor each node at its nearest turning point and express both
        # the offset and cos(theta) through half angles.  The anchored
        # difference vanishes exactly at the turning point, so no
        # residue of the root solve pollutes the endpoint region, and
        # the ratio cos(theta)/sqrt(gap) stays relatively accurate all
        # the way into the corners.  Each half-orbit is thereby taken at
        # the energy of its own anchor, which sits within a few ulps of
        # c; the induced period error is far below any tolerance here.
        pos = theta >= 0.0
        half = np.where(pos, 0.25 * math.pi - 0.5 * theta, 0.25 * math.pi + 0.5 * theta)
        sh = np.sin(half)
        offset = 2.0 * r * sh**2
        x = np.where(pos, b - offset, a + offset)
        d = np.where(pos, offset, -offset)
        gap = _gap_from_anchor(x, d)
        cos_theta = 2.0 * sh * np.cos(half)
        # roundoff can graze zero right at the endpoints of a panel
        bad = gap <= 0.0
        if np.any(bad):
            gap = np.where(bad, np.finfo(float).tiny, gap)
            vals = root2 * r * cos_theta / np.sqrt(gap)
            return np.where(bad, 0.0, vals)
        return root2 * r * cos_theta / np.sqrt(gap)

    n24, w24 = _gauss_nodes(24)
    n48, w48 = _gauss_nodes(48)

    def panel_pair(lo: float, hi: float) -> tuple[float, float]:
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        coarse = half * float(w24 @ panel_values(mid + half * n24))
        fine = half * float(w48 @ panel_values(mid + half * n48))
        return coarse, fine

    span = math.pi
    lo0, hi0 = -0.5 * math.pi, 0.5 * math.pi
    seed = 8
    edges = np.linspace(lo0, hi0, seed + 1)
    rough = sum(panel_pair(edges[i], edges[i + 1])[1] for i in range(seed))
    tol_total = rtol * abs(rough)

    total = 0.0
    used = 0
    stack: list[tuple[float, float]] = [
        (edges[i], edges[i + 1]) for i in range(seed - 1, -1, -1)
    ]
    while stack:
        lo, hi = stack.pop()
        used += 1
        if used > max_panels:
            raise QuadratureNonConvergence(
                f"period quadrature exceeded {max_panels} panels at c = {c}"
            )
        width = hi - lo
        if width < min_width * span:
            raise QuadratureNonConvergence(
                f"period quadrature panel collapsed to width {width} at c = {c}"
            )
        coarse, fine = panel_pair(lo, hi)
        if abs(fine - coarse) <= tol_total * (width / span):
            total += fine
        else:
            mid = 0.5 * (lo + hi)
            stack.append((mid, hi))
            stack.append((lo, mid))
    return OrbitSpec(c=float(c), a=a, b=b, T=float(total))


def _scan_worker(args: tuple[int, float, ModelParams, float, float]):
    idx, c, params, rtol, clamp = args
    try:
        return idx, period_quadrature(c, params, rtol=rtol, clamp=clamp), None
    except Exception as err:  # collected, not fatal
        return idx, None, err


def period_scan(
    c_grid,
    params: ModelParams,
    *,
    rtol: float = 1e-10,
    clamp: float = BAND_CLAMP,
    workers: int = 1,
) -> PeriodScan:
    """Evaluate period_quadrature over a grid of energies.

    Failures are collected per point, so one bad energy does not spoil
    the scan.  workers > 1 fans the points out over worker processes;
    the result order always matches the input grid.
    """
    grid = [float(c) for c in c_grid]
    if not grid:
        raise DomainError("energy grid must be non-empty")
    jobs = [(i, c, params, rtol, clamp) for i, c in enumerate(grid)]
    results: list[OrbitSpec | None] = [None] * len(grid)
    failures: list[tuple[int, Exception]] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(_scan_worker, jobs, chunksize=8))
    else:
        outs = [_scan_worker(job) for job in jobs]
    for idx, spec, err in outs:
        if err is None:
            results[idx] = spec
        else:
            failures.append((idx, err))
    return PeriodScan(
        c_grid=tuple(grid), entries=tuple(results), failures=tuple(failures)
    )


def energy_grid(
    params: ModelParams,
    size: int,
    *,
    s_lo: float = BAND_CLAMP,
    s_hi: float = BAND_CLAMP,
    mode: str = "log",
) -> np.ndarray:
    """Grid of energies spanning the clamped band (c_min, 0).

    Parametrize c = c_min + s * |c_min| with s in (s_lo, 1 - s_hi).
    mode "log" spaces s logarithmically from the well bottom up, which
    resolves the small-amplitude end; "symlog" splits the points between
    a log approach to the bottom and a log approach to the contact
    energy, resolving both edges at once.
    """
    if size < 2:
        raise DomainError(f"grid size must be >= 2, got {size}")
    if not (0.0 < s_lo < 0.5 and 0.0 < s_hi < 0.5):
        raise DomainError("clamps must lie in (0, 0.5)")
    consts = derive_constants(params)
    depth = abs(consts.c_min)
    if mode == "log":
        s = np.logspace(math.log10(s_lo), math.log10(1.0 - s_hi), size)
    elif mode == "symlog":
        n_lo = size // 2
        n_hi = size - n_lo
        lower = np.logspace(math.log10(s_lo), math.log10(0.5), n_lo, endpoint=False)
        upper = 1.0 - np.logspace(math.log10(s_hi), math.log10(0.5), n_hi)
        s = np.concatenate([lower, upper[::-1]])
    else:
        raise DomainError(f"unknown grid mode {mode!r}")
    return consts.c_min + s * depth


def period_table(
    params: ModelParams,
    size: int = 192,
    *,
    rtol: float = 1e-10,
    clamp: float = BAND_CLAMP,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Dense (c, T) table over the clamped band, edges resolved on both sides.

    This is the lookup structure behind period inversion: root brackets
    for T(c) = tau are read off between adjacent table entries.
    """
    grid = energy_grid(params, size, mode="symlog", s_lo=clamp, s_hi=clamp)
    scan = period_scan(grid, params, rtol=rtol, clamp=clamp, workers=workers)
    cs, ts = scan.table()
    if cs.size < 2:
        raise QuadratureNonConvergence(
            "period table could not be built: nearly every grid point failed"
        )
    return cs, ts


def energy_roots(
    tau: float,
    params: ModelParams,
    table: tuple[np.ndarray, np.ndarray],
    *,
    rtol: float = 1e-10,
    clamp: float = BAND_CLAMP,
    root_rtol: float = 1e-12,
) -> list[float]:
    """All energies c in the table range with T(c) = tau, ascending in c.

    Brackets come from sign changes of T - tau between adjacent table
    entries; each bracket is polished with Brent's method on the
    quadrature period.  An empty list means the scanned period range
    never attains tau.
    """
    cs, ts = table
    roots: list[float] = []

    def h(c: float) -> float:
        return period_quadrature(c, params, rtol=rtol, clamp=clamp).T - tau

    diffs = ts - tau
    for i in range(len(cs) - 1):
        d0, d1 = diffs[i], diffs[i + 1]
        if d0 == 0.0:
            roots.append(float(cs[i]))
        elif d0 * d1 < 0.0:
            roots.append(float(brentq(h, cs[i], cs[i + 1], xtol=1e-300, rtol=root_rtol)))
    if len(diffs) and diffs[-1] == 0.0:
        roots.append(float(cs[-1]))
    return sorted(set(roots))
