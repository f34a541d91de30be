"""Closed-form constants and the threshold period.

Every parameter set (n, R, Rt) determines a reduced one-dimensional
oscillator whose rest point is the constant-warp product metric.  This
script tabulates the derived constants and shows that the threshold
period T0 printed by the library really is the linearization period of
that rest point, by differencing the force.
"""

import numpy as np

from warpcsc import ModelParams, derive_constants, force, linearized_frequency

print("derived constants across dimensions (R = Rt = 2)")
print(f"{'n':>3} {'x_star':>10} {'f_star':>10} {'omega':>12} {'T0':>18} {'c_min':>12}")
for n in range(3, 9):
    k = derive_constants(ModelParams(n, 2.0, 2.0))
    print(f"{n:>3} {k.x_star:>10.6f} {k.f_star:>10.6f} {k.omega:>12.8f} "
          f"{k.T0:>18.12f} {k.c_min:>12.6f}")

print()
print("the threshold is the linearization period: T0 = 2*pi/omega, with")
print("omega^2 equal to the force gradient at the rest point")
print()

rng = np.random.default_rng(1)
print(f"{'n':>3} {'R':>7} {'Rt':>7} {'T0':>18} {'2*pi/sqrt(FD grad)':>20} {'rel diff':>10}")
for _ in range(6):
    params = ModelParams(int(rng.integers(3, 9)),
                         float(rng.uniform(0.5, 6.0)),
                         float(rng.uniform(0.5, 6.0)))
    k = derive_constants(params)
    h = 1e-6 * k.x_star
    grad = (force(k.x_star + h, params) - force(k.x_star - h, params)) / (2.0 * h)
    t_fd = 2.0 * np.pi / np.sqrt(grad)
    print(f"{params.n:>3} {params.R:>7.3f} {params.Rt:>7.3f} {k.T0:>18.12f} "
          f"{t_fd:>20.12f} {abs(t_fd - k.T0) / k.T0:>10.2e}")

print()
print("omega depends only on Rt and n, never on R; R moves the rest")
print("point but not the clock:")
for R in (0.5, 2.0, 8.0):
    params = ModelParams(5, R, 2.0)
    print(f"  R = {R:<4}: omega = {linearized_frequency(params):.15f}, "
          f"x_star = {derive_constants(params).x_star:.6f}")
