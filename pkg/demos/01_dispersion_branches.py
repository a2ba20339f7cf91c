"""Three branches of the Drude dispersion cubic.

A damped metal replaces each plasma frequency pair +-sqrt(Omega^2 + k^2) by
three roots: two damped oscillations and a purely imaginary over-damped root.
This script follows them as the damping grows, compares them with the
second-order series in gamma and shows where two of them collide.
"""
import numpy as np

from lifshitz_lab.dispersion import (discriminant, perturbative_roots, probe_convergence,
                                     solve_dispersion_cubic)
from lifshitz_lab.model import ModelParams

params = ModelParams(omega_p=1.0)
k = 0.3

print("labelled roots at k = 0.3")
for g in (0.0, 0.1, 0.5, 1.0):
    r = solve_dispersion_cubic(params.with_(gamma=g), k)
    print(f"  gamma={g:4.1f}  omega1={r.omega1:.6f}  omega2={r.omega2:.6f}  omega3={r.omega3:.6f}")

# The series is accurate to third order once k > 0.
series = perturbative_roots(params, k, 2)
print("\nseries error of omega1")
for g in (1e-2, 1e-3):
    exact = solve_dispersion_cubic(params.with_(gamma=g), k).omega1
    print(f"  gamma={g:g}  |series - exact| = {abs(series['omega1'](g) - exact):.3e}")

# At k = 0 the discriminant vanishes at gamma = 2, where omega1 and omega3 meet.
print("\ndiscriminant at k = 0:", [f"{abs(discriminant(0.0, g, 1.0)):.3g}" for g in (1.9, 2.0, 2.1)])

# The fig1 preset scans gamma*exp(i*alpha); for real gamma the branches at
# k = 0.3 meet only near gamma = 2, and the rotated rays miss the collision.
for a in (0.0, 0.2 * np.pi, np.pi):
    probe = probe_convergence(params, k, a, np.linspace(0.005, 3.0, 300))
    print(f"alpha={a:.4f}: collision at |gamma| = {probe.collision_gamma}")
