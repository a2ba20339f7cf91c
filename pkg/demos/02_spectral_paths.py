"""Root paths under rotation of the frequency contour, and the kappa loops.

Tracing omega along xi*exp(i*alpha) shows the omega1 and omega3 branches
trading endpoints once alpha passes a critical angle.  In the kappa plane the
discrete mode condition produces a closed loop whose size settles as gamma
goes to zero, while the plasma path stays simple.
"""
import numpy as np

from lifshitz_lab.model import ModelParams
from lifshitz_lab.spectral_paths import (critical_alpha_from_discriminant, find_critical_alpha,
                                         loop_area_sequence)

for g in (0.1, 1.0):
    p = ModelParams(omega_p=1.0, gamma=g)
    a, _ = find_critical_alpha(p)
    cands = [c[0] / (np.pi / 2) for c in critical_alpha_from_discriminant(p)]
    print(f"gamma={g}: endpoint exchange at alpha/(pi/2) = {a / (np.pi / 2):.5f},"
          f" double roots of the cubic at {np.round(cands, 5).tolist()}")

print("\nkappa-path loop areas at k_par = 1, alpha = pi/2")
for g, area, perim in loop_area_sequence(ModelParams(omega_p=1.0),
                                         [0.1, 0.06, 0.03, 0.01, 0.001, 0.0]):
    txt = "no self-intersection" if area is None else f"area {area:.5f}, perimeter {perim:.4f}"
    print(f"  gamma={g:<6g} {txt}")
