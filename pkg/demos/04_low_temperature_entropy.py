"""Entropy of the gap as T -> 0.

With gamma(T) = gamma1*T^2 the Drude entropy extrapolates to the same
negative constant for any gamma1, equal to -f_D0/(16 pi^2 L^2), while the
plasma model entropy vanishes.  Runs in about fifteen seconds.
"""
import numpy as np

from lifshitz_lab.free_energy.abel_plana import defect_f_D0
from lifshitz_lab.free_energy.thermo import nernst_limit
from lifshitz_lab.model import ModelParams, TemperatureLaw

p = ModelParams(omega_p=1.0, gap=1.0)
Ts = np.geomspace(1e-3, 1e-4, 6)
f0 = defect_f_D0(p.with_(temperature=1.0)).f_D0
print(f"expected Drude limit {-f0 / (16 * np.pi ** 2):.6e}")
for label, model, law in (("plasma", "plasma", None),
                          ("Drude gamma1=1", "drude", TemperatureLaw(1.0, 2.0)),
                          ("Drude gamma1=10", "drude", TemperatureLaw(10.0, 2.0))):
    r = nernst_limit(p, model, law, Ts)
    print(f"{label:16s} S0 = {r.S0:+.6e} +- {r.S0_error:.1e}, correction ~ T^{r.p:.2f}")
