"""The thermal free energy computed over imaginary and over real frequencies.

For the plasma model the Matsubara sum and the mode/phase-shift integral
give the same separation-dependent thermal part.  For the Drude model the
real-frequency result goes smoothly to the plasma value as gamma -> 0
(imaginary part linear in gamma, real part quadratic), whereas the Matsubara side keeps a finite offset.
"""
from lifshitz_lab.free_energy.abel_plana import defect_f_D0
from lifshitz_lab.free_energy.matsubara import matsubara_free_energy
from lifshitz_lab.free_energy.realfreq import overdamped_mode_growth, real_frequency_thermal_part
from lifshitz_lab.model import ModelParams

p = ModelParams(omega_p=1.0, gap=1.0, temperature=0.3)
m_te = matsubara_free_energy(p, "plasma", pols=("TE",)).thermal_part
r_te = real_frequency_thermal_part(p, "plasma", pols=("TE",)).thermal_part
print(f"plasma TE thermal part: Matsubara {m_te:.12e}, real frequency {r_te.real:.12e}")

print("\nDrude TE minus plasma TE")
d = defect_f_D0(p)
for g in (1e-2, 1e-3):
    q = p.with_(gamma=g)
    real = real_frequency_thermal_part(q, "drude", pols=("TE",)).thermal_part - r_te
    mats = matsubara_free_energy(q, "drude", pols=("TE",)).thermal_part - m_te
    print(f"  gamma={g:g}: real frequency {real.real:+.3e} {real.imag:+.3e}i, Matsubara {mats:+.6e}")
print(f"  offset predicted from f_D0 = {d.f_D0:.8f}: {d.defect:+.6e}")

# Summing the over-damped root as well would not converge.
grow = overdamped_mode_growth(p.with_(gamma=0.1), [10, 20, 40])
print(f"\nover-damped term grows with cutoff^{grow['exponent']:.3f}")
