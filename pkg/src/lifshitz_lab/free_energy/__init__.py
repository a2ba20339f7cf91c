"""Free energy of the gap in the Matsubara, real-frequency and Abel-Plana forms."""
from .abel_plana import abel_plana_thermal_part, defect_f_D0
from .common import FreeEnergyReport, Representation
from .contour import verify_plasma_contour_identity
from .matsubara import matsubara_free_energy, vacuum_energy
from .realfreq import gamma_series, overdamped_mode_growth, real_frequency_thermal_part
from .thermo import entropy, nernst_limit, nonperturbative_defect_check

__all__ = [
    "FreeEnergyReport", "Representation", "abel_plana_thermal_part", "defect_f_D0",
    "entropy", "gamma_series", "matsubara_free_energy", "nernst_limit",
    "nonperturbative_defect_check", "overdamped_mode_growth", "real_frequency_thermal_part",
    "vacuum_energy", "verify_plasma_contour_identity",
]
