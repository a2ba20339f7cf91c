import numpy as np
import pytest
from scipy.special import zeta

from lifshitz_lab.errors import DomainError
from lifshitz_lab.free_energy.matsubara import (matsubara_free_energy, matsubara_sum, phi,
                                                vacuum_energy)
from lifshitz_lab.model import ModelParams, Permittivity


def test_drude_high_temperature_is_tm_zero_mode():
    # r_TE(0) = 0 and r_TM(0) = 1: F -> -T zeta(3)/(16 pi L^2)
    p = ModelParams(omega_p=1.0, gamma=0.1, gap=1.0, temperature=5.0)
    F = matsubara_free_energy(p, "drude", with_vacuum=False).total
    assert F == pytest.approx(-5.0 * zeta(3) / (16 * np.pi), rel=1e-8)


def test_phi_at_zero_frequency_tm():
    p = ModelParams(gap=2.0)
    v, _ = phi(np.array([0.0]), p, Permittivity.plasma(p), "TM")
    assert v[0] == pytest.approx(-zeta(3) / (4 * 4.0), rel=1e-12)


def test_ideal_conductor_energy():
    p = ModelParams(omega_p=1e3, temperature=1e-3)
    F = matsubara_free_energy(p, "plasma", with_vacuum=False).total
    assert abs(F / (-np.pi ** 2 / 720) - 1) < 0.01


def test_large_separation_classical_limit():
    # only the l = 0 terms survive, each with r^2 -> 1: F -> -T zeta(3)/(8 pi L^2) -> 0
    for L in (40.0, 80.0):
        p = ModelParams(gap=L, temperature=0.3)
        F = matsubara_free_energy(p, "plasma", with_vacuum=False).total
        assert F * L ** 2 == pytest.approx(-0.3 * zeta(3) / (8 * np.pi), rel=0.06)


def test_reality_and_prime_weighting():
    p = ModelParams(gamma=0.2, temperature=0.4)
    rep = matsubara_free_energy(p, "drude")
    assert isinstance(rep.total, float)
    assert rep.breakdown["sum_TE"] + rep.breakdown["sum_TM"] == pytest.approx(rep.total, rel=1e-12)
    # fixed truncation reproduces the adaptive result
    F, _, lm = matsubara_sum(p, Permittivity.drude(p))
    F2, _, _ = matsubara_sum(p, Permittivity.drude(p), l_max=lm)
    assert F2 == pytest.approx(F, rel=1e-10)


def test_vacuum_is_temperature_independent():
    p = ModelParams(temperature=0.2)
    e1, _ = vacuum_energy(p, Permittivity.plasma(p))
    e2, _ = vacuum_energy(p.with_(temperature=0.9), Permittivity.plasma(p))
    assert e1 == e2 and e1 < 0


def test_low_temperature_thermal_part_cubic():
    th = [matsubara_free_energy(ModelParams(temperature=T), "plasma").thermal_part
          for T in (0.01, 0.005)]
    assert th[0] / th[1] == pytest.approx(8.0, rel=0.03)


def test_requires_positive_temperature():
    with pytest.raises(DomainError):
        matsubara_free_energy(ModelParams(temperature=0.0), "plasma")
