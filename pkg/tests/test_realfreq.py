import numpy as np
import pytest

from lifshitz_lab.errors import DomainError
from lifshitz_lab.free_energy.matsubara import matsubara_free_energy
from lifshitz_lab.free_energy.realfreq import (bose_log, free_gap_photons, gamma_series,
                                               real_frequency_thermal_part,
                                               surface_plasmon_frequency)
from lifshitz_lab.model import ModelParams


@pytest.fixture(scope="module")
def te_plasma():
    p = ModelParams(temperature=0.3)
    return p, real_frequency_thermal_part(p, "plasma", pols=("TE",)).thermal_part


def test_te_plasma_matches_matsubara(te_plasma):
    p, rf = te_plasma
    ms = matsubara_free_energy(p, "plasma", pols=("TE",)).thermal_part
    assert rf == pytest.approx(ms, rel=1e-8)


def test_drude_difference_is_imaginary_at_first_order(te_plasma):
    p, P = te_plasma
    g = 1e-3
    D = complex(real_frequency_thermal_part(p.with_(gamma=g), "drude", pols=("TE",)).thermal_part)
    d = D - P
    assert abs(d) > 0
    assert abs(d.real) < 1e-3 * abs(d.imag)
    # the next order is real and O(gamma^2)
    D2 = complex(real_frequency_thermal_part(p.with_(gamma=g / 10), "drude", pols=("TE",)).thermal_part)
    assert (D2 - P).real / d.real == pytest.approx(0.01, rel=1e-3)


def test_gamma_series_first_coefficient_imaginary(te_plasma):
    p, P = te_plasma
    coef, _ = gamma_series(p, order=2, radius=1e-3, n_points=6)
    assert coef[0] == pytest.approx(P, rel=1e-10)
    assert abs(coef[1].real) < 1e-6 * abs(coef[1].imag)
    assert abs(coef[2].imag) < 1e-4 * abs(coef[2].real)


def test_low_temperature_decay():
    # the thermal part dies off with T (faster than T^2 at low T) and stays on the Matsubara value
    v = [real_frequency_thermal_part(ModelParams(temperature=T), "plasma", pols=("TE",)).thermal_part
         for T in (0.05, 0.025)]
    assert abs(v[1]) < abs(v[0]) / 4
    ms = matsubara_free_energy(ModelParams(temperature=0.025), "plasma", pols=("TE",)).thermal_part
    assert v[1] == pytest.approx(ms, rel=1e-8)


def test_drude_tm_not_supported():
    with pytest.raises(DomainError):
        real_frequency_thermal_part(ModelParams(gamma=0.1, temperature=0.3), "drude", pols=("TM",))
    with pytest.raises(DomainError):
        real_frequency_thermal_part(ModelParams(temperature=0.0), "plasma")


def test_bose_log_and_free_photons():
    T = 0.5
    w = np.array([0.1, 1.0, 30.0])
    assert np.allclose(bose_log(w, T), T * np.log1p(-np.exp(-w / T)))
    # massless 1-d gas: (L/pi) int_0^inf T ln(1 - e^{-q/T}) dq = -L pi T^2/6 at k_par = 0
    assert free_gap_photons(np.array([0.0]), ModelParams(gap=2.0, temperature=T))[0] == \
        pytest.approx(-2.0 * np.pi * T ** 2 / 6, rel=1e-8)


def test_surface_plasmon_dispersion():
    k = np.array([1e-4, 1.0, 100.0])
    w = surface_plasmon_frequency(k, 1.0)
    # eps(w) = -1 inside the medium gives w -> Omega/sqrt(2) at large k and w ~ k at small k
    assert w[0] == pytest.approx(1e-4, rel=1e-3)
    assert w[2] == pytest.approx(1 / np.sqrt(2), rel=1e-3)


def test_overdamped_term_grows_quadratically():
    from lifshitz_lab.free_energy.realfreq import overdamped_mode_growth
    r = overdamped_mode_growth(ModelParams(gamma=0.1, temperature=0.3), [10, 20, 40, 80])
    assert r["exponent"] == pytest.approx(2.0, abs=0.02)
    with pytest.raises(DomainError):
        overdamped_mode_growth(ModelParams(gamma=0.0, temperature=0.3), [1, 2])
