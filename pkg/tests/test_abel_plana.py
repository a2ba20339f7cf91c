import numpy as np
import pytest

from lifshitz_lab.errors import BranchError, ConvergenceError
from lifshitz_lab.free_energy.abel_plana import (abel_plana_thermal_part, defect_closed_form,
                                                 defect_f_D0, im_phi1, im_phi2,
                                                 region_two_thermal)
from lifshitz_lab.model import ModelParams


def test_region_two_vanishes_for_plasma():
    p = ModelParams(gamma=0.0)
    assert np.all(im_phi2(np.array([1.0 + 0j, 2.0 + 0j]), p) == 0)
    assert region_two_thermal(p.with_(temperature=0.3)) == 0.0


def test_region_one_requires_damping():
    with pytest.raises(BranchError):
        im_phi1(np.array([0.5]), ModelParams(gamma=0.0, temperature=0.3))


def test_defect_gamma_independent_and_closed_form():
    d = defect_f_D0(ModelParams(temperature=0.3))
    assert d.spread < 1e-8
    assert d.f_D0 == pytest.approx(d.closed_form, rel=1e-10)
    assert d.f_D0 > 0.4
    assert d.defect == pytest.approx(0.3 * d.f_D0 / (16 * np.pi ** 2))


def test_defect_rescaling():
    # f_D0 depends on Omega*L only; the defect carries 1/L^2
    a = defect_f_D0(ModelParams(omega_p=1.0, gap=1.0, temperature=0.3))
    b = defect_f_D0(ModelParams(omega_p=0.5, gap=2.0, temperature=0.3))
    assert b.f_D0 == pytest.approx(a.f_D0, rel=1e-10)
    assert b.defect == pytest.approx(a.defect / 4, rel=1e-10)


def test_defect_matches_small_gamma_region_two():
    p = ModelParams(gamma=1e-3, temperature=0.3)
    d = defect_f_D0(p)
    assert region_two_thermal(p) == pytest.approx(d.defect, rel=0.01)


def test_defect_spread_guard():
    with pytest.raises(ConvergenceError):
        defect_f_D0(ModelParams(temperature=0.3), rel_spread=-1.0)
