import numpy as np
import pytest

import lifshitz_lab.free_energy.thermo as thermo
from lifshitz_lab.errors import DomainError, FitUnstableError, MismatchError, StepTooLargeError
from lifshitz_lab.free_energy.contour import StairFunction, verify_plasma_contour_identity
from lifshitz_lab.free_energy.thermo import (entropy, free_energy_T, nernst_limit,
                                             nonperturbative_defect_check)
from lifshitz_lab.model import ModelParams, TemperatureLaw

P = ModelParams(temperature=0.1)


@pytest.mark.parametrize("model,law", [("plasma", None), ("drude", TemperatureLaw(1.0, 2.0))])
def test_entropy_between_secants(model, law):
    T, h = 0.1, 0.01
    S = entropy(P, model, T, law=law).value
    F = [free_energy_T(P, model, t, law) for t in (T - h, T, T + h)]
    left, right = -(F[1] - F[0]) / h, -(F[2] - F[1]) / h
    assert min(left, right) <= S <= max(left, right)


def test_entropy_positive_at_high_temperature():
    assert entropy(P, "plasma", 1.0).value > 0
    assert entropy(P.with_(gamma=0.1), "drude", 1.0).value > 0


def test_entropy_step_guard():
    with pytest.raises(DomainError):
        entropy(P, "plasma", 0.1, h=0.2)
    with pytest.raises(StepTooLargeError):
        entropy(P, "plasma", 0.02, h=0.0199)


def test_nernst_input_validation():
    with pytest.raises(DomainError):
        nernst_limit(P, "plasma", None, [0.1, 0.05, 0.02])
    with pytest.raises(DomainError):
        nernst_limit(P, "plasma", None, np.geomspace(1e-4, 1e-3, 6))


def test_nernst_fit_guard(monkeypatch):
    # an S(T) that keeps growing like log T is not of the form S0 + c T^p with p >= 0.2
    class Fake:
        def __init__(self, v):
            self.value = v
    monkeypatch.setattr(thermo, "entropy", lambda params, model, T, law=None: Fake(np.log(T)))
    with pytest.raises(FitUnstableError):
        nernst_limit(P, "plasma", None, np.geomspace(1e-2, 1e-4, 6))


def test_defect_table():
    chk = nonperturbative_defect_check(ModelParams(temperature=0.3), [1e-2, 1e-3, 1e-4])
    assert chk.converged and chk.nonzero
    assert abs(chk.relative_deviation[-1]) < abs(chk.relative_deviation[0])
    assert chk.alt_prefactor_defect == pytest.approx(np.pi * chk.defect)
    with pytest.raises(DomainError):
        nonperturbative_defect_check(ModelParams(temperature=0.3), [1e-4, 1e-2])


def test_stair_thresholds():
    p = ModelParams(temperature=0.5)
    st = StairFunction.from_params(p, 1.0, 20)
    l = np.arange(21)
    assert np.allclose(st.kappa_thresholds, np.sqrt((2 * np.pi * 0.5 * l) ** 2 + 2), rtol=1e-15)
    assert st(1.0) == 0
    assert st(st.kappa_thresholds[3] + 1e-9) == 3j * np.pi


@pytest.mark.parametrize("pol", ["TE", "TM"])
def test_contour_identity(pol):
    rep = verify_plasma_contour_identity(ModelParams(temperature=0.5), 1.0, pol)
    assert rep.threshold_mismatch < 1e-10 and rep.pole_side_mismatch < 1e-10
    assert np.all(np.isfinite(rep.lifshitz_log))
    if pol == "TE":
        assert np.isfinite(rep.primed_sum)


def test_contour_identity_high_temperature():
    rep = verify_plasma_contour_identity(ModelParams(temperature=500.0), 1.0, "TE", l_max=3)
    assert rep.lifshitz_primed_sum == pytest.approx(0.5 * 500.0 * rep.lifshitz_log[0], rel=1e-12)


def test_contour_identity_mismatch(monkeypatch):
    import lifshitz_lab.free_energy.contour as contour
    monkeypatch.setattr(contour, "transmission", lambda inp: 2.0)
    with pytest.raises(MismatchError):
        verify_plasma_contour_identity(ModelParams(temperature=0.5), 1.0)
    with pytest.raises(DomainError):
        verify_plasma_contour_identity(ModelParams(gamma=0.1, temperature=0.5), 1.0)
