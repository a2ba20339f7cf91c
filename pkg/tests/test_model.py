import numpy as np
import pytest
from hypothesis import given, strategies as st

from lifshitz_lab.errors import DomainError
from lifshitz_lab.model import (ModelParams, Permittivity, PermittivityKind, TemperatureLaw,
                                eval_permittivity_imag, eval_permittivity_real,
                                inverse_permittivity_imag, make_permittivity, susceptibility_xi2)

pos = st.floats(1e-3, 1e2)


def test_params_validation():
    with pytest.raises(DomainError):
        ModelParams(omega_p=0.0)
    with pytest.raises(DomainError):
        ModelParams(gap=-1.0)
    with pytest.raises(DomainError):
        ModelParams(gamma=-0.1)
    with pytest.raises(DomainError):
        ModelParams(temperature=-1.0)
    with pytest.raises(DomainError):
        ModelParams().beta
    p = ModelParams(gamma=0.1 + 0j)
    assert isinstance(p.gamma, float)
    assert ModelParams(gamma=0.1j).gamma == 0.1j


def test_temperature_law_vanishes_at_zero():
    law = TemperatureLaw(3.0, 2.0)
    assert law(0.0) == 0.0
    assert law(0.1) == pytest.approx(0.03)
    with pytest.raises(DomainError):
        TemperatureLaw(1.0, 0.0)


def test_drude_real_axis_poles():
    perm = Permittivity.drude(ModelParams(gamma=0.2))
    with pytest.raises(DomainError):
        eval_permittivity_real(perm, 0.0)
    with pytest.raises(DomainError):
        eval_permittivity_real(perm, -0.2j)
    assert eval_permittivity_real(perm, 2.0) == pytest.approx(1 - 1 / (2 * (2 + 0.2j)))


def test_plasma_on_real_axis_is_real():
    eps = eval_permittivity_real(Permittivity.plasma(ModelParams()), np.array([0.5, 2.0]))
    assert np.allclose(eps, [1 - 4, 1 - 0.25])


@given(xi=pos, g=st.floats(0, 10), W=pos)
def test_imaginary_axis_identities(xi, g, W):
    perm = Permittivity.drude(ModelParams(omega_p=W, gamma=g))
    eps = eval_permittivity_imag(perm, xi)
    assert eps >= 1
    assert susceptibility_xi2(perm, xi) == pytest.approx((eps - 1) * xi * xi, rel=1e-10)
    assert inverse_permittivity_imag(perm, xi) == pytest.approx(1 / eps, rel=1e-10)


@given(xi=pos, g=st.floats(0, 10))
def test_continuation_of_real_axis(xi, g):
    # eps(omega) at omega = i*xi equals the imaginary-axis form
    perm = Permittivity.drude(ModelParams(gamma=g))
    assert eval_permittivity_real(perm, 1j * xi) == pytest.approx(eval_permittivity_imag(perm, xi), rel=1e-12)


def test_zero_frequency_limits():
    drude = Permittivity.drude(ModelParams(gamma=0.1))
    assert susceptibility_xi2(drude, 0.0) == 0.0
    assert inverse_permittivity_imag(drude, 0.0) == 0.0
    assert susceptibility_xi2(Permittivity.plasma(ModelParams(omega_p=2.0)), 0.0) == 4.0
    with pytest.raises(DomainError):
        eval_permittivity_imag(drude, 0.0)


def test_make_permittivity_and_as_plasma():
    p = ModelParams(gamma=0.3)
    d = make_permittivity("drude", p)
    assert d.kind is PermittivityKind.DRUDE and d.gamma == 0.3
    assert d.as_plasma().kind is PermittivityKind.PLASMA and d.as_plasma().gamma == 0.0
    assert make_permittivity("vacuum", p).omega_p == 0.0
    assert eval_permittivity_imag(Permittivity.constant(4.0), 1.0) == 4.0
