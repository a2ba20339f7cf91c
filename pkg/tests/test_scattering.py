import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lifshitz_lab.errors import DomainError
from lifshitz_lab.model import ModelParams, Permittivity
from lifshitz_lab.scattering import (ModeLabel, Polarization, ScatteringInput, _denominator,
                                     discrete_modes, gap_momentum, mode_epsilon, phase_shift,
                                     phase_shift_derivative, reflection, secular, transmission,
                                     transmission_at_mode)

PLASMA = Permittivity.plasma(ModelParams())


def _plasma_t(k3, k_par, pol, L=1.0):
    om2 = 1.0 + k_par ** 2 + k3 * k3
    eps = (k_par ** 2 + k3 * k3) / om2
    return transmission(ScatteringInput(k3, k_par, eps, L, pol))


def test_vacuum_transmission_is_free_propagation():
    assert abs(transmission(ScatteringInput(0.7, 0.3, 1.0, 2.0)) - np.exp(1.4j)) < 1e-14


@given(k3=st.floats(0.05, 10), kp=st.floats(0, 5), pol=st.sampled_from(["TE", "TM"]))
@settings(max_examples=80, deadline=None)
def test_phase_shift_is_half_log_ratio(k3, kp, pol):
    # delta = (ln t(k3) - ln t(-k3))/(2i), defined modulo pi
    d = phase_shift(np.array([k3]), kp, PLASMA, 1.0, pol)[0]
    ratio = _plasma_t(k3, kp, pol) / _plasma_t(-k3, kp, pol)
    assert abs(abs(ratio) - 1) < 1e-10
    diff = (np.angle(ratio) / 2 - d) / np.pi
    assert abs(diff - round(diff)) < 1e-9


@given(k3=st.floats(0.05, 10), kp=st.floats(0, 5))
@settings(max_examples=40, deadline=None)
def test_phase_shift_odd(k3, kp):
    d = phase_shift(np.array([k3, -k3]), kp, PLASMA, 1.0, "TM")
    assert d[0] == pytest.approx(-d[1], abs=1e-14)


def test_phase_derivative_against_central_differences():
    rng = np.random.default_rng(7)
    k3 = rng.uniform(0.05, 8.0, 64)
    for pol in ("TE", "TM"):
        for kp in (0.2, 1.5):
            h = 1e-5
            fd = (phase_shift(k3 + h, kp, PLASMA, 1.0, pol) - phase_shift(k3 - h, kp, PLASMA, 1.0, pol)) / (2 * h)
            an = phase_shift_derivative(k3, kp, PLASMA, 1.0, pol)
            assert np.max(np.abs(fd - an)) < 1e-6


def test_phase_shift_continuous():
    k3 = np.linspace(0.01, 20, 4000)
    d = phase_shift(k3, 0.7, PLASMA, 1.0, "TE")
    assert np.max(np.abs(np.diff(d))) < 0.05


def test_transmission_even_in_q():
    inp = ScatteringInput(0.4 + 0.3j, 0.8, 2.5 - 0.1j, 1.0, Polarization.TM)
    transmission(inp, check_even=True)


def test_te_mode_independent_of_kpar():
    # q^2 = Omega^2 - kappa^2 does not involve k_par in TE
    kap = [discrete_modes("TE", kp, PLASMA, 1.0).kappa_list for kp in (0.1, 1.0, 3.0)]
    for k in kap:
        assert k.size == 1 and k[0] == pytest.approx(kap[0][0], abs=1e-13)
    assert kap[0][0] == pytest.approx(0.43513, abs=1e-5)


@pytest.mark.parametrize("pol", ["TE", "TM"])
@pytest.mark.parametrize("kp", [0.3, 1.0, 2.5])
def test_modes_are_poles_of_t(pol, kp):
    spec = discrete_modes(pol, kp, PLASMA, 1.0)
    assert len(spec) >= 1
    for j, kap in enumerate(spec.kappa_list):
        eps = mode_epsilon(kap, kp, PLASMA)
        q = gap_momentum(1j * kap, kp, eps)
        Q = q if pol == "TE" else eps * q
        den = _denominator(1j * kap, q, Q, 1.0)
        scale = abs((1j * kap + Q) ** 2 * np.exp(-1j * q)) + abs((1j * kap - Q) ** 2 * np.exp(1j * q))
        assert abs(den) / scale < 1e-12
        if pol == "TE":
            assert transmission_at_mode(spec, j) > 1e12
    # between modes t stays finite
    mid = np.linspace(1e-3, np.sqrt(1 + kp * kp) - 1e-3, 50)
    v = secular(mid, kp, PLASMA, 1.0, pol, "s") * secular(mid, kp, PLASMA, 1.0, pol, "a")
    assert np.all(np.isfinite(v))


def test_tm_mode_count_and_labels():
    spec = discrete_modes("TM", 1.0, PLASMA, 1.0)
    assert len(spec) == 3
    assert all(isinstance(lab, ModeLabel) for lab in spec.labels)
    assert np.all(spec.omega > 0)


def test_reflection_static_limits():
    drude = Permittivity.drude(ModelParams(gamma=0.1))
    assert reflection("TE", 0.0, 0.5, drude) == 0.0
    assert reflection("TM", 0.0, 0.5, drude) == 1.0
    assert reflection("TM", 0.0, 0.5, PLASMA) == 1.0
    # plasma TE at xi = 0: (k - sqrt(k^2 + Omega^2))/(k + sqrt(...))
    s = np.sqrt(1.25)
    assert reflection("TE", 0.0, 0.5, PLASMA) == pytest.approx((0.5 - s) / (0.5 + s))
    with pytest.raises(DomainError):
        reflection("TE", 0.0, 0.0, PLASMA)


@given(xi=st.floats(1e-3, 50), kp=st.floats(1e-3, 50), g=st.floats(0, 5))
def test_reflection_bounded(xi, kp, g):
    perm = Permittivity.drude(ModelParams(gamma=g))
    for pol in ("TE", "TM"):
        r = reflection(pol, xi, kp, perm)
        assert -1 <= r <= 1


def test_ideal_conductor_limit():
    perm = Permittivity.plasma(ModelParams(omega_p=1e6))
    assert reflection("TE", 1.0, 1.0, perm) == pytest.approx(-1, abs=1e-5)
    assert reflection("TM", 1.0, 1.0, perm) == pytest.approx(1, abs=1e-5)


def test_bad_inputs():
    with pytest.raises(DomainError):
        ScatteringInput(1.0, -1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        phase_shift(np.array([0.0]), 1.0, PLASMA, 1.0)
