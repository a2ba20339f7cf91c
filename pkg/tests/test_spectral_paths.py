import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import LineString, Polygon

from lifshitz_lab.errors import DegenerateLoopError, DomainError, NoCollisionError
from lifshitz_lab.model import ModelParams
from lifshitz_lab.spectral_paths import (ComplexPath, EventKind, critical_alpha_from_discriminant,
                                         detect_cusps, detect_self_intersection,
                                         endpoint_pairing_changed, find_critical_alpha,
                                         find_self_intersections, kappa_squared, loop_metrics,
                                         trace_kappa_path, trace_omega_paths)

HALF_PI = np.pi / 2


def _path(z):
    return ComplexPath(np.arange(len(z), dtype=float), np.asarray(z, dtype=complex))


def test_figure_eight_intersection_and_area():
    t = np.linspace(0, 2 * np.pi, 801)[:-1]
    z = np.sin(t) + 1j * np.sin(t) * np.cos(t)        # lemniscate through 0
    z = np.concatenate([z[100:], z[:100]])
    pth = _path(z)
    ev = detect_self_intersection(pth)
    assert ev is not None and abs(ev.location) < 1e-3
    m = loop_metrics(pth, ev)
    # each lobe of x = sin t, y = sin t cos t has area 2/3
    assert abs(m.abs_area - 2 / 3) < 1e-3


def test_simple_curve_has_no_intersection():
    x = np.linspace(0, 1, 200)
    assert detect_self_intersection(_path(x + 1j * x ** 2)) is None
    with pytest.raises(DomainError):
        detect_self_intersection(_path([0, 1, 2j]))


@given(seed=st.integers(0, 10_000), n=st.integers(5, 40))
@settings(max_examples=60, deadline=None)
def test_intersections_agree_with_shapely(seed, n):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    pth = _path(z)
    ours = detect_self_intersection(pth) is not None
    assert ours == (not LineString(np.c_[z.real, z.imag]).is_simple)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_loop_area_matches_shapely(seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=12) + 1j * rng.normal(size=12)
    pth = _path(z)
    ev = detect_self_intersection(pth)
    if ev is None:
        return
    i, j = ev.segment_pair
    ring = np.concatenate([[ev.location], z[i + 1:j + 1]])
    poly = Polygon(np.c_[ring.real, ring.imag])
    try:
        m = loop_metrics(pth, ev)
    except DegenerateLoopError:
        return
    if poly.is_valid:
        assert abs(m.abs_area - poly.area) < 1e-10 * max(1, poly.area)


def test_degenerate_loop():
    e = 1e-8
    z = np.array([0, 1, 1 + 1j * e, 1 - e + 1j * e, 1 - e - 1j])
    pth = _path(z)
    ev = detect_self_intersection(pth)
    assert ev is not None
    with pytest.raises(DegenerateLoopError):
        loop_metrics(pth, ev)


def test_cusp_detects_reversal():
    z = np.array([0, 1, 2, 1.0001 + 1e-6j, 0])
    assert any(e.kind is EventKind.CUSP for e in detect_cusps(_path(z)))


def test_omega_paths_start_and_end():
    p = ModelParams(gamma=0.1)
    paths = trace_omega_paths(p, 0.0, 0.0)
    start = paths["omega1"].points[0]
    assert abs(start - 0.5 * (-0.1j + np.sqrt(4 - 0.01))) < 1e-3
    assert abs(paths["omega3"].points[0]) < 1e-3
    # real rotation: omega1 follows +k at large k
    end_xi = paths["omega1"].parameter_samples[-1]
    assert abs(paths["omega1"].points[-1].real - end_xi) < 0.05 * end_xi
    with pytest.raises(DomainError):
        trace_omega_paths(p, 0.0, 2.0)


def test_critical_alpha_agrees_with_discriminant():
    p = ModelParams(gamma=0.1)
    a_star, ev = find_critical_alpha(p, tol=1e-6)
    cands = critical_alpha_from_discriminant(p)
    assert min(abs(a_star - c[0]) for c in cands) / HALF_PI < 1e-4
    assert 0.88 < a_star / HALF_PI < 0.89
    assert ev.kind is EventKind.BRANCH_COLLISION
    assert not endpoint_pairing_changed(p, 0.88 * HALF_PI)
    assert endpoint_pairing_changed(p, 0.89 * HALF_PI)


def test_no_collision_for_plasma():
    with pytest.raises(NoCollisionError):
        find_critical_alpha(ModelParams(gamma=0.0))


def test_kappa_path_plasma_is_simple():
    pth = trace_kappa_path(ModelParams(gamma=0.0), 1.0, HALF_PI)
    assert detect_self_intersection(pth) is None


def test_kappa_path_loop_at_gamma_01():
    pth = trace_kappa_path(ModelParams(gamma=0.1), 1.0, HALF_PI)
    ev = detect_self_intersection(pth)
    assert ev is not None
    m = loop_metrics(pth, ev)
    ring = np.concatenate([[ev.location], pth.points[ev.segment_pair[0] + 1:ev.segment_pair[1] + 1]])
    assert abs(m.abs_area - Polygon(np.c_[ring.real, ring.imag]).area) < 1e-9


@given(x=st.floats(0.01, 10), a=st.floats(0, 1))
def test_kappa_squared_plasma_closed_form(x, a):
    z = x * np.exp(-1j * a * HALF_PI)
    assert kappa_squared(z, ModelParams(gamma=0.0), 1.0) == pytest.approx(z * z + 2.0, rel=1e-12)
