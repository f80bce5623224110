import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from focktomo import phase_space as ps

gains = st.floats(1.0, 2.0)
transmissions = st.floats(0.0, 1.0)


def test_vacuum_density_at_origin():
    assert ps.evaluate(ps.vacuum(), [0.0, 0.0]) == pytest.approx(1 / math.pi, rel=1e-15)
    assert ps.integrate_box(ps.vacuum(), width=8) == pytest.approx(1.0, abs=1e-10)


def test_vacuum_exact_and_float_agree():
    pts = np.array([[0.0, 0.0], [0.3, -1.2], [2.0, 0.5]])
    assert np.allclose(ps.evaluate(ps.vacuum(30), pts), ps.evaluate(ps.vacuum(), pts), rtol=1e-14)


def test_thermal_below_vacuum_rejected():
    with pytest.raises(ValueError):
        ps.thermal(0.4)


@given(g=gains, h=st.floats(1.0, 1.5))
def test_tmsv_marginal_photon_number(g, h):
    # Each arm of a (noisy) two-mode squeezed vacuum is thermal with <n> = h g - 1.
    state = ps.two_mode_squeezed(g, h)
    for mode in (0, 1):
        assert state.mean_photon_number(mode) == pytest.approx(h * g - 1, abs=1e-12)


@given(g=gains)
def test_idler_vacuum_probability_is_thermal(g):
    # A thermal state of mean n has P(0) = 1/(n + 1) = 1/g for the pure TMSV.
    _, p0 = ps.project_vacuum(ps.two_mode_squeezed(g), 1)
    assert float(p0) == pytest.approx(1 / g, rel=1e-12)


def test_project_vacuum_of_product_state():
    state = ps.tensor(ps.thermal(1.5), ps.thermal(1.0))
    reduced, p0 = ps.project_vacuum(state, 1)
    # thermal variance 1 has <n> = 1/2, P(0) = 2/3; the other mode is untouched.
    assert p0 == pytest.approx(2 / 3, rel=1e-14)
    assert np.allclose(reduced.components[0].covariance, 1.5 * np.eye(2))


@given(v=st.floats(0.5, 3.0), a=transmissions, b=transmissions)
def test_loss_composition(v, a, b):
    st_ = ps.thermal(v)
    lhs = ps.apply_loss(ps.apply_loss(st_, 0, a), 0, b)
    rhs = ps.apply_loss(st_, 0, a * b)
    assert np.allclose(lhs.components[0].covariance, rhs.components[0].covariance, atol=1e-14)


def test_loss_matches_numeric_convolution():
    # x-marginal after loss T: law of sqrt(T) X + sqrt(1-T) V, V vacuum; convolve numerically.
    v, T = 1.7, 0.63
    out = ps.apply_loss(ps.thermal(v), 0, T).components[0].covariance[0, 0]
    x = np.linspace(-12, 12, 4801)
    dx = x[1] - x[0]
    a = np.exp(-x**2 / (2 * T * v)) / math.sqrt(2 * math.pi * T * v)
    b = np.exp(-x**2 / (1 - T)) / math.sqrt(math.pi * (1 - T))
    conv = np.convolve(a, b, mode="same") * dx
    var = np.sum(x**2 * conv) * dx
    assert var == pytest.approx(out, rel=1e-8)
    assert out == pytest.approx(T * v + (1 - T) / 2, rel=1e-15)


@given(v=st.floats(0.5, 3.0), e=st.floats(0.0, 1.0))
def test_noise_adds_variance(v, e):
    out = ps.add_noise(ps.thermal(v), 0, e)
    assert out.components[0].covariance[0, 0] == pytest.approx(v + e)


@given(g=gains)
def test_split_conserves_photon_number(g):
    state = ps.two_mode_squeezed(g)
    split = ps.balanced_split(state, 1)
    total = split.mean_photon_number(1) + split.mean_photon_number(2)
    assert total == pytest.approx(state.mean_photon_number(1), abs=1e-12)
    assert split.mean_photon_number(1) == pytest.approx(split.mean_photon_number(2), abs=1e-12)


def test_split_then_trace_is_half_loss():
    state = ps.two_mode_squeezed(1.3, 1.1)
    a_only = ps.trace_out(ps.balanced_split(state, 1), 2)
    lossy = ps.apply_loss(state, 1, 0.5)
    assert np.allclose(a_only.components[0].covariance, lossy.components[0].covariance, atol=1e-14)


@given(w1=st.floats(-2, 2), w2=st.floats(-2, 2), v1=st.floats(0.5, 2), v2=st.floats(0.5, 2))
def test_box_integral_is_total_weight(w1, w2, v1, v2):
    mix = ps.thermal(v1).scaled(w1) + ps.thermal(v2).scaled(w2)
    assert ps.integrate_box(mix, width=8) == pytest.approx(w1 + w2, abs=1e-8)


def test_merged_combines_equal_covariances():
    mix = ps.thermal(1.0).scaled(0.3) + ps.thermal(1.0).scaled(0.7) + ps.thermal(2.0).scaled(-1e-16)
    merged = mix.merged()
    assert len(merged) == 1
    assert merged.weights[0] == pytest.approx(1.0)


def test_exact_and_float_pipeline_steps_agree():
    exact = ps.apply_loss(ps.two_mode_squeezed(1.07, 1.02, dps=30), 0, 0.8)
    flt = ps.apply_loss(ps.two_mode_squeezed(1.07, 1.02), 0, 0.8)
    assert np.allclose(exact.components[0].covariance_float, flt.components[0].covariance, rtol=1e-14)
    assert isinstance(exact.components[0].covariance[0, 0], mpmath.mpf)


def test_bad_mode_index():
    with pytest.raises(IndexError):
        ps.apply_loss(ps.vacuum(), 1, 0.5)
    with pytest.raises(ValueError):
        ps.trace_out(ps.vacuum(), 0)
    with pytest.raises(ValueError):
        ps.evaluate(ps.vacuum(), [0.0, 0.0, 0.0])
