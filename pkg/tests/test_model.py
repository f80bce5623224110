import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy.integrate import quad

from focktomo import model as m
from focktomo import phase_space as ps
from focktomo.model import PhysicalParams, ReducedParams

RAW = m.reduce(PhysicalParams())
CORRECTED = m.reduce(PhysicalParams().corrected())
IDEAL = ReducedParams(1.0, 2.0)

sigma2s = st.floats(1.0, 2.5)
deltas = st.floats(0.0, 2.0)
channels = st.sampled_from(m.CHANNELS)


def test_reduced_parameters_frozen():
    assert RAW.sigma2 == pytest.approx(1.1308114836148591, rel=1e-13)
    assert RAW.delta == pytest.approx(1.1923952197149728, rel=1e-13)
    assert CORRECTED.sigma2 == pytest.approx(1.1635143545185738, rel=1e-13)
    assert CORRECTED.delta == pytest.approx(1.448600743756047, rel=1e-13)


def test_reduce_by_hand():
    p = PhysicalParams(g=1.2, gamma=0.0, xi=1.0, eta=1.0, e=0.0)
    # h = 1: sigma2 = 2(g - 1) + 1, delta = 2 g (g - 1) / (sigma2 (g - 1)) = 2 g / sigma2.
    rp = m.reduce(p)
    assert rp.sigma2 == pytest.approx(1.4)
    assert rp.delta == pytest.approx(2 * 1.2 / 1.4)


@given(e=st.floats(0.0, 0.5), xi=st.floats(0.05, 1.0))
def test_reduce_scaling(e, xi):
    base = m.reduce(PhysicalParams(e=0.0, xi=1.0))
    rp = m.reduce(PhysicalParams(e=e, xi=xi))
    assert rp.sigma2 == pytest.approx(base.sigma2 + e, rel=1e-14)
    assert rp.delta * rp.sigma2 == pytest.approx(xi * base.delta * base.sigma2, rel=1e-13)


def test_invalid_physical_params():
    for kw in ({"g": 0.9}, {"xi": 1.1}, {"eta": 0.0}, {"e": -0.1}, {"mu": 0.0}, {"gamma": -1}):
        with pytest.raises(ValueError):
            PhysicalParams(**kw)
    with pytest.raises(ValueError):
        ReducedParams(0.0, 1.0)


def test_ideal_values_are_fock_states():
    assert m.wigner_w1(IDEAL, 0.0, 0.0) == pytest.approx(-1 / math.pi, rel=1e-15)
    assert m.wigner_w2(IDEAL, 0.0, 0.0) == pytest.approx(1 / math.pi, rel=1e-15)
    # |psi_2(0)|^2 = 1/(2 sqrt(pi)), |psi_1(1)|^2 = 2 e^{-1}/sqrt(pi)
    assert m.quad_p2(IDEAL, 0.0) == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-15)
    assert m.quad_p1(IDEAL, 1.0) == pytest.approx(2 * math.exp(-1) / math.sqrt(math.pi), rel=1e-15)


def test_ideal_w2_minimum_closed_form():
    from focktomo.tomography import critical_values

    t = (4 - math.sqrt(6)) / 2
    want = 4 * (t - 1) * math.exp(-t) / math.pi
    cv = critical_values(IDEAL, 2)
    assert cv.min_w == pytest.approx(want, abs=1e-12)
    assert cv.argmin_radius == pytest.approx(math.sqrt(t), abs=1e-6)
    assert want == pytest.approx(-0.131799, abs=5e-7)


@given(s2=sigma2s, d=deltas, ch=channels)
def test_wigner_normalized(s2, d, ch):
    rp = ReducedParams(s2, d)
    radial = m.wigner_radial(rp, ch)
    val, _ = quad(lambda t: float(radial(t)), 0, np.inf, epsabs=1e-13, epsrel=1e-12)
    assert math.pi * val == pytest.approx(1.0, abs=1e-9)


@given(s2=sigma2s, d=deltas, ch=channels, x=st.floats(-3, 3))
def test_marginal_of_wigner_is_quadrature_density(s2, d, ch, x):
    rp = ReducedParams(s2, d)
    radial = m.wigner_radial(rp, ch)
    val, _ = quad(lambda p: float(radial(x * x + p * p)), -np.inf, np.inf, epsabs=1e-14, epsrel=1e-12)
    assert val == pytest.approx(float(m.quad_density(rp, ch)(x)), abs=1e-10)


@given(s2=sigma2s, d=deltas, ch=channels)
def test_moments_match_integration(s2, d, ch):
    rp = ReducedParams(s2, d)
    dens = m.quad_density(rp, ch)
    m2, _ = quad(lambda x: x * x * float(dens(x)), -np.inf, np.inf, epsabs=1e-13)
    m4, _ = quad(lambda x: x**4 * float(dens(x)), -np.inf, np.inf, epsabs=1e-13)
    a2, a4 = m.moments(rp, ch)
    assert m2 == pytest.approx(a2, rel=1e-9)
    assert m4 == pytest.approx(a4, rel=1e-9)


@given(s2=sigma2s, ch=channels)
def test_zero_delta_is_thermal(s2, ch):
    rp = ReducedParams(s2, 0.0)
    R2 = np.linspace(0, 5, 11)
    assert np.allclose(m.wigner_radial(rp, ch)(R2), m.wigner_w0_radial(rp, R2), rtol=1e-14)


@pytest.mark.parametrize("d", [0.9, 1.0, 1.1])
def test_origin_sign_tracks_delta(d):
    w = float(m.wigner_w1_radial(ReducedParams(1.1, d), 0.0))
    assert (w < 0) == (d > 1)
    assert (w == 0) == (d == 1)


def test_fock_diagonals_frozen():
    assert np.allclose(m.fock_diagonals(RAW, 2, 5).values[:4],
                       [0.12655927, 0.41719027, 0.38186626, 0.06564121], atol=1e-8)
    assert np.allclose(m.fock_diagonals(CORRECTED, 2, 5).values[:4],
                       [0.04513268, 0.29761028, 0.52416533, 0.11376588], atol=1e-8)
    assert np.allclose(m.fock_diagonals(CORRECTED, 1, 5).values[:4],
                       [0.20425875, 0.68117204, 0.10179667, 0.01149631], atol=1e-8)


@given(s2=st.floats(1.0, 1.6), d=deltas, ch=channels)
def test_fock_diagonals_against_laguerre_overlap(s2, d, ch):
    rp = ReducedParams(s2, d)
    oracle = m.fock_from_wigner(m.wigner_radial(rp, ch), 6)
    assert np.allclose(m.fock_diagonals(rp, ch, 6).values, oracle, atol=1e-9)


@given(s2=sigma2s, d=deltas, ch=channels)
def test_fock_diagonals_sum_to_one(s2, d, ch):
    rp = ReducedParams(s2, d)
    n_max = 40
    assume(m.fock_tail_bound(rp, n_max) < 1e-11)
    assert m.fock_diagonals(rp, ch, n_max).total == pytest.approx(1.0, abs=1e-9)


@given(s2=st.floats(1.0, 1.8), d=deltas, ch=channels)
def test_photon_number_from_second_moment(s2, d, ch):
    rp = ReducedParams(s2, d)
    diag = m.fock_diagonals(rp, ch, 120)
    m2, _ = m.moments(rp, ch)
    assert diag.mean_photon_number() == pytest.approx(m.photon_number_from_moment(m2), abs=1e-9)


def test_fock_limit_at_ideal_point():
    assert np.array_equal(m.fock_diagonals(IDEAL, 2, 5).values, [0, 0, 1, 0, 0, 0])
    assert np.array_equal(m.fock_diagonals(IDEAL, 1, 5).values, [0, 1, 0, 0, 0, 0])
    near = m.fock_diagonals(ReducedParams(1 + 1e-4, 2.0), 2, 5).values
    assert np.allclose(near, [0, 0, 1, 0, 0, 0], atol=2e-4)
    assert np.all(np.isfinite(near))


def test_fock_diagonals_bad_arguments():
    with pytest.raises(ValueError):
        m.fock_diagonals(RAW, 3)
    with pytest.raises(ValueError):
        m.fock_diagonals(RAW, 1, n_max=1)


def test_pipeline_matches_closed_form_at_small_mu():
    p = PhysicalParams(mu=1e-4)
    state = m.exact_pipeline(p).state
    R2 = np.linspace(0, 16, 200)
    err = np.abs(ps.evaluate_radial(state, R2) - m.wigner_w2_radial(m.reduce(p), R2)).max()
    assert err < 1e-6


def test_single_click_pipeline_matches_closed_form():
    p = PhysicalParams(mu=1e-4)
    state = m.exact_pipeline_single(p).state
    R2 = np.linspace(0, 16, 200)
    err = np.abs(ps.evaluate_radial(state, R2) - m.wigner_w1_radial(m.reduce(p), R2)).max()
    assert err < 1e-6


def test_pipeline_finite_mu_deviation_is_linear():
    # The closed form is the mu -> 0 limit; the residual grows roughly in proportion to mu.
    def err(mu):
        p = PhysicalParams(mu=mu)
        R2 = np.linspace(0, 16, 200)
        return np.abs(ps.evaluate_radial(m.exact_pipeline(p).state, R2)
                      - m.wigner_w2_radial(m.reduce(p), R2)).max()

    ratio = err(0.06) / err(0.03)
    assert 1.7 < ratio < 2.3


def test_pipeline_against_fock_oracle():
    # Pure TMSV, perfect overlap and detection: the heralded photon statistics are
    # thermal P(n) times the probability that both APDs fire on n photons.
    g, mu = 1.3, 0.3
    p = PhysicalParams(g=g, gamma=0.0, xi=1.0, eta=1.0, e=0.0, mu=mu)
    state = m.exact_pipeline(p).state
    got = m.fock_from_wigner(lambda t: ps.evaluate_radial(state, t), 8)
    n = np.arange(9)
    nbar = g - 1
    thermal = nbar**n / (nbar + 1) ** (n + 1)
    click = 1 - 2 * (1 - mu / 2) ** n + (1 - mu) ** n
    want = thermal * click
    want /= np.sum(thermal * click) + sum(
        nbar**k / (nbar + 1) ** (k + 1) * (1 - 2 * (1 - mu / 2) ** k + (1 - mu) ** k)
        for k in range(9, 400)
    )
    assert np.allclose(got, want, atol=1e-9)


def test_pipeline_three_gaussian_form():
    res = m.exact_pipeline(PhysicalParams(mu=1e-4))
    form = m.three_gaussian_form(res.state.to_float())
    rp = m.reduce(PhysicalParams(mu=1e-4))
    assert form["sigma2"] == pytest.approx(rp.sigma2, rel=1e-3)
    assert form["alpha"] > 0 and form["beta"] > 0
    assert form["sigma2_2"] < form["sigma2_1"] < form["sigma2"]
    assert 0 < res.p_coincidence < res.p_single < 1


def test_pipeline_degenerate_gain():
    with pytest.raises(m.DegenerateConditioningError):
        m.exact_pipeline(PhysicalParams(g=1.0))


@given(mu=st.floats(0.01, 0.5))
def test_pipeline_state_normalized(mu):
    state = m.exact_pipeline(PhysicalParams(mu=mu), dps=30).state
    assert float(state.total_weight) == pytest.approx(1.0, abs=1e-12)
