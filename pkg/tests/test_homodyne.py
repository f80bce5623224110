import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats
from scipy.integrate import cumulative_trapezoid

from focktomo import homodyne as hd
from focktomo import model as m
from focktomo.model import PhysicalParams, ReducedParams

RAW = m.reduce(PhysicalParams())


def _cdf(rp, which):
    x = np.linspace(-12, 12, 200_001)
    c = cumulative_trapezoid(m.quad_density(rp, which)(x), x, initial=0.0)
    return lambda v: np.interp(v, x, c / c[-1])


@pytest.mark.parametrize("rp", [RAW, ReducedParams(1.0, 2.0), ReducedParams(1.5, 0.4)])
@pytest.mark.parametrize("which", [0, 1, 2])
def test_samples_follow_density(rp, which):
    x = hd.sample_density(rp, which, 40_000, np.random.default_rng(11))
    assert stats.kstest(x, _cdf(rp, which)).pvalue > 1e-3


@given(s2=st.floats(1.0, 2.5), d=st.floats(0.0, 2.0), which=st.sampled_from([1, 2]))
def test_envelope_dominates_density(s2, d, which):
    rp = ReducedParams(s2, d)
    env = hd.envelope(rp, which)
    x = np.linspace(-10, 10, 4001) * np.sqrt(s2)
    g = np.exp(-x * x / (2 * env.variance)) / np.sqrt(2 * np.pi * env.variance)
    assert np.all(m.quad_density(rp, which)(x) <= env.bound * g * (1 + 1e-9))
    assert env.acceptance >= 0.3


def test_acceptance_at_operating_point():
    assert hd.envelope(ReducedParams(1.13, 1.2), 2).acceptance >= 0.3
    assert hd.envelope(ReducedParams(1.0, 2.0), 2).acceptance == pytest.approx(0.397, abs=2e-3)


def test_phase_schedule():
    assert np.allclose(hd.phase_schedule(4), [0, np.pi / 4, np.pi / 2, 3 * np.pi / 4])
    assert np.allclose(hd.phase_schedule([0.1, 0.2]), [0.1, 0.2])
    with pytest.raises(ValueError):
        hd.phase_schedule(0)
    with pytest.raises(ValueError):
        hd.phase_schedule([np.pi])


def test_phases_are_balanced():
    rs = hd.sample_channel(RAW, 2, 1200, seed=1, phases=12)
    _, counts = np.unique(rs.theta, return_counts=True)
    assert np.all(counts == 100)


def test_counts_and_determinism():
    cfg = hd.SimConfig(PhysicalParams(), {1: 2000, 2: 1500}, seed=7)
    a, b = hd.sample(cfg), hd.sample(cfg)
    assert len(a[1]) == 2000 and len(a[2]) == 1500
    assert np.array_equal(a[2].x, b[2].x)
    other = hd.sample(hd.SimConfig(PhysicalParams(), {1: 2000, 2: 1500}, seed=8))
    assert not np.array_equal(a[2].x, other[2].x)


def test_thread_count_does_not_change_output(monkeypatch):
    n = 3 * hd.CHUNK + 17
    monkeypatch.setenv("FOCKTOMO_THREADS", "1")
    one = hd.sample_channel(RAW, 1, n, seed=3)
    monkeypatch.setenv("FOCKTOMO_THREADS", "4")
    four = hd.sample_channel(RAW, 1, n, seed=3)
    assert np.array_equal(one.x, four.x)


def test_channels_use_independent_streams():
    a = hd.sample_channel(ReducedParams(1.2, 0.0), 1, 500, seed=5)
    b = hd.sample_channel(ReducedParams(1.2, 0.0), 2, 500, seed=5)
    assert not np.array_equal(a.x, b.x)


def test_invalid_config():
    with pytest.raises(ValueError):
        hd.SimConfig(counts={1: 0})
    with pytest.raises(ValueError):
        hd.SimConfig(counts={3: 10})
    with pytest.raises(ValueError):
        hd.SimConfig(seed=-1)


def test_record_validation():
    with pytest.raises(ValueError):
        hd.QuadratureRecord(np.pi, 0.0, 1)
    with pytest.raises(ValueError):
        hd.QuadratureRecord(0.0, np.nan, 1)
    with pytest.raises(ValueError):
        hd.QuadratureRecord(0.0, 0.0, 5)
    recs = [hd.QuadratureRecord(0.0, 1.0, 1), hd.QuadratureRecord(0.5, -1.0, 2)]
    with pytest.raises(ValueError):
        hd.RecordSet.from_records(recs)
    rs = hd.RecordSet.from_records(recs[:1])
    assert list(rs) == recs[:1]
