"""Acceptance criteria, each run at its stated tolerance.

Every check returns a :class:`Criterion`; ``run_all`` evaluates the whole set
and ``Criterion.line`` renders one PASS/FAIL line. The end-to-end checks share
one simulated data set at the default operating point.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from . import model, phase_space as ps, tomography as tm
from .homodyne import SimConfig, sample, sample_channel
from .model import PhysicalParams, ReducedParams

IDEAL = ReducedParams(1.0, 2.0)
DEFAULT = PhysicalParams()
SEED = 2006


@dataclass
class Criterion:
    key: str
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    runtime: float = 0.0
    budget: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        info = " ".join(f"{k}={_show(v)}" for k, v in self.details.items())
        limit = f"/{self.budget:g}s" if self.budget else ""
        return f"{status} [{self.key}] {self.title}: {info} ({self.runtime:.2f}s{limit})"


def _show(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return f"{v:.6g}"
    return str(v)


def _within(value, target, tol):
    return abs(value - target) <= tol


def _timed(fn):
    t0 = time.perf_counter()
    result = fn()
    result.runtime = time.perf_counter() - t0
    if result.budget is not None and result.runtime > result.budget:
        result.passed = False
        result.details["over_budget"] = True
    return result


def _row(key, title, p_or_rp, targets, tols, budget=None) -> Criterion:
    rp = p_or_rp if isinstance(p_or_rp, ReducedParams) else model.reduce(p_or_rp)
    c1 = tm.critical_values(rp, 1)
    c2 = tm.critical_values(rp, 2)
    got = {"W1_origin": c1.w_origin, "W2_origin": c2.w_origin, "min_W2": c2.min_w}
    ok = all(_within(got[k], targets[k], tols[k]) for k in targets)
    details = {k: got[k] for k in targets}
    details.update({f"target_{k}": targets[k] for k in targets})
    return Criterion(key, title, ok, details, budget=budget)


def criterion_1() -> Criterion:
    targets = {"min_W2": -0.13, "W2_origin": 0.32, "W1_origin": -0.32}
    return _row("1", "ideal critical values", IDEAL, targets, dict.fromkeys(targets, 0.005), 1.0)


def criterion_2() -> Criterion:
    targets = {"W1_origin": -0.052, "W2_origin": 0.012, "min_W2": -0.009}
    return _row("2", "raw critical values", DEFAULT, targets, dict.fromkeys(targets, 0.005), 1.0)


def criterion_3() -> Criterion:
    targets = {"W1_origin": -0.123, "min_W2": -0.034, "W2_origin": 0.062}
    tols = {"W1_origin": 0.005, "min_W2": 0.005, "W2_origin": 0.01}
    return _row("3", "corrected critical values", DEFAULT.corrected(), targets, tols)


PIPELINE_GRID = np.linspace(-4.0, 4.0, 64)


def pipeline_sup_error(mu: float) -> float:
    p = PhysicalParams(mu=mu)
    state = model.exact_pipeline(p).state
    X, P = np.meshgrid(PIPELINE_GRID, PIPELINE_GRID, indexing="ij")
    R2 = X * X + P * P
    exact = ps.evaluate_radial(state, R2)
    closed = model.wigner_w2_radial(model.reduce(p), R2)
    return float(np.max(np.abs(exact - closed)))


def criterion_4a() -> Criterion:
    err = pipeline_sup_error(1e-4)
    return Criterion("4a", "pipeline equals closed form, mu=1e-4", err < 1e-6,
                     {"sup_error": err, "tol": 1e-6}, budget=5.0)


def criterion_4b() -> Criterion:
    err = pipeline_sup_error(0.06)
    return Criterion("4b", "pipeline equals closed form, mu=0.06", err < 1e-4,
                     {"sup_error": err, "tol": 1e-4}, budget=5.0)


@lru_cache(maxsize=1)
def default_records():
    cfg = SimConfig(DEFAULT, {1: 180_000, 2: 105_000}, seed=SEED)
    return sample(cfg)


def criterion_5() -> Criterion:
    recs = default_records()
    rp = model.reduce(DEFAULT)
    details, ok = {}, True
    for ch in (1, 2):
        grid = tm.radon_reconstruct(tm.histogram(recs[ch]), cutoff=6.0)
        got = tm.critical_values(grid, radial=True)
        want = tm.critical_values(rp, ch)
        details[f"W{ch}_origin"] = got.w_origin
        details[f"W{ch}_origin_err"] = got.w_origin - want.w_origin
        ok &= _within(got.w_origin, want.w_origin, 0.006)
        if ch == 2:
            details["min_W2"] = got.min_w
            details["min_W2_err"] = got.min_w - want.min_w
            ok &= _within(got.min_w, want.min_w, 0.006)
    return Criterion("5", "end-to-end Radon", bool(ok), details, budget=30.0)


def criterion_6() -> Criterion:
    recs = default_records()
    cor = model.reduce(DEFAULT.corrected())
    e1 = tm.maxlik_reconstruct(recs[1], eta=DEFAULT.eta)
    e2 = tm.maxlik_reconstruct(recs[2], eta=DEFAULT.eta)
    d1_true = model.fock_diagonals(cor, 1)[1]
    mono = all(np.all(np.diff(e.loglik) >= 0) for e in (e1, e2))
    rho22, rho11 = e2.diagonal[2], e1.diagonal[1]
    ok = _within(rho22, 0.52, 0.03) and _within(rho11, d1_true, 0.03) and mono
    return Criterion("6", "end-to-end MaxLik", bool(ok),
                     {"rho2_22": rho22, "rho1_11": rho11, "rho1_11_model": d1_true,
                      "monotone": mono}, budget=60.0)


def criterion_7() -> Criterion:
    details, ok = {}, True
    worst = 0.0
    for rp in (IDEAL, model.reduce(DEFAULT), model.reduce(DEFAULT.corrected())):
        for ch in (1, 2):
            est = tm.invert_moments(*model.moments(rp, ch), ch).params
            worst = max(worst, abs(est.sigma2 - rp.sigma2), abs(est.delta - rp.delta))
    details["exact_inversion_err"] = worst
    ok &= worst < 1e-12

    rp = model.reduce(DEFAULT)
    est = tm.moment_estimate(default_records()[1], 1).params
    details["sigma2_err"] = est.sigma2 - rp.sigma2
    details["delta_err"] = est.delta - rp.delta
    ok &= _within(est.sigma2, rp.sigma2, 0.01) and _within(est.delta, rp.delta, 0.05)

    big = {ch: tm.moment_estimate(sample_channel(rp, ch, 1_000_000, SEED + 1), ch).params
           for ch in (1, 2)}
    d1, d2 = big[1].delta, big[2].delta
    mismatch = 100 * abs(d1 - d2) / (0.5 * (d1 + d2))
    details["delta_mismatch_percent"] = mismatch
    ok &= mismatch < 2.0
    return Criterion("7", "moment estimator", bool(ok), details)


def _plane_integral(radial) -> float:
    # Isotropic W: int W d^2R = pi int_0^inf W(t) dt with t = R^2.
    val, _ = quad(lambda t: float(radial(t)), 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
    return math.pi * val


def criterion_8() -> Criterion:
    details, ok = {}, True
    cases = [IDEAL, model.reduce(DEFAULT), model.reduce(DEFAULT.corrected()), ReducedParams(1.3, 0.7)]

    norm_err = 0.0
    for rp in cases:
        for ch in model.CHANNELS:
            norm_err = max(norm_err, abs(_plane_integral(model.wigner_radial(rp, ch)) - 1))
            dens = model.quad_density(rp, ch)
            val, _ = quad(lambda x: float(dens(x)), -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)
            norm_err = max(norm_err, abs(val - 1))
    details["normalization_err"] = norm_err
    ok &= norm_err < 1e-8

    marg_err = 0.0
    for rp in cases:
        for ch in model.CHANNELS:
            radial = model.wigner_radial(rp, ch)
            dens = model.quad_density(rp, ch)
            for x in (0.0, 0.37, 1.1, 2.5):
                val, _ = quad(lambda p: float(radial(x * x + p * p)), -np.inf, np.inf,
                              epsabs=1e-14, epsrel=1e-12)
                marg_err = max(marg_err, abs(val - float(dens(x))))
    details["marginal_err"] = marg_err
    ok &= marg_err < 1e-9

    fock_err = max(abs(model.fock_diagonals(rp, ch, 40).total - 1)
                   for rp in cases for ch in model.CHANNELS)
    details["fock_sum_err"] = fock_err
    ok &= fock_err < 1e-9

    signs = []
    for d in (0.9, 1.0, 1.1):
        w = float(model.wigner_w1_radial(ReducedParams(1.1, d), 0.0))
        signs.append((d > 1) == (w < 0))
    details["sign_test"] = all(signs)
    ok &= all(signs)

    rng = np.random.default_rng(SEED)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    comp_err = np.abs(tm.apply_loss_fock(tm.apply_loss_fock(rho, 0.8), 0.7)
                      - tm.apply_loss_fock(rho, 0.56)).max()
    st = model.prepare_mix(DEFAULT)
    lhs = ps.apply_loss(ps.apply_loss(st, 0, 0.8), 0, 0.7)
    rhs = ps.apply_loss(st, 0, 0.56)
    comp_err = max(comp_err, max(np.abs(c.covariance - d.covariance).max()
                                 for c, d in zip(lhs.components, rhs.components)))
    details["loss_composition_err"] = float(comp_err)
    ok &= comp_err < 1e-12
    return Criterion("8", "property suites", bool(ok), details)


CRITERIA = {
    "1": criterion_1, "2": criterion_2, "3": criterion_3, "4a": criterion_4a, "4b": criterion_4b,
    "5": criterion_5, "6": criterion_6, "7": criterion_7, "8": criterion_8,
}
QUICK = ("1", "2", "3", "4a", "4b", "8")


def run_all(quick: bool = False) -> list[Criterion]:
    keys = QUICK if quick else tuple(CRITERIA)
    return [_timed(CRITERIA[k]) for k in keys]
