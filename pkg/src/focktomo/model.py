"""Closed-form model of the states conditioned on 0, 1 or 2 APD clicks.

Every conditioned state is described by two numbers: the thermal variance
parameter ``sigma2`` of the unconditioned state and the non-classicality
parameter ``delta`` (0 for thermal light, 2 for an ideal Fock state).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import phase_space as ps

CHANNELS = (0, 1, 2)


@dataclass(frozen=True)
class PhysicalParams:
    """Experimental parameters. Defaults are the reference operating point, with no excess noise."""

    g: float = 1.07
    gamma: float = 0.4
    xi: float = 0.9
    eta: float = 0.80
    e: float = 0.0
    mu: float = 0.06

    def __post_init__(self):
        if not self.g >= 1:
            raise ValueError(f"gain g must be >= 1, got {self.g}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not 0 <= self.xi <= 1:
            raise ValueError(f"xi must lie in [0, 1], got {self.xi}")
        if not 0 < self.eta <= 1:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if not self.e >= 0:
            raise ValueError(f"excess noise e must be >= 0, got {self.e}")
        if not 0 < self.mu <= 1:
            raise ValueError(f"mu must lie in (0, 1], got {self.mu}")

    @property
    def r(self) -> float:
        return float(np.arccosh(np.sqrt(self.g)))

    @property
    def h(self) -> float:
        return float(np.cosh(self.gamma * self.r) ** 2)

    def corrected(self) -> "PhysicalParams":
        """Same source, ideal homodyne detection (eta = 1, e = 0)."""
        return replace(self, eta=1.0, e=0.0)


@dataclass(frozen=True)
class ReducedParams:
    sigma2: float
    delta: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")


@dataclass(frozen=True)
class FockDensityDiagonal:
    values: np.ndarray
    n_max: int

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, n):
        return self.values[n]

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def mean_photon_number(self) -> float:
        return float(np.arange(self.n_max + 1) @ self.values)


def reduce(p: PhysicalParams) -> ReducedParams:
    h, g = p.h, p.g
    hg1 = h * g - 1
    sigma2 = 2 * p.eta * hg1 + 1 + p.e
    if g == 1:
        return ReducedParams(sigma2, 0.0)
    delta = 2 * p.xi * p.eta * h**2 * g * (g - 1) / (sigma2 * hg1)
    return ReducedParams(sigma2, delta)


def _bracket2(u, d):
    return (1 - d) ** 2 + 2 * (1 - d) * d * u + d * d * u * u / 2


def _gauss2d(R2, s2):
    return np.exp(-R2 / s2) / (np.pi * s2)


def wigner_w2_radial(rp: ReducedParams, R2):
    R2 = np.asarray(R2, dtype=float)
    return _gauss2d(R2, rp.sigma2) * _bracket2(R2 / rp.sigma2, rp.delta)


def wigner_w1_radial(rp: ReducedParams, R2):
    R2 = np.asarray(R2, dtype=float)
    u = R2 / rp.sigma2
    return _gauss2d(R2, rp.sigma2) * (1 - rp.delta + rp.delta * u)


def wigner_w0_radial(rp: ReducedParams, R2):
    return _gauss2d(np.asarray(R2, dtype=float), rp.sigma2)


def wigner_w2(rp: ReducedParams, x, p):
    return wigner_w2_radial(rp, np.square(x) + np.square(p))


def wigner_w1(rp: ReducedParams, x, p):
    return wigner_w1_radial(rp, np.square(x) + np.square(p))


def wigner_w0(rp: ReducedParams, x, p):
    return wigner_w0_radial(rp, np.square(x) + np.square(p))


def wigner_radial(rp: ReducedParams, which: int):
    """Radial profile R^2 -> W(R) for the state conditioned on ``which`` clicks."""
    funcs = {0: wigner_w0_radial, 1: wigner_w1_radial, 2: wigner_w2_radial}
    f = funcs[_check_which(which, CHANNELS)]
    return lambda R2: f(rp, R2)


def _gauss1d(x, s2):
    return np.exp(-np.square(x) / s2) / np.sqrt(np.pi * s2)


def quad_p2(rp: ReducedParams, x):
    x = np.asarray(x, dtype=float)
    s2, d = rp.sigma2, rp.delta
    u = x * x / s2
    return _gauss1d(x, s2) * (1 - d + 3 * d * d / 8 + (4 - 3 * d) / 2 * d * u + d * d * u * u / 2)


def quad_p1(rp: ReducedParams, x):
    x = np.asarray(x, dtype=float)
    s2, d = rp.sigma2, rp.delta
    return _gauss1d(x, s2) * (1 - d / 2 + d * x * x / s2)


def quad_p0(rp: ReducedParams, x):
    return _gauss1d(np.asarray(x, dtype=float), rp.sigma2)


def quad_density(rp: ReducedParams, which: int):
    funcs = {0: quad_p0, 1: quad_p1, 2: quad_p2}
    f = funcs[_check_which(which, CHANNELS)]
    return lambda x: f(rp, x)


def _check_which(which, allowed):
    if which not in allowed:
        raise ValueError(f"channel must be one of {allowed}, got {which!r}")
    return which


def fock_diagonals(rp: ReducedParams, which: int, n_max: int = 40) -> FockDensityDiagonal:
    """Photon-number distribution of the conditioned state.

    The factors (sigma2 - 1)**(n - k) with negative exponents cancel against
    S_n; the n = 0 and n = 1 entries are written in the cancelled form so the
    ideal point sigma2 = 1 needs no special casing.
    """
    _check_which(which, CHANNELS)
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    s2, d = rp.sigma2, rp.delta
    q = s2 - 1
    n = np.arange(n_max + 1)
    # Geometric factor 2 q^n / (s2 + 1)^(n+1), clipped so q = 0 gives exact zeros.
    base = 2 * np.power(q, n) / np.power(s2 + 1, n + 1)
    if which == 0:
        return FockDensityDiagonal(base, n_max)

    S = s2 * s2 * (1 - d) + s2 * d * (1 + 2 * n) - 1
    a = (2 - d) + q * (1 - d)  # S_0 = q * a
    if which == 1:
        vals = np.empty(n_max + 1)
        vals[0] = 2 * a / (s2 + 1) ** 2
        vals[1:] = 2 * S[1:] * np.power(q, n[1:] - 1) / np.power(s2 + 1, n[1:] + 2)
        return FockDensityDiagonal(vals, n_max)

    bracket = S * S - 2 * n * (n + 1) * d * d * s2 * s2
    vals = np.empty(n_max + 1)
    vals[0] = 2 * a * a / (s2 + 1) ** 3
    vals[1] = 2 * a * (4 * d + q * (2 + 3 * d) + q * q * (1 - d)) / (s2 + 1) ** 4
    vals[2:] = 2 * bracket[2:] * np.power(q, n[2:] - 2) / np.power(s2 + 1, n[2:] + 3)
    return FockDensityDiagonal(vals, n_max)


def fock_tail_bound(rp: ReducedParams, n_max: int) -> float:
    ratio = abs(rp.sigma2 - 1) / (rp.sigma2 + 1)
    return ratio**n_max


def moments(rp: ReducedParams, which: int) -> tuple[float, float]:
    """Second and fourth moments of the quadrature distribution."""
    _check_which(which, CHANNELS)
    s2, d = rp.sigma2, rp.delta
    if which == 0:
        return s2 / 2, 3 * s2 * s2 / 4
    if which == 1:
        return s2 * (1 + d) / 2, 3 * s2 * s2 * (1 + 2 * d) / 4
    return s2 * (1 + 2 * d) / 2, 3 * s2 * s2 * (1 + 4 * d + d * d) / 4


class DegenerateConditioningError(ValueError):
    """Raised when the conditioning event has zero probability."""


@dataclass(frozen=True)
class PipelineResult:
    state: ps.SignedGaussianMixture
    p_single: float  # 1/N1: probability that APD A clicks
    p_coincidence: float  # 1/N2: probability that both APDs click

    def __iter__(self):
        return iter((self.state, self.p_single, self.p_coincidence))


PIPELINE_DPS = 40


def prepare_mix(p: PhysicalParams, dps: int | None = None) -> ps.SignedGaussianMixture:
    """Three-mode state (H, A, B) just before the APDs."""
    state = ps.two_mode_squeezed(p.g, p.h, dps=dps)
    state = ps.apply_loss(state, 0, p.eta)
    state = ps.add_noise(state, 0, p.e / 2)
    state = ps.apply_loss(state, 1, p.mu)
    return ps.balanced_split(state, 1)


def exact_pipeline(p: PhysicalParams, dps: int | None = PIPELINE_DPS) -> PipelineResult:
    """Full Gaussian-mixture derivation of the coincidence-conditioned homodyne state.

    Mode order of the intermediate state is (H, A, B). APD clicks are
    Id - |0><0|, applied with probability xi; with probability 1 - xi a click is
    unrelated to the measured mode and the projector is the identity.

    The coincidence probability is tiny at low gain and low APD efficiency and
    the mixture weights grow like its inverse, so the algebra runs at ``dps``
    decimal digits by default. ``dps=None`` uses float64.
    """
    if p.g == 1:
        raise DegenerateConditioningError("g = 1 produces no pairs; no coincidence possible")
    with ps._precision(dps):
        mix = prepare_mix(p, dps)
        A, B = 1, 2
        full = ps.trace_out(ps.trace_out(mix, B), A)

        no_a, p0a = ps.project_vacuum(mix, A)  # modes (H, B)
        only_b = ps.trace_out(no_a, 1)
        no_b, p0b = ps.project_vacuum(mix, B)  # modes (H, A)
        only_a = ps.trace_out(no_b, 1)
        no_ab, p00 = ps.project_vacuum(no_a, 1)

        p_single = 1 - p0a
        p_coinc = 1 - p0a - p0b + p00
        if not p_coinc > 0:
            raise DegenerateConditioningError(
                f"coincidence probability {float(p_coinc):.3e} is not positive"
            )
        n1 = 1 / p_single
        n2 = 1 / p_coinc
        xi = p.xi
        c_full = n2 * xi**2 + 2 * n1 * xi * (1 - xi) + (1 - xi) ** 2
        c_one = n2 * xi**2 + n1 * xi * (1 - xi)
        c_two = n2 * xi**2
        rho2 = (
            full.scaled(c_full)
            + only_b.scaled(-c_one)
            + only_a.scaled(-c_one)
            + no_ab.scaled(c_two)
        ).merged()
    return PipelineResult(rho2, float(p_single), float(p_coinc))


def exact_pipeline_single(p: PhysicalParams, dps: int | None = PIPELINE_DPS) -> PipelineResult:
    """Same derivation conditioned on a click of APD A alone (APD B ignored)."""
    if p.g == 1:
        raise DegenerateConditioningError("g = 1 produces no pairs; no click possible")
    with ps._precision(dps):
        mix = prepare_mix(p, dps)
        reduced = ps.trace_out(mix, 2)  # (H, A)
        full = ps.trace_out(reduced, 1)
        no_a, p0a = ps.project_vacuum(reduced, 1)
        p_single = 1 - p0a
        n1 = 1 / p_single
        xi = p.xi
        rho1 = (full.scaled(n1 * xi + 1 - xi) + no_a.scaled(-n1 * xi)).merged()
    return PipelineResult(rho1, float(p_single), float("nan"))


def three_gaussian_form(state: ps.SignedGaussianMixture):
    """Read (alpha, beta, sigma2_2, sigma2_1, sigma2) off a three-component coincidence state.

    Widths are returned as sigma_i^2 = 2 * variance so each term reads
    w * exp(-R^2/sigma_i^2) / (pi sigma_i^2).
    """
    if state.n_modes != 1 or len(state) != 3:
        raise ValueError("expected a single-mode three-component mixture")
    comps = sorted(state.components, key=lambda c: c.covariance[0, 0])
    widths = [2 * c.covariance[0, 0] for c in comps]
    weights = [c.weight for c in comps]
    return {
        "alpha": weights[0],
        "sigma2_2": widths[0],
        "beta": -weights[1],
        "sigma2_1": widths[1],
        "thermal_weight": weights[2],
        "sigma2": widths[2],
    }


def photon_number_from_moment(m2: float) -> float:
    """Mean photon number of a phase-symmetric state from its quadrature second moment."""
    return m2 - 0.5


def fock_from_wigner(radial, n_max: int) -> np.ndarray:
    """Photon-number distribution by overlapping a radial Wigner profile with Fock Wigner functions.

    Independent of the closed-form diagonals; used as a cross-check.
    """
    from scipy.integrate import quad
    from scipy.special import eval_laguerre

    # <n|rho|n> = 2 pi int W W_n d^2R, W_n = (-1)^n e^{-R^2} L_n(2R^2)/pi; with t = R^2, d^2R = pi dt.
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        def integrand(t, n=n):
            return float(radial(t)) * (-1) ** n * math.exp(-t) * eval_laguerre(n, 2 * t)

        val, _ = quad(integrand, 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
        out[n] = 2 * math.pi * val
    return out
