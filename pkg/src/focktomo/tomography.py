"""State reconstruction from homodyne records.

Three routes are provided:

* filtered back-projection of phase-binned quadrature histograms (inverse
  Radon transform) onto a Wigner-function grid,
* iterative maximum-likelihood estimation of the density matrix, with the
  detector inefficiency folded into the POVM so the estimate is the state
  before detection,
* inversion of the second and fourth quadrature moments for (sigma2, delta).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RectBivariateSpline
from scipy.optimize import minimize, minimize_scalar
from scipy.special import comb, eval_laguerre

from .homodyne import RecordSet
from .model import ReducedParams, wigner_radial

log = logging.getLogger(__name__)

DEFAULT_BINS = 64
DEFAULT_GRID = 64
MAXLIK_NMAX = 12
MAXLIK_ITERS = 2000
MAXLIK_TOL = 1e-9


class ReconstructionError(ValueError):
    pass


class ModelInconsistentError(ReconstructionError):
    """Moments admit no (sigma2, delta) with delta in [0, 2]."""

    def __init__(self, message, m2, m4):
        super().__init__(f"{message} (m2={m2!r}, m4={m4!r})")
        self.m2 = m2
        self.m4 = m4


# ---------------------------------------------------------------------------
# Histograms and filtered back-projection


@dataclass(frozen=True)
class QuadratureHistogram:
    phases: np.ndarray  # phase-bin centers, shape (K,)
    edges: np.ndarray  # amplitude-bin edges, shape (B + 1,)
    counts: np.ndarray  # shape (K, B); may be fractional for tabulated densities
    clipped: int = 0

    def __post_init__(self):
        if np.any(np.diff(self.edges) <= 0):
            raise ReconstructionError("bin edges must be strictly increasing")
        if self.counts.shape != (len(self.phases), len(self.edges) - 1):
            raise ReconstructionError("counts shape does not match phases and edges")

    @property
    def total(self) -> float:
        return float(self.counts.sum())

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def width(self) -> float:
        return float(self.edges[1] - self.edges[0])

    def densities(self) -> np.ndarray:
        per_phase = self.counts.sum(axis=1, keepdims=True)
        if np.any(per_phase == 0):
            raise ReconstructionError("a phase bin holds no data")
        return self.counts / (per_phase * self.width)


def default_range(x: np.ndarray) -> float:
    """Half-width 5*sqrt(2 <x^2>), rounded outward to a multiple of 0.5."""
    m2 = float(np.mean(np.square(x)))
    return math.ceil(5 * math.sqrt(2 * m2) * 2) / 2


def _fold_phases(theta, x):
    """Map theta into [0, pi) using X_{theta+pi} = -X_theta."""
    theta = np.mod(theta, 2 * np.pi)
    flip = theta >= np.pi
    return np.where(flip, theta - np.pi, theta), np.where(flip, -x, x)


def histogram(records: RecordSet, n_bins: int = DEFAULT_BINS, half_range: float | None = None,
              n_phases: int | None = None) -> QuadratureHistogram:
    """Phase-resolved histogram with K equal phase bins centred on k*pi/K."""
    if len(records) == 0:
        raise ReconstructionError("cannot histogram an empty record set")
    theta, x = _fold_phases(np.asarray(records.theta), np.asarray(records.x))
    if n_phases is None:
        n_phases = len(np.unique(np.round(theta, 12)))
    half_range = half_range or default_range(x)
    edges = np.linspace(-half_range, half_range, n_bins + 1)
    # Bin k covers [(k - 1/2) pi/K, (k + 1/2) pi/K); the top sliver wraps to bin 0 with x -> -x.
    step = np.pi / n_phases
    idx = np.floor(theta / step + 0.5).astype(int)
    wrap = idx == n_phases
    idx[wrap] = 0
    x = np.where(wrap, -x, x)
    clipped = int(np.count_nonzero((x < edges[0]) | (x >= edges[-1])))
    if clipped:
        log.warning("%d samples outside +-%.3g clipped into edge bins", clipped, half_range)
    xb = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, n_bins - 1)
    counts = np.zeros((n_phases, n_bins))
    np.add.at(counts, (idx, xb), 1)
    return QuadratureHistogram(np.arange(n_phases) * step, edges, counts, clipped)


def tabulated_histogram(density, n_phases: int, half_range: float, n_bins: int = DEFAULT_BINS,
                        total: float = 1.0, sub: int = 32) -> QuadratureHistogram:
    """Noise-free histogram of a phase-independent density (bin integrals by midpoint subdivision)."""
    edges = np.linspace(-half_range, half_range, n_bins + 1)
    w = edges[1] - edges[0]
    fine = edges[0] + (np.arange(n_bins * sub) + 0.5) * w / sub
    mass = np.asarray(density(fine)).reshape(n_bins, sub).sum(axis=1) * w / sub
    counts = np.tile(mass * total / n_phases, (n_phases, 1))
    return QuadratureHistogram(np.arange(n_phases) * np.pi / n_phases, edges, counts)


def ramp_kernel(offsets, cutoff: float, bin_width: float | None = None, n_k: int = 512):
    """Spatial kernel of the band-limited ramp filter, (1/2pi) int_{|k|<kc} |k| e^{ikX} dk.

    With ``bin_width`` the filter is divided by sinc(k w/2) to undo the
    smoothing from averaging the density over histogram bins.
    """
    offsets = np.asarray(offsets, dtype=float)
    if bin_width is None:
        kx = cutoff * offsets
        small = np.abs(kx) < 1e-6
        safe = np.where(small, 1.0, offsets)
        val = (cutoff * np.sin(kx) / safe + (np.cos(kx) - 1) / safe**2) / np.pi
        return np.where(small, cutoff**2 / (2 * np.pi), val)
    # Gauss-Legendre on [0, kc]; the integrand is smooth there.
    nodes, weights = np.polynomial.legendre.leggauss(n_k)
    k = 0.5 * cutoff * (nodes + 1)
    wk = 0.5 * cutoff * weights
    comp = k / np.sinc(k * bin_width / (2 * np.pi))
    return (np.cos(np.multiply.outer(offsets, k)) @ (wk * comp)) / np.pi


def _phase_weights(phases: np.ndarray) -> np.ndarray:
    """Angular quadrature weights on the half circle [0, pi) (periodic midpoint rule)."""
    order = np.argsort(phases)
    th = phases[order]
    nxt = np.roll(th, -1)
    nxt[-1] += np.pi
    prv = np.roll(th, 1)
    prv[0] -= np.pi
    w = np.empty_like(th)
    w[order] = 0.5 * (nxt - prv)
    return w


@dataclass(frozen=True)
class WignerGrid:
    x: np.ndarray
    p: np.ndarray
    values: np.ndarray  # values[i, j] = W(x[i], p[j])
    min_value: float = field(init=False)
    value_at_origin: float = field(init=False)

    def __post_init__(self):
        if self.values.shape != (len(self.x), len(self.p)):
            raise ReconstructionError("grid values do not match the axes")
        object.__setattr__(self, "min_value", float(self.values.min()))
        spline = self.spline()
        object.__setattr__(self, "value_at_origin", float(spline(0.0, 0.0)[0, 0]))

    def spline(self) -> RectBivariateSpline:
        return RectBivariateSpline(self.x, self.p, self.values, kx=3, ky=3)

    def integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(self.values, self.p, axis=1), self.x))

    def radial_profile(self, radii, n_angles: int = 256) -> np.ndarray:
        """Angle-averaged W on circles of the given radii (bicubic interpolation)."""
        spline = self.spline()
        ang = np.arange(n_angles) * 2 * np.pi / n_angles
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        xs = np.multiply.outer(radii, np.cos(ang))
        ps = np.multiply.outer(radii, np.sin(ang))
        return spline.ev(xs, ps).mean(axis=1)


def radon_reconstruct(h: QuadratureHistogram, cutoff: float | None = None, grid_size: int = DEFAULT_GRID,
                      extent: float | None = None, upsample: int = 16,
                      compensate_bins: bool = True, normalize: bool = True) -> WignerGrid:
    """Filtered back-projection of a phase-binned histogram onto a square Wigner grid.

    ``cutoff`` is the hard frequency cutoff of the ramp filter (default pi over
    the bin width). The filtered projections are evaluated on a grid
    ``upsample`` times finer than the bins, so the linear interpolation used in
    back-projection stays far below the statistical error.
    """
    if h.total <= 0:
        raise ReconstructionError("empty histogram")
    if len(h.phases) < 2:
        raise ReconstructionError("filtered back-projection needs at least two phases")
    dx = h.width
    cutoff = cutoff or math.pi / dx
    centers = h.centers
    dens = h.densities()
    half = centers[-1] + dx / 2
    extent = extent or half / 2
    n_fine = len(centers) * upsample
    fine = np.linspace(-half, half, n_fine + 1)
    # fine[i] - centers[j] = (i - upsample*j - upsample/2) * dx/upsample: tabulate each offset once.
    shift = np.subtract.outer(np.arange(n_fine + 1) * 2, (np.arange(len(centers)) * 2 + 1) * upsample)
    lags = np.arange(shift.min(), shift.max() + 1)
    table = ramp_kernel(lags * dx / (2 * upsample), cutoff, dx if compensate_bins else None)
    kernel = table[shift - lags[0]] * dx
    filtered = dens @ kernel.T  # (K, n_fine)

    axis = np.linspace(-extent, extent, grid_size)
    X, P = np.meshgrid(axis, axis, indexing="ij")
    W = np.zeros_like(X)
    for th, wt, q in zip(h.phases, _phase_weights(h.phases), filtered):
        t = X * math.cos(th) + P * math.sin(th)
        W += wt * np.interp(t, fine, q, left=0.0, right=0.0)
    W /= 2 * math.pi
    grid = WignerGrid(axis, axis.copy(), W)
    if normalize:
        total = grid.integral()
        if total <= 0:
            raise ReconstructionError(f"reconstruction integrates to {total:.3g}")
        grid = WignerGrid(axis, axis.copy(), W / total)
    return grid


# ---------------------------------------------------------------------------
# Critical values


@dataclass(frozen=True)
class CriticalValues:
    min_w: float
    w_origin: float
    argmin_radius: float = float("nan")

    def __iter__(self):
        return iter((self.min_w, self.w_origin))


def _radial_minimum(f, scale: float, tol: float = 1e-10) -> tuple[float, float]:
    """Global minimum of f(R) over R >= 0; seeded on a grid then golden-section refined."""
    R = np.linspace(0, 8 * scale, 4001)
    vals = f(R)
    i = int(np.argmin(vals))
    if vals[i] >= 0 and i == len(R) - 1:
        return 0.0, float("inf")
    if i == 0:
        return float(vals[0]), 0.0
    lo, hi = R[i - 1], R[min(i + 1, len(R) - 1)]
    res = minimize_scalar(lambda r: float(f(np.array(r))), bracket=(lo, R[i], hi),
                          method="golden", tol=tol)
    return float(res.fun), float(abs(res.x))


def critical_values_model(rp: ReducedParams, which: int) -> CriticalValues:
    """Minimum and origin value of the closed-form Wigner function.

    A strictly positive function has its infimum 0 at infinity; that is
    reported as min_w = 0.
    """
    radial = wigner_radial(rp, which)
    origin = float(radial(0.0))
    fmin, rmin = _radial_minimum(lambda R: radial(np.square(R)), math.sqrt(rp.sigma2))
    if fmin >= 0:
        return CriticalValues(0.0, origin, float("inf"))
    return CriticalValues(fmin, origin, rmin)


def critical_values_grid(grid: WignerGrid, radial: bool = False) -> CriticalValues:
    """Grid minimum refined by bicubic interpolation, and the interpolated origin value.

    With ``radial=True`` the minimum is taken over the angle-averaged profile,
    appropriate for phase-independent states.
    """
    if radial:
        span = min(abs(grid.x[0]), abs(grid.x[-1]), abs(grid.p[0]), abs(grid.p[-1]))
        R = np.linspace(0, span, 801)
        prof = grid.radial_profile(R)
        i = int(np.argmin(prof))
        if 0 < i < len(R) - 1:
            res = minimize_scalar(lambda r: float(grid.radial_profile([r])[0]),
                                  bracket=(R[i - 1], R[i], R[i + 1]), method="golden", tol=1e-8)
            return CriticalValues(float(res.fun), grid.value_at_origin, float(abs(res.x)))
        return CriticalValues(float(prof[i]), grid.value_at_origin, float(R[i]))
    spline = grid.spline()
    i, j = np.unravel_index(np.argmin(grid.values), grid.values.shape)
    x0, p0 = grid.x[i], grid.p[j]
    dxg, dpg = grid.x[1] - grid.x[0], grid.p[1] - grid.p[0]
    bounds = [(max(grid.x[0], x0 - dxg), min(grid.x[-1], x0 + dxg)),
              (max(grid.p[0], p0 - dpg), min(grid.p[-1], p0 + dpg))]
    res = minimize(lambda z: float(spline.ev(z[0], z[1])), [x0, p0], bounds=bounds,
                   method="L-BFGS-B")
    fmin = min(float(res.fun), grid.min_value)
    return CriticalValues(fmin, grid.value_at_origin, float(np.hypot(*res.x)))


def critical_values(obj, which: int | None = None, **kw) -> CriticalValues:
    if isinstance(obj, WignerGrid):
        return critical_values_grid(obj, **kw)
    if isinstance(obj, ReducedParams):
        if which is None:
            raise ValueError("which channel? pass which=1 or 2")
        return critical_values_model(obj, which)
    if isinstance(obj, DensityMatrixEstimate):
        return critical_values_density(obj.rho)
    raise TypeError(f"cannot take critical values of {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Fock-basis utilities


def hermite_functions(x, n_max: int) -> np.ndarray:
    """psi_n(x) for n = 0..n_max, shape (len(x), n_max + 1); psi_0 = pi^{-1/4} exp(-x^2/2)."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (n_max + 1,))
    out[..., 0] = math.pi**-0.25 * np.exp(-x * x / 2)
    if n_max >= 1:
        out[..., 1] = math.sqrt(2) * x * out[..., 0]
    for n in range(2, n_max + 1):
        out[..., n] = math.sqrt(2 / n) * x * out[..., n - 1] - math.sqrt((n - 1) / n) * out[..., n - 2]
    return out


def loss_kraus(eta: float, dim: int) -> np.ndarray:
    """Kraus operators A_k = sum_m sqrt(C(m,k) eta^(m-k) (1-eta)^k) |m-k><m| of the loss channel."""
    ops = np.zeros((dim, dim, dim))
    for k in range(dim):
        m = np.arange(k, dim)
        ops[k, m - k, m] = np.sqrt(comb(m, k) * np.power(eta, m - k) * np.power(1 - eta, k))
    return ops


def apply_loss_fock(rho: np.ndarray, eta: float) -> np.ndarray:
    ops = loss_kraus(eta, rho.shape[0])
    return np.einsum("kij,jl,kml->im", ops, rho, ops.conj())


def apply_loss_fock_adjoint(op: np.ndarray, eta: float) -> np.ndarray:
    ops = loss_kraus(eta, op.shape[0])
    return np.einsum("kji,jl,klm->im", ops.conj(), op, ops)


def loss_diagonal(diag, eta: float) -> np.ndarray:
    """Photon-number distribution after loss (binomial thinning)."""
    return np.real(np.diag(apply_loss_fock(np.diag(np.asarray(diag, dtype=float)), eta)))


def wigner_radial_from_diagonal(diag, R2) -> np.ndarray:
    """Phase-averaged Wigner function (1/pi) sum_n rho_nn (-1)^n e^{-R^2} L_n(2R^2)."""
    R2 = np.asarray(R2, dtype=float)
    out = np.zeros_like(R2)
    for n, pn in enumerate(np.asarray(diag, dtype=float)):
        out = out + pn * (-1) ** n * eval_laguerre(n, 2 * R2)
    return out * np.exp(-R2) / math.pi


def critical_values_density(rho: np.ndarray) -> CriticalValues:
    """Critical values of the phase-averaged Wigner function of a density matrix."""
    diag = np.real(np.diag(rho))
    origin = float(wigner_radial_from_diagonal(diag, 0.0))
    fmin, rmin = _radial_minimum(lambda R: wigner_radial_from_diagonal(diag, np.square(R)), 1.0)
    if fmin >= 0:
        return CriticalValues(0.0, origin, float("inf"))
    return CriticalValues(fmin, origin, rmin)


# ---------------------------------------------------------------------------
# Maximum likelihood


@dataclass(frozen=True)
class DensityMatrixEstimate:
    rho: np.ndarray
    eta: float
    loglik: tuple[float, ...]
    converged: bool
    iterations: int

    def __post_init__(self):
        if abs(np.trace(self.rho).real - 1) > 1e-9:
            raise ReconstructionError("density matrix is not normalized")

    @property
    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.rho))

    @property
    def n_max(self) -> int:
        return self.rho.shape[0] - 1


def _group_by_phase(theta, x, weights):
    theta, x = _fold_phases(np.asarray(theta, dtype=float), np.asarray(x, dtype=float))
    keys, inv = np.unique(np.round(theta, 12), return_inverse=True)
    groups = []
    for k, th in enumerate(keys):
        sel = inv == k
        groups.append((float(th), x[sel], weights[sel]))
    return groups


def maxlik_reconstruct(records=None, eta: float = 1.0, n_max: int = MAXLIK_NMAX,
                       iterations: int = MAXLIK_ITERS, tol: float = MAXLIK_TOL, *,
                       theta=None, x=None, weights=None, bin_width: float | None = 0.01,
                       rho0: np.ndarray | None = None) -> DensityMatrixEstimate:
    """Iterative R rho R maximum-likelihood estimate of the pre-detection density matrix.

    Each record (theta, x) contributes the quadrature projector |x_theta><x_theta|
    pulled back through a loss channel of transmission ``eta``. When a full
    R rho R step would lower the likelihood, the step is diluted to
    (I + eps R) rho (I + eps R), halving eps until the likelihood rises, so
    the log-likelihood trace is non-decreasing.

    ``bin_width`` merges records of equal phase whose x fall into the same
    fine bin (default 0.01, i.e. well below any structure of the states here);
    pass None to use every record exactly.
    """
    if not 0 < eta <= 1:
        raise ReconstructionError(f"efficiency must lie in (0, 1], got {eta}")
    if records is not None:
        theta, x = records.theta, records.x
    if theta is None or x is None or len(x) == 0:
        raise ReconstructionError("no records to reconstruct from")
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    weights = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    dim = n_max + 1

    groups = []
    for th, xs, ws in _group_by_phase(theta, x, weights):
        if bin_width:
            idx = np.floor(xs / bin_width).astype(np.int64)
            uniq, inv = np.unique(idx, return_inverse=True)
            ws = np.bincount(inv, weights=ws)
            xs = (uniq + 0.5) * bin_width
        psi = hermite_functions(xs, n_max)
        phase = np.exp(-1j * np.arange(dim) * th)  # <n|x_theta> = psi_n(x) e^{-i n theta}
        groups.append((phase, psi, ws))
    total = sum(ws.sum() for _, _, ws in groups)
    groups = [(ph, psi, ws / total) for ph, psi, ws in groups]

    kraus = loss_kraus(eta, dim)

    def degrade(r):
        return np.einsum("kij,jl,kml->im", kraus, r, kraus)

    def pullback(op):
        return np.einsum("kji,jl,klm->im", kraus, op, kraus)

    def probs_and_r(r):
        sigma = degrade(r) if eta < 1 else r
        ll = 0.0
        R = np.zeros((dim, dim), dtype=complex)
        for phase, psi, ws in groups:
            # psi^T Re(U^dag sigma U) psi with U = diag(phase^*).
            rot = (phase[:, None] * sigma * phase.conj()[None, :]).real
            p = np.einsum("in,nm,im->i", psi, rot, psi)
            p = np.maximum(p, 1e-300)
            ll += float(ws @ np.log(p))
            gram = (psi * (ws / p)[:, None]).T @ psi
            R += phase.conj()[:, None] * gram * phase[None, :]
        if eta < 1:
            R = pullback(R)
        return ll, R

    rho = np.eye(dim, dtype=complex) / dim if rho0 is None else np.array(rho0, dtype=complex)
    ll, R = probs_and_r(rho)
    trace = [ll]
    converged = False
    it = 0
    eye = np.eye(dim)
    for it in range(1, iterations + 1):
        eps = None
        while True:
            step = R if eps is None else eye + eps * R
            cand = step @ rho @ step.conj().T
            cand = 0.5 * (cand + cand.conj().T)
            cand /= np.trace(cand).real
            ll_new, R_new = probs_and_r(cand)
            if ll_new >= ll - 1e-13 * abs(ll):
                break
            eps = 1.0 if eps is None else eps / 2
            if eps < 1e-12:
                ll_new, R_new, cand = ll, R, rho
                break
        change = abs(ll_new - ll) / max(abs(ll), 1e-300)
        rho, ll, R = cand, max(ll_new, ll), R_new
        trace.append(ll)
        if change < tol:
            converged = True
            break
    if not converged:
        warnings.warn(f"MaxLik stopped at the iteration cap ({iterations})", RuntimeWarning)
    return DensityMatrixEstimate(rho, eta, tuple(trace), converged, it)


def quadrature_probabilities(rho: np.ndarray, theta: float, x) -> np.ndarray:
    psi = hermite_functions(x, rho.shape[0] - 1)
    phase = np.exp(-1j * np.arange(rho.shape[0]) * theta)
    rot = (phase[:, None] * rho * phase.conj()[None, :]).real
    return np.einsum("in,nm,im->i", psi, rot, psi)


# ---------------------------------------------------------------------------
# Moment estimator


@dataclass(frozen=True)
class MomentEstimate:
    params: ReducedParams
    m2: float
    m4: float
    rejected: tuple[float, float]  # the other root (sigma2, delta), diagnostic only


def invert_moments(m2: float, m4: float, which: int) -> MomentEstimate:
    """Closed-form (sigma2, delta) from the second and fourth quadrature moments.

    One photon:  sigma2^2 - 4 m2 sigma2 + 4 m4/3 = 0,  delta = 2 m2/sigma2 - 1.
    Two photons: 3/4 sigma2^2 - 3 m2 sigma2 + 4 m4/3 - m2^2 = 0,
                 delta = (2 m2/sigma2 - 1)/2.
    The root with delta in [0, 2] is kept.
    """
    if which == 1:
        a, b, c = 1.0, -4 * m2, 4 * m4 / 3

        def delta_of(s2):
            return 2 * m2 / s2 - 1
    elif which == 2:
        a, b, c = 0.75, -3 * m2, 4 * m4 / 3 - m2 * m2

        def delta_of(s2):
            return (2 * m2 / s2 - 1) / 2
    else:
        raise ValueError("moment inversion is defined for the 1- and 2-click channels")
    disc = b * b - 4 * a * c
    if disc < 0:
        if disc > -1e-12 * b * b:
            disc = 0.0
        else:
            raise ModelInconsistentError("no real (sigma2, delta) fits these moments", m2, m4)
    root = math.sqrt(disc)
    # Numerically stable pair of roots.
    q = -0.5 * (b - root)  # b < 0, so this is the larger-magnitude root times a
    big = q / a
    small = c / q if q != 0 else big
    candidates = []
    for s2 in (small, big):
        if s2 > 0:
            candidates.append((s2, delta_of(s2)))
    ok = [(s2, d) for s2, d in candidates if -1e-12 <= d <= 2 + 1e-12]
    if not ok:
        raise ModelInconsistentError("no root gives delta in [0, 2]", m2, m4)
    s2, d = ok[0]
    others = [cnd for cnd in candidates if cnd != (s2, d)]
    rejected = others[0] if others else (float("nan"), float("nan"))
    return MomentEstimate(ReducedParams(s2, min(max(d, 0.0), 2.0)), m2, m4, rejected)


def moment_estimate(records, which: int, min_records: int = 1000) -> MomentEstimate:
    x = np.asarray(records.x if hasattr(records, "x") else records, dtype=float)
    if len(x) < min_records:
        raise ReconstructionError(f"need at least {min_records} records, got {len(x)}")
    x2 = x * x
    return invert_moments(float(x2.mean()), float((x2 * x2).mean()), which)
