"""Signed mixtures of zero-mean Gaussians over multimode phase space.

Coordinates are ordered (x1, p1, x2, p2, ...) and the vacuum has variance 1/2
per quadrature, so ``W_vac(x, p) = exp(-x**2 - p**2) / pi``.

Every value here is immutable; operations return new mixtures.

Mixtures normally carry float64 covariances. A mixture built with a ``dps``
(decimal digits) carries mpmath numbers instead; conditioning at very low
click probabilities cancels ~10 significant digits, which float64 cannot
afford.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field

import mpmath
import numpy as np

VACUUM_VARIANCE = 0.5
PRUNE_WEIGHT = 1e-15
MAX_MODES = 4


def _is_exact(arr) -> bool:
    return isinstance(arr, np.ndarray) and arr.dtype == object


def _precision(dps):
    return mpmath.workdps(dps) if dps else contextlib.nullcontext()


def _sqrt(x):
    return mpmath.sqrt(x) if isinstance(x, mpmath.mpf) else float(np.sqrt(x))


def _det2(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _inv2(m):
    d = _det2(m)
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=m.dtype) / d


@dataclass(frozen=True)
class GaussianComponent:
    weight: float
    covariance: np.ndarray = field(repr=False)

    def __post_init__(self):
        raw = self.covariance
        cov = np.array(raw, dtype=object if _is_exact(raw) else float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be 2N x 2N, got shape {cov.shape}")
        approx = cov.astype(float)
        if not np.allclose(approx, approx.T, rtol=0, atol=1e-12 * max(1.0, np.abs(approx).max())):
            raise ValueError("covariance must be symmetric")
        cov = (cov + cov.T) / 2
        cov.setflags(write=False)
        object.__setattr__(self, "covariance", cov)
        if not isinstance(self.weight, mpmath.mpf):
            object.__setattr__(self, "weight", float(self.weight))

    @property
    def dim(self) -> int:
        return self.covariance.shape[0]

    @property
    def covariance_float(self) -> np.ndarray:
        return self.covariance.astype(float)

    def density(self, points) -> np.ndarray:
        """Normalized Gaussian density at ``points`` (shape (..., 2N))."""
        points = np.asarray(points, dtype=float)
        flat = points.reshape(-1, self.dim)
        if _is_exact(self.covariance):
            cov = mpmath.matrix(self.covariance.tolist())
            inv = mpmath.inverse(cov)
            norm = 1 / mpmath.sqrt((2 * mpmath.pi) ** self.dim * mpmath.det(cov))
            out = np.empty(len(flat), dtype=object)
            for i, z in enumerate(flat):
                v = mpmath.matrix(z.tolist())
                out[i] = norm * mpmath.exp(-(v.T * inv * v)[0] / 2)
            return out.reshape(points.shape[:-1])
        chol = np.linalg.cholesky(self.covariance)
        z = np.linalg.solve(chol, flat.T)
        quad = np.sum(z * z, axis=0)
        log_norm = 0.5 * self.dim * np.log(2 * np.pi) + np.sum(np.log(np.diag(chol)))
        return np.exp(-0.5 * quad - log_norm).reshape(points.shape[:-1])


@dataclass(frozen=True)
class SignedGaussianMixture:
    """Weighted sum of zero-mean Gaussians; weights may be negative."""

    n_modes: int
    components: tuple[GaussianComponent, ...]
    dps: int | None = None

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be positive")
        comps = tuple(self.components)
        for c in comps:
            if c.dim != 2 * self.n_modes:
                raise ValueError(
                    f"component of dimension {c.dim} in a {self.n_modes}-mode mixture"
                )
        object.__setattr__(self, "components", comps)

    def _new(self, n_modes, comps):
        return SignedGaussianMixture(n_modes, tuple(comps), self.dps)

    @property
    def weights(self) -> np.ndarray:
        return np.array([float(c.weight) for c in self.components])

    @property
    def total_weight(self) -> float:
        with _precision(self.dps):
            return sum((c.weight for c in self.components), start=0 * self.components[0].weight)

    def __len__(self):
        return len(self.components)

    def __call__(self, points):
        return evaluate(self, points)

    def scaled(self, factor) -> "SignedGaussianMixture":
        with _precision(self.dps):
            return self._new(
                self.n_modes,
                (GaussianComponent(c.weight * factor, c.covariance) for c in self.components),
            )

    def __add__(self, other: "SignedGaussianMixture") -> "SignedGaussianMixture":
        if other.n_modes != self.n_modes:
            raise ValueError("cannot add mixtures over different mode counts")
        return self._new(self.n_modes, self.components + other.components)

    def normalized(self) -> "SignedGaussianMixture":
        total = self.total_weight
        if total == 0:
            raise ZeroDivisionError("mixture has zero total weight")
        with _precision(self.dps):
            return self.scaled(1 / total)

    def merged(self, rtol: float = 1e-13) -> "SignedGaussianMixture":
        """Combine components with identical covariances and prune dead weights."""
        out: list[list] = []
        with _precision(self.dps):
            for c in self.components:
                cf = c.covariance_float
                for entry in out:
                    if np.allclose(entry[2], cf, rtol=rtol, atol=0):
                        entry[0] += c.weight
                        break
                else:
                    out.append([c.weight, c.covariance, cf])
        comps = (GaussianComponent(w, cov) for w, cov, _ in out if abs(w) >= PRUNE_WEIGHT)
        return self._new(self.n_modes, comps)

    def to_float(self) -> "SignedGaussianMixture":
        comps = (GaussianComponent(float(c.weight), c.covariance_float) for c in self.components)
        return SignedGaussianMixture(self.n_modes, tuple(comps))

    def mode_covariances(self, mode: int) -> list[np.ndarray]:
        sl = _mode_slice(self, mode)
        return [c.covariance_float[sl, sl] for c in self.components]

    def second_moments(self, mode: int) -> tuple[float, float]:
        """Signed-weight averages of <x^2> and <p^2> on one mode."""
        sl = _mode_slice(self, mode)
        with _precision(self.dps):
            x2 = sum(c.weight * c.covariance[sl, sl][0, 0] for c in self.components)
            p2 = sum(c.weight * c.covariance[sl, sl][1, 1] for c in self.components)
        return float(x2), float(p2)

    def mean_photon_number(self, mode: int) -> float:
        x2, p2 = self.second_moments(mode)
        return (x2 + p2 - 2 * VACUUM_VARIANCE) / (4 * VACUUM_VARIANCE)


def _mode_slice(state: SignedGaussianMixture, mode: int) -> slice:
    if not 0 <= mode < state.n_modes:
        raise IndexError(f"mode {mode} out of range for {state.n_modes}-mode state")
    return slice(2 * mode, 2 * mode + 2)


def _eye(n, like):
    if _is_exact(like):
        return np.array([[mpmath.mpf(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    return np.eye(n)


def _zeros(n, like):
    return _eye(n, like) * 0


def _single(cov, weight=1.0, dps=None) -> SignedGaussianMixture:
    return SignedGaussianMixture(cov.shape[0] // 2, (GaussianComponent(weight, cov),), dps)


def vacuum(dps: int | None = None) -> SignedGaussianMixture:
    if dps:
        with mpmath.workdps(dps):
            cov = np.array([[mpmath.mpf(1) / 2, 0], [0, mpmath.mpf(1) / 2]], dtype=object)
            return _single(cov, mpmath.mpf(1), dps)
    return _single(VACUUM_VARIANCE * np.eye(2))


def thermal(variance: float) -> SignedGaussianMixture:
    """Single-mode thermal state with quadrature variance ``variance``."""
    if variance < VACUUM_VARIANCE:
        raise ValueError("thermal variance below the vacuum level")
    return _single(variance * np.eye(2))


def squeeze_factor(g) -> float:
    """s = exp(-2r) for an amplifier of gain g = cosh(r)**2."""
    if isinstance(g, mpmath.mpf):
        return mpmath.exp(-2 * mpmath.acosh(mpmath.sqrt(g)))
    return float(np.exp(-2 * np.arccosh(np.sqrt(g))))


def two_mode_squeezed(g: float, h: float = 1.0, dps: int | None = None) -> SignedGaussianMixture:
    """Noisy two-mode squeezed vacuum from an OPA of gain g followed by excess gain h.

    The combinations (x1 - x2)/sqrt(2) and (p1 + p2)/sqrt(2) have variance
    (h s + h - 1)/2 and the orthogonal ones (h/s + h - 1)/2.
    """
    if g < 1:
        raise ValueError(f"gain g must be >= 1, got {g}")
    if h < 1:
        raise ValueError(f"excess gain h must be >= 1, got {h}")
    with _precision(dps):
        if dps:
            g, h = mpmath.mpf(g), mpmath.mpf(h)
        s = squeeze_factor(g)
        v_sq = (h * s + h - 1) / 2
        v_anti = (h / s + h - 1) / 2
        a = (v_sq + v_anti) / 2
        c = (v_anti - v_sq) / 2
        cov = np.array(
            [
                [a, 0 * a, c, 0 * a],
                [0 * a, a, 0 * a, -c],
                [c, 0 * a, a, 0 * a],
                [0 * a, -c, 0 * a, a],
            ],
            dtype=object if dps else float,
        )
        return _single(cov, mpmath.mpf(1) if dps else 1.0, dps)


def tensor(a: SignedGaussianMixture, b: SignedGaussianMixture) -> SignedGaussianMixture:
    n = a.n_modes + b.n_modes
    if n > MAX_MODES:
        raise ValueError(f"at most {MAX_MODES} modes are supported")
    da, db = 2 * a.n_modes, 2 * b.n_modes
    dps = a.dps or b.dps
    comps = []
    with _precision(dps):
        for ca in a.components:
            for cb in b.components:
                like = ca.covariance if _is_exact(ca.covariance) else cb.covariance
                cov = _zeros(da + db, like)
                cov[:da, :da] = ca.covariance
                cov[da:, da:] = cb.covariance
                comps.append(GaussianComponent(ca.weight * cb.weight, cov))
    return SignedGaussianMixture(n, tuple(comps), dps)


def _transform(state: SignedGaussianMixture, build):
    """Apply V -> M V M^T + offset to every component; ``build(like)`` returns (M, offset)."""
    with _precision(state.dps):
        comps = []
        for c in state.components:
            matrix, offset = build(c.covariance)
            comps.append(GaussianComponent(c.weight, matrix @ c.covariance @ matrix.T + offset))
    return state._new(state.n_modes, comps)


def _coerce(value, state):
    return mpmath.mpf(value) if state.dps else float(value)


def apply_loss(state: SignedGaussianMixture, mode_index: int, T: float) -> SignedGaussianMixture:
    """Mix one mode with vacuum on a beamsplitter of transmission T and keep the transmitted port."""
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"transmission must lie in [0, 1], got {T}")
    sl = _mode_slice(state, mode_index)
    dim = 2 * state.n_modes

    def build(like):
        t = _coerce(T, state)
        scale = _eye(dim, like)
        scale[sl, sl] = scale[sl, sl] * _sqrt(t)
        offset = _zeros(dim, like)
        offset[sl, sl] = _eye(2, like) * ((1 - t) / 2)
        return scale, offset

    return _transform(state, build)


def add_noise(state: SignedGaussianMixture, mode_index: int, variance: float) -> SignedGaussianMixture:
    """Add isotropic Gaussian noise of the given variance to both quadratures of one mode."""
    if variance < 0:
        raise ValueError("added noise variance must be nonnegative")
    sl = _mode_slice(state, mode_index)
    dim = 2 * state.n_modes

    def build(like):
        offset = _zeros(dim, like)
        offset[sl, sl] = _eye(2, like) * _coerce(variance, state)
        return _eye(dim, like), offset

    return _transform(state, build)


def balanced_split(state: SignedGaussianMixture, mode_index: int) -> SignedGaussianMixture:
    """Send one mode through a 50/50 beamsplitter with a fresh vacuum mode.

    The split mode keeps its index and becomes output A; output B is appended
    as the last mode. With the input at (A + B)/sqrt(2) and the vacuum at
    (A - B)/sqrt(2), the transform is its own inverse.
    """
    sl = _mode_slice(state, mode_index)
    grown = tensor(state, vacuum(state.dps))
    dim = 2 * grown.n_modes
    new = slice(dim - 2, dim)

    def build(like):
        bs = _eye(dim, like)
        r = 1 / _sqrt(_coerce(2, state))
        i2 = _eye(2, like)
        bs[sl, sl] = r * i2
        bs[sl, new] = r * i2
        bs[new, sl] = r * i2
        bs[new, new] = -r * i2
        return bs, _zeros(dim, like)

    return _transform(grown, build)


def _keep_indices(state: SignedGaussianMixture, mode_index: int):
    sl = _mode_slice(state, mode_index)
    keep = [i for i in range(2 * state.n_modes) if not sl.start <= i < sl.stop]
    return keep, [sl.start, sl.start + 1]


def trace_out(state: SignedGaussianMixture, mode_index: int) -> SignedGaussianMixture:
    if state.n_modes < 2:
        raise ValueError("cannot trace out the last remaining mode")
    keep, _ = _keep_indices(state, mode_index)
    comps = (
        GaussianComponent(c.weight, c.covariance[np.ix_(keep, keep)]) for c in state.components
    )
    return state._new(state.n_modes - 1, comps)


def project_vacuum(state: SignedGaussianMixture, mode_index: int):
    """Apply <0|.|0> on one mode and integrate it out.

    Returns the unnormalized reduced mixture and its total weight, which is the
    probability of finding that mode empty.
    """
    if state.n_modes < 2:
        raise ValueError("vacuum projection needs at least two modes")
    keep, gone = _keep_indices(state, mode_index)
    comps = []
    with _precision(state.dps):
        for c in state.components:
            cov = c.covariance
            a = cov[np.ix_(keep, keep)]
            cross = cov[np.ix_(keep, gone)]
            b = cov[np.ix_(gone, gone)] + _eye(2, cov) * _coerce(VACUUM_VARIANCE, state)
            # 2*pi*W_vac is a unit-height Gaussian: the overlap is 1/sqrt(det(B + I/2)).
            factor = 1 / _sqrt(_det2(b))
            reduced = a - cross @ _inv2(b) @ cross.T
            comps.append(GaussianComponent(c.weight * factor, reduced))
    out = state._new(state.n_modes - 1, comps)
    return out, out.total_weight


def evaluate(state: SignedGaussianMixture, point) -> np.ndarray | float:
    """Sum of weighted component densities at ``point`` (last axis of length 2N)."""
    point = np.asarray(point, dtype=float)
    if point.shape[-1] != 2 * state.n_modes:
        raise ValueError(
            f"point has {point.shape[-1]} coordinates, state needs {2 * state.n_modes}"
        )
    if state.dps and state.n_modes == 1:
        R2 = point[..., 0] ** 2 + point[..., 1] ** 2
        if _isotropic(state):
            out = evaluate_radial(state, R2)
            return float(out) if out.ndim == 0 else out
    with _precision(state.dps):
        total = 0
        for c in state.components:
            total = total + c.weight * c.density(point)
        total = np.asarray(total).astype(float)
    return float(total) if total.ndim == 0 else total


def _isotropic(state: SignedGaussianMixture) -> bool:
    for c in state.components:
        cf = c.covariance_float
        if abs(cf[0, 1]) > 1e-14 * cf[0, 0] or abs(cf[0, 0] - cf[1, 1]) > 1e-14 * cf[0, 0]:
            return False
    return True


def evaluate_radial(state: SignedGaussianMixture, R2) -> np.ndarray:
    """Evaluate an isotropic single-mode mixture as a function of R^2 = x^2 + p^2."""
    if state.n_modes != 1:
        raise ValueError("radial evaluation needs a single-mode state")
    R2 = np.asarray(R2, dtype=float)
    if not state.dps:
        out = np.zeros_like(R2)
        for c in state.components:
            v = c.covariance[0, 0]
            out = out + c.weight * np.exp(-R2 / (2 * v)) / (2 * np.pi * v)
        return out
    with mpmath.workdps(state.dps):
        terms = [(c.weight, c.covariance[0, 0]) for c in state.components]

        def one(r2):
            r2 = mpmath.mpf(float(r2))
            return float(sum(w * mpmath.exp(-r2 / (2 * v)) / (2 * mpmath.pi * v) for w, v in terms))

        return np.vectorize(one, otypes=[float])(R2)


def max_sigma(state: SignedGaussianMixture) -> float:
    return float(max(np.sqrt(np.linalg.eigvalsh(c.covariance_float).max()) for c in state.components))


def min_eigenvalue(state: SignedGaussianMixture) -> float:
    return float(min(np.linalg.eigvalsh(c.covariance_float).min() for c in state.components))


def integrate_box(state: SignedGaussianMixture, points: int = 256, width: float = 6.0) -> float:
    """Trapezoid integral of the mixture for invariant checks.

    One mode: a points x points grid on [-width*s_max, width*s_max]^2. More
    modes: each component integrated over the same box along its own
    principal axes, where it factorizes into 1-D Gaussians.
    """
    s = width * max_sigma(state)
    axis = np.linspace(-s, s, points)
    if state.n_modes == 1:
        X, P = np.meshgrid(axis, axis, indexing="ij")
        vals = evaluate(state, np.stack([X, P], axis=-1))
        return float(np.trapezoid(np.trapezoid(vals, axis, axis=1), axis))
    total = 0.0
    for c in state.components:
        prod = 1.0
        for ev in np.linalg.eigvalsh(c.covariance_float):
            g = np.exp(-axis**2 / (2 * ev)) / np.sqrt(2 * np.pi * ev)
            prod *= np.trapezoid(g, axis)
        total += float(c.weight) * prod
    return total
