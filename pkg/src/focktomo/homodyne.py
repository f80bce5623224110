"""Monte-Carlo homodyne records for the unconditioned, single-click and coincidence channels.

The conditioned quadrature distributions do not depend on the local-oscillator
phase, so every record is drawn from the same density and only tagged with a
phase from the schedule.

Random streams: each channel is generated in fixed-size chunks, and chunk ``i``
of channel ``c`` draws from PCG64 seeded by ``SeedSequence([seed, c, i])``.
The output is therefore identical for any number of worker threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .model import CHANNELS, PhysicalParams, ReducedParams, quad_density, reduce

CHUNK = 1 << 16
DEFAULT_PHASES = 12
DEFAULT_COUNTS = {0: 180_000, 1: 180_000, 2: 105_000}


@dataclass(frozen=True)
class QuadratureRecord:
    theta: float
    x: float
    channel: int

    def __post_init__(self):
        if not np.isfinite(self.x):
            raise ValueError(f"quadrature value must be finite, got {self.x}")
        if not 0 <= self.theta < np.pi:
            raise ValueError(f"phase must lie in [0, pi), got {self.theta}")
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel}")


@dataclass(frozen=True)
class RecordSet:
    """Columnar block of records from one channel."""

    channel: int
    theta: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        if self.theta.shape != self.x.shape:
            raise ValueError("theta and x must have the same length")

    def __len__(self):
        return len(self.x)

    def __iter__(self):
        for t, x in zip(self.theta, self.x):
            yield QuadratureRecord(float(t), float(x), self.channel)

    @classmethod
    def from_records(cls, records) -> "RecordSet":
        records = list(records)
        if not records:
            raise ValueError("no records")
        channels = {r.channel for r in records}
        if len(channels) != 1:
            raise ValueError(f"records mix channels {sorted(channels)}")
        theta = np.array([r.theta for r in records])
        x = np.array([r.x for r in records])
        return cls(channels.pop(), theta, x)


def phase_schedule(phases) -> np.ndarray:
    """K uniformly spaced phases k*pi/K for an int, or an explicit list of phases."""
    if np.isscalar(phases):
        k = int(phases)
        if k < 1:
            raise ValueError("need at least one phase")
        return np.arange(k) * np.pi / k
    sched = np.asarray(phases, dtype=float)
    if sched.size < 1:
        raise ValueError("need at least one phase")
    if np.any((sched < 0) | (sched >= np.pi)):
        raise ValueError("phases must lie in [0, pi)")
    return sched


@dataclass(frozen=True)
class SimConfig:
    params: PhysicalParams | ReducedParams = field(default_factory=PhysicalParams)
    counts: dict = field(default_factory=lambda: dict(DEFAULT_COUNTS))
    phases: int | tuple = DEFAULT_PHASES
    seed: int = 2006

    def __post_init__(self):
        for ch, n in self.counts.items():
            if ch not in CHANNELS:
                raise ValueError(f"unknown channel {ch}")
            if n <= 0:
                raise ValueError(f"count for channel n{ch} must be positive, got {n}")
        phase_schedule(self.phases)
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def reduced(self) -> ReducedParams:
        if isinstance(self.params, ReducedParams):
            return self.params
        return reduce(self.params)


# Polynomial prefactors c0 + c1 u + c2 u^2 (u = x^2/sigma2) multiplying exp(-u)/sqrt(pi sigma2).
def _poly(rp: ReducedParams, which: int):
    d = rp.delta
    if which == 0:
        return 1.0, 0.0, 0.0
    if which == 1:
        return 1 - d / 2, d, 0.0
    return 1 - d + 3 * d * d / 8, (4 - 3 * d) * d / 2, d * d / 2


def _ratio_bound(rp: ReducedParams, which: int, v_env: float) -> float:
    """sup_x f(x)/g(x) for the target f and a centered Gaussian g of variance v_env."""
    c0, c1, c2 = _poly(rp, which)
    s2 = rp.sigma2
    a = 1 - s2 / (2 * v_env)  # ratio ~ exp(-a u) * poly(u)
    if a < 0 or (a == 0 and (c1 or c2)):
        return np.inf
    pref = np.sqrt(2 * v_env / s2)
    cands = [0.0]
    # d/du [e^{-au} q(u)] = 0  <=>  A u^2 + B u + C = 0
    A, B, C = -a * c2, 2 * c2 - a * c1, c1 - a * c0
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if A != 0:
            disc = B * B - 4 * A * C
            if disc >= 0:
                cands += [(-B + s * np.sqrt(disc)) / (2 * A) for s in (1, -1)]
        elif B != 0:
            cands.append(-C / B)
    cands = [u for u in cands if np.isfinite(u) and u >= 0]
    vals = [np.exp(-a * u) * (c0 + c1 * u + c2 * u * u) for u in cands]
    return float(pref * max(vals))


@dataclass(frozen=True)
class Envelope:
    variance: float
    bound: float

    @property
    def acceptance(self) -> float:
        return 1.0 / self.bound


def envelope(rp: ReducedParams, which: int) -> Envelope:
    """Gaussian proposal with the variance that maximizes the acceptance rate."""
    s2 = rp.sigma2
    if which == 0 or rp.delta == 0:
        return Envelope(s2 / 2, 1.0)
    m2 = s2 * (1 + which * rp.delta) / 2
    lo, hi = s2 / 2 * (1 + 1e-9), max(4 * m2, s2)
    res = minimize_scalar(
        lambda v: _ratio_bound(rp, which, v), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-10 * hi},
    )
    return Envelope(float(res.x), float(res.fun))


def sample_density(rp: ReducedParams, which: int, size: int, rng: np.random.Generator,
                   env: Envelope | None = None) -> np.ndarray:
    """Exact draws from the channel's quadrature density by rejection sampling."""
    env = env or envelope(rp, which)
    density = quad_density(rp, which)
    sd = np.sqrt(env.variance)
    out = np.empty(size)
    filled = 0
    while filled < size:
        need = size - filled
        batch = int(need * env.bound * 1.1) + 16
        x = rng.normal(0.0, sd, batch)
        g = np.exp(-x * x / (2 * env.variance)) / np.sqrt(2 * np.pi * env.variance)
        ratio = density(x) / (env.bound * g)
        if ratio.max() > 1 + 1e-9:
            raise AssertionError(f"envelope violated: ratio {ratio.max():.6g} > 1")
        keep = x[rng.random(batch) < ratio]
        take = min(len(keep), need)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def worker_count() -> int:
    env = os.environ.get("FOCKTOMO_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def chunk_rng(seed: int, channel: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, channel, index])))


def sample_channel(rp: ReducedParams, which: int, count: int, seed: int,
                   phases=DEFAULT_PHASES) -> RecordSet:
    sched = phase_schedule(phases)
    env = envelope(rp, which)
    sizes = [min(CHUNK, count - start) for start in range(0, count, CHUNK)]

    def run(i):
        return sample_density(rp, which, sizes[i], chunk_rng(seed, which, i), env)

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        parts = list(pool.map(run, range(len(sizes))))
    x = np.concatenate(parts)
    theta = sched[np.arange(count) % len(sched)]
    return RecordSet(which, theta, x)


def sample(config: SimConfig) -> dict[int, RecordSet]:
    """Records for every configured channel, keyed by click number."""
    rp = config.reduced
    return {
        ch: sample_channel(rp, ch, n, config.seed, config.phases)
        for ch, n in sorted(config.counts.items())
    }
