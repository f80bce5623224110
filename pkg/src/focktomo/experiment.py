"""Simulate / reconstruct / report pipeline on a run directory."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from . import io, tomography as tm
from .config import RunConfig
from .homodyne import sample
from .model import ReducedParams, reduce

log = logging.getLogger(__name__)

CONDITIONED = (1, 2)
IDEAL = ReducedParams(1.0, 2.0)


def samples_path(out: Path, channel: int) -> Path:
    return out / f"samples_n{channel}.csv"


def simulate(cfg: RunConfig) -> dict[int, Path]:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    records = sample(cfg.sim)
    paths = {}
    for ch, rs in records.items():
        paths[ch] = samples_path(out, ch)
        io.write_samples(paths[ch], rs)
    rp = cfg.sim.reduced
    manifest = {
        "seed": cfg.seed,
        "phases": cfg.phases,
        **{f"count.n{ch}": len(rs) for ch, rs in records.items()},
        **{f"param.{k}": getattr(cfg.physical, k) for k in ("g", "gamma", "xi", "eta", "e", "mu")},
        "reduced.sigma2": rp.sigma2,
        "reduced.delta": rp.delta,
    }
    io.write_keyvalue(out / "manifest.txt", manifest)
    return paths


def _methods(cfg: RunConfig):
    return ("moments", "radon", "maxlik") if cfg.method == "all" else (cfg.method,)


def _crit(prefix, cv: tm.CriticalValues):
    return {f"{prefix}.min_W": cv.min_w, f"{prefix}.W_origin": cv.w_origin}


def reconstruct(cfg: RunConfig, samples: dict[int, Path] | None = None) -> dict:
    """Run the selected reconstruction methods on the conditioned channels."""
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    if samples is None:
        samples = {ch: samples_path(out, ch) for ch in CONDITIONED if samples_path(out, ch).exists()}
    if not samples:
        raise FileNotFoundError(f"no samples_n1.csv / samples_n2.csv in {out}")
    records = {ch: io.read_samples(path) for ch, path in samples.items()}
    summary: dict = {"method": cfg.method}
    for ch, rs in sorted(records.items()):
        if ch not in CONDITIONED:
            continue
        tag = f"n{ch}"
        summary[f"records.{tag}"] = len(rs)
        for method in _methods(cfg):
            if method == "moments":
                est = tm.moment_estimate(rs, ch)
                io.write_keyvalue(out / f"params_moments_{tag}.txt",
                                  {"sigma2": est.params.sigma2, "delta": est.params.delta})
                summary.update({f"moments.{tag}.sigma2": est.params.sigma2,
                                f"moments.{tag}.delta": est.params.delta,
                                f"moments.{tag}.m2": est.m2, f"moments.{tag}.m4": est.m4})
            elif method == "radon":
                hist = tm.histogram(rs, n_bins=cfg.bins)
                grid = tm.radon_reconstruct(hist, cutoff=cfg.radon_cutoff, grid_size=cfg.grid)
                io.write_grid(out / f"wigner_radon_{tag}.csv", grid)
                summary.update(_crit(f"radon.{tag}", tm.critical_values(grid, radial=True)))
                summary[f"radon.{tag}.min_W_pixel"] = tm.critical_values(grid).min_w
                summary[f"radon.{tag}.clipped"] = hist.clipped
            elif method == "maxlik":
                est = tm.maxlik_reconstruct(rs, eta=cfg.eta, n_max=cfg.maxlik_nmax,
                                            iterations=cfg.maxlik_iterations, tol=cfg.maxlik_tol)
                io.write_diagonal(out / f"density_maxlik_{tag}.csv", est.diagonal)
                summary.update(_crit(f"maxlik.{tag}", tm.critical_values(est)))
                ll = np.array(est.loglik)
                summary[f"maxlik.{tag}.iterations"] = est.iterations
                summary[f"maxlik.{tag}.converged"] = est.converged
                summary[f"maxlik.{tag}.loglik_monotone"] = bool(np.all(np.diff(ll) >= -1e-12 * abs(ll[0])))
    io.write_keyvalue(out / "reconstruct_summary.txt", summary)
    if cfg.method == "all":
        report(cfg)
    return summary


def _table_rows(prefix: str, w1: tm.CriticalValues | None, w2: tm.CriticalValues | None) -> dict:
    rows = {}
    if w2 is not None:
        rows[f"{prefix}.min_W2"] = w2.min_w
        rows[f"{prefix}.W2_origin"] = w2.w_origin
    if w1 is not None:
        rows[f"{prefix}.min_W1"] = w1.min_w
        rows[f"{prefix}.W1_origin"] = w1.w_origin
    return rows


def _f4(value: float) -> str:
    return f"{value:.4f}"


def report(cfg: RunConfig) -> dict:
    """Critical-value summary: raw (Radon), corrected (MaxLik), ideal and model rows."""
    out = cfg.out_dir
    path = out / "reconstruct_summary.txt"
    if not path.exists():
        raise FileNotFoundError(f"missing {path}; run 'reconstruct' first")
    s = io.read_keyvalue(path)

    def cv(prefix):
        key = f"{prefix}.min_W"
        if key not in s:
            return None
        return tm.CriticalValues(float(s[key]), float(s[f"{prefix}.W_origin"]))

    table = {}
    table.update(_table_rows("raw", cv("radon.n1"), cv("radon.n2")))
    table.update(_table_rows("corrected", cv("maxlik.n1"), cv("maxlik.n2")))
    table.update(_table_rows("ideal", tm.critical_values(IDEAL, 1), tm.critical_values(IDEAL, 2)))
    raw_model = reduce(cfg.physical)
    cor_model = reduce(cfg.physical.corrected())
    table.update(_table_rows("model_raw", tm.critical_values(raw_model, 1),
                             tm.critical_values(raw_model, 2)))
    table.update(_table_rows("model_corrected", tm.critical_values(cor_model, 1),
                             tm.critical_values(cor_model, 2)))
    rep: dict = {k: _f4(v) for k, v in table.items()}
    rep["model_raw.sigma2"] = raw_model.sigma2
    rep["model_raw.delta"] = raw_model.delta
    rep["model_corrected.sigma2"] = cor_model.sigma2
    rep["model_corrected.delta"] = cor_model.delta
    for ch in CONDITIONED:
        for q in ("sigma2", "delta"):
            key = f"moments.n{ch}.{q}"
            if key in s:
                rep[key] = float(s[key])
    if "moments.n1.delta" in s and "moments.n2.delta" in s:
        d1, d2 = float(s["moments.n1.delta"]), float(s["moments.n2.delta"])
        s1, s2 = float(s["moments.n1.sigma2"]), float(s["moments.n2.sigma2"])
        rep["delta_mismatch_percent"] = 100 * abs(d1 - d2) / (0.5 * (d1 + d2))
        rep["sigma2_mismatch_percent"] = 100 * abs(s1 - s2) / (0.5 * (s1 + s2))
    for key in sorted(s):
        if key.startswith("maxlik.") and key.endswith((".converged", ".loglik_monotone")):
            rep[key] = s[key]
    io.write_keyvalue(out / "report.txt", rep)
    return rep
