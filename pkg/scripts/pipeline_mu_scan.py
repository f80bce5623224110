"""Sup-norm gap between the full click-conditioning derivation and the closed form, vs APD efficiency."""

import numpy as np

from focktomo import model, phase_space as ps
from focktomo.model import PhysicalParams

grid = np.linspace(-4, 4, 64)
X, P = np.meshgrid(grid, grid, indexing="ij")
R2 = X * X + P * P

print(f"{'mu':>8} {'sup|dW2|':>12} {'sup|dW1|':>12}")
for mu in (1e-5, 1e-4, 1e-3, 1e-2, 0.03, 0.06, 0.1, 0.2):
    p = PhysicalParams(mu=mu)
    rp = model.reduce(p)
    e2 = np.abs(ps.evaluate_radial(model.exact_pipeline(p).state, R2) - model.wigner_w2_radial(rp, R2)).max()
    e1 = np.abs(ps.evaluate_radial(model.exact_pipeline_single(p).state, R2)
                - model.wigner_w1_radial(rp, R2)).max()
    print(f"{mu:8.0e} {e2:12.3e} {e1:12.3e}")
