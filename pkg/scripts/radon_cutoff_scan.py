"""Bias and spread of filtered back-projection critical values vs the ramp cutoff.

Bias comes from a noise-free tabulated histogram, spread from repeated simulations.
"""

import numpy as np

from focktomo import model, tomography as tm
from focktomo.homodyne import sample_channel
from focktomo.model import PhysicalParams

REPS = 20
rp = model.reduce(PhysicalParams())
counts = {1: 180_000, 2: 105_000}

print(f"{'ch':>3} {'cutoff':>7} {'bias W(0)':>10} {'sd W(0)':>9} {'bias min':>9} {'sd min':>8}")
for ch in (1, 2):
    truth = tm.critical_values(rp, ch)
    sims = [sample_channel(rp, ch, counts[ch], seed=100 + i) for i in range(REPS)]
    half = tm.default_range(sims[0].x)
    clean = tm.tabulated_histogram(model.quad_density(rp, ch), 12, half)
    for kc in (4.0, 5.0, 6.0, 8.0, 10.0):
        b = tm.critical_values(tm.radon_reconstruct(clean, cutoff=kc), radial=True)
        runs = [tm.critical_values(tm.radon_reconstruct(tm.histogram(s), cutoff=kc), radial=True)
                for s in sims]
        w0 = np.array([r.w_origin for r in runs])
        mn = np.array([r.min_w for r in runs])
        print(f"{ch:3d} {kc:7.1f} {b.w_origin - truth.w_origin:10.4f} {w0.std():9.4f} "
              f"{b.min_w - truth.min_w:9.4f} {mn.std():8.4f}")
