"""Critical values of the Wigner functions: model rows plus a simulated run.

usage: python scripts/critical_values_table.py [--out DIR] [--seed N]
"""

import argparse

from focktomo import experiment
from focktomo.config import load_config


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="critical_values_run")
    ap.add_argument("--seed", type=int, default=2006)
    args = ap.parse_args()

    cfg = load_config(overrides={"out": args.out, "seed": args.seed, "method": "all"})
    experiment.simulate(cfg)
    experiment.reconstruct(cfg)
    rep = experiment.report(cfg)

    cols = ("min_W2", "W2_origin", "min_W1", "W1_origin")
    print(f"{'row':<16}" + "".join(f"{c:>11}" for c in cols))
    for row in ("raw", "model_raw", "corrected", "model_corrected", "ideal"):
        print(f"{row:<16}" + "".join(f"{rep[f'{row}.{c}']:>11}" for c in cols))
    for ch in (1, 2):
        print(f"moments n{ch}: sigma2={rep[f'moments.n{ch}.sigma2']:.4f} "
              f"delta={rep[f'moments.n{ch}.delta']:.4f}")
    print(f"delta mismatch: {rep['delta_mismatch_percent']:.2f} %")


if __name__ == "__main__":
    main()
