#!/usr/bin/env python3
"""Stability runs straddling the absolute-stability thresholds.

For the first/second-order schemes the boundary sits at h = 2; for the
third-order scheme at h = -mu* ~ 2.513.  Writes one distance-series CSV per
(scheme, h) pair into results/.
"""

import argparse
from pathlib import Path

from sphererk import harness

RUNS = [
    ("sfe", 1.99),
    ("sfe", 2.01),
    ("stvdrk2", 1.99),
    ("stvdrk2", 2.01),
    ("stvdrk3", 2.51),
    ("stvdrk3", 2.52),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--steps", type=int, default=500)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    mu, residual = harness.mu_star_residual()
    print(f"order-3 stability bound mu* = {mu:.12f} (cubic residual {residual:.1e})")
    for scheme, h in RUNS:
        run = harness.run_stability(scheme, h, n_steps=args.steps)
        path = out / f"stability_{scheme}_{h}.csv"
        harness.write_stability_csv(path, run)
        print(f"{scheme:9s} h={h}: {run.verdict:9s} final_distance={run.distances[-1]:.3e}")


if __name__ == "__main__":
    main()
