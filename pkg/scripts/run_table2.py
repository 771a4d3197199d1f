#!/usr/bin/env python3
"""Reproduce the convergence-order table on the four-vortex flow.

Writes results/table2.csv (per-scheme error rows) and results/table2.json
(fitted orders), then prints a summary with the expected orders alongside.
"""

import argparse
from pathlib import Path

from sphererk import harness


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--h", default="0.1/2^0..5")
    args = ap.parse_args()

    from sphererk.cli import parse_h_spec

    h_list = parse_h_spec(args.h)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    rep = harness.verify_table2(h_list=h_list)
    reports = [rep.reports[name] for name in harness.EXPECTED_E2_ORDER]
    harness.write_convergence_csv(out / "table2.csv", reports)
    harness.write_orders_json(out / "table2.json", reports)

    print(f"{'scheme':10s} {'E2 order':>9s} {'expected':>9s} {'Enorm order':>12s}")
    for name, expected in harness.EXPECTED_E2_ORDER.items():
        r = rep.reports[name]
        enorm = "exact" if r.order_enorm is None else f"{r.order_enorm:.2f}"
        print(f"{name:10s} {r.order_e2:9.3f} {expected:9d} {enorm:>12s}")
    print("PASS" if rep.passed else f"FAIL: {rep.order_failures + rep.enorm_failures}")


if __name__ == "__main__":
    main()
