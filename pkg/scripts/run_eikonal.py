#!/usr/bin/env python3
"""Surface-eikonal wavefront experiments.

Runs the unit-velocity convergence sweep (E2 of the wavefront at t = pi/2 for
five coupled schemes) and traces the two inhomogeneous velocity models,
writing CSV snapshots into results/.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from sphererk import eikonal
from sphererk.geometry import UnitVector3

XS = UnitVector3(1.0, 0.0, 0.0)


def convergence(out: Path, n_rays: int) -> None:
    model = eikonal.constant_model()
    tf = math.pi / 2
    lines = ["scheme,h,e2"]
    for scheme in ("sfe", "ptvdrk2", "stvdrk2", "ptvdrk3", "stvdrk3"):
        rows = []
        for n in (20, 40, 80, 160, 320):
            h = tf / n
            front = eikonal.trace_wavefront(model, XS, n_rays, h, tf, scheme=scheme)[-1]
            rows.append((h, eikonal.wavefront_E2(front, XS)))
            lines.append(f"{scheme},{h!r},{rows[-1][1]!r}")
        slope = np.polyfit(np.log([r[0] for r in rows]), np.log([r[1] for r in rows]), 1)[0]
        print(f"{scheme:9s} E2 slope {slope:.3f}")
    (out / "eikonal_convergence.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def gaussian_fronts(out: Path, n_rays: int) -> None:
    model = eikonal.gaussian_z_model()
    dt = math.pi / 5
    times = [k * dt for k in (1, 3, 5, 7, 9)]
    for scheme in ("stvdrk3", "tvdrk3"):
        fronts = eikonal.trace_wavefront(
            model, XS, n_rays, dt, 2 * math.pi, scheme=scheme, snapshot_times=times
        )
        eikonal.write_wavefronts_csv(out / f"eikonal_expz2_{scheme}.csv", fronts)
        drift = max(float(np.max(np.abs(np.linalg.norm(f.x, axis=1) - 1.0))) for f in fronts)
        print(f"expz2 {scheme:8s}: max |norm - 1| over snapshots = {drift:.2e}")


def harmonic_fronts(out: Path, n_rays: int) -> None:
    model = eikonal.y31_model()
    dt = math.pi / 100
    times = [k * dt for k in (75, 100, 125, 150, 175)]
    fronts = eikonal.trace_wavefront(
        model, XS, n_rays, dt, 1.75 * math.pi, scheme="stvdrk3", snapshot_times=times
    )
    eikonal.write_wavefronts_csv(out / "eikonal_y31_stvdrk3.csv", fronts)
    print(f"y31 stvdrk3: wrote {len(fronts)} snapshots")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--rays", type=int, default=512)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    convergence(out, args.rays)
    gaussian_fronts(out, args.rays)
    harmonic_fronts(out, args.rays)


if __name__ == "__main__":
    main()
