#!/usr/bin/env python3
"""Deficit-vs-distance scaling of the 1-D midpoint construction.

The asymmetric family multiplies a Gaussian by (1 + delta sign x); its
minimal midpoint has a positive deficit and the fitted L1 stability
distance should stay below a bounded multiple of the error law
omega(eps) = eps^(1/3) |ln eps|^(4/3).
"""

import argparse

import numpy as np

from stabgeo.experiments import ExperimentConfig, run_pl_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=("asymmetric", "shift"), default="asymmetric")
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--delta-min", type=float, default=1e-3)
    ap.add_argument("--delta-max", type=float, default=1e-1)
    ap.add_argument("--out", default="pl_scaling.csv")
    args = ap.parse_args()

    cfg = ExperimentConfig(
        experiment="pl-scan", dim=3, family=args.family,
        grid=tuple(np.geomspace(args.delta_min, args.delta_max, args.points)),
        output_path=args.out,
    )
    fit, rows = run_pl_scan(cfg)
    ratios = [r[4] for r in rows]
    slope = "n/a" if fit is None else f"{fit.slope:.4f}"
    print(f"family={args.family} rows={len(rows)} slope(l1 vs eps)={slope} "
          f"max l1/omega={max(ratios):.4g} -> {args.out}")


if __name__ == "__main__":
    main()
