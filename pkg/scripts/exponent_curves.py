#!/usr/bin/env python3
"""Emit plot-ready CSVs of the three error exponents along each parameter.

Produces four files in --out-dir:
  exponents_vs_alpha.csv  (fixed beta, snr; alpha on a dense grid)
  exponents_vs_beta.csv   (fixed alpha, snr)
  exponents_vs_snr.csv    (fixed alpha, beta; log-spaced snr)
  exponents_vs_eps.csv    (coupled axis alpha = eps, beta = 1 + eps)

Pure formula evaluation; nothing is simulated.
"""

import argparse
import csv
import os

import numpy as np

from compdet import theory


def write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--beta", type=float, default=2.0)
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--snr", type=float, default=4.0)
    parser.add_argument("--points", type=int, default=200)
    parser.add_argument("--out-dir", default="out")
    args = parser.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    header = ["axis_value", "exponent_mf", "exponent_ml", "exponent_mrdd"]

    alphas = np.linspace(0.01, 1.0, args.points)
    write_rows(
        os.path.join(args.out_dir, "exponents_vs_alpha.csv"),
        header,
        [
            [a, theory.exponent_mf(args.beta, args.snr),
             theory.exponent_ml(args.beta, a, args.snr),
             theory.exponent_mrdd(args.beta, a, args.snr)]
            for a in alphas
        ],
    )

    betas = np.linspace(1.0, 4.0, args.points)
    write_rows(
        os.path.join(args.out_dir, "exponents_vs_beta.csv"),
        header,
        [
            [b, theory.exponent_mf(b, args.snr),
             theory.exponent_ml(b, args.alpha, args.snr),
             theory.exponent_mrdd(b, args.alpha, args.snr)]
            for b in betas
        ],
    )

    snrs = np.geomspace(1e-2, 1e2, args.points)
    write_rows(
        os.path.join(args.out_dir, "exponents_vs_snr.csv"),
        header,
        [
            [s, theory.exponent_mf(args.beta, s),
             theory.exponent_ml(args.beta, args.alpha, s),
             theory.exponent_mrdd(args.beta, args.alpha, s)]
            for s in snrs
        ],
    )

    eps = np.linspace(0.01, 1.0, args.points)
    write_rows(
        os.path.join(args.out_dir, "exponents_vs_eps.csv"),
        header,
        [
            [e, theory.exponent_mf(1 + e, args.snr),
             theory.exponent_ml(1 + e, e, args.snr),
             theory.exponent_mrdd(1 + e, e, args.snr)]
            for e in eps
        ],
    )


if __name__ == "__main__":
    main()
