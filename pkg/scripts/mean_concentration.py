#!/usr/bin/env python3
"""Tail probability of the measured mean vs the two failure-probability
variants (exponents -m t^2 and -m t^2 / 2).

Simulates the measure-and-average pipeline on a balanced two-outcome
measurement and compares the observed deviation rate Pr[|mu - p| >= t/2]
against both analytic curves across a range of repetition counts.
"""

import argparse
import math
import sys

import numpy as np

from qdpamp.bounds import mean_concentration_failure
from qdpamp.encodings import Dataset, EncodingSpec
from qdpamp.linalg import Povm
from qdpamp.mechanisms import NoiseSpec, RandomStream, measurement_mean


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ms", nargs="+", type=int, default=[25, 50, 100, 200])
    ap.add_argument("--t", type=float, default=0.3)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, required=True)
    args = ap.parse_args()

    x = Dataset(mode="amplitude", values=(1.0, 0.0))
    spec = EncodingSpec(kind="amplitude")
    povm = Povm((np.eye(2) / 2, np.eye(2) / 2), labels=(1, 0))
    master = RandomStream(args.seed)

    print(f"t={args.t}, trials per m: {args.trials}")
    print(f"{'m':>5} {'observed':>10} {'exp(-m t^2/2) x2':>17} {'exp(-m t^2) x2':>15}")
    stream_index = 0
    for m in args.ms:
        hits = 0
        for _ in range(args.trials):
            mu = measurement_mean(x, spec, povm, m, NoiseSpec("none"), master.substream(stream_index))
            stream_index += 1
            if abs(mu - 0.5) >= args.t / 2:
                hits += 1
        observed = hits / args.trials
        fp = mean_concentration_failure(m, args.t)
        print(
            f"{m:>5} {observed:>10.4f} {fp.hoeffding / 2:>17.6f} {fp.nominal / 2:>15.6f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
