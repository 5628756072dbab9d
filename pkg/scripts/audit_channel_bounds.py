#!/usr/bin/env python3
"""Sweep the closed-form channel epsilon bounds against empirical audits.

For each bound family and each (parameters, tau) grid point, runs the
measurement-ratio audit and reports whether the closed form dominates the
measured epsilon. Violations are printed with their witness pair, so the
output doubles as a counterexample catalog for the unsound forms.
"""

import argparse
import json
import sys

import numpy as np

from qdpamp.audit import SearchSettings, audit_channel_qdp
from qdpamp.bounds import eps_depolarizing, eps_pad, eps_pad_dep, eps_unital_dobrushin
from qdpamp.channels import compose, depolarizing_channel, pad_channel


def jobs_for(family, params, taus):
    for tau in taus:
        if family == "depolarizing":
            for p in params:
                yield {"p": p}, depolarizing_channel(p), tau, eps_depolarizing(p, tau, 2)
        elif family == "pad":
            for p in params:
                for g in params:
                    for lam in params:
                        yield (
                            {"p": p, "gamma": g, "lambda": lam},
                            pad_channel(p, g, lam),
                            tau,
                            eps_pad(g, lam, tau),
                        )
        elif family == "unital-contraction":
            for p in params:
                yield {"p": p}, depolarizing_channel(p), tau, eps_unital_dobrushin(1 - p, tau)
        elif family == "pad-after-depolarizing":
            for p in params:
                for g in params:
                    for lam in params:
                        channel = compose(pad_channel(p, g, lam), depolarizing_channel(p))
                        yield (
                            {"p": p, "gamma": g, "lambda": lam},
                            channel,
                            tau,
                            eps_pad_dep(p, g, lam, tau),
                        )
        else:
            raise ValueError(f"unknown family {family}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--families",
        nargs="+",
        default=["depolarizing", "pad", "unital-contraction", "pad-after-depolarizing"],
    )
    ap.add_argument("--params", nargs="+", type=float, default=[0.1, 0.3, 0.5, 0.7, 0.9])
    ap.add_argument("--taus", nargs="+", type=float, default=[0.25, 0.5, 1.0])
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--json", action="store_true", help="emit a JSON document instead of text")
    args = ap.parse_args()

    settings = SearchSettings(seed=args.seed)
    summary = {}
    for family in args.families:
        total, violated, worst = 0, 0, None
        for params, channel, tau, bound in jobs_for(family, args.params, args.taus):
            rep = audit_channel_qdp(channel, tau, bound, settings)
            total += 1
            if not rep.satisfied:
                violated += 1
                excess = rep.eps_hat - bound
                if worst is None or excess > worst["excess"]:
                    worst = {
                        "params": params,
                        "tau": tau,
                        "eps_hat": rep.eps_hat,
                        "bound": bound,
                        "excess": excess,
                        "witness": rep.witness,
                    }
        summary[family] = {"audits": total, "violations": violated, "worst": worst}
        if not args.json:
            status = "sound on this grid" if violated == 0 else f"{violated}/{total} violations"
            print(f"{family:>28}: {status}")
            if worst is not None:
                print(
                    f"{'':28}  worst at params={worst['params']} tau={worst['tau']}: "
                    f"eps_hat={worst['eps_hat']:.4f} > bound={worst['bound']:.4f}"
                )
    if args.json:
        print(json.dumps(summary, indent=2, default=float))
    return 0


if __name__ == "__main__":
    sys.exit(main())
