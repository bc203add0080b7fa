"""Verdict table for the zero-sum and annulus-count diagnostics.

Sweeps the power family over (p, alpha) and the exponential family over M,
printing the B_alpha verdict next to the analytic expectation p(1 - alpha) > 1.
"""

import argparse
import warnings

from nevpick.blaschke import generate_sequence
from nevpick.config import TOL
from nevpick.classes import exponential_report, h_alpha, weighted_zero_sum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=10_000)
    ap.add_argument("--log", action="store_true", help="use the |log(1 - |z|^2)| weighted sum")
    args = ap.parse_args()

    # depths n^-p below the representable margin get clipped (and the verdict
    # turns inconclusive), so each family is truncated before that point
    print(f"{'p':>5} {'alpha':>6} {'p(1-a)':>7} {'verdict':>13} {'fit exp':>8} {'r2':>6} {'N':>8}")
    for p in (1.5, 1.9, 2.5, 3.0, 4.0):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            seq = generate_sequence("power", min(args.count, int(TOL.clip_min ** (-1 / p))), p=p)
        for alpha in (0.25, 0.5, 0.75):
            r = weighted_zero_sum(seq, h_alpha(alpha), args.log)
            print(f"{p:5.2f} {alpha:6.2f} {p * (1 - alpha):7.3f} {r.verdict:>13} {r.exponent:8.3f} {r.r2:6.3f}"
                  f" {len(seq):8d}")

    print()
    print(f"{'family':>22} {'M':>3} {'trend':>10} {'slope':>7}")
    for kind, kw in (("exponential", {"M": 1}), ("exponential", {"M": 3}), ("power", {"p": 2.0}),
                     ("power", {"p": 3.0})):
        seq = generate_sequence(kind, 200 if kind == "power" else 14, **kw)
        r = exponential_report(seq)
        label = f"{kind} {kw}"
        print(f"{label:>22} {r.meta['M']:3d} {r.meta['trend']:>10} {r.exponent:7.3f}")


if __name__ == "__main__":
    main()
