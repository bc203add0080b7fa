"""Empirical sup of |I_gamma'| / |Pi'| on the circle as N and s vary.

Uses scaled problems on exponential-family nodes (two zeros per dyadic
annulus) with targets s * g(z_n). The ratio should stay bounded in N.
"""

import argparse

from nevpick.nevanlinna import schur_parametrization
from nevpick.recipes import derivative_ratio, exponential_family_problem


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--s", type=float, nargs="+", default=[0.3, 0.5, 0.7])
    ap.add_argument("--grid", type=int, default=2**12)
    ap.add_argument("--gamma-count", type=int, default=32)
    args = ap.parse_args()

    print("N  " + "".join(f"{'s=' + format(s, 'g'):>12}" for s in args.s))
    for n in args.sizes:
        row = []
        for s in args.s:
            param = schur_parametrization(exponential_family_problem(n, s))
            row.append(derivative_ratio(param, args.grid, args.gamma_count))
        print(f"{n:<3}" + "".join(f"{v:12.4f}" for v in row))


if __name__ == "__main__":
    main()
