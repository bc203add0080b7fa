"""Level contour {|B| = eps} of an exponential Blaschke product.

Writes the polylines as CSV (component, x, y) for plotting, and prints the
Carleson-box norm history across dyadic levels.
"""

import argparse
from pathlib import Path

from nevpick import io
from nevpick.blaschke import BlaschkeProduct, generate_sequence
from nevpick.contour import carleson_norm, level_contour


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--M", type=int, default=1)
    ap.add_argument("--eps", type=float, default=0.3)
    ap.add_argument("--grid", type=int, default=2**9)
    ap.add_argument("--out", default="out/contour")
    args = ap.parse_args()

    seq = generate_sequence("exponential", args.count, M=args.M, angle="equidistributed")
    est = level_contour(BlaschkeProduct(seq), args.eps, args.grid, require_enclosed=False)
    path = Path(args.out) / "contour.csv"
    io.write_csv(path, io.CONTOUR_FIELDS, io.contour_rows(est))
    print(f"{len(est.polylines)} components, length {est.length:.6f}, "
          f"{int(est.enclosed.sum())}/{len(seq)} zeros enclosed -> {path}")
    _, hist = carleson_norm(est, 10, return_history=True)
    for level, value in enumerate(hist):
        print(f"level {level:2d}  box norm so far {value:.6f}")


if __name__ == "__main__":
    main()
