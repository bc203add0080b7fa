"""Run every verification recipe and print one line per check.

Reports are written to --out as report-NAME.json (plus timings sidecars),
the same files `nevpick verify all` produces.
"""

import argparse
from pathlib import Path

from nevpick import io
from nevpick.recipes import RECIPES, run_recipe


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=float, default=1.0)
    ap.add_argument("--out", default="out/acceptance")
    ap.add_argument("recipes", nargs="*", default=list(RECIPES))
    args = ap.parse_args()

    failed = 0
    for name in args.recipes:
        rep = run_recipe(name, seed=args.seed, budget=args.budget)
        io.write_json(Path(args.out) / f"report-{name}.json", rep.to_json())
        io.write_json(Path(args.out) / f"report-{name}.timings.json", rep.timings_json())
        for c in rep.checks:
            flag = "ok  " if c.passed else "FAIL"
            print(f"{flag} {name:15s} {c.name:32s} {c.measured:11.3e}  tol {c.tolerance:g}")
        print(f"     {name:15s} {rep.timings['total']:.2f}s")
        failed += len(rep.failing())
    print(f"{failed} failing checks")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
