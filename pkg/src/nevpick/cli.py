"""Command-line front end: solve, extremal, classify, verify, generate.

Exit codes: 0 success (including an infeasible problem with its verdict),
2 invalid input, 3 problem not strictly solvable, 4 a verification check failed.
"""

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import io
from .blaschke import BlaschkeProduct, generate_sequence
from .classes import (
    carleson_integral, exponential_report, h_alpha, hardy_derivative_norm, weak_h1_diagnostic,
    weighted_zero_sum,
)
from .config import BUDGET, TOL
from .errors import BadParams, NevpickError, NotStrictlySolvable, StepBlowup
from .nevanlinna import extremal_family, schur_parametrization, vertevorrat
from .pick import constant_problem, optimal_norm, random_nodes, scaled_problem, scaled_report
from .recipes import RECIPES, disc_samples, run_recipe

EXIT_OK, EXIT_INPUT, EXIT_NOT_SOLVABLE, EXIT_CHECK = 0, 2, 3, 4


@dataclass
class Scenario:
    """Run parameters; the optional --config file uses these field names."""

    seed: int = 0
    tol: float = TOL.pick
    out: str = "out"
    budget: float = 1.0
    alpha: float = 0.5
    gamma_count: int = 16
    grid: int = 2**9
    samples: int = 32
    log_weight: bool = False

    def validate(self):
        if not 0 < self.alpha < 1:
            raise BadParams("alpha must lie in (0, 1)")
        k = self.gamma_count
        if k < 1 or k & (k - 1):
            raise BadParams("gamma count must be a power of two")
        g = self.grid
        if g < 4 or g > 2**12 or g & (g - 1):
            raise BadParams("grid must be a power of two <= 4096")
        if not 0 < self.budget <= 16:
            raise BadParams("budget must lie in (0, 16]")
        if self.tol <= 0 or self.samples < 0:
            raise BadParams("tolerance must be positive and sample count nonnegative")


def _scenario(args):
    sc = Scenario()
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise io.InvalidInput(f"cannot read config: {exc}") from exc
        known = {f.name for f in fields(Scenario)}
        unknown = set(cfg) - known
        if unknown:
            raise io.InvalidInput(f"unknown config keys: {sorted(unknown)}")
        sc = Scenario(**cfg)
    for f in fields(Scenario):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(sc, f.name, v)
    sc.validate()
    return sc


def _emit(doc, out_path=None):
    text = io.dumps(doc)
    if out_path:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        Path(out_path).write_text(text)
    sys.stdout.write(text)


def _parametrization_summary(param, sc):
    rng = np.random.default_rng(sc.seed)
    z = disc_samples(200, rng)
    P, Q, R, S = param.coefficients(z)
    pi = param.product(z)
    det = float(np.max(np.abs(P * S - Q * R - pi) / np.maximum(np.abs(pi), 1e-300)))
    s0 = abs(complex(param.coefficients(np.array(0j)).S))
    dom = float(np.min(np.abs(R) - np.maximum.reduce([np.abs(P), np.abs(Q), np.abs(S), np.ones(z.shape)])))
    return {"steps": len(param), "normalization": param.normalization_record,
            "residuals": {"determinant": det, "S0": s0, "dominance_margin": dom}}


def cmd_solve(args):
    sc = _scenario(args)
    p = io.load_problem(args.problem)
    report = scaled_report(p, sc.tol)
    doc = {"schema": io.SCHEMA_VERSION, "feasibility": report.to_json()}
    code = EXIT_OK
    if report.solvable == "yes":
        try:
            doc["parametrization"] = _parametrization_summary(schur_parametrization(p, sc.tol), sc)
        except StepBlowup as exc:
            doc["error"] = str(exc)
            code = EXIT_NOT_SOLVABLE
    elif report.solvable == "marginal":
        doc["error"] = "Pick matrix singular within tolerance: not strictly solvable"
        code = EXIT_NOT_SOLVABLE
    _emit(doc, Path(sc.out) / "solve.json" if args.out else None)
    return code


def cmd_extremal(args):
    sc = _scenario(args)
    p = io.load_problem(args.problem)
    param = schur_parametrization(p, sc.tol)
    rng = np.random.default_rng(sc.seed)
    n = sc.samples
    z = np.concatenate([disc_samples(n, rng, 0.99), np.exp(2j * np.pi * np.arange(n) / max(n, 1))])
    gam = 2 * np.pi * np.arange(sc.gamma_count) / sc.gamma_count
    vals = extremal_family(param, gam, z)
    c, rho = vertevorrat(param, z)
    rows = []
    for k, g in enumerate(gam):
        v = vals[k]
        res = np.abs(np.abs(v - c) - rho)
        rows += [(zz.real, zz.imag, g, vv.real, vv.imag, abs(vv), rr) for zz, vv, rr in zip(z, v, res)]
    out = Path(sc.out)
    io.write_csv(out / "extremal.csv", io.EXTREMAL_FIELDS, rows)
    io.write_csv(out / "vertevorrat.csv", io.VERTEVORRAT_FIELDS,
                 [(zz.real, zz.imag, cc.real, cc.imag, r) for zz, cc, r in zip(z, c, rho)])
    boundary = np.abs(z) == 1
    _emit({"schema": io.SCHEMA_VERSION, "files": [str(out / "extremal.csv"), str(out / "vertevorrat.csv")],
           "max_boundary_modulus_error": float(np.max(np.abs(np.abs(vals[:, boundary]) - 1))) if boundary.any() else 0.0,
           "max_circle_residual": float(np.max(np.abs(np.abs(vals - c) - rho)))})
    return EXIT_OK


def _zeros_from_args(args):
    if args.zeros:
        return io.load_zeros(args.zeros)
    if not args.generator:
        raise io.InvalidInput("give --zeros FILE or --generator KIND")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return generate_sequence(args.generator, args.count, M=args.M, p=args.p, angle=args.angle, seed=args.seed)


CLASSES = ("exponential", "B_alpha", "integral", "hardy", "weak_h1")


def cmd_classify(args):
    sc = _scenario(args)
    seq = _zeros_from_args(args)
    if len(seq) == 0:
        raise io.InvalidInput("empty zero sequence")
    wanted = CLASSES if args.cls == "all" else (args.cls,)
    reports = []
    for cls in wanted:
        if cls == "exponential":
            reports.append(exponential_report(seq))
        elif cls == "B_alpha":
            reports.append(weighted_zero_sum(seq, h_alpha(sc.alpha), sc.log_weight))
        elif cls == "integral":
            reports.append(carleson_integral(BlaschkeProduct(seq), alpha=sc.alpha, log_weight=sc.log_weight,
                                             tol=max(sc.tol, 1e-6)))
        elif cls == "hardy":
            reports.append(hardy_derivative_norm(BlaschkeProduct(seq), sc.alpha))
        elif cls == "weak_h1":
            reports.append(weak_h1_diagnostic(BlaschkeProduct(seq), n_angles=int(BUDGET.boundary_samples * sc.budget)))
    doc = {"schema": io.SCHEMA_VERSION, "reports": [r.to_json() for r in reports]}
    for r, d in zip(reports, doc["reports"]):
        if r.class_name == "exponential":
            d["M"] = r.meta["M"]
    _emit(doc, Path(sc.out) / "classify.json" if args.out else None)
    return EXIT_OK


def cmd_verify(args):
    sc = _scenario(args)
    kw = {}
    if args.gamma_count is not None:
        kw["gamma_count"] = sc.gamma_count
    if args.grid is not None:
        kw["grid"] = sc.grid
    if args.alpha is not None:
        kw["alpha"] = sc.alpha
    names = list(RECIPES) if args.recipe == "all" else [args.recipe]
    failed = []
    docs = []
    for name in names:
        rep = run_recipe(name, seed=sc.seed, budget=sc.budget, **kw)
        out = Path(sc.out) / f"report-{name}.json"
        rep.artifacts.append(str(out))
        io.write_json(out, rep.to_json())
        io.write_json(Path(sc.out) / f"report-{name}.timings.json", rep.timings_json())
        docs.append(rep.to_json())
        for c in rep.failing():
            failed.append(f"{name}: {c.name} [{c.anchor}] measured {c.measured:.3g} vs {c.tolerance:g}")
    _emit({"schema": io.SCHEMA_VERSION, "reports": docs})
    if failed:
        for f in failed:
            print(f"FAILED {f}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_generate(args):
    sc = _scenario(args)
    kind = args.kind
    out = Path(args.file) if args.file else Path(sc.out) / f"{kind}.json"
    if kind in ("exponential", "power"):
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            seq = generate_sequence(kind, args.count, M=args.M, p=args.p, angle=args.angle, seed=sc.seed)
        io.save_zeros(out, seq)
        doc = io.zeros_to_json(seq)
    else:
        rng = np.random.default_rng(sc.seed)
        nodes = random_nodes(args.count, rng, rmax=0.95, min_sep=0.3)
        if kind == "scaled-problem":
            if not 0 < args.s < 1:
                raise BadParams("s must lie in (0, 1)")
            p = scaled_problem(nodes, args.s, meta={"seed": sc.seed})
        elif kind == "constant-problem":
            p = constant_problem(nodes, complex(args.w))
            p.meta["seed"] = sc.seed
        else:
            raise BadParams(f"unknown kind {kind!r}")
        io.save_problem(out, p)
        doc = io.problem_to_json(p)
        if kind == "scaled-problem":
            doc["optimal_norm"] = optimal_norm(p)
    doc["file"] = str(out)
    _emit(doc)
    return EXIT_OK


def _common(sp):
    sp.add_argument("--seed", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--out")
    sp.add_argument("--budget", type=float, help="scale factor on sample counts (1 = acceptance size)")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--gamma-count", dest="gamma_count", type=int)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--config", help="JSON file with Scenario fields")


def _generator_args(sp):
    sp.add_argument("--count", type=int, default=12)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--angle", default="fixed", choices=("fixed", "equidistributed", "random"))


def build_parser():
    ap = argparse.ArgumentParser(prog="nevpick", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="feasibility and parametrization summary")
    sp.add_argument("problem")
    _common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("extremal", help="CSV dumps of extremal solutions and value discs")
    sp.add_argument("problem")
    sp.add_argument("--samples", type=int)
    _common(sp)
    sp.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("classify", help="class diagnostics for a zero sequence")
    sp.add_argument("--zeros")
    sp.add_argument("--generator", choices=("exponential", "power"))
    _generator_args(sp)
    sp.add_argument("--class", dest="cls", default="all", choices=CLASSES + ("all",))
    sp.add_argument("--log", dest="log_weight", action="store_true", default=None)
    _common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="run a verification recipe and write a RunReport")
    sp.add_argument("recipe", choices=sorted(RECIPES) + ["all"])
    _common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("generate", help="write a zero sequence or problem file")
    sp.add_argument("kind", choices=("exponential", "power", "scaled-problem", "constant-problem"))
    sp.add_argument("--file")
    sp.add_argument("--s", type=float, default=0.5)
    sp.add_argument("--w", type=complex, default=0.3)
    _generator_args(sp)
    _common(sp)
    sp.set_defaults(func=cmd_generate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotStrictlySolvable, StepBlowup) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_SOLVABLE
    except (ValueError, NevpickError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
