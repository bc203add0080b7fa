"""Numerical membership diagnostics for classes of Blaschke products.

Membership in a class defined by tail behaviour cannot be decided from finite
data. Every diagnostic therefore reports partial values along a refinement
schedule and a trend verdict: "finite", "divergent" or "inconclusive".
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .blaschke import BlaschkeProduct, ZeroSequence
from .disc import annulus_indices
from .errors import BadWeight, GridTooCoarse, ResolutionExceeded
from .quadrature import QuadratureSpec, RadialWeight, alpha_weight, circle_integral, disc_integral

R2_THRESHOLD = 0.9


@dataclass
class ClassReport:
    class_name: str
    params: dict
    partials: list
    verdict: str
    exponent: float = float("nan")
    r2: float = float("nan")
    error_estimate: float = float("nan")
    value: float = float("nan")
    meta: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "class": self.class_name,
            "params": self.params,
            "partials": self.partials,
            "verdict": self.verdict,
            "fit": {"exponent": self.exponent, "r2": self.r2},
            "error_estimate": self.error_estimate,
        }


def fit_line(x, y):
    """Least-squares slope and R^2 of y against x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return float("nan"), float("nan")
    slope, icept = np.polyfit(x, y, 1)
    ss_res = np.sum((y - (slope * x + icept)) ** 2)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(r2)


class WeightFunction:
    """A weight h on [0, 1], given through c = 1 - t for precision near t = 1.

    `hc(c)` is h(1 - c); optional `dhc`, `d2hc` are its derivatives in c.
    Derivatives in t follow as h'(t) = -dhc(c) and h''(t) = d2hc(c); missing
    ones fall back to central differences.
    """

    def __init__(self, name, hc, dhc=None, d2hc=None, validate=True):
        self.name = name
        self.hc = hc
        self._dhc = dhc
        self._d2hc = d2hc
        if validate:
            self.validate()

    def dhc(self, c):
        if self._dhc is not None:
            return self._dhc(c)
        step = 1e-6 * np.maximum(c, 1e-8)
        return (self.hc(c + step) - self.hc(c - step)) / (2 * step)

    def d2hc(self, c):
        if self._d2hc is not None:
            return self._d2hc(c)
        step = 1e-4 * np.maximum(c, 1e-6)
        return (self.hc(c + step) - 2 * self.hc(c) + self.hc(c - step)) / step**2

    def h(self, t):
        return self.hc(1.0 - np.asarray(t, dtype=float))

    def h1(self, t):
        return -self.dhc(1.0 - np.asarray(t, dtype=float))

    def h2(self, t):
        return self.d2hc(1.0 - np.asarray(t, dtype=float))

    def tail_ratio(self, kmax=40):
        c = 2.0 ** -np.arange(10, kmax + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(self.dhc(c) / self.d2hc(c))
        return float(np.max(np.where(np.isnan(ratio), np.inf, ratio)))

    def validate(self):
        c = np.linspace(1e-9, 1.0, 1000)
        if np.any(self.dhc(c) < -1e-10):
            raise BadWeight(f"{self.name}: h must be nonincreasing")
        if np.any(self.d2hc(c) > 1e-10):
            raise BadWeight(f"{self.name}: h must be concave")
        if abs(self.hc(0.0)) > 1e-12:
            raise BadWeight(f"{self.name}: h(1) must vanish")
        if not self.tail_ratio() < 1:
            raise BadWeight(f"{self.name}: limsup |h'/h''| must be < 1")

    def singular_exponent(self):
        """p with |h''(t)| ~ (1-t)^(-p) as t -> 1, from a log-log slope."""
        c = np.array([1e-9, 1e-8])
        v = np.abs(self.d2hc(c))
        return round(float(-(np.log(v[1]) - np.log(v[0])) / (np.log(c[1]) - np.log(c[0]))), 6)

    def radial_weight(self, log=False):
        """|h''(|z|^2)| (times |log(1-|z|^2)|) as a function of s = 1 - |z|."""
        def fn(s):
            c = s * (2.0 - s)
            w = np.abs(self.d2hc(c))
            return w * np.abs(np.log(c)) if log else w

        return RadialWeight(fn, self.singular_exponent(), log, f"|h''| {self.name}" + (" log" if log else ""))


def h_alpha(alpha):
    """h(t) = (1 - t)^(1 - alpha); the B_h class for this h is B_alpha."""
    if not 0 < alpha < 1:
        raise BadWeight("alpha must lie in (0, 1)")
    return WeightFunction(
        f"h_alpha({alpha:g})",
        lambda c: np.asarray(c, dtype=float) ** (1 - alpha),
        lambda c: (1 - alpha) * np.asarray(c, dtype=float) ** (-alpha),
        lambda c: -alpha * (1 - alpha) * np.asarray(c, dtype=float) ** (-1 - alpha),
    )


def _doubling_schedule(n):
    sched = [1]
    while sched[-1] * 2 <= n:
        sched.append(sched[-1] * 2)
    if sched[-1] != n:
        sched.append(n)
    return sched


def _sum_verdict(terms, sched, partial, tail_tol=0.25):
    """Trend verdict for a series of positive terms.

    The terms over the last half of the indices are fitted as t_n ~ n^(-q).
    q >= 1.1 means convergence, provided the tail estimate t_N N / (q - 1) is
    (or its geometric analogue when q steepens along the sequence) is within
    `tail_tol` of the partial sum. q <= 1.02 together with a good
    power-law growth fit of the partial sums means divergence.
    Geometric decay shows up as a large q.
    """
    n = terms.size
    exponent, r2 = fit_line(np.log(sched[1:]), np.log(partial[1:])) if len(sched) >= 3 else (float("nan"), float("nan"))
    if n < 8:
        return "finite", exponent, r2, 0.0
    idx = np.arange(n // 2, n) + 1.0
    t = terms[n // 2:]
    if np.any(t <= 0):
        return "inconclusive", exponent, r2, float("nan")
    q = -fit_line(np.log(idx), np.log(t))[0]
    if q >= 1.1:
        tail = terms[-1] * n / (q - 1)
        early = slice(n // 4, n // 2)
        q_early = -fit_line(np.log(np.arange(n)[early] + 1.0), np.log(terms[early]))[0]
        kappa = -fit_line(idx, np.log(t))[0]
        if kappa > 0 and q > 1.5 * q_early:
            # the log-log slope keeps steepening: geometric decay
            rho = math.exp(-kappa)
            tail = terms[-1] * rho / (1 - rho)
        rel = tail / partial[-1]
        return ("finite" if rel <= tail_tol else "inconclusive"), exponent, r2, float(rel)
    if q <= 1.02 and exponent > 0 and r2 >= R2_THRESHOLD:
        return "divergent", exponent, r2, float("inf")
    return "inconclusive", exponent, r2, float("nan")


def weighted_zero_sum(seq, h, log_weight=False):
    """Partial sums of h(|z_n|^2) (times |log(1 - |z_n|^2)|) along a doubling schedule."""
    if len(seq) == 0:
        raise ValueError("empty zero sequence")
    if not isinstance(h, WeightFunction):
        raise BadWeight("h must be a WeightFunction")
    a = np.abs(seq.array)
    c = (1 - a) * (1 + a)
    terms = h.hc(c)
    if log_weight:
        terms = terms * np.abs(np.log(np.where(c > 0, c, 1.0)))
    partial_all = np.cumsum(terms)
    sched = _doubling_schedule(len(seq))
    partial = [float(partial_all[n - 1]) for n in sched]
    verdict, exponent, r2, err = _sum_verdict(terms, np.array(sched, dtype=float), np.array(partial))
    if seq.generator.get("clipped"):
        # clipped depths no longer follow the generator law, so the tail says nothing
        verdict = "inconclusive"
    return ClassReport(
        "B_h" if not h.name.startswith("h_alpha") else "B_alpha",
        {"h": h.name, "log_weight": bool(log_weight), "N": len(seq), **{k: v for k, v in seq.generator.items() if k != "warning"}},
        [[n, s] for n, s in zip(sched, partial)],
        verdict, exponent, r2, err, partial[-1],
    )


def exponential_bound(seq):
    """(M, counts): the largest number of zeros in one dyadic annulus j >= 1."""
    idx = annulus_indices(seq.array) if len(seq) else np.array([], dtype=int)
    counts = {}
    for j in idx.tolist():
        counts[j] = counts.get(j, 0) + 1
    ring = [v for j, v in counts.items() if j >= 1]
    return (max(ring) if ring else 0), dict(sorted(counts.items()))


def exponential_report(seq):
    M, counts = exponential_bound(seq)
    # the deepest occupied annulus is only partly filled by a truncated sequence
    js = [j for j in counts if j >= 1][:-1]
    slope, r2 = fit_line(js, np.log2([counts[j] for j in js])) if len(js) >= 3 else (float("nan"), float("nan"))
    growing = slope > 0.1 and r2 >= R2_THRESHOLD
    return ClassReport(
        "exponential", {"N": len(seq)}, [[j, counts[j]] for j in counts],
        "divergent" if growing else "finite", slope, r2, value=float(M),
        meta={"M": M, "trend": "unbounded" if growing else "bounded"},
    )


def _derivative_of(f):
    if hasattr(f, "derivative"):
        return f.derivative
    raise TypeError("evaluator must provide .derivative(z)")


def hardy_derivative_norm(f, alpha, kmax=20, tol=1e-4, cap=2**20, radii=None):
    """Circle averages V_k of |f'(r_k e^{it})|^alpha, r_k = 1 - 2^-k.

    The angular resolution doubles until two refinements agree to `tol`.
    Means of |f'|^alpha increase with r, so the norm is the last value once
    the sequence has stabilized.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    df = _derivative_of(f)
    radii = np.asarray(radii if radii is not None else 1 - 2.0 ** -np.arange(1, kmax + 1))
    values = []
    verdict = None
    for r in radii:
        start = 64
        while start < 4 / (1 - r) and start < cap:
            start *= 2
        start = min(start, cap // 2)
        try:
            v, _ = circle_integral(lambda th: np.abs(df(r * np.exp(1j * th))) ** alpha,
                                   n=start, refine=True, tol=tol, cap=cap)
        except ResolutionExceeded:
            verdict = "inconclusive"
            break
        values.append(float(v))
    partials = [[float(r), v] for r, v in zip(radii, values)]
    k = np.arange(1, len(values) + 1)
    exponent, r2 = fit_line(k[len(k) // 2:], np.log(values[len(values) // 2:])) if len(values) >= 4 else (float("nan"), float("nan"))
    err = float("nan")
    if verdict is None:
        rel = np.abs(np.diff(values[-4:])) / np.abs(values[-1]) if len(values) >= 4 else np.array([np.inf])
        err = float(rel[-1]) if rel.size else float("nan")
        if len(values) and np.all(rel <= 1e-3):
            verdict = "finite"
        elif exponent > 0.05 and r2 >= R2_THRESHOLD:
            verdict = "divergent"
        else:
            verdict = "inconclusive"
    return ClassReport("H_alpha_derivative", {"alpha": alpha, "kmax": int(len(radii))}, partials,
                       verdict, exponent, r2, err, max(values) if values else float("nan"))


def cone_points(n_angles, aperture=math.pi / 4, radial=32, angular=9, t_min=2.0**-20, t_max=0.5):
    """Sample points of truncated nontangential cones at n_angles boundary points.

    Returns (theta, z) with z of shape (n_angles, 1 + radial * angular); column 0
    is the boundary point itself.
    """
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    t = np.geomspace(t_min, t_max, radial)
    psi = np.linspace(-aperture / 2, aperture / 2, angular)
    offs = (t[:, None] * np.exp(1j * psi[None, :])).ravel()
    rel = np.concatenate([[0.0], offs])
    z = np.exp(1j * theta)[:, None] * (1 - rel[None, :])
    return theta, z


def maximal_function(dfun, n_angles=2**12, **cone):
    """Discrete nontangential maximal function of |dfun| at n_angles boundary points."""
    theta, z = cone_points(n_angles, **cone)
    out = np.empty(n_angles)
    rows = max(1, (1 << 18) // z.shape[1])
    for s in range(0, n_angles, rows):
        out[s:s + rows] = np.max(np.abs(dfun(z[s:s + rows])), axis=1)
    return out


def weak_type_sup(values, scale=1.0):
    """sup over lambda > 0 of lambda * |{values >= lambda * scale}| on a uniform circle grid.

    The distribution function is a step function, so the sup is attained at
    lambda = values_k / scale.
    """
    v = np.sort(np.asarray(values, dtype=float))[::-1]
    n = v.size
    meas = 2 * np.pi * np.arange(1, n + 1) / n
    return float(np.max(v / scale * meas))


def weak_type_profile(values, lambdas):
    v = np.asarray(values, dtype=float)
    return [[float(lam), float(lam * 2 * np.pi * np.count_nonzero(v >= lam) / v.size)] for lam in lambdas]


def weak_h1_diagnostic(f, n_angles=2**12, lambdas=None, aperture=math.pi / 4, radial=32, angular=9):
    """lambda |{M f' >= lambda}| over a lambda schedule, with the exact discrete sup.

    The sup is recomputed with twice the boundary angles; the verdict is
    "finite" when the two agree to 10%.
    """
    df = _derivative_of(f)
    lambdas = lambdas if lambdas is not None else 2.0 ** np.arange(0, 21)
    m1 = maximal_function(df, n_angles, aperture=aperture, radial=radial, angular=angular)
    m2 = maximal_function(df, 2 * n_angles, aperture=aperture, radial=radial, angular=angular)
    w1, w2 = weak_type_sup(m1), weak_type_sup(m2)
    err = abs(w2 - w1) / max(w2, 1e-300)
    verdict = "finite" if err <= 0.1 else "inconclusive"
    return ClassReport("weak_H1_derivative", {"n_angles": n_angles, "aperture": aperture},
                       weak_type_profile(m2, lambdas), verdict, error_estimate=err, value=w2,
                       meta={"sup_coarse": w1, "sup_fine": w2})


def _zero_radii(B):
    return np.abs(B.zeros.array) if hasattr(B, "zeros") else ()


def carleson_integral(B, h=None, log_weight=False, tol=1e-4, alpha=None, spec=None, mask=None, breakpoints=()):
    """Integral over the disc of log|B|^{-1} times a boundary-singular weight.

    With `alpha` the weight is (1-|z|)^(-1-alpha) (times |log(1-|z|)|); with a
    WeightFunction `h` it is |h''(|z|^2)| (times |log(1-|z|^2)|). `mask`
    restricts the integrand to a region, e.g. a contour interior.
    `breakpoints` adds radii where the weight itself is not smooth.
    """
    if (h is None) == (alpha is None):
        raise ValueError("give exactly one of h or alpha")
    weight = alpha_weight(alpha, log_weight) if alpha is not None else h.radial_weight(log_weight)
    spec = spec or QuadratureSpec(tol=tol)

    def g(z):
        v = -np.log(np.abs(B(z)))
        return v * mask(z) if mask is not None else v

    radii = np.concatenate([np.ravel(_zero_radii(B)), np.ravel(breakpoints)])
    value, err = disc_integral(g, weight, spec, sigma=1.0, breakpoints=radii)
    name = "B_alpha" if alpha is not None else "B_h"
    params = {"alpha": alpha} if alpha is not None else {"h": h.name}
    params["log_weight"] = bool(log_weight)
    return ClassReport(name + "_integral", params, [value], "finite", error_estimate=err, value=value,
                       meta={"spec": spec.to_json()})


# Laplacian of u(z) = c^(1-alpha) log c with c = 1 - |z|^2:
#   u_lap = C(alpha) c^(-1-alpha) log c + rem(c) c^(-1-alpha),  C(alpha) = -4 alpha (1 - alpha)

def green_potential(z, alpha):
    c = 1 - np.abs(z) ** 2
    return c ** (1 - alpha) * np.log(c)


def green_laplacian(z, alpha):
    c = 1 - np.abs(z) ** 2
    return leading_constant(alpha) * c ** (-1 - alpha) * np.log(c) + green_remainder(c, alpha) * c ** (-1 - alpha)


def leading_constant(alpha):
    return -4 * alpha * (1 - alpha)


def green_remainder(c, alpha):
    return 4 * ((1 - 2 * alpha) - 2 * (1 - alpha) * c - (1 - alpha) ** 2 * c * np.log(c))


@dataclass
class GreenReport:
    alpha: float
    laplacian_error: float
    sum_side: float
    lead_integral: float
    remainder_integral: float
    residual: float
    error_estimate: float


def laplacian_fd_error(alpha, h=2.0**-10, rmax=0.95, n=400, seed=0):
    """Max error of the closed-form Laplacian against a 5-point stencil, relative
    to the size of its two terms (the sum itself changes sign inside the disc)."""
    rng = np.random.default_rng(seed)
    z = rmax * np.sqrt(rng.uniform(0.01, 1, n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    u = lambda w: green_potential(w, alpha)
    with np.errstate(invalid="ignore"):
        fd = (u(z + h) + u(z - h) + u(z + 1j * h) + u(z - 1j * h) - 4 * u(z)) / h**2
    exact = green_laplacian(z, alpha)
    c = 1 - np.abs(z) ** 2
    scale = (np.abs(leading_constant(alpha) * np.log(c)) + np.abs(green_remainder(c, alpha))) * c ** (-1 - alpha)
    err = np.abs(fd - exact) / scale
    # a stencil reaching outside the disc makes the step too coarse by definition
    return float(np.max(err)) if np.all(np.isfinite(err)) else math.inf


def green_identity_check(B, alpha=0.5, tol=1e-5, h=2.0**-10, fd_tol=1e-3):
    """Green's formula for u = (1-|z|^2)^(1-alpha) log(1-|z|^2) and v = log|B|.

    Checks 2 pi sum_n u(z_n) = C(alpha) J_lead - J_rem where
    J_lead = int log|B|^-1 c^(-1-alpha) |log c| dA and
    J_rem = int log|B|^-1 rem(c) c^(-1-alpha) dA.
    """
    zs = B.zeros.array
    if np.any(np.abs(zs) < 1e-3) or np.any(np.abs(zs) > 1 - 1e-3):
        raise ValueError("zeros must stay 1e-3 away from the origin and the circle")
    fd_err = laplacian_fd_error(alpha, h)
    if fd_err > fd_tol:
        raise GridTooCoarse(f"finite-difference Laplacian error {fd_err:.3g} above {fd_tol:g}")

    def lead_w(s):
        c = s * (2 - s)
        return c ** (-1 - alpha) * np.abs(np.log(c))

    def rem_w(s):
        c = s * (2 - s)
        return green_remainder(c, alpha) * c ** (-1 - alpha)

    spec = QuadratureSpec(tol=tol, max_level=8)
    L = lambda z: -np.log(np.abs(B(z)))
    radii = np.abs(zs)
    j_lead, e1 = disc_integral(L, RadialWeight(lead_w, 1 + alpha, True), spec, breakpoints=radii)
    j_rem, e2 = disc_integral(L, RadialWeight(rem_w, 1 + alpha, True), spec, breakpoints=radii)
    sum_side = float(np.sum(green_potential(zs, alpha)))
    rhs = (leading_constant(alpha) * j_lead - j_rem) / (2 * np.pi)
    residual = abs(sum_side - rhs) / abs(sum_side)
    return GreenReport(alpha, fd_err, sum_side, j_lead, j_rem, residual,
                       float((abs(leading_constant(alpha)) * e1 + e2) / (2 * np.pi * abs(sum_side))))


def green_family_fit(reports):
    """Least-squares (a, b) in sum_side = a J_lead + b J_rem over a family,
    with leave-one-out refits for the consistency spread."""
    A = np.array([[r.lead_integral, r.remainder_integral] for r in reports])
    y = np.array([r.sum_side for r in reports])
    coef = np.linalg.lstsq(A, y, rcond=None)[0]
    loo = []
    for i in range(len(reports)):
        keep = np.arange(len(reports)) != i
        loo.append(np.linalg.lstsq(A[keep], y[keep], rcond=None)[0])
    loo = np.array(loo)
    spread = float(np.max(np.abs(loo - coef) / np.abs(coef))) if len(reports) > 2 else float("nan")
    alpha = reports[0].alpha
    exact = np.array([leading_constant(alpha) / (2 * np.pi), -1 / (2 * np.pi)])
    return {"a": float(coef[0]), "b": float(coef[1]), "spread": spread,
            "exact_a": float(exact[0]), "exact_b": float(exact[1]),
            "deviation": float(np.max(np.abs(coef - exact) / np.abs(exact)))}
