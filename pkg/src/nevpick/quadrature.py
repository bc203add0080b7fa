"""Singular-weight area integrals over the disc and circle averages.

Area integrals use polar coordinates. The radial variable is substituted as
r = 1 - u**m so that the declared boundary singularity becomes bounded, then
integrated with Gauss-Legendre panels in u (split at caller-supplied radial
breakpoints); the angle uses the periodic trapezoid rule.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import NonIntegrableDeclaration, QuadratureNonConvergent, ResolutionExceeded


@dataclass(frozen=True)
class RadialWeight:
    """Radial weight given as a function of the boundary distance s = 1 - r.

    Near the boundary w ~ s**(-exponent), times |log s| when `log` is set.
    """

    fn: object
    exponent: float
    log: bool = False
    name: str = "custom"

    def __call__(self, r):
        return self.fn(r)


def alpha_weight(alpha, log=False):
    def fn(s):
        w = s ** (-1.0 - alpha)
        return w * np.abs(np.log(s)) if log else w

    return RadialWeight(fn, 1.0 + alpha, log, f"(1-|z|)^(-1-{alpha:g})" + (" |log(1-|z|)|" if log else ""))


@dataclass(frozen=True)
class QuadratureSpec:
    substitution: float = None
    gauss_order: int = 8
    base_panels: int = 2
    base_angular: int = 32
    tol: float = 1e-6
    max_level: int = 7
    min_level: int = 2

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_level < 1 or self.base_panels < 1 or self.base_angular < 4:
            raise ValueError("resolution caps must be positive")

    def to_json(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def substitution_exponent(weight, sigma):
    q = sigma - weight.exponent
    if q <= -1:
        raise NonIntegrableDeclaration(
            f"integrand ~ (1-r)^{q:g} near the boundary is not integrable (need sigma > exponent - 1)"
        )
    k = 1 if weight.log else 0
    # smallest integer m with m (q + 1) an integer >= k + 1: the leading term
    # becomes u^(m(q+1) - 1) and the correction terms u^(m(q+1+j) - 1) stay
    # integer powers, so Gauss panels see a smooth integrand
    for m in range(1, 65):
        v = m * (q + 1)
        if v >= k + 1 - 1e-12 and abs(v - round(v)) < 1e-9:
            return float(m)
    return max(1.0, (k + 1) / (q + 1))


def _radial_nodes(m, breaks, panels, order):
    x, wx = np.polynomial.legendre.leggauss(order)
    edges_u = np.unique(np.concatenate([[0.0, 1.0], breaks]))
    us, ws = [], []
    for a, b in zip(edges_u[:-1], edges_u[1:]):
        pe = np.linspace(a, b, panels + 1)
        h = np.diff(pe)[:, None]
        mid = (pe[:-1] + pe[1:])[:, None] / 2
        us.append((mid + h / 2 * x[None, :]).ravel())
        ws.append((h / 2 * wx[None, :]).ravel())
    u = np.concatenate(us)
    wu = np.concatenate(ws)
    r = 1.0 - u**m
    # dA = r dr dtheta, dr = m u^(m-1) du
    jac = m * u ** (m - 1) * r
    return r, wu * jac, u


_ANGULAR_CAP = 2**17


def _angular_counts(r, radii, base):
    """Trapezoid points per circle: g may peak in angle with width ~ |r - |a||
    near a circle through a singular point a, so resolution grows like 1/|r - |a||."""
    n = np.full(r.size, base, dtype=np.int64)
    if len(radii):
        dist = np.min(np.abs(r[:, None] - np.asarray(radii)[None, :]), axis=1)
        factor = np.ceil(np.log2(np.maximum(1.0, 0.05 / np.maximum(dist, 1e-300))))
        n = np.minimum(base * 2 ** np.minimum(factor, 30).astype(np.int64), max(base, _ANGULAR_CAP))
    return n


def _level_value(g, weight, m, breaks, level, spec, radii=()):
    panels = spec.base_panels * 2**level
    r, wr, u = _radial_nodes(m, breaks, panels, spec.gauss_order)
    counts = _angular_counts(r, radii, spec.base_angular * 2**level)
    total = 0.0
    # weight evaluated on s = 1 - r = u^m directly to keep precision near the boundary
    wvals = weight.fn(np.maximum(u**m, 1e-150))
    for n_theta in np.unique(counts):
        idx = np.nonzero(counts == n_theta)[0]
        theta = 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
        e = np.exp(1j * theta)
        rows = max(1, (1 << 20) // int(n_theta))
        for s in range(0, idx.size, rows):
            sel = idx[s:s + rows]
            gv = np.asarray(g(r[sel, None] * e[None, :]), dtype=float)
            ang = gv.mean(axis=1) * 2 * np.pi
            total += np.sum(ang * wvals[sel] * wr[sel])
    return float(total)


def disc_integral(g, weight, spec=QuadratureSpec(), sigma=1.0, breakpoints=(), strict=True):
    """Integral over the disc of g(z) * weight(|z|) dA(z).

    `sigma` declares the boundary decay g = O((1-|z|)**sigma). `breakpoints`
    are radii where g is not smooth (zeros of a Blaschke product, say); they
    split the radial panels and raise the angular resolution nearby.
    Returns (value, error estimate) with the estimate taken as the difference
    of the two finest levels.
    """
    m_auto = substitution_exponent(weight, sigma)
    m = spec.substitution or m_auto
    br = np.array([b for b in np.ravel(breakpoints) if 0 < b < 1], dtype=float)
    breaks = (1.0 - br) ** (1.0 / m)
    raw = []
    history = []
    for level in range(spec.max_level + 1):
        raw.append(_level_value(g, weight, m, breaks, level, spec, br))
        if level == 0:
            continue
        # interior log singularities limit the angular trapezoid rule to O(h^2)
        # once integrated over r: report the Richardson value, but keep the raw
        # level difference (an overestimate) as the error
        val = raw[-1] + (raw[-1] - raw[-2]) / 3
        err = abs(raw[-1] - raw[-2])
        history.append(val)
        if level >= spec.min_level and err <= spec.tol * max(abs(val), 1e-14):
            return val, err
    if strict:
        raise QuadratureNonConvergent(
            f"error estimate {err:.3g} above tolerance at level cap; last values {history[-3:]}"
        )
    return history[-1], err


def circle_integral(g, r=1.0, n=64, refine=False, tol=1e-10, cap=2**20):
    """Normalized circle mean (1/2pi) int g(theta) dtheta by the trapezoid rule.

    `g` takes an array of angles; `r` is passed through as an attribute-free
    convenience for callers that close over it. Returns (value, error estimate).
    """
    if n < 8 or n & (n - 1):
        raise ValueError("n must be a power of two >= 8")

    def trap(k):
        th = 2 * np.pi * np.arange(k) / k
        return np.mean(np.asarray(g(th)))

    val = trap(n)
    if not refine:
        return val, float("nan")
    while True:
        n *= 2
        if n > cap:
            raise ResolutionExceeded(f"circle integral not converged at {n // 2} points")
        new = trap(n)
        err = abs(new - val)
        if err <= tol * max(abs(new), 1e-300):
            return new, err
        val = new


def radial_oracle(f, a=0.0, b=1.0, points=None, weight_alpha=None):
    """1-D adaptive quadrature of f on [a, b]; with weight_alpha uses the algebraic
    endpoint weight (b - r)**(-weight_alpha) handled by QUADPACK."""
    if weight_alpha is not None:
        val, err = integrate.quad(f, a, b, weight="alg", wvar=(0.0, -weight_alpha), limit=500,
                                  epsabs=0, epsrel=1e-13)
    else:
        val, err = integrate.quad(f, a, b, points=points, limit=500, epsabs=0, epsrel=1e-13)
    return val, err


def blaschke_radial_oracle(zero_radii, weight):
    """Independent 1-D reduction of int log|B|^{-1} w(|z|) dA for a radial weight.

    Uses the circle mean of log|b_a(r e^{it})| = log max(r, |a|). On [|a|, 1]
    the boundary factor (1-r)^(1-exponent), times log(1-r) for log weights, is
    handed to QUADPACK as an algebraic(-logarithmic) endpoint weight.
    """
    beta = 1.0 - weight.exponent
    total = 0.0
    for a in zero_radii:
        a = float(a)
        inner = 0.0
        if a > 0:
            inner, _ = integrate.quad(lambda r: r * weight(1 - r) * -math.log(a), 0, a,
                                      limit=500, epsabs=0, epsrel=1e-13)

        def smooth(r):
            # r (-log r) w(1-r) divided by the endpoint weight; -log(r)/(1-r) -> 1 at r = 1
            s = 1 - min(r, 1 - 1e-15)
            if r <= 0 or s >= 1:
                return 0.0
            v = r * (-math.log1p(-s) / s) * weight(s) * s**weight.exponent
            return -v / abs(math.log(s)) if weight.log else v

        outer, _ = integrate.quad(smooth, a, 1, weight="alg-logb" if weight.log else "alg", wvar=(0.0, beta),
                                  limit=500, epsabs=0, epsrel=1e-13)
        total += 2 * math.pi * (inner + outer)
    return total
