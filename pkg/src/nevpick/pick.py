"""Pick-matrix feasibility, minimal interpolation norm and scaled-problem detection."""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .blaschke import BlaschkeProduct
from .config import TOL
from .disc import pseudohyperbolic
from .errors import BadParams, Divergence, IllConditioned


@dataclass(frozen=True)
class PickProblem:
    nodes: tuple
    targets: tuple
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        targets = tuple(complex(w) for w in self.targets)
        if len(nodes) != len(targets) or not nodes:
            raise BadParams("nodes and targets must be non-empty and of equal length")
        if any(abs(z) >= 1 for z in nodes):
            raise BadParams("nodes must lie in the open unit disc")
        if any(abs(w) > 1 for w in targets):
            raise BadParams("targets must lie in the closed unit disc")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    def __len__(self):
        return len(self.nodes)

    @property
    def z(self):
        return np.array(self.nodes, dtype=complex)

    @property
    def w(self):
        return np.array(self.targets, dtype=complex)

    @property
    def min_separation(self):
        if len(self) < 2:
            return 1.0
        return min(float(pseudohyperbolic(a, b)) for a, b in itertools.combinations(self.nodes, 2))

    def check_separation(self, tol=TOL.node_separation):
        if self.min_separation < tol:
            raise IllConditioned(
                f"nodes closer than {tol:g} in pseudohyperbolic distance ({self.min_separation:.3g})"
            )

    @property
    def node_product(self):
        return BlaschkeProduct(self.nodes)


def pick_matrix(p, t=1.0):
    """Pick matrix of the targets w/t: (t^2 - w_i conj(w_j)) / (t^2 (1 - z_i conj(z_j)))."""
    if t <= 0:
        raise BadParams("scale must be positive")
    z, w = p.z, p.w
    t2 = t * t
    m = (t2 - w[:, None] * np.conj(w[None, :])) / (t2 * (1 - z[:, None] * np.conj(z[None, :])))
    # exact self-adjointness: mirror the upper triangle
    upper = np.triu(m, 1)
    return upper + upper.conj().T + np.diag(m.diagonal().real)


def _pivoted_ldl_pivots(a, tol):
    """Pivots of a symmetric-pivoted LDL^H factorization.

    Returns (pivots, remainder_ok) where remainder_ok is False when the
    factorization stopped on a block whose entries show indefiniteness.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    pivots = []
    idx = list(range(n))
    for _ in range(n):
        sub = a[np.ix_(idx, idx)]
        d = sub.diagonal().real
        k = int(np.argmax(d))
        piv = d[k]
        if piv < tol:
            # PSD blocks satisfy |a_ij|^2 <= a_ii a_jj; anything larger is indefinite
            pivots.extend(d.tolist())
            off = np.abs(sub - np.diag(sub.diagonal()))
            ok = bool(np.all(off <= tol)) if off.size else True
            return pivots, ok
        pivots.append(piv)
        col = sub[:, k]
        rest = [i for j, i in enumerate(idx) if j != k]
        c = col[[j for j in range(len(idx)) if j != k]]
        a[np.ix_(rest, rest)] -= np.outer(c, c.conj()) / piv
        idx = rest
    return pivots, True


@dataclass
class FeasibilityReport:
    solvable: str
    min_eig: float
    min_pivot: float
    optimal_norm: float = float("nan")
    scaled: bool = False
    margin: float = float("nan")

    def to_json(self):
        return {
            "solvable": self.solvable,
            "min_eig": self.min_eig,
            "optimal_norm": self.optimal_norm,
            "scaled": self.scaled,
            "margin": self.margin,
        }


def _psd_verdict(m, tol):
    n = m.shape[0]
    ptol = tol * max(np.trace(m).real, 0.0) / n if n else tol
    ptol = max(ptol, tol * 1e-6)
    pivots, ok = _pivoted_ldl_pivots(m, ptol)
    min_pivot = float(min(pivots))
    min_eig = float(np.linalg.eigvalsh(m)[0])
    if not ok or min_pivot <= -ptol:
        verdict = "no"
    elif min_pivot >= ptol:
        verdict = "yes"
    else:
        verdict = "marginal"
    # eigenvalue cross-check: a clear negative eigenvalue overrides the pivots
    if verdict != "no" and min_eig < -ptol * n:
        verdict = "no"
    return verdict, min_eig, min_pivot


def is_solvable(p, tol=TOL.pick):
    p.check_separation()
    verdict, min_eig, min_pivot = _psd_verdict(pick_matrix(p, 1.0), tol)
    return FeasibilityReport(solvable=verdict, min_eig=min_eig, min_pivot=min_pivot)


def _is_psd(p, t, rtol=1e-13):
    m = pick_matrix(p, t)
    lam = np.linalg.eigvalsh(m)
    return lam[0] >= -rtol * max(abs(lam[-1]), 1.0)


def optimal_norm(p, tol=TOL.bisection, trace=None):
    """Smallest t with pick_matrix(p, t) positive semidefinite, by bisection."""
    wmax = float(np.max(np.abs(p.w)))
    if wmax == 0.0:
        return 0.0
    lo = wmax * (1 - 1e-12)
    hi = max(1.0, 2 * wmax)
    expansions = 0
    while not _is_psd(p, hi):
        hi *= 2
        expansions += 1
        if expansions > 60:
            raise Divergence(f"no PSD upper bracket found up to t={hi:g}")
    if _is_psd(p, lo):
        return lo
    history = []
    while hi - lo > tol * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        ok = _is_psd(p, mid)
        history.append((mid, ok))
        if ok:
            hi = mid
        else:
            lo = mid
    if trace is not None:
        trace.extend(history)
    return hi


def optimal_norm_generalized(p):
    """Independent route: M^2 is the top generalized eigenvalue of (D K D^*, K)."""
    from scipy.linalg import eigh

    z, w = p.z, p.w
    k = 1 / (1 - z[:, None] * np.conj(z[None, :]))
    dkd = w[:, None] * k * np.conj(w[None, :])
    lam = eigh(dkd, k, eigvals_only=True)
    return float(np.sqrt(max(lam[-1], 0.0)))


def scaled_report(p, tol=TOL.pick):
    report = is_solvable(p, tol)
    if report.solvable == "no":
        report.optimal_norm = optimal_norm(p)
        report.margin = 1 - report.optimal_norm
        report.scaled = False
        return report
    m = optimal_norm(p)
    report.optimal_norm = m
    report.margin = 1 - m
    report.scaled = m < 1 - tol
    return report


def random_nodes(n, rng, rmax=0.9, min_sep=0.1, max_tries=10000):
    """Nodes uniform in the disc of radius rmax with a pseudohyperbolic separation floor."""
    out = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries:
            raise BadParams("could not place separated nodes; lower min_sep")
        r = rmax * np.sqrt(rng.uniform())
        z = r * np.exp(2j * np.pi * rng.uniform())
        if all(pseudohyperbolic(z, y) >= min_sep for y in out):
            out.append(complex(z))
    return out


def scaled_problem(nodes, s=0.5, g_zeros=(0.3, -0.4j), meta=None):
    """Targets w_n = s * g(z_n) with g a fixed finite Blaschke product; norm <= s."""
    g = BlaschkeProduct(g_zeros)
    z = np.array(nodes, dtype=complex)
    w = s * g(z)
    info = {"kind": "scaled", "s": float(s), "g_zeros": [[c.real, c.imag] for c in map(complex, g_zeros)]}
    info.update(meta or {})
    return PickProblem(tuple(z), tuple(np.atleast_1d(w)), info)


def constant_problem(nodes, w):
    w = complex(w)
    return PickProblem(tuple(nodes), (w,) * len(nodes), {"kind": "constant", "w": [w.real, w.imag]})
