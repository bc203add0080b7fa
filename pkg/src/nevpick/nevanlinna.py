"""Schur's algorithm and the Nevanlinna parametrization of all solutions.

Solutions of the interpolation problem are the maps

    f = (P - Q phi) / (R - S phi),    phi in the closed unit ball of H^infinity,

with P S - Q R equal to the node Blaschke product and S(0) = 0. The
coefficients are never expanded as polynomials; they are evaluated pointwise
by composing the 2x2 elementary Schur matrices at each z.
"""

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct
from .config import TOL
from .errors import NotStrictlySolvable, StepBlowup
from .pick import is_solvable

_CHUNK = 1 << 15
RATIOS = ("P/R", "Q/R", "S/R", "1/R", "Pi/R^2")


@dataclass(frozen=True)
class SchurStep:
    """One Schur reduction: node z_k and the datum t_k consumed there.

    The elementary map sends g to (t_k + b_k(z) g) / (1 + conj(t_k) b_k(z) g)
    with b_k(z) = (z - z_k) / (1 - conj(z_k) z).
    """

    node: complex
    parameter: complex

    def matrix(self, z):
        b = (z - self.node) / (1 - np.conj(self.node) * z)
        t = self.parameter
        return np.array([[b, t], [np.conj(t) * b, 1.0]], dtype=complex)


@dataclass(frozen=True)
class Normalization:
    """Constant right factor lam * [[1, beta], [conj(beta), 1]] * diag(u, 1)."""

    lam: complex
    beta: complex
    u: complex


@dataclass(frozen=True)
class Coefficients:
    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    S: np.ndarray

    def __iter__(self):
        return iter((self.P, self.Q, self.R, self.S))


class Parametrization:
    def __init__(self, problem, steps, product, norm):
        self.problem = problem
        self.steps = tuple(steps)
        self.product = product
        self.norm = norm
        self._z = np.array([s.node for s in self.steps], dtype=complex)
        self._t = np.array([s.parameter for s in self.steps], dtype=complex)

    def __len__(self):
        return len(self.steps)

    @property
    def normalization_record(self):
        n = self.norm
        return {"lam": [n.lam.real, n.lam.imag], "beta": [n.beta.real, n.beta.imag],
                "u": [n.u.real, n.u.imag], "gauge": "S(0)=0, PS-QR=Pi, R(0)>0"}

    def _chain(self, z, with_derivative):
        # M(z) = T_1(z) ... T_N(z) applied left to right
        A = np.ones_like(z)
        B = np.zeros_like(z)
        C = np.zeros_like(z)
        D = np.ones_like(z)
        if with_derivative:
            dA, dB, dC, dD = (np.zeros_like(z) for _ in range(4))
        for zk, tk in zip(self._z, self._t):
            den = 1 - np.conj(zk) * z
            b = (z - zk) / den
            tc = np.conj(tk)
            if with_derivative:
                db = (1 - abs(zk) ** 2) / den**2
                # d(M T) = dM T + M dT,  dT = db [[1, 0], [conj(t), 0]]
                nA = dA * b + dB * tc * b + (A + B * tc) * db
                nB = dA * tk + dB
                nC = dC * b + dD * tc * b + (C + D * tc) * db
                nD = dC * tk + dD
                dA, dB, dC, dD = nA, nB, nC, nD
            A, B = (A + B * tc) * b, A * tk + B
            C, D = (C + D * tc) * b, C * tk + D
        n = self.norm
        bb = np.conj(n.beta)
        out = [n.lam * (n.beta * A + B), -n.lam * n.u * (A + bb * B),
               n.lam * (n.beta * C + D), -n.lam * n.u * (C + bb * D)]
        if with_derivative:
            out += [n.lam * (n.beta * dA + dB), -n.lam * n.u * (dA + bb * dB),
                    n.lam * (n.beta * dC + dD), -n.lam * n.u * (dC + bb * dD)]
        return out

    def coefficients(self, z, with_derivative=False):
        """(P, Q, R, S) at z; with_derivative also returns (P', Q', R', S')."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        k = 8 if with_derivative else 4
        outs = [np.empty_like(flat) for _ in range(k)]
        for s in range(0, flat.size, _CHUNK):
            vals = self._chain(flat[s:s + _CHUNK], with_derivative)
            for o, v in zip(outs, vals):
                o[s:s + _CHUNK] = v
        outs = [o.reshape(z.shape) for o in outs]
        if with_derivative:
            return Coefficients(*outs[:4]), Coefficients(*outs[4:])
        return Coefficients(*outs)


def _order(nodes):
    z = np.asarray(nodes, dtype=complex)
    ang = np.mod(np.angle(z), 2 * np.pi)
    return np.lexsort((ang, np.abs(z)))


def schur_parametrization(problem, tol=TOL.pick, blowup=TOL.step_blowup, check=True):
    if check:
        report = is_solvable(problem, tol)
        if report.solvable != "yes":
            raise NotStrictlySolvable(
                f"Pick matrix not positive definite (verdict {report.solvable}, min eig {report.min_eig:.3g})"
            )
    order = _order(problem.nodes)
    z = problem.z[order]
    t = problem.w[order].copy()
    steps = []
    for k in range(len(z)):
        tk = t[k]
        if abs(tk) >= 1 - blowup:
            raise StepBlowup(f"Schur parameter at step {k} has modulus {abs(tk):.16f}")
        steps.append(SchurStep(complex(z[k]), complex(tk)))
        rest = slice(k + 1, None)
        bk = (z[rest] - z[k]) / (1 - np.conj(z[k]) * z[rest])
        t[rest] = (t[rest] - tk) / (1 - np.conj(tk) * t[rest]) / bk

    product = BlaschkeProduct(problem.nodes)
    raw = Parametrization(problem, steps, product, Normalization(1.0, 0.0, 1.0))
    # raw chain at the origin: P=B0, -Q=A0, R=D0, -S=C0
    P0, Q0, R0, S0 = (complex(v) for v in raw.coefficients(np.array(0j)))
    A0, B0, C0, D0 = -Q0, P0, -S0, R0
    beta = -np.conj(C0 / D0)
    scale = (1 - abs(beta) ** 2) * np.prod(1 - np.abs(np.array([s.parameter for s in steps])) ** 2)
    r0 = beta * C0 + D0
    lam = np.exp(-1j * np.angle(r0)) / np.sqrt(scale)
    # unimodular constant relating the node product to prod_k b_k
    eps = np.prod([(-abs(s.node) / s.node) if s.node != 0 else 1.0 for s in steps])
    u = eps / (lam**2 * scale)
    return Parametrization(problem, steps, product, Normalization(complex(lam), complex(beta), complex(u)))


def coefficients_at(param, z):
    return param.coefficients(z)


def _phi_values(phi, z):
    if callable(phi):
        return np.asarray(phi(z), dtype=complex)
    return np.asarray(phi, dtype=complex)


def solve_with(param, phi, z):
    P, Q, R, S = param.coefficients(z)
    ph = _phi_values(phi, z)
    return (P - Q * ph) / (R - S * ph)


def extremal_solution(param, gamma, z):
    e = np.exp(1j * np.asarray(gamma, dtype=float))
    P, Q, R, S = param.coefficients(z)
    return (P - Q * e) / (R - S * e)


def extremal_family(param, gammas, z):
    """Array of shape (len(gammas),) + z.shape; coefficients evaluated once."""
    e = np.exp(1j * np.asarray(gammas, dtype=float)).reshape((-1,) + (1,) * np.ndim(z))
    P, Q, R, S = param.coefficients(z)
    return (P - Q * e) / (R - S * e)


def extremal_derivative_family(param, gammas, z):
    """I_gamma'(z) for each gamma, shape (len(gammas),) + z.shape."""
    e = np.exp(1j * np.asarray(gammas, dtype=float)).reshape((-1,) + (1,) * np.ndim(z))
    (P, Q, R, S), (dP, dQ, dR, dS) = param.coefficients(z, with_derivative=True)
    num = P - Q * e
    den = R - S * e
    return ((dP - dQ * e) * den - num * (dR - dS * e)) / den**2


class Extremal:
    """I_gamma as an evaluator with a derivative."""

    def __init__(self, param, gamma):
        self.param = param
        self.gamma = float(gamma)

    def __call__(self, z):
        return extremal_solution(self.param, self.gamma, z)

    def derivative(self, z):
        return extremal_derivative_family(self.param, [self.gamma], z)[0]


@dataclass(frozen=True)
class Vertevorrat:
    center: complex
    radius: float


def vertevorrat(param, z):
    """Centre and radius of the disc of values {f(z) : f solves the problem}."""
    P, Q, R, S = param.coefficients(z)
    den = np.abs(R) ** 2 - np.abs(S) ** 2
    if np.any(den <= 0):
        raise AssertionError("|R|^2 - |S|^2 must be positive in the disc")
    c = (P * np.conj(R) - Q * np.conj(S)) / den
    rho = np.abs(param.product(z)) / den
    if np.ndim(c) == 0:
        return Vertevorrat(complex(c), float(rho))
    return c, rho


def coefficient_ratio(param, which, z):
    P, Q, R, S = param.coefficients(z)
    if which == "P/R":
        return P / R
    if which == "Q/R":
        return Q / R
    if which == "S/R":
        return S / R
    if which == "1/R":
        return 1 / R
    if which == "Pi/R^2":
        return param.product(z) / R**2
    raise ValueError(f"unknown ratio {which!r}; expected one of {RATIOS}")


class Ratio:
    def __init__(self, param, which):
        self.param = param
        self.which = which

    def __call__(self, z):
        return coefficient_ratio(self.param, self.which, z)


def _gamma_grid(K):
    return 2 * np.pi * np.arange(K) / K


def average_extremal(param, z, K=64):
    """Trapezoid mean of I_gamma(z) over K equispaced gammas."""
    if K < 8:
        raise ValueError("K must be at least 8")
    return np.mean(extremal_family(param, _gamma_grid(K), z), axis=0)


def tilde_integrand(param, z, delta, variant, w):
    P, Q, R, S = param.coefficients(z)
    if variant == "S/R":
        return (delta * S / R + Q / R * w) / (1 + delta * P / R * w)
    if variant == "1/R":
        return (delta / R + Q / R * w) / (1 - delta * param.product(z) / R * w)
    raise ValueError(f"unknown variant {variant!r}")


def average_tilde(param, z, delta, variant="S/R", K=64):
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if K < 8:
        raise ValueError("K must be at least 8")
    w = np.exp(1j * _gamma_grid(K)).reshape((-1,) + (1,) * np.ndim(z))
    return np.mean(tilde_integrand(param, z, delta, variant, w), axis=0)
