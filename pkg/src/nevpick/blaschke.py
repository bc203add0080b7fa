"""Finite Blaschke products, Frostman shifts and zero-sequence generators."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import BadParams

_LOG_SPACE_THRESHOLD = 1000
_CHUNK = 1 << 16
_ORIGIN = 1e-150


@dataclass(frozen=True)
class ZeroSequence:
    zeros: tuple
    generator: dict = field(default_factory=dict)

    def __post_init__(self):
        zs = tuple(complex(z) for z in self.zeros)
        if any(abs(z) >= 1 - TOL.zero_margin for z in zs):
            raise BadParams("zeros must satisfy |z| < 1 - 1e-14")
        object.__setattr__(self, "zeros", zs)

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    @property
    def array(self):
        return np.array(self.zeros, dtype=complex)

    @property
    def blaschke_sum(self):
        return float(np.sum(1 - np.abs(self.array)))

    def rotated(self, angle):
        return ZeroSequence(tuple(z * np.exp(1j * angle) for z in self.zeros), dict(self.generator))

    def __add__(self, other):
        return ZeroSequence(self.zeros + other.zeros, {"kind": "custom"})


class BlaschkeProduct:
    """Finite Blaschke product with the normalized factors (|a|/a)(a - z)/(1 - conj(a) z).

    A zero at the origin contributes the factor z.
    """

    def __init__(self, zeros):
        if not isinstance(zeros, ZeroSequence):
            zeros = ZeroSequence(tuple(zeros))
        self.zeros = zeros
        a = zeros.array
        # decreasing 1 - |a|, i.e. shallow zeros first
        self._a = a[np.argsort(np.abs(a), kind="stable")]
        # zeros this close to the origin are treated as the origin (|a|/a is not representable)
        self._a[np.abs(self._a) < _ORIGIN] = 0
        nz = self._a != 0
        self._unit = np.ones(len(self._a), dtype=complex)
        self._unit[nz] = np.abs(self._a[nz]) / self._a[nz]

    def __len__(self):
        return len(self._a)

    def _factors(self, z):
        a = self._a[:, None]
        zz = z[None, :]
        num = a - zz
        den = 1 - np.conj(a) * zz
        f = self._unit[:, None] * num / den
        origin = self._a == 0
        f[origin] = zz
        return f

    def _factor_derivatives(self, z):
        a = self._a[:, None]
        den = 1 - np.conj(a) * z[None, :]
        d = self._unit[:, None] * (np.abs(a) ** 2 - 1) / den**2
        d[self._a == 0] = 1.0
        return d

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty_like(flat)
        for s in range(0, flat.size, _CHUNK):
            zc = flat[s:s + _CHUNK]
            if len(self._a) == 0:
                out[s:s + _CHUNK] = 1.0
                continue
            f = self._factors(zc)
            if len(self._a) > _LOG_SPACE_THRESHOLD:
                with np.errstate(divide="ignore"):
                    mod = np.exp(np.sum(np.log(np.abs(f)), axis=0))
                out[s:s + _CHUNK] = mod * np.exp(1j * np.sum(np.angle(f), axis=0))
            else:
                out[s:s + _CHUNK] = np.prod(f, axis=0)
        out = out.reshape(z.shape)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, z):
        """B'(z) by the product rule with prefix/suffix products (safe at zeros)."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty_like(flat)
        n = len(self._a)
        for s in range(0, flat.size, _CHUNK):
            zc = flat[s:s + _CHUNK]
            if n == 0:
                out[s:s + _CHUNK] = 0.0
                continue
            f = self._factors(zc)
            df = self._factor_derivatives(zc)
            ones = np.ones((1, zc.size), dtype=complex)
            prefix = np.cumprod(np.vstack([ones, f[:-1]]), axis=0)
            suffix = np.cumprod(np.vstack([ones, f[:0:-1]]), axis=0)[::-1]
            out[s:s + _CHUNK] = np.sum(df * prefix * suffix, axis=0)
        out = out.reshape(z.shape)
        return complex(out) if out.ndim == 0 else out

    def angular_derivative_modulus(self, theta):
        """|B'(e^{i theta})| = sum_k (1 - |a_k|^2) / |e^{i theta} - a_k|^2."""
        theta = np.asarray(theta, dtype=float)
        e = np.exp(1j * theta.ravel())
        a = self._a[:, None]
        vals = np.sum((1 - np.abs(a) ** 2) / np.abs(e[None, :] - a) ** 2, axis=0)
        vals = vals.reshape(theta.shape)
        return float(vals) if vals.ndim == 0 else vals


def evaluate(b, z):
    return b(z)


def derivative(b, z):
    return b.derivative(z)


def angular_derivative_modulus(b, theta):
    return b.angular_derivative_modulus(theta)


class FrostmanShift:
    """z -> (f(z) - w) / (1 - conj(w) f(z))."""

    def __init__(self, f, w):
        if abs(w) >= 1:
            raise BadParams("shift point must lie in the open disc")
        self.f = f
        self.w = complex(w)

    def __call__(self, z):
        fz = self.f(z)
        return (fz - self.w) / (1 - np.conj(self.w) * fz)

    def derivative(self, z):
        fz = self.f(z)
        return self.f.derivative(z) * (1 - abs(self.w) ** 2) / (1 - np.conj(self.w) * fz) ** 2


def frostman_shift(f, w):
    if w == 0:
        return f
    return FrostmanShift(f, w)


def _angles(rule, count, theta0=0.0, seed=None, group_size=None):
    if rule == "fixed":
        return np.full(count, theta0)
    if rule == "equidistributed":
        if group_size:
            idx = np.arange(count) % group_size
            return theta0 + 2 * np.pi * idx / group_size
        golden = np.pi * (3 - np.sqrt(5))
        return theta0 + golden * np.arange(count)
    if rule == "random":
        rng = np.random.default_rng(seed)
        return rng.uniform(0, 2 * np.pi, count)
    raise BadParams(f"unknown angle rule {rule!r}")


def generate_sequence(kind, count, *, M=1, p=2.0, angle="fixed", theta0=0.0, seed=None):
    """Zero sequences for the test families.

    exponential: M zeros with 1 - |z| = 1.5 * 2**(-j-1) in each annulus j = 1..count,
    spread evenly in angle within an annulus when angle="equidistributed".
    power: 1 - |z_n| = n**(-p) for n = 1..count, golden-angle spacing when
    angle="equidistributed".
    """
    if count < 1:
        raise BadParams("count must be >= 1")
    meta = {"kind": kind, "count": int(count), "angle": angle, "theta0": float(theta0)}
    if seed is not None:
        meta["seed"] = int(seed)
    if kind == "exponential":
        if int(M) != M or M < 1:
            raise BadParams("M must be a positive integer")
        M = int(M)
        depth = np.repeat(1.5 * 2.0 ** (-np.arange(1, count + 1) - 1.0), M)
        ang = _angles(angle, depth.size, theta0, seed, group_size=M)
        meta["M"] = M
    elif kind == "power":
        if p <= 0:
            raise BadParams("p must be positive")
        if p <= 1:
            msg = f"power exponent p={p} <= 1: the Blaschke condition fails as count grows"
            warnings.warn(msg, stacklevel=2)
            meta["warning"] = msg
        depth = np.arange(1, count + 1, dtype=float) ** (-float(p))
        ang = _angles(angle, depth.size, theta0, seed)
        meta["p"] = float(p)
    else:
        raise BadParams(f"unknown generator kind {kind!r}")
    clipped = depth < TOL.clip_min
    if clipped.any():
        meta["clipped"] = int(clipped.sum())
    depth = np.clip(depth, TOL.clip_min, 1.0)
    zeros = (1 - depth) * np.exp(1j * ang)
    return ZeroSequence(tuple(zeros), meta)
