"""Geometry of the unit disc: Moebius maps, dyadic annuli, Carleson boxes."""

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import LevelOutOfRange, PoleAtPoint


@dataclass(frozen=True)
class MoebiusMap:
    """The map w -> (a*w + b) / (c*w + d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d)) ** 2
        if abs(self.det) <= TOL.moebius_det * scale:
            raise ValueError("degenerate Moebius map (a*d - b*c = 0)")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def automorphism(cls, a, unimodular=1.0):
        """The disc automorphism z -> u * (z - a) / (1 - conj(a) z)."""
        return cls(unimodular, -unimodular * a, -np.conj(a), 1)

    def __matmul__(self, other):
        m = self.matrix @ other.matrix
        return MoebiusMap(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def inverse(self):
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        return moebius_apply(self, z)


def moebius_apply(m, z, tol=TOL.moebius_det):
    z = np.asarray(z, dtype=complex)
    num = m.a * z + m.b
    den = m.c * z + m.d
    scale = max(abs(m.a), abs(m.b), abs(m.c), abs(m.d))
    if np.any(np.abs(den) <= tol * scale):
        raise PoleAtPoint(f"denominator vanishes for {m} at {z}")
    out = num / den
    return complex(out) if out.ndim == 0 else out


def pseudohyperbolic(z1, z2):
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    return np.abs(z1 - z2) / np.abs(1 - np.conj(z2) * z1)


def annulus_index(z):
    """Index j of the dyadic annulus 2**(-j-1) < 1 - |z| <= 2**(-j).

    Points with |z| < 1/2 get index 0.
    """
    r = abs(z)
    if r < 0.5:
        return 0
    mant, exp = math.frexp(1.0 - r)
    return -exp + (1 if mant == 0.5 else 0)


def annulus_indices(zs):
    return np.array([annulus_index(z) for z in np.ravel(zs)], dtype=int)


@dataclass(frozen=True)
class DyadicAnnulus:
    j: int

    def __contains__(self, z):
        d = 1.0 - abs(z)
        return 2.0 ** (-self.j - 1) < d <= 2.0 ** (-self.j)


@dataclass(frozen=True)
class CarlesonBox:
    """Box over the arc centred at `center` with length `length`.

    Depth equals the normalized arc length length / (2*pi).
    """

    center: float
    length: float

    def __post_init__(self):
        if not 0 < self.length <= 2 * math.pi + 1e-15:
            raise ValueError("arc length must lie in (0, 2*pi]")

    @property
    def depth(self):
        return self.length / (2 * math.pi)

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        dtheta = np.angle(z * np.exp(-1j * self.center))
        return (r >= 1 - self.depth) & (r < 1) & (np.abs(dtheta) <= self.length / 2)


def dyadic_boxes(level):
    if not 0 <= level <= 24:
        raise LevelOutOfRange(f"level {level} outside [0, 24]")
    n = 2**level
    length = 2 * math.pi / n
    return [CarlesonBox(center=(k + 0.5) * length, length=length) for k in range(n)]
