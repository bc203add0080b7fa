"""Level-set contours {|B| = eps} by marching squares, and Carleson-box norms."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContourOpen, GridTooCoarse

# corner bits: 1 = (i, j), 2 = (i+1, j), 4 = (i+1, j+1), 8 = (i, j+1)
# edges: 0 bottom, 1 right, 2 top, 3 left
_SEGMENTS = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)], 6: [(0, 2)], 7: [(3, 2)],
    8: [(2, 3)], 9: [(0, 2)], 11: [(1, 2)], 12: [(1, 3)], 13: [(0, 1)], 14: [(3, 0)],
}
# saddles, keyed by (case, centre inside)
_SADDLES = {
    (5, True): [(0, 1), (2, 3)], (5, False): [(3, 0), (1, 2)],
    (10, True): [(3, 0), (1, 2)], (10, False): [(0, 1), (2, 3)],
}


@dataclass
class ContourEstimate:
    polylines: list
    level: float
    grid: np.ndarray
    field_values: np.ndarray
    inside: np.ndarray
    enclosed: np.ndarray = None
    min_inside: float = float("nan")
    history: list = field(default_factory=list)

    @property
    def length(self):
        return float(sum(np.sum(np.abs(np.diff(p))) for p in self.polylines))

    def inside_mask(self, z):
        """Nearest-grid-point lookup of the sub-level mask."""
        z = np.asarray(z, dtype=complex)
        n = self.grid.size
        h = self.grid[1] - self.grid[0]
        i = np.clip(np.rint((z.real - self.grid[0]) / h).astype(int), 0, n - 1)
        j = np.clip(np.rint((z.imag - self.grid[0]) / h).astype(int), 0, n - 1)
        return self.inside[j, i]

    def to_json(self):
        return {
            "level": self.level,
            "length": self.length,
            "polylines": [[[float(p.real), float(p.imag)] for p in line] for line in self.polylines],
        }


def _edge_points(i, j, e, x, F):
    """Crossing location on edge e of cell (i, j) by linear interpolation."""
    if e == 0:
        a, b = (i, j), (i + 1, j)
    elif e == 1:
        a, b = (i + 1, j), (i + 1, j + 1)
    elif e == 2:
        a, b = (i, j + 1), (i + 1, j + 1)
    else:
        a, b = (i, j), (i, j + 1)
    fa = F[a[1], a[0]]
    fb = F[b[1], b[0]]
    t = fa / (fa - fb)
    za = x[a[0]] + 1j * x[a[1]]
    zb = x[b[0]] + 1j * x[b[1]]
    return za + t * (zb - za)


def _edge_id(i, j, e, n):
    if e == 0:
        return j * n + i
    if e == 2:
        return (j + 1) * n + i
    if e == 3:
        return n * n + j * n + i
    return n * n + j * n + i + 1


def winding_number(poly, z):
    d = np.asarray(poly)[:, None] - np.atleast_1d(z)[None, :]
    ang = np.angle(d[1:] / d[:-1])
    return np.sum(ang, axis=0) / (2 * np.pi)


def marching_squares(F, x):
    """Closed polylines of the zero set of F sampled on the square grid x * x.

    F is indexed F[j, i] at x[i] + 1j * x[j]. Cells are decided by the sign
    pattern of their corners; saddles use the mean of the four corners.
    """
    n = x.size
    inside = F < 0
    case = (inside[:-1, :-1] * 1 + inside[:-1, 1:] * 2 + inside[1:, 1:] * 4 + inside[1:, :-1] * 8)
    centre = (F[:-1, :-1] + F[:-1, 1:] + F[1:, 1:] + F[1:, :-1]) / 4
    jj, ii = np.nonzero((case != 0) & (case != 15))
    segments = []
    for i, j in zip(ii.tolist(), jj.tolist()):
        c = int(case[j, i])
        segs = _SADDLES[(c, bool(centre[j, i] < 0))] if c in (5, 10) else _SEGMENTS[c]
        for e1, e2 in segs:
            segments.append(((i, j, e1), (i, j, e2)))

    by_edge = {}
    for k, (s1, s2) in enumerate(segments):
        for s in (s1, s2):
            by_edge.setdefault(_edge_id(*s, n), []).append(k)

    used = np.zeros(len(segments), dtype=bool)
    polylines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        s1, s2 = segments[start]
        chain = [s1, s2]
        first = _edge_id(*s1, n)
        cur = _edge_id(*s2, n)
        closed = False
        while True:
            nxt = [k for k in by_edge.get(cur, []) if not used[k]]
            if not nxt:
                closed = cur == first
                break
            k = nxt[0]
            used[k] = True
            a, b = segments[k]
            s_next = b if _edge_id(*a, n) == cur else a
            chain.append(s_next)
            cur = _edge_id(*s_next, n)
        if not closed:
            raise ContourOpen("level set reaches the grid boundary")
        pts = np.array([_edge_points(i, j, e, x, F) for i, j, e in chain])
        pts[-1] = pts[0]
        polylines.append(pts)
    return polylines


def level_contour(B, eps, resolution=2**9, require_enclosed=True):
    """Contours of {|B| = eps} for a finite Blaschke product on a resolution^2 grid."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if resolution < 4 or resolution > 2**12 or resolution & (resolution - 1):
        raise ValueError("resolution must be a power of two <= 2**12")
    x = np.linspace(-1.0, 1.0, resolution)
    Z = x[None, :] + 1j * x[:, None]
    mod = np.ones(Z.shape)
    disc = np.abs(Z) < 1
    mod[disc] = np.abs(B(Z[disc]))
    F = mod - eps
    polylines = marching_squares(F, x)
    inside = F < 0
    est = ContourEstimate(polylines, eps, x, mod, inside)
    est.min_inside = float(mod[inside].min()) if inside.any() else float("nan")
    zeros = np.asarray(B.zeros.array) if hasattr(B, "zeros") else np.array([])
    if zeros.size:
        if polylines:
            wind = np.array([winding_number(p, zeros) for p in polylines])
            est.enclosed = np.any(np.abs(wind) > 0.5, axis=0)
        else:
            est.enclosed = np.zeros(zeros.size, dtype=bool)
        if require_enclosed and not est.enclosed.all():
            raise GridTooCoarse(f"{int((~est.enclosed).sum())} zero(s) not enclosed at resolution {resolution}")
    return est


def carleson_norm(contour, levels=10, return_history=False):
    """sup over dyadic boxes (levels 0..levels) of contour length in box / box depth."""
    if levels > 12:
        raise ValueError("at most 12 box levels")
    if not contour.polylines:
        return (0.0, [0.0] * (levels + 1)) if return_history else 0.0
    mids, lens = [], []
    for p in contour.polylines:
        mids.append((p[1:] + p[:-1]) / 2)
        lens.append(np.abs(np.diff(p)))
    mid = np.concatenate(mids)
    ln = np.concatenate(lens)
    r = np.abs(mid)
    th = np.mod(np.angle(mid), 2 * np.pi)
    history = []
    best = 0.0
    for j in range(levels + 1):
        depth = 2.0**-j
        sel = r >= 1 - depth
        idx = np.minimum((th[sel] / (2 * np.pi) * 2**j).astype(int), 2**j - 1)
        per_box = np.bincount(idx, weights=ln[sel], minlength=2**j)
        best = max(best, float(per_box.max()) / depth if per_box.size else 0.0)
        history.append(best)
    contour.history = history
    return (best, history) if return_history else best
