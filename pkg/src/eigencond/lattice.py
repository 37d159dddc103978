"""Unit-side triangular lattice: enumeration, extremal prefixes, disk counts.

Sites carry integer coordinates (a, b) and live at z = (a + b/2) + i*b*sqrt(3)/2,
so the squared modulus is the integer quadratic form a^2 + a*b + b^2.  All
disk-membership and ordering decisions are made on that exact integer form,
which makes enumeration reproducible bit for bit: points are sorted by
modulus, ties broken by argument in [0, 2*pi), then by (a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ROW_HEIGHT = math.sqrt(3.0) / 2.0  # generator columns are (1, 0) and (1/2, sqrt(3)/2)
CELL_AREA = ROW_HEIGHT             # determinant of the generator matrix

# A closed disk of radius r admits |z| <= r*(1 + slack): lattice moduli are
# irrational except on a sparse set, but radii like r=1 hit points exactly
# and must not be lost to rounding.
_BOUNDARY_SLACK = 8.0 * np.finfo(float).eps

_PAIR_BLOCK = 1 << 21  # pairwise-distance entries held in memory at once


def squared_site_modulus(a: int, b: int) -> int:
    """Exact squared modulus of site (a, b): the integer form a^2 + ab + b^2."""
    return a * a + a * b + b * b


@dataclass(frozen=True)
class LatticePoint:
    """One lattice site: integer coordinates and the complex embedding."""

    a: int
    b: int
    z: complex

    @classmethod
    def from_coords(cls, a: int, b: int) -> "LatticePoint":
        return cls(int(a), int(b), complex(a + 0.5 * b, b * ROW_HEIGHT))

    @property
    def squared_modulus(self) -> int:
        return squared_site_modulus(self.a, self.b)


def nearest_neighbor_distances(points) -> np.ndarray:
    """Distance from each point to its nearest distinct neighbor (brute force).

    Works in blocks of at most ~2M pairwise entries so n up to a few times
    10^4 stays within a small memory footprint.
    """
    z = np.asarray(points, dtype=np.complex128).ravel()
    n = z.size
    if n < 2:
        raise ValueError("nearest-neighbor distances need at least two points")
    out = np.empty(n, dtype=float)
    block = max(1, _PAIR_BLOCK // n)
    for lo in range(0, n, block):
        d = np.abs(z[lo:lo + block, None] - z[None, :])
        rows = np.arange(d.shape[0])
        d[rows, lo + rows] = np.inf
        out[lo:lo + d.shape[0]] = d.min(axis=1)
    return out


def pairwise_min_separation(points) -> float:
    """Exact minimum |z_i - z_j| over distinct pairs."""
    return float(np.min(nearest_neighbor_distances(points)))


class Configuration:
    """Immutable finite multiset of complex points with a cached minimum separation.

    The cache is computed on first access by brute force; constructors that
    know the separation analytically (the lattice prefix, a translation) may
    pass it in.  Values are safe to share across threads.
    """

    def __init__(self, points, min_separation: float | None = None):
        pts = np.array(points, dtype=np.complex128).ravel()
        if pts.size == 0:
            raise ValueError("a configuration needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("configuration points must be finite")
        pts.setflags(write=False)
        self._points = pts
        if min_separation is not None:
            min_separation = float(min_separation)
            if not (math.isfinite(min_separation) and min_separation >= 0.0):
                raise ValueError("min_separation must be finite and nonnegative")
        self._min_sep = min_separation

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def n(self) -> int:
        return self._points.size

    def __len__(self) -> int:
        return self._points.size

    @property
    def min_separation(self) -> float:
        """Minimum pairwise distance; defined only for n >= 2."""
        if self._min_sep is None:
            if self.n < 2:
                raise ValueError("min_separation is undefined for a single point")
            self._min_sep = pairwise_min_separation(self._points)
        return self._min_sep

    def __repr__(self) -> str:
        return f"Configuration(n={self.n})"


def _validate_radius(r) -> float:
    r = float(r)
    if not math.isfinite(r) or r < 0.0:
        raise ValueError(f"radius must be finite and nonnegative, got {r!r}")
    return r


def _scan_rows(limit: float, strict: bool):
    """Yield (a_values, b) per lattice row with a^2 + ab + b^2 (<) <= limit."""
    if limit < 0.0:
        return
    bmax = int(math.floor(math.sqrt(limit / 0.75))) + 1 if limit > 0.0 else 0
    for b in range(-bmax, bmax + 1):
        rem = limit - 0.75 * b * b
        if rem < 0.0:
            continue
        half = math.sqrt(rem)
        a = np.arange(int(math.ceil(-0.5 * b - half)) - 1,
                      int(math.floor(-0.5 * b + half)) + 2, dtype=np.int64)
        q = a * (a + b) + b * b
        a = a[(q < limit) if strict else (q <= limit)]
        if a.size:
            yield a, b


def enumerate_lattice_in_disk(r, closed: bool = True) -> list[LatticePoint]:
    """Every lattice point with |z| <= r (closed, with boundary slack) or |z| < r.

    Deterministic order: by modulus, ties broken by argument in [0, 2*pi),
    then lexicographically by (a, b).
    """
    r = _validate_radius(r)
    if closed:
        limit, strict = (r * (1.0 + _BOUNDARY_SLACK)) ** 2, False
    else:
        limit, strict = r * r, True
    rows = list(_scan_rows(limit, strict))
    if not rows:
        return []
    aa = np.concatenate([a for a, _ in rows])
    bb = np.concatenate([np.full(a.size, b, dtype=np.int64) for a, b in rows])
    q = aa * (aa + bb) + bb * bb
    angle = np.mod(np.arctan2(bb * ROW_HEIGHT, aa + 0.5 * bb), 2.0 * math.pi)
    order = np.lexsort((bb, aa, angle, q))
    return [LatticePoint.from_coords(aa[k], bb[k]) for k in order]


def lattice_count(r) -> int:
    """Number of lattice points in the closed disk of radius r."""
    r = _validate_radius(r)
    limit = (r * (1.0 + _BOUNDARY_SLACK)) ** 2
    return sum(a.size for a, _ in _scan_rows(limit, strict=False))


def first_n_sites(n: int) -> list[LatticePoint]:
    """The first n lattice sites in increasing modulus order (deterministic ties)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    # invert the density count pi r^2 / cell area, then grow until enough
    r = math.sqrt(n * CELL_AREA / math.pi) + 2.0
    while lattice_count(r) < n:
        r *= 1.3
    return enumerate_lattice_in_disk(r, closed=True)[:n]


def first_n_lattice_points(n: int) -> Configuration:
    """Configuration of the first n lattice points by increasing modulus.

    The minimum separation of any lattice subset containing a nearest pair is
    exactly 1, so the cache is set analytically; brute force reproduces it to
    a few ulps (the embedding rounds b*sqrt(3)/2 per row).
    """
    sites = first_n_sites(n)
    z = np.fromiter((s.z for s in sites), dtype=np.complex128, count=len(sites))
    return Configuration(z, min_separation=1.0 if len(sites) >= 2 else None)


def translate_to_centroid(c: Configuration) -> Configuration:
    """Shift a configuration so its mean is zero; distances are unchanged."""
    pts = c.points
    shifted = pts - pts.mean()
    return Configuration(shifted, min_separation=c._min_sep)
