"""Lattice point families: spheres S_{d,m}, truncated paraboloids, orthants.

Point sets are stored as deduplicated (N, d) int64 arrays in strictly
increasing lexicographic order, tagged with provenance (family, m) so that
downstream operations can check preconditions cheaply.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .errors import BudgetExceeded

FAMILIES = ("sphere", "paraboloid", "derived")

# documented desk-scale enumeration budgets
MAX_SPHERE3_M = 10 ** 6
MAX_SPHERE4_M = 10 ** 4
MAX_PARABOLOID_M = 100  # (2m+1)^3 points; keeps materialization in memory


def _lex_canonical(points: np.ndarray) -> np.ndarray:
    """Sort rows lexicographically and drop duplicates."""
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array")
    if len(pts) == 0:
        return pts
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]
    keep = np.r_[True, np.any(pts[1:] != pts[:-1], axis=1)]
    return pts[keep]


@dataclass(frozen=True)
class PointSet:
    """A canonically ordered, duplicate-free finite set of lattice points."""

    d: int
    family: str
    m: int | None
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.points.ndim != 2 or self.points.shape[1] != self.d:
            raise ValueError("points shape does not match dimension")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return (tuple(int(c) for c in p) for p in self.points)

    def __contains__(self, point) -> bool:
        p = np.ascontiguousarray(point, dtype=np.int64)
        if p.shape != (self.d,):
            return False
        if not hasattr(self, "_rowset"):
            rows = np.ascontiguousarray(self.points)
            object.__setattr__(self, "_rowset", {r.tobytes() for r in rows})
        return p.tobytes() in self._rowset

    def max_abs(self) -> int:
        if len(self) == 0:
            return 0
        return int(np.abs(self.points).max())

    def derived(self, points: np.ndarray) -> "PointSet":
        """A derived set in the same ambient dimension, canonicalized."""
        return PointSet(self.d, "derived", None, _lex_canonical(points))


def pointset(points, d: int, family: str = "derived", m: int | None = None) -> PointSet:
    """Build a PointSet from raw points, canonicalizing and validating."""
    pts = _lex_canonical(np.asarray(points, dtype=np.int64).reshape(-1, d))
    if family == "sphere":
        if m is None or not np.all((pts * pts).sum(axis=1) == m):
            raise ValueError("sphere family requires every squared norm == m")
    if family == "paraboloid":
        if d != 4:
            raise ValueError("paraboloid family is 4-dimensional")
        if m is None or not (
            np.all((pts[:, :3] * pts[:, :3]).sum(axis=1) == pts[:, 3])
            and np.all(np.abs(pts[:, :3]) <= m)
        ):
            raise ValueError("paraboloid points must be (n1,n2,n3,|n|^2), |n_i| <= m")
    return PointSet(d, family, m, pts)


def enumerate_sphere(d: int, m: int) -> PointSet:
    """Exact integer solutions of x_1^2 + ... + x_d^2 = m."""
    if d not in (3, 4):
        raise ValueError(f"dimension must be 3 or 4, got {d}")
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    if d == 3:
        if m > MAX_SPHERE3_M:
            raise ValueError(f"m={m} exceeds the d=3 enumeration budget {MAX_SPHERE3_M}")
        pts = kernels.sphere3_points(m)
    else:
        if m > MAX_SPHERE4_M:
            raise ValueError(f"m={m} exceeds the d=4 enumeration budget {MAX_SPHERE4_M}")
        pts = kernels.sphere4_points(m)
    return PointSet(d, "sphere", m, pts)


def enumerate_paraboloid(m: int) -> PointSet:
    """Truncated paraboloid {(n1,n2,n3,n1^2+n2^2+n3^2) : -m <= n_i <= m}."""
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    if m > MAX_PARABOLOID_M:
        raise BudgetExceeded(
            f"paraboloid m={m} would materialize {(2 * m + 1) ** 3} points; "
            f"budget is m <= {MAX_PARABOLOID_M}"
        )
    ax = np.arange(-m, m + 1, dtype=np.int64)
    g = np.stack(np.meshgrid(ax, ax, ax, indexing="ij"), axis=-1).reshape(-1, 3)
    h = (g * g).sum(axis=1)
    pts = np.concatenate([g, h[:, None]], axis=1)
    return PointSet(4, "paraboloid", m, _lex_canonical(pts))


def legendre_admissible(m: int) -> bool:
    """True iff m is not of the form 4^a (8b + 7); equivalent to S_{3,m} != empty."""
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    while m % 4 == 0:
        m //= 4
    return m % 8 != 7


ZERO, POSITIVE, NEGATIVE = "zero", "positive", "negative"
_SIGNS = (ZERO, POSITIVE, NEGATIVE)


@dataclass(frozen=True)
class OrthantPattern:
    """A sign pattern over coordinates, one of {zero, positive, negative} each."""

    entries: tuple

    def __post_init__(self):
        if any(e not in _SIGNS for e in self.entries):
            raise ValueError(f"entries must be drawn from {_SIGNS}")

    @property
    def d(self) -> int:
        return len(self.entries)


def all_orthant_patterns(d: int):
    for entries in itertools.product(_SIGNS, repeat=d):
        yield OrthantPattern(entries)


def restrict_to_orthant(A: PointSet, p: OrthantPattern) -> PointSet:
    """Subset of A whose coordinate signs match the pattern exactly."""
    if p.d != A.d:
        raise ValueError(f"pattern length {p.d} != dimension {A.d}")
    mask = np.ones(len(A), dtype=bool)
    for j, e in enumerate(p.entries):
        col = A.points[:, j]
        if e == ZERO:
            mask &= col == 0
        elif e == POSITIVE:
            mask &= col > 0
        else:
            mask &= col < 0
    return PointSet(A.d, "derived", None, A.points[mask])


def positive_orthant(A: PointSet) -> PointSet:
    """A restricted to the open all-positive orthant."""
    return restrict_to_orthant(A, OrthantPattern((POSITIVE,) * A.d))


# --- point-set text format: "d m family count" header, one point per line ---

def write_pointset(A: PointSet, fh) -> None:
    m = "-" if A.m is None else str(A.m)
    fh.write(f"{A.d} {m} {A.family} {len(A)}\n")
    for row in A.points:
        fh.write(" ".join(str(int(c)) for c in row) + "\n")


def read_pointset(fh) -> PointSet:
    header = fh.readline().split()
    if len(header) != 4:
        raise ValueError("bad point-set header, expected 'd m family count'")
    d = int(header[0])
    m = None if header[1] == "-" else int(header[1])
    family = header[2]
    count = int(header[3])
    rows = []
    prev = None
    for i in range(count):
        parts = fh.readline().split()
        if len(parts) != d:
            raise ValueError(f"point line {i + 1}: expected {d} coordinates")
        row = tuple(int(x) for x in parts)
        if prev is not None and row <= prev:
            raise ValueError(f"point line {i + 1}: not in strictly increasing order")
        prev = row
        rows.append(row)
    pts = np.array(rows, dtype=np.int64).reshape(-1, d)
    return pointset(pts, d, family, m)
