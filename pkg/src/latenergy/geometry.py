"""Bisector hyperplanes, slices, translate intersections, incidences, duality.

All membership tests are exact: integer arithmetic for lattice points on
integer hyperplanes and sphere translates, Fraction arithmetic in the dual
space.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded
from .lattice import PointSet
from .packing import base_for, pack, unpack


@dataclass(frozen=True)
class Hyperplane:
    """Integer hyperplane a . x = b, gcd-reduced with canonical sign."""

    a: tuple
    b: int

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        b = int(self.b)
        if not any(a):
            raise ValueError("hyperplane needs a nonzero normal vector")
        g = math.gcd(*(abs(x) for x in a), abs(b))
        a = tuple(x // g for x in a)
        b //= g
        lead = next(x for x in a if x)
        if lead < 0:
            a = tuple(-x for x in a)
            b = -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def d(self) -> int:
        return len(self.a)

    def contains(self, point) -> bool:
        return sum(ai * xi for ai, xi in zip(self.a, point)) == self.b

    def contains_mask(self, points: np.ndarray) -> np.ndarray:
        return points @ np.array(self.a, dtype=np.int64) == self.b


@dataclass(frozen=True)
class SphereTranslate:
    """The variety x + S_{d,m}: points p with |p - x|^2 = m."""

    center: tuple
    m: int

    @property
    def d(self) -> int:
        return len(self.center)

    def contains(self, point) -> bool:
        return sum((p - c) ** 2 for p, c in zip(point, self.center)) == self.m

    def contains_mask(self, points: np.ndarray) -> np.ndarray:
        diff = points - np.array(self.center, dtype=np.int64)
        return (diff * diff).sum(axis=1) == self.m


def bisector_hyperplane(n) -> Hyperplane:
    """The plane 2 (n . x) = |n|^2 containing every pair-slice of sum n."""
    n = tuple(int(x) for x in n)
    if not any(n):
        raise ValueError("bisector hyperplane is undefined for n = 0")
    norm2 = sum(x * x for x in n)
    return Hyperplane(tuple(2 * x for x in n), norm2)


def slice_set(A: PointSet, n) -> PointSet:
    """C_{n,A} = A intersect (n - A); its size equals r_2(A, n)."""
    n = np.asarray(n, dtype=np.int64)
    if n.shape != (A.d,):
        raise ValueError(f"n must have dimension {A.d}")
    if len(A) == 0:
        return A.derived(np.zeros((0, A.d), np.int64))
    half = A.max_abs() + int(np.abs(n).max())
    base = base_for(half)
    keys = pack(A.points, base)
    nk = pack(n.reshape(1, -1), base)[0]
    common = np.intersect1d(keys, nk - keys, assume_unique=False)
    return A.derived(unpack(common, A.d, base))


def _check_shifts(shifts, d: int):
    shifts = [tuple(int(x) for x in s) for s in shifts]
    if not shifts:
        raise ValueError("need at least one shift")
    if len(set(shifts)) != len(shifts):
        raise ValueError("shifts must be distinct")
    if any(len(s) != d for s in shifts):
        raise ValueError("shift dimension mismatch")
    return shifts


def paraboloid_translate_intersection(m: int, shifts,
                                      grid_budget: int = 10 ** 8) -> PointSet:
    """Intersection of translates of the truncated paraboloid, by structure.

    Writing every point of the first translate as s_1 + (n, |n|^2), each
    further shift imposes one linear constraint on n, so with two or more
    distinct shifts the solution set is at most a plane section of the
    coordinate box and the full (2m+1)^3 enumeration is never materialized.
    """
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    shifts = _check_shifts(shifts, 4)
    s1 = shifts[0]
    lo = [-m, -m, -m]
    hi = [m, m, m]
    eqs = []
    empty = PointSet(4, "derived", None, np.zeros((0, 4), np.int64))
    for s in shifts[1:]:
        alpha = tuple(s1[j] - s[j] for j in range(3))
        beta = s1[3] - s[3]
        if not any(alpha):
            return empty  # same spatial shift, different height: no solutions
        # |n + alpha|^2 = |n|^2 + beta  <=>  2 alpha . n = beta - |alpha|^2
        eqs.append((tuple(2 * a for a in alpha),
                    beta - sum(a * a for a in alpha)))
        for j in range(3):
            lo[j] = max(lo[j], -m - alpha[j])
            hi[j] = min(hi[j], m - alpha[j])
    if any(l > h for l, h in zip(lo, hi)):
        return empty
    if not eqs:
        from .lattice import enumerate_paraboloid

        base = enumerate_paraboloid(m)
        return base.derived(base.points + np.array(s1, dtype=np.int64))
    a, c = eqs[0]
    z = max(range(3), key=lambda j: abs(a[j]))
    u, v = (j for j in range(3) if j != z)
    cells = (hi[u] - lo[u] + 1) * (hi[v] - lo[v] + 1)
    if cells > grid_budget:
        raise BudgetExceeded(f"{cells} grid cells exceed budget {grid_budget}")
    U, V = np.meshgrid(
        np.arange(lo[u], hi[u] + 1, dtype=np.int64),
        np.arange(lo[v], hi[v] + 1, dtype=np.int64),
        indexing="ij",
    )
    U, V = U.ravel(), V.ravel()
    num = c - a[u] * U - a[v] * V
    mask = num % a[z] == 0
    Z = np.where(mask, num // a[z], 0)
    mask &= (Z >= lo[z]) & (Z <= hi[z])
    n = np.empty((int(mask.sum()), 3), dtype=np.int64)
    n[:, u], n[:, v], n[:, z] = U[mask], V[mask], Z[mask]
    for a2, c2 in eqs[1:]:
        n = n[n @ np.array(a2, dtype=np.int64) == c2]
    pts = np.concatenate(
        [
            n + np.array(s1[:3], dtype=np.int64),
            (n * n).sum(axis=1)[:, None] + s1[3],
        ],
        axis=1,
    )
    return empty.derived(pts)


def intersect_translates(S: PointSet, shifts) -> PointSet:
    """Exact intersection of the translates shift_i + S."""
    shifts = _check_shifts(shifts, S.d)
    if S.family == "paraboloid" and S.m is not None:
        return paraboloid_translate_intersection(S.m, shifts)
    half = S.max_abs() + max(max(abs(c) for c in s) for s in shifts)
    base = base_for(half)
    cur = None
    for s in shifts:
        keys = pack(S.points + np.array(s, dtype=np.int64), base)
        keys.sort()
        cur = keys if cur is None else np.intersect1d(cur, keys, assume_unique=True)
    return S.derived(unpack(cur, S.d, base))


@dataclass(frozen=True)
class IncidenceReport:
    total: int
    per_variety: tuple  # incidence count of each variety, input order


def _weight_of(w, key, what: str) -> int:
    if w is None:
        return 1
    value = w[key] if not callable(w) else w(key)
    if not isinstance(value, int) or value <= 0:
        raise KeyError(f"missing or non-positive weight for {what} {key!r}")
    return value


def incidences(P: PointSet, V, w=None, w_v=None) -> IncidenceReport:
    """Weighted incidence count sum_{p, v} w(p) w'(v) [p in v], exact."""
    pw = np.array(
        [_weight_of(w, tuple(int(c) for c in p), "point") for p in P.points],
        dtype=np.int64,
    ) if w is not None else None
    total = 0
    per = []
    for v in V:
        mask = v.contains_mask(P.points)
        vc = int(mask.sum())
        per.append(vc)
        vw = _weight_of(w_v, v, "variety") if w_v is not None else 1
        contrib = int(pw[mask].sum()) if pw is not None else vc
        total += vw * contrib
    return IncidenceReport(int(total), tuple(per))


@dataclass(frozen=True)
class KstReport:
    t_max: int
    witness_points: tuple
    witness_varieties: tuple
    mode: str  # "exhaustive" or "sampled"


def kst_witness(P: PointSet, V, s: int, subset_budget: int = 200_000,
                sample: bool = True, seed: int = 0) -> KstReport:
    """Max number of varieties through any s distinct points, with a witness.

    Exhaustive over all s-subsets when their number fits the budget, else a
    uniform seeded sample of subset_budget subsets (mode is reported).
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if not V or len(P) < s:
        return KstReport(0, (), (), "exhaustive")
    inc = np.stack([v.contains_mask(P.points) for v in V])  # (|V|, |P|)
    n = len(P)
    n_subsets = math.comb(n, s)
    if n_subsets <= subset_budget:
        subsets = itertools.combinations(range(n), s)
        mode = "exhaustive"
    elif sample:
        rng = random.Random(seed)
        subsets = (tuple(rng.sample(range(n), s)) for _ in range(subset_budget))
        mode = "sampled"
    else:
        raise BudgetExceeded(
            f"{n_subsets} {s}-subsets exceed budget {subset_budget} and sampling is off"
        )
    best, best_idx = -1, None
    for idx in subsets:
        t = int(inc[:, idx].all(axis=1).sum())
        if t > best:
            best, best_idx = t, idx
    pts = tuple(tuple(int(c) for c in P.points[i]) for i in best_idx)
    vids = tuple(
        v for v, row in zip(V, inc) if all(row[i] for i in best_idx)
    ) if best > 0 else ()
    return KstReport(best, pts, vids, mode)


def dualize(points, planes):
    """Dual transform: point a -> plane a . x = 1; plane a . x = b -> point a / b.

    Inputs must avoid the degenerate sector: planes through the origin and the
    zero point.  Incidence is preserved bit-for-bit in exact rationals.
    """
    dual_planes = []
    for p in points:
        p = tuple(p)
        if not any(p):
            raise ValueError("cannot dualize the zero point")
        dual_planes.append(plane_through_dual(p))
    dual_points = []
    for h in planes:
        if h.b == 0:
            raise ValueError("cannot dualize a plane through the origin")
        dual_points.append(tuple(Fraction(ai, h.b) for ai in h.a))
    return dual_points, dual_planes


def plane_through_dual(point) -> Hyperplane:
    """The integer form of u . x = 1 for a (possibly rational) point u != 0."""
    fracs = [Fraction(c) for c in point]
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    return Hyperplane(tuple(int(f * lcm) for f in fracs), lcm)


def rational_on_plane(u, h: Hyperplane) -> bool:
    """Exact membership of a rational point on an integer plane."""
    return sum(Fraction(ui) * ai for ui, ai in zip(u, h.a)) == h.b
