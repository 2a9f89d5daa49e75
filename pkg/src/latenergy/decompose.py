"""Greedy slice-peeling decomposition A = X  ∪  C_1 ∪ ... ∪ C_r.

While some n has pair representation count r_2(A_i, n) >= threshold, the
algorithm peels the slice C_{n, A_i} = A_i ∩ (n - A_i), choosing the n with
the largest count (ties to the lexicographically smallest n).  The leftover X
satisfies r_2(X, n) < threshold for every n.  The pair-sum table is maintained
incrementally: peeling C subtracts the contributions of removed points instead
of recounting all pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .energy import sum_counts
from .lattice import PointSet, all_orthant_patterns, restrict_to_orthant
from .packing import base_for, pack, unpack

DEFAULT_DELTA = Fraction(1, 1392)


def ceil_pow(n: int, exponent: Fraction) -> int:
    """Smallest integer t with t >= n**exponent, by exact integer powering."""
    if n < 0 or exponent < 0:
        raise ValueError("need n >= 0 and exponent >= 0")
    if n == 0:
        return 0
    p, q = exponent.numerator, exponent.denominator
    target = n ** p
    lo, hi = 1, 1
    while hi ** q < target:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** q >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def floor_pow(n: int, exponent: Fraction) -> int:
    """Largest integer t with t <= n**exponent."""
    t = ceil_pow(n, exponent)
    p, q = exponent.numerator, exponent.denominator
    return t if t ** q == n ** p else t - 1


def peel_threshold(n_points: int, delta: Fraction = DEFAULT_DELTA) -> int:
    """ceil(N^(2/3 + delta)), the peeling threshold at set size N."""
    return ceil_pow(n_points, Fraction(2, 3) + delta)


def peel_cap(n_points: int, delta: Fraction = DEFAULT_DELTA) -> int:
    """floor(N^(1/3 - delta)), the bound on the number of peels."""
    return floor_pow(n_points, Fraction(1, 3) - delta)


@dataclass(frozen=True)
class Decomposition:
    X: PointSet
    peels: tuple  # of (n: tuple, C: PointSet), in peel order
    threshold: int
    N: int
    delta: Fraction | None = None

    @property
    def r(self) -> int:
        return len(self.peels)

    def Y(self) -> np.ndarray:
        if not self.peels:
            return np.zeros((0, self.X.d), np.int64)
        return np.concatenate([C.points for _, C in self.peels])


class _PairTable:
    """Incremental ordered-pair-sum counts over a shrinking point set."""

    def __init__(self, A: PointSet):
        self.d = A.d
        self.base = base_for(2 * A.max_abs() + 1)
        self.keys = pack(A.points, self.base)  # sorted, unique
        sk, sc = sum_counts(self.keys, None, self.keys, None)
        self.sums = dict(zip(sk.tolist(), sc.tolist()))

    def argmax(self):
        """(packed n, count) with maximal count, ties to smallest packed n."""
        best_k, best_c = None, -1
        for k, c in self.sums.items():
            if c > best_c or (c == best_c and k < best_k):
                best_k, best_c = k, c
        return best_k, best_c

    def remove(self, removed_keys: np.ndarray):
        """Subtract pairs with at least one element among removed_keys."""
        old = self.keys
        mask = np.isin(old, removed_keys, assume_unique=True)
        remaining = old[~mask]
        dec_k1, dec_c1 = sum_counts(removed_keys, None, old, None)
        dec_k2, dec_c2 = sum_counts(remaining, None, removed_keys, None)
        for dk, dc in ((dec_k1, dec_c1), (dec_k2, dec_c2)):
            for k, c in zip(dk.tolist(), dc.tolist()):
                left = self.sums[k] - c
                if left:
                    self.sums[k] = left
                else:
                    del self.sums[k]
        self.keys = remaining


def xy_decompose(A: PointSet, threshold: int,
                 delta: Fraction | None = None) -> Decomposition:
    """Peel maximal slices until every pair-sum count drops below threshold."""
    if len(A) == 0:
        raise ValueError("cannot decompose an empty set")
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    table = _PairTable(A)
    peels = []
    while table.sums:
        nk, count = table.argmax()
        if count < threshold:
            break
        # C_{n, A_i}: keys k in A_i with n - k also in A_i
        keys = table.keys
        ck = np.intersect1d(keys, nk - keys, assume_unique=False)
        n_point = tuple(int(x) for x in unpack(np.array([nk]), A.d, table.base)[0])
        C = A.derived(unpack(ck, A.d, table.base))
        peels.append((n_point, C))
        table.remove(ck)
    X = A.derived(unpack(table.keys, A.d, table.base))
    return Decomposition(X, tuple(peels), threshold, len(A), delta)


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    failed_clause: str | None = None


def verify_decomposition(A: PointSet, D: Decomposition) -> VerifyReport:
    """Recheck every Decomposition invariant from scratch."""
    parts = [D.X.points] + [C.points for _, C in D.peels]
    sizes = sum(len(p) for p in parts)
    allpts = np.concatenate([p for p in parts if len(p)]) if sizes else np.zeros((0, A.d), np.int64)
    union = A.derived(allpts)
    if len(union) != sizes:
        return VerifyReport(False, "parts are not pairwise disjoint")
    if len(union) != len(A) or not np.array_equal(union.points, A.points):
        return VerifyReport(False, "parts do not cover A exactly")
    if D.N != len(A):
        return VerifyReport(False, "recorded N differs from |A|")
    for i, (_, C) in enumerate(D.peels):
        if len(C) < D.threshold:
            return VerifyReport(False, f"peel {i} smaller than threshold")
    if len(D.peels) * D.threshold > len(A):
        return VerifyReport(False, "too many peels for the threshold")
    if len(D.X):
        base = base_for(2 * D.X.max_abs() + 1)
        keys = pack(D.X.points, base)
        _, counts = sum_counts(keys, None, keys, None)
        if len(counts) and int(counts.max()) >= D.threshold:
            return VerifyReport(False, "X retains a pair-sum count >= threshold")
    return VerifyReport(True)


def orthant_pipeline(A: PointSet):
    """Partition a 4-d set into the 3^4 sign cells, flagging negligible ones.

    Cells whose pattern pins two or more coordinates to zero sit on a circle
    (or smaller section) of the sphere and stay tiny; they are flagged so the
    caller can drop them before the peeling stage.
    """
    if A.d != 4:
        raise ValueError("orthant pipeline expects dimension 4")
    cells = []
    for pat in all_orthant_patterns(4):
        cell = restrict_to_orthant(A, pat)
        negligible = sum(e == "zero" for e in pat.entries) >= 2
        cells.append((pat, cell, negligible))
    return cells
