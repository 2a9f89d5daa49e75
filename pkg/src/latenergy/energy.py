"""Exact representation functions, additive energies, sumsets and level sets.

r_s(A, .) is built by s-1 convolution passes over packed int64 keys: the
packing is linear, so key arithmetic is sum arithmetic.  All counts are exact
integers; computations escalate to Python ints when an int64 overflow is
possible.  The only floating point lives in moment_via_dft, whose result is
rounded back to the exact integer it must equal and whose residual is checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import BudgetExceeded
from .lattice import PointSet
from .packing import base_for, max_abs, pack, unpack

# elements per convolution chunk; bounds transient memory
CHUNK_ELEMS = 1 << 24

DEFAULT_SUPPORT_BUDGET = 10 ** 8
DEFAULT_TUPLE_BUDGET = 10 ** 8
DEFAULT_GRID_BUDGET = 10 ** 8


def sum_counts(ka, ca, kb, cb, chunk_elems: int = CHUNK_ELEMS):
    """Unique keys of all pairwise key sums with multiplied weights, chunked."""
    if len(ka) == 0 or len(kb) == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    rows = max(1, chunk_elems // len(kb))
    parts = []
    for lo in range(0, len(ka), rows):
        hi = min(lo + rows, len(ka))
        parts.append(
            kernels.sum_counts_chunk(
                ka[lo:hi], None if ca is None else ca[lo:hi], kb, cb
            )
        )
    if len(parts) == 1:
        return parts[0]
    keys = np.concatenate([p[0] for p in parts])
    counts = np.concatenate([p[1] for p in parts])
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    counts = counts[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    return keys[starts], np.add.reduceat(counts, starts)


@dataclass(frozen=True)
class RepFn:
    """r_s(A, .): packed support keys (sorted) with exact positive counts."""

    s: int
    d: int
    base: int
    keys: np.ndarray
    counts: np.ndarray

    def __len__(self) -> int:
        return len(self.keys)

    def support_points(self) -> np.ndarray:
        return unpack(self.keys, self.d, self.base)

    def __getitem__(self, point) -> int:
        p = np.asarray(point, dtype=np.int64).reshape(1, self.d)
        k = pack(p, self.base)[0]
        i = np.searchsorted(self.keys, k)
        if i < len(self.keys) and self.keys[i] == k:
            return int(self.counts[i])
        return 0

    def items(self):
        pts = self.support_points()
        for row, c in zip(pts, self.counts):
            yield tuple(int(x) for x in row), int(c)

    def total(self) -> int:
        return int(self.counts.sum(dtype=object)) if len(self) else 0


@dataclass(frozen=True)
class EnergyValue:
    s: int
    k: int
    value: int

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value


def rep_fn(A: PointSet, s: int, support_budget: int = DEFAULT_SUPPORT_BUDGET) -> RepFn:
    """counts[n] = number of ordered s-tuples from A summing to n."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    base = base_for(s * A.max_abs())
    if len(A) == 0:
        return RepFn(s, A.d, base, np.zeros(0, np.int64), np.zeros(0, np.int64))
    est = min(len(A) ** s, base ** A.d)
    if est > support_budget:
        raise BudgetExceeded(
            f"estimated rep_fn support {est} exceeds budget {support_budget}"
        )
    ka = pack(A.points, base)
    keys, counts = ka.copy(), None
    for _ in range(s - 1):
        keys, counts = sum_counts(keys, counts, ka, None)
    if counts is None:
        counts = np.ones(len(keys), np.int64)
    return RepFn(s, A.d, base, keys, counts)


def _power_sum(counts: np.ndarray, k: int) -> int:
    """Sum of counts**k, exact."""
    if len(counts) == 0:
        return 0
    cmax = int(counts.max())
    if cmax ** k * len(counts) < (1 << 62):
        acc = counts.copy()
        for _ in range(k - 1):
            acc *= counts
        return int(acc.sum())
    return int(sum(int(c) ** k for c in counts))


def energy(A: PointSet, s: int, k: int = 2, **kw) -> EnergyValue:
    """E_{s,k}(A) = sum over n of r_s(A, n)^k, exact."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    r = rep_fn(A, s, **kw)
    return EnergyValue(s, k, _power_sum(r.counts, k))


def energy_brute(A: PointSet, s: int, k: int = 2,
                 tuple_budget: int = DEFAULT_TUPLE_BUDGET) -> EnergyValue:
    """Oracle for energy: direct enumeration of all |A|^s ordered s-tuples."""
    n = len(A)
    if n ** max(s, k) > tuple_budget:
        raise BudgetExceeded(f"|A|^{max(s, k)} = {n ** max(s, k)} exceeds tuple budget")
    table: dict = {}
    pts = [tuple(int(c) for c in p) for p in A.points]
    for combo in itertools.product(pts, repeat=s):
        key = tuple(sum(cs) for cs in zip(*combo))
        table[key] = table.get(key, 0) + 1
    return EnergyValue(s, k, sum(c ** k for c in table.values()))


def sup_rep(A: PointSet, s: int, **kw):
    """A maximizer of r_s(A, .) and its count; ties to the lex-smallest point."""
    if len(A) == 0:
        raise ValueError("sup_rep of an empty set")
    r = rep_fn(A, s, **kw)
    best = int(r.counts.max())
    i = int(np.flatnonzero(r.counts == best)[0])  # keys sorted = lex order
    point = tuple(int(x) for x in unpack(r.keys[i : i + 1], A.d, r.base)[0])
    return point, best


def sumset(A: PointSet, plus: int, minus: int = 0) -> PointSet:
    """{a_1 + ... + a_plus - b_1 - ... - b_minus}, deduplicated."""
    if plus < 0 or minus < 0 or plus + minus < 1:
        raise ValueError("need plus, minus >= 0 and plus + minus >= 1")
    if len(A) == 0:
        return PointSet(A.d, "derived", None, np.zeros((0, A.d), np.int64))
    base = base_for((plus + minus) * A.max_abs())
    kp = pack(A.points, base)
    terms = [kp] * plus + [-kp] * minus
    keys = terms[0]
    for t in terms[1:]:
        keys, _ = sum_counts(keys, None, t, None)
    return PointSet(A.d, "derived", None, unpack(np.sort(keys), A.d, base))


@dataclass(frozen=True)
class LevelSetProfile:
    """Sizes of the dyadic level sets {n : 2^j <= r_2(n) < 2^(j+1)}."""

    entries: tuple  # of (j, size), j ascending, size > 0

    def total_support(self) -> int:
        return sum(size for _, size in self.entries)


def level_sets(r: RepFn) -> LevelSetProfile:
    if r.s != 2:
        raise ValueError(f"level sets are defined for 2-fold rep functions, got s={r.s}")
    if len(r) == 0:
        return LevelSetProfile(())
    js = (np.floor(np.log2(r.counts.astype(np.float64)))).astype(np.int64)
    # exact correction of the float log
    js = np.where((np.int64(1) << (js + 1)) <= r.counts, js + 1, js)
    js = np.where((np.int64(1) << js) > r.counts, js - 1, js)
    uj, sizes = np.unique(js, return_counts=True)
    return LevelSetProfile(tuple((int(j), int(c)) for j, c in zip(uj, sizes)))


def moment_via_dft(A: PointSet, s: int, grid_budget: int = DEFAULT_GRID_BUDGET,
                   residual_tol: float = 1e-3) -> EnergyValue:
    """E_{s,2}(A) via the 2s-th moment of the exponential sum on (Z_M)^d.

    M = 2 s max|coord| + 1 exceeds the diameter of differences of s-fold
    sums, so discrete orthogonality makes the moment exactly E_{s,2}(A).
    """
    if len(A) > 64:
        raise BudgetExceeded(f"|A| = {len(A)} exceeds the DFT size cap 64")
    if A.d not in (3, 4):
        raise ValueError("DFT check supports d in {3, 4}")
    M = 2 * s * A.max_abs() + 1
    if M ** A.d > grid_budget:
        raise BudgetExceeded(f"grid size {M}^{A.d} exceeds budget {grid_budget}")
    ind = np.zeros((M,) * A.d, dtype=np.float64)
    if len(A):
        coords = tuple(np.mod(A.points[:, j], M) for j in range(A.d))
        ind[coords] = 1.0
    F = np.fft.fftn(ind)
    val = float((np.abs(F) ** (2 * s)).sum() / M ** A.d)
    nearest = round(val)
    residual = abs(val - nearest)
    if residual >= residual_tol:
        raise ArithmeticError(
            f"DFT moment residual {residual:.3e} exceeds tolerance {residual_tol}"
        )
    return EnergyValue(s, 2, int(nearest))
