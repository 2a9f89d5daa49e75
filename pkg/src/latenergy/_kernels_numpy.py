"""Pure-numpy reference kernels.

Same contracts as _kernels_numba; see backend.py.  Everything here is exact
64-bit integer arithmetic; floating point appears only as a seed for integer
square roots, which are then corrected exactly.
"""

import numpy as np


def _isqrt_exact(vals: np.ndarray) -> np.ndarray:
    """Floor square root of a nonnegative int64 array, exact."""
    r = np.sqrt(vals.astype(np.float64)).astype(np.int64)
    # float seed can be off by one in either direction
    r = np.where(r * r > vals, r - 1, r)
    r = np.where((r + 1) * (r + 1) <= vals, r + 1, r)
    return r


def sphere3_points(m: int) -> np.ndarray:
    """All integer (x, y, z) with x^2 + y^2 + z^2 == m, lexicographically sorted."""
    r = int(_isqrt_exact(np.array([m], dtype=np.int64))[0])
    ax = np.arange(-r, r + 1, dtype=np.int64)
    x, y = np.meshgrid(ax, ax, indexing="ij")
    x = x.ravel()
    y = y.ravel()
    rem = m - x * x - y * y
    ok = rem >= 0
    x, y, rem = x[ok], y[ok], rem[ok]
    z = _isqrt_exact(rem)
    sq = z * z == rem
    x, y, z = x[sq], y[sq], z[sq]
    pos = z > 0
    pts = np.concatenate(
        [
            np.stack([x, y, z], axis=1),
            np.stack([x[pos], y[pos], -z[pos]], axis=1),
        ]
    )
    return _lexsorted(pts)


def sphere4_points(m: int) -> np.ndarray:
    """All integer (x, y, z, w) with squared norm m, lexicographically sorted."""
    r = int(_isqrt_exact(np.array([m], dtype=np.int64))[0])
    ax = np.arange(-r, r + 1, dtype=np.int64)
    chunks = []
    for xv in ax:
        rem0 = m - int(xv) * int(xv)
        y, z = np.meshgrid(ax, ax, indexing="ij")
        y = y.ravel()
        z = z.ravel()
        rem = rem0 - y * y - z * z
        ok = rem >= 0
        y, rem = y[ok], rem[ok]
        z = z[ok]
        w = _isqrt_exact(rem)
        sq = w * w == rem
        y, z, w = y[sq], z[sq], w[sq]
        x = np.full(len(y), xv, dtype=np.int64)
        pos = w > 0
        chunks.append(np.stack([x, y, z, w], axis=1))
        chunks.append(np.stack([x[pos], y[pos], z[pos], -w[pos]], axis=1))
    pts = np.concatenate(chunks) if chunks else np.zeros((0, 4), np.int64)
    return _lexsorted(pts)


def _lexsorted(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def sum_counts_chunk(ka, ca, kb, cb):
    """Unique values of ka[i] + kb[j] with weights ca[i] * cb[j].

    Returns (keys, counts), keys strictly increasing.  Caller is responsible
    for keeping len(ka) * len(kb) within the memory budget.
    """
    if len(ka) == 0 or len(kb) == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    s = (ka[:, None] + kb[None, :]).ravel()
    if ca is None and cb is None:
        # uniform weights need no permutation, only the sorted values
        s.sort()
        starts = np.flatnonzero(np.r_[True, s[1:] != s[:-1]])
        keys = s[starts]
        counts = np.diff(np.r_[starts, len(s)]).astype(np.int64)
        return keys, counts
    order = np.argsort(s, kind="stable")
    ss = s[order]
    starts = np.flatnonzero(np.r_[True, ss[1:] != ss[:-1]])
    keys = ss[starts]
    ca_ = np.ones(len(ka), np.int64) if ca is None else ca
    cb_ = np.ones(len(kb), np.int64) if cb is None else cb
    w = (ca_[:, None] * cb_[None, :]).ravel()[order]
    counts = np.add.reduceat(w, starts)
    return keys, counts
