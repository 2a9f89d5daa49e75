"""Numba-accelerated kernels (see backend.py for selection)."""

import numpy as np
from numba import njit


@njit(cache=True)
def _isqrt(n):
    if n < 0:
        return -1
    r = np.int64(np.sqrt(np.float64(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def _sphere3_fill(m, out):
    r = _isqrt(m)
    k = 0
    for x in range(-r, r + 1):
        xx = x * x
        for y in range(-r, r + 1):
            rem = m - xx - y * y
            if rem < 0:
                continue
            z = _isqrt(rem)
            if z * z != rem:
                continue
            if out is not None:
                out[k, 0] = x
                out[k, 1] = y
                out[k, 2] = z
            k += 1
            if z > 0:
                if out is not None:
                    out[k, 0] = x
                    out[k, 1] = y
                    out[k, 2] = -z
                k += 1
    return k


@njit(cache=True)
def _sphere4_fill(m, out):
    r = _isqrt(m)
    k = 0
    for x in range(-r, r + 1):
        xx = x * x
        for y in range(-r, r + 1):
            xy = xx + y * y
            if xy > m:
                continue
            for z in range(-r, r + 1):
                rem = m - xy - z * z
                if rem < 0:
                    continue
                w = _isqrt(rem)
                if w * w != rem:
                    continue
                if out is not None:
                    out[k, 0] = x
                    out[k, 1] = y
                    out[k, 2] = z
                    out[k, 3] = w
                k += 1
                if w > 0:
                    if out is not None:
                        out[k, 0] = x
                        out[k, 1] = y
                        out[k, 2] = z
                        out[k, 3] = -w
                    k += 1
    return k


def sphere3_points(m: int) -> np.ndarray:
    n = _sphere3_fill(m, None)
    out = np.empty((n, 3), np.int64)
    _sphere3_fill(m, out)
    return _lexsorted(out)


def sphere4_points(m: int) -> np.ndarray:
    n = _sphere4_fill(m, None)
    out = np.empty((n, 4), np.int64)
    _sphere4_fill(m, out)
    return _lexsorted(out)


def _lexsorted(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    order = np.lexsort(pts.T[::-1])
    return pts[order]


@njit(cache=True)
def _fill_sums(ka, kb, s):
    t = 0
    for i in range(len(ka)):
        a = ka[i]
        for j in range(len(kb)):
            s[t] = a + kb[j]
            t += 1


@njit(cache=True)
def _fill_sums_weighted(ka, ca, kb, cb, s, w):
    t = 0
    for i in range(len(ka)):
        a = ka[i]
        wa = ca[i]
        for j in range(len(kb)):
            s[t] = a + kb[j]
            w[t] = wa * cb[j]
            t += 1


@njit(cache=True)
def _run_length(s):
    n = len(s)
    nk = 1
    for i in range(1, n):
        if s[i] != s[i - 1]:
            nk += 1
    keys = np.empty(nk, np.int64)
    counts = np.zeros(nk, np.int64)
    k = 0
    keys[0] = s[0]
    counts[0] = 1
    for i in range(1, n):
        if s[i] != s[i - 1]:
            k += 1
            keys[k] = s[i]
            counts[k] = 1
        else:
            counts[k] += 1
    return keys, counts


@njit(cache=True)
def _weighted_reduce(s, w, order):
    n = len(s)
    nk = 1
    for i in range(1, n):
        if s[order[i]] != s[order[i - 1]]:
            nk += 1
    keys = np.empty(nk, np.int64)
    counts = np.zeros(nk, np.int64)
    k = 0
    keys[0] = s[order[0]]
    counts[0] = w[order[0]]
    for i in range(1, n):
        oi = order[i]
        if s[oi] != s[order[i - 1]]:
            k += 1
            keys[k] = s[oi]
            counts[k] = w[oi]
        else:
            counts[k] += w[oi]
    return keys, counts


def sum_counts_chunk(ka, ca, kb, cb):
    """Same contract as _kernels_numpy.sum_counts_chunk.

    Fill and reduction run as jitted scalar loops; the sort itself goes
    through numpy, whose SIMD integer sort beats a scalar quicksort.
    """
    if len(ka) == 0 or len(kb) == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    n = len(ka) * len(kb)
    if ca is None and cb is None:
        s = np.empty(n, np.int64)
        _fill_sums(ka, kb, s)
        s.sort()
        return _run_length(s)
    ca_ = np.ones(len(ka), np.int64) if ca is None else ca
    cb_ = np.ones(len(kb), np.int64) if cb is None else cb
    s = np.empty(n, np.int64)
    w = np.empty(n, np.int64)
    _fill_sums_weighted(ka, ca_, kb, cb_, s, w)
    order = np.argsort(s, kind="stable")
    return _weighted_reduce(s, w, order)
