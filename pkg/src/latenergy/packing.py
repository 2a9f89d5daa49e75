"""Bijective packing of small integer vectors into single int64 keys.

A vector v in Z^d with |v_i| <= half is packed as the base-B integer
sum(v_i * B^(d-1-i)) with B = 2*half + 1.  The map is linear, so packed
keys of sums are sums of packed keys (when the base accommodates the
result), and it is order-preserving: sorting packed keys sorts the
vectors lexicographically.
"""

import numpy as np

# keep |key| < 2^62 so sums of two keys stay inside int64
_CAPACITY = 1 << 62


def base_for(half: int) -> int:
    """Base accommodating coordinates in [-half, half]."""
    return 2 * int(half) + 1


def check_capacity(base: int, d: int) -> None:
    if base ** d >= _CAPACITY:
        raise OverflowError(
            f"packed keys would overflow int64 (base {base}, dimension {d}); "
            "reduce the coordinate bound"
        )


def pack(points: np.ndarray, base: int) -> np.ndarray:
    """Pack rows of an (N, d) int64 array into N int64 keys."""
    d = points.shape[1]
    check_capacity(base, d)
    keys = points[:, 0].astype(np.int64).copy()
    for j in range(1, d):
        keys *= base
        keys += points[:, j]
    return keys


def unpack(keys: np.ndarray, d: int, base: int) -> np.ndarray:
    """Inverse of pack; returns an (N, d) int64 array."""
    half = (base - 1) // 2
    out = np.empty((len(keys), d), np.int64)
    rem = keys.astype(np.int64).copy()
    for j in range(d - 1, -1, -1):
        digit = (rem + half) % base - half
        out[:, j] = digit
        rem -= digit
        rem //= base
    return out


def max_abs(points: np.ndarray) -> int:
    if points.size == 0:
        return 0
    return int(np.abs(points).max())
