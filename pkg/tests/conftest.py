import itertools
import math
import random

import numpy as np
import pytest

import latenergy as le


def brute_sphere(d: int, m: int):
    """Independent oracle: raw box search for x with |x|^2 = m."""
    r = math.isqrt(m)
    pts = [
        p
        for p in itertools.product(range(-r, r + 1), repeat=d)
        if sum(c * c for c in p) == m
    ]
    return sorted(pts)


def divisor_sigma(m: int) -> int:
    """Sum of divisors, by trial division (independent of any enumeration)."""
    total = 0
    for a in range(1, math.isqrt(m) + 1):
        if m % a == 0:
            total += a
            if a != m // a:
                total += m // a
    return total


def pair_table(A):
    """All ordered pair sums of a PointSet, as a dict (brute oracle)."""
    pts = [tuple(int(c) for c in p) for p in A.points]
    table = {}
    for a in pts:
        for b in pts:
            key = tuple(x + y for x, y in zip(a, b))
            table[key] = table.get(key, 0) + 1
    return table


def random_sphere_subset(rng: random.Random, d: int, m_max: int, size_max: int):
    """A nonempty random subset of some nonempty S_{d,m}."""
    while True:
        m = rng.randint(1, m_max)
        S = le.enumerate_sphere(d, m)
        if len(S):
            break
    k = rng.randint(1, min(size_max, len(S)))
    idx = sorted(rng.sample(range(len(S)), k))
    return le.pointset(S.points[idx], d, "derived"), m


@pytest.fixture
def rng():
    return random.Random(20240817)
