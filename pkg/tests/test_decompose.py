import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

import latenergy as le
from latenergy.decompose import DEFAULT_DELTA, Decomposition

from conftest import pair_table, random_sphere_subset


def test_ceil_floor_pow_small_cases():
    assert le.ceil_pow(0, Fraction(2, 3)) == 0
    assert le.ceil_pow(1, Fraction(2, 3)) == 1
    assert le.ceil_pow(8, Fraction(2, 3)) == 4
    assert le.ceil_pow(9, Fraction(2, 3)) == 5
    assert le.floor_pow(9, Fraction(2, 3)) == 4
    assert le.floor_pow(8, Fraction(1, 3)) == 2
    assert le.ceil_pow(10, Fraction(1, 2)) == 4
    with pytest.raises(ValueError):
        le.ceil_pow(-1, Fraction(1, 2))


def test_pow_helpers_match_float(rng):
    for _ in range(200):
        n = rng.randint(1, 10 ** 6)
        e = Fraction(rng.randint(1, 7), rng.randint(2, 9))
        c, f = le.ceil_pow(n, e), le.floor_pow(n, e)
        approx = n ** float(e)
        assert f <= c <= f + 1
        # float cross-check up to floating-point rounding
        assert math.isclose(c, approx, rel_tol=1e-9, abs_tol=1.0)
        assert math.isclose(f, approx, rel_tol=1e-9, abs_tol=1.0)
        assert c ** e.denominator >= n ** e.numerator
        assert f ** e.denominator <= n ** e.numerator


def test_threshold_and_cap_examples():
    assert le.peel_threshold(100) == 22
    assert le.peel_cap(100) == 4
    assert le.peel_threshold(1) == 1
    assert le.peel_cap(1) == 1
    # delta nudges the exponents off 2/3 and 1/3
    assert le.peel_threshold(10 ** 6) > le.ceil_pow(10 ** 6, Fraction(2, 3)) - 1
    assert le.peel_cap(10 ** 6) <= le.floor_pow(10 ** 6, Fraction(1, 3))


def test_decompose_sphere31_threshold_1():
    S = le.enumerate_sphere(3, 1)
    D = le.xy_decompose(S, 1)
    # n = 0 carries count 6; its slice is all of the symmetric set
    assert D.r == 1
    n, C = D.peels[0]
    assert n == (0, 0, 0)
    assert len(C) == 6 and len(D.X) == 0
    assert le.verify_decomposition(S, D).ok


def test_decompose_no_peels_above_max_count():
    S = le.enumerate_sphere(3, 1)
    D = le.xy_decompose(S, 7)
    assert D.r == 0
    assert np.array_equal(D.X.points, S.points)
    assert le.verify_decomposition(S, D).ok


def test_decompose_peel_trace_is_greedy(rng):
    for _ in range(6):
        A, _ = random_sphere_subset(rng, 4, 60, 16)
        thr = rng.randint(2, 5)
        D = le.xy_decompose(A, thr)
        assert le.verify_decomposition(A, D).ok
        # replay: each peel must match a fresh greedy argmax on the remainder
        remaining = A
        for n, C in D.peels:
            table = pair_table(remaining)
            best = max(table.values())
            assert table[n] == best and best >= thr
            got = {tuple(int(c) for c in p) for p in C.points}
            want = {
                tuple(int(c) for c in p)
                for p in remaining.points
                if tuple(a - int(c) for a, c in zip(n, p)) in
                {tuple(int(x) for x in q) for q in remaining.points}
            }
            assert got == want
            keep = [
                i for i, p in enumerate(remaining.points)
                if tuple(int(c) for c in p) not in got
            ]
            remaining = le.pointset(remaining.points[keep], A.d, "derived")
        assert {tuple(p) for p in remaining.points} == {tuple(p) for p in D.X.points}
        table = pair_table(remaining) if len(remaining) else {}
        assert all(c < thr for c in table.values())


def test_decompose_determinism():
    S = le.enumerate_sphere(4, 30)
    D1 = le.xy_decompose(S, 4)
    D2 = le.xy_decompose(S, 4)
    assert [n for n, _ in D1.peels] == [n for n, _ in D2.peels]
    for (_, C1), (_, C2) in zip(D1.peels, D2.peels):
        assert np.array_equal(C1.points, C2.points)
    assert np.array_equal(D1.X.points, D2.X.points)


def test_decompose_termination_bound(rng):
    for _ in range(8):
        A, _ = random_sphere_subset(rng, rng.choice((3, 4)), 80, 30)
        thr = rng.randint(1, 6)
        D = le.xy_decompose(A, thr)
        assert D.r <= len(A) // max(thr, 1) + 1
        assert sum(len(C) for _, C in D.peels) + len(D.X) == len(A)


def test_decompose_validation():
    S = le.enumerate_sphere(3, 1)
    with pytest.raises(ValueError):
        le.xy_decompose(S, 0)
    empty = le.pointset(np.zeros((0, 3), np.int64), 3)
    with pytest.raises(ValueError):
        le.xy_decompose(empty, 1)


def test_verifier_rejects_tampering():
    S = le.enumerate_sphere(4, 10)
    D = le.xy_decompose(S, 3)
    assert le.verify_decomposition(S, D).ok

    # drop a point from X: cover fails
    if len(D.X):
        bad = replace(D, X=D.X.derived(D.X.points[1:]))
        v = le.verify_decomposition(S, bad)
        assert not v.ok and "cover" in v.failed_clause

    # duplicate a peel: disjointness fails
    if D.peels:
        bad = replace(D, peels=D.peels + D.peels[:1])
        v = le.verify_decomposition(S, bad)
        assert not v.ok and "disjoint" in v.failed_clause

    # wrong recorded N
    bad = replace(D, N=D.N + 1)
    v = le.verify_decomposition(S, bad)
    assert not v.ok and v.failed_clause == "recorded N differs from |A|"

    # threshold raised beyond a peel size
    if D.peels:
        big = max(len(C) for _, C in D.peels) + 1
        bad = replace(D, threshold=big)
        assert not le.verify_decomposition(S, bad).ok

    # move a peeled point into X: X keeps a heavy pair sum
    if D.peels and len(D.peels[0][1]) >= 2:
        n0, C0 = D.peels[0]
        moved = Decomposition(
            X=D.X.derived(np.concatenate([D.X.points, C0.points])),
            peels=D.peels[1:],
            threshold=1,
            N=D.N,
            delta=D.delta,
        )
        v = le.verify_decomposition(S, moved)
        assert not v.ok


def test_default_threshold_ratio_shape(rng):
    # peeled part Y carries most pair energy only when heavy sums exist;
    # here we just check the decomposition at the default threshold verifies
    # and its peel count respects the r <= N / threshold bound
    for m in (25, 50, 90):
        S = le.enumerate_sphere(4, m)
        thr = le.peel_threshold(len(S))
        D = le.xy_decompose(S, thr, DEFAULT_DELTA)
        assert le.verify_decomposition(S, D).ok
        assert D.r * thr <= len(S)


def test_orthant_pipeline_partitions_and_flags():
    S = le.enumerate_sphere(4, 6)
    cells = le.orthant_pipeline(S)
    assert len(cells) == 81
    total = sum(len(cell) for _, cell, _ in cells)
    assert total == len(S)
    for pat, cell, negligible in cells:
        zeros = sum(e == "zero" for e in pat.entries)
        assert negligible == (zeros >= 2)
    with pytest.raises(ValueError):
        le.orthant_pipeline(le.enumerate_sphere(3, 1))
