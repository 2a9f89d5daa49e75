from fractions import Fraction

import numpy as np
import pytest

import latenergy as le
from latenergy.geometry import (
    SphereTranslate,
    plane_through_dual,
    rational_on_plane,
)

from conftest import pair_table, random_sphere_subset


def test_hyperplane_canonical_form():
    h = le.Hyperplane((2, 4, -6), 8)
    assert h.a == (1, 2, -3) and h.b == 4
    assert le.Hyperplane((-1, 0, 2), 3) == le.Hyperplane((2, 0, -4), -6)
    with pytest.raises(ValueError):
        le.Hyperplane((0, 0, 0), 1)


def test_hyperplane_membership():
    h = le.Hyperplane((1, 1, 0), 1)
    assert h.contains((1, 0, 5))
    assert not h.contains((1, 1, 0))
    S = le.enumerate_sphere(3, 1)
    mask = h.contains_mask(S.points)
    got = {tuple(p) for p in S.points[mask]}
    assert got == {(1, 0, 0), (0, 1, 0)}


def test_bisector_examples():
    h = le.bisector_hyperplane((2, 0, 0))
    assert h == le.Hyperplane((1, 0, 0), 1)
    h = le.bisector_hyperplane((1, 1, 0))
    assert h == le.Hyperplane((1, 1, 0), 1)
    with pytest.raises(ValueError):
        le.bisector_hyperplane((0, 0, 0))


def test_bisector_contains_midpoint(rng):
    for _ in range(20):
        n = tuple(rng.randint(-9, 9) for _ in range(4))
        if not any(n):
            continue
        h = le.bisector_hyperplane(n)
        mid = tuple(Fraction(x, 2) for x in n)
        assert rational_on_plane(mid, h)


def test_slice_examples():
    S = le.enumerate_sphere(3, 1)
    C = le.slice_set(S, (1, 1, 0))
    assert [tuple(p) for p in C.points] == [(0, 1, 0), (1, 0, 0)]
    assert len(le.slice_set(S, (3, 0, 0))) == 0
    C0 = le.slice_set(S, (0, 0, 0))
    assert len(C0) == 6


def test_slice_size_equals_r2(rng):
    for _ in range(8):
        A, _ = random_sphere_subset(rng, rng.choice((3, 4)), 60, 14)
        r = le.rep_fn(A, 2)
        for n, count in list(r.items())[:40]:
            assert len(le.slice_set(A, n)) == count
        # off-support sums slice to nothing
        off = tuple(3 * A.max_abs() + 1 for _ in range(A.d))
        assert len(le.slice_set(A, off)) == 0


def test_slice_lies_on_bisector(rng):
    # subsets of a sphere have constant norm, so every pair slice is planar
    for _ in range(6):
        A, _ = random_sphere_subset(rng, 3, 50, 12)
        r = le.rep_fn(A, 2)
        for n, _c in list(r.items())[:20]:
            if not any(n):
                continue
            C = le.slice_set(A, n)
            h = le.bisector_hyperplane(n)
            assert bool(np.all(h.contains_mask(C.points)))


def test_slice_on_full_sphere_is_planar():
    S = le.enumerate_sphere(4, 10)
    r = le.rep_fn(S, 2)
    for n, count in r.items():
        if not any(n):
            continue
        C = le.slice_set(S, n)
        assert len(C) == count
        assert bool(np.all(le.bisector_hyperplane(n).contains_mask(C.points)))


def test_intersect_translates_identity_and_dedup():
    S = le.enumerate_sphere(4, 3)
    same = le.intersect_translates(S, [(0, 0, 0, 0)])
    assert np.array_equal(same.points, S.points)
    with pytest.raises(ValueError):
        le.intersect_translates(S, [(0, 0, 0, 0), (0, 0, 0, 0)])
    with pytest.raises(ValueError):
        le.intersect_translates(S, [])


def test_intersect_translates_paraboloid_structure():
    # shifting by (0,0,0,0), (1,0,0,3), (0,1,0,3) pins the first two
    # coordinates to 2, leaving one free line of 2m+1 points (m >= 2)
    P1 = le.enumerate_paraboloid(1)
    assert len(le.intersect_translates(
        P1, [(0, 0, 0, 0), (1, 0, 0, 3), (0, 1, 0, 3)])) == 0
    for m in (2, 5, 20):
        P = le.enumerate_paraboloid(m)
        inter = le.intersect_translates(
            P, [(0, 0, 0, 0), (1, 0, 0, 3), (0, 1, 0, 3)]
        )
        assert len(inter) == 2 * m + 1
        assert np.all(inter.points[:, 0] == 2)
        assert np.all(inter.points[:, 1] == 2)
        assert np.all(inter.points[:, 3] == 8 + inter.points[:, 2] ** 2)


def test_paraboloid_structural_matches_generic(rng):
    # the structural linear-constraint solver must agree with the plain
    # materialized intersection on every shift pattern
    P = le.enumerate_paraboloid(4)
    G = le.pointset(P.points, 4, "derived")
    for _ in range(25):
        k = rng.randint(1, 3)
        shifts = []
        while len(shifts) < k:
            s = tuple(rng.randint(-3, 3) for _ in range(4))
            if s not in shifts:
                shifts.append(s)
        a = le.paraboloid_translate_intersection(4, shifts)
        b = le.intersect_translates(G, shifts)
        assert np.array_equal(a.points, b.points)


def test_paraboloid_intersection_beyond_enumeration_budget():
    # P_{4,500} has over 10^9 points and is never materialized; the
    # structural path still returns the exact 2m+1 line
    inter = le.paraboloid_translate_intersection(
        500, [(0, 0, 0, 0), (1, 0, 0, 3), (0, 1, 0, 3)]
    )
    assert len(inter) == 1001
    assert np.all(inter.points[:, 0] == 2)
    assert np.all(inter.points[:, 3] == 8 + inter.points[:, 2] ** 2)


def test_paraboloid_intersection_validation():
    with pytest.raises(ValueError):
        le.paraboloid_translate_intersection(0, [(0, 0, 0, 0)])
    with pytest.raises(ValueError):
        le.paraboloid_translate_intersection(5, [(0, 0, 0, 0), (0, 0, 0, 0)])
    # same spatial shift at a different height has no common point
    inter = le.paraboloid_translate_intersection(
        5, [(0, 0, 0, 0), (0, 0, 0, 1)]
    )
    assert len(inter) == 0


def test_intersect_translates_brute(rng):
    for _ in range(6):
        A, _ = random_sphere_subset(rng, 3, 40, 10)
        shifts = []
        while len(shifts) < 3:
            s = tuple(rng.randint(-2, 2) for _ in range(3))
            if s not in shifts:
                shifts.append(s)
        pts = {tuple(int(c) for c in p) for p in A.points}
        brute = sorted(
            set.intersection(
                *({tuple(a + b for a, b in zip(p, s)) for p in pts} for s in shifts)
            )
        )
        got = [tuple(p) for p in le.intersect_translates(A, shifts).points]
        assert got == brute


def test_sphere_translate_variety():
    v = SphereTranslate((1, 0, 0), 1)
    assert v.contains((2, 0, 0))
    assert v.contains((1, 1, 0))
    assert not v.contains((1, 0, 0))
    S = le.enumerate_sphere(3, 1)
    # nearest points of S_{3,1} to (1,0,0) are at distance sqrt(2)
    assert int(v.contains_mask(S.points).sum()) == 0
    assert int(SphereTranslate((1, 0, 0), 2).contains_mask(S.points).sum()) == 4


def test_incidences_unweighted_example():
    S = le.enumerate_sphere(3, 1)
    planes = [le.Hyperplane((1, 0, 0), 0), le.Hyperplane((1, 0, 0), 1)]
    rep = le.incidences(S, planes)
    assert rep.per_variety == (4, 1)
    assert rep.total == 5


def test_incidences_weighted_by_r2():
    S = le.enumerate_sphere(3, 1)
    r = le.rep_fn(S, 2)
    sums = [n for n, _c in r.items() if any(n)]
    planes = [le.bisector_hyperplane(n) for n in sums]
    weights = {h: r[n] for h, n in zip(planes, sums)}
    rep = le.incidences(S, planes, w_v=lambda h: weights[h])
    assert rep.total == 54


def test_incidences_point_weights_and_missing():
    S = le.enumerate_sphere(3, 1)
    plane = [le.Hyperplane((0, 0, 1), 1)]
    w = {tuple(int(c) for c in p): 2 for p in S.points}
    assert le.incidences(S, plane, w=w).total == 2
    with pytest.raises(KeyError):
        le.incidences(S, plane, w={(0, 0, 1): 2})


def test_kst_witness_exhaustive():
    S = le.enumerate_sphere(3, 1)
    r = le.rep_fn(S, 2)
    planes = [le.bisector_hyperplane(n) for n, _ in r.items() if any(n)]
    rep = le.kst_witness(S, planes, 2)
    assert rep.mode == "exhaustive"
    # any 2 points lie on at most a handful of the 18 bisectors
    assert 1 <= rep.t_max <= len(planes)
    for p in rep.witness_points:
        for v in rep.witness_varieties:
            assert v.contains(p)


def test_kst_witness_degenerate_cases():
    S = le.enumerate_sphere(3, 1)
    assert le.kst_witness(S, [], 2).t_max == 0
    one = le.pointset([(1, 0, 0)], 3)
    assert le.kst_witness(one, [le.Hyperplane((1, 0, 0), 1)], 2).t_max == 0
    with pytest.raises(ValueError):
        le.kst_witness(S, [le.Hyperplane((1, 0, 0), 1)], 0)


def test_kst_witness_sampled_mode():
    S = le.enumerate_sphere(4, 50)
    planes = [le.Hyperplane((1, 0, 0, 0), 1)]
    rep = le.kst_witness(S, planes, 3, subset_budget=50)
    assert rep.mode == "sampled"
    assert rep.t_max >= 0


def test_dualize_examples():
    pts, planes = le.dualize([(2, 0, 0)], [le.Hyperplane((1, 1, 0), 2)])
    assert planes == [le.Hyperplane((2, 0, 0), 1)]
    assert pts == [(Fraction(1, 2), Fraction(1, 2), Fraction(0))]
    with pytest.raises(ValueError):
        le.dualize([(0, 0, 0)], [])
    with pytest.raises(ValueError):
        le.dualize([], [le.Hyperplane((1, 0, 0), 0)])


def test_dualize_preserves_incidence(rng):
    for _ in range(200):
        p = tuple(rng.randint(-6, 6) for _ in range(3))
        if not any(p):
            continue
        a = tuple(rng.randint(-6, 6) for _ in range(3))
        b = rng.randint(1, 12)
        if not any(a):
            continue
        h = le.Hyperplane(a, b)
        before = h.contains(p)
        dual_pts, dual_planes = le.dualize([p], [h])
        after = rational_on_plane(dual_pts[0], dual_planes[0])
        assert before == after


def test_double_dual_is_identity(rng):
    for _ in range(50):
        a = tuple(rng.randint(-9, 9) for _ in range(4))
        b = rng.randint(1, 9)
        if not any(a):
            continue
        h = le.Hyperplane(a, b)
        dual_pts, _planes = le.dualize([], [h])
        assert plane_through_dual(dual_pts[0]) == h
