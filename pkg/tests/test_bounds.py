import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from theta_spanner.bounds import (
    ConfigType,
    _corner_a,
    Lemma3Config,
    classify_configuration,
    family_of,
    lemma2_check,
    lemma3_check,
    lemma3_config,
    lemma3_rhs,
    lemma3_sides,
    path_bound,
    rotate_to_cone_zero,
    spanning_ratio_bound,
    two_direction_bound,
)
from theta_spanner.errors import AlphaOutOfRange, DegenerateDenominator, PreconditionViolated, UnsupportedConeCount
from theta_spanner.geometry import canonical_triangle, cone_of

from conftest import ALL_M
from samplers import lemma2_samples, lemma3_samples

DEG = math.pi / 180


def rhs(beta, gamma, theta):
    return lemma3_rhs(Lemma3Config(beta, gamma, theta))


def test_family_of():
    s = family_of(6)
    assert (s.k, s.x, s.theta, s.c_const) == (1, 2, math.pi / 3, 1.0)
    s = family_of(8)
    assert (s.k, s.x) == (1, 4)
    assert s.c_const == pytest.approx(1.847759, abs=1e-6)
    s = family_of(7)
    t = 2 * math.pi / 7
    assert (s.k, s.x) == (1, 3)
    assert s.c_const == pytest.approx(math.cos(t / 4) / (math.cos(t / 2) - math.sin(3 * t / 4)), rel=1e-15)
    assert [family_of(m).x for m in range(6, 18)] == [2, 3, 4, 5] * 3
    assert [family_of(m).k for m in range(6, 18)] == [1] * 4 + [2] * 4 + [3] * 4
    for m in (-1, 0, 2, 5):
        with pytest.raises(UnsupportedConeCount):
            family_of(m)


def test_family_constant_at_least_one():
    for m in range(6, 60):
        assert family_of(m).c_const >= 1


def test_path_bound_examples():
    assert path_bound(6, math.pi / 6) == pytest.approx(2.0, abs=1e-15)
    assert path_bound(6, 0) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert path_bound(8, math.pi / 8) == pytest.approx(2.4142136, abs=1e-7)


def test_path_bound_alpha_range():
    with pytest.raises(AlphaOutOfRange):
        path_bound(6, -0.01)
    with pytest.raises(AlphaOutOfRange):
        path_bound(6, math.pi / 6 + 0.01)


def test_spanning_ratio_examples():
    assert spanning_ratio_bound(6) == 2.0
    assert spanning_ratio_bound(10) == pytest.approx(1.6180340, abs=1e-7)
    t = 2 * math.pi / 7
    assert spanning_ratio_bound(7) == pytest.approx(math.cos(t / 4) / (math.cos(t / 2) - math.sin(3 * t / 4)), rel=1e-15)
    assert spanning_ratio_bound(7) == pytest.approx(3.51352, abs=1e-5)


def test_ratio_bound_decreases_within_family():
    for x in (2, 3, 4, 5):
        vals = [spanning_ratio_bound(4 * k + x) for k in range(1, 8)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 1


@pytest.mark.parametrize("m", ALL_M)
def test_path_bound_increasing(m):
    half = math.pi / m
    vals = [path_bound(m, a) for a in np.linspace(0, half, 2000)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("m", ALL_M)
def test_ratio_matches_path_bound(m):
    spec = family_of(m)
    half = spec.theta / 2
    if spec.x in (2, 4):
        assert path_bound(spec, half) == pytest.approx(spanning_ratio_bound(spec), rel=1e-12)
    else:
        grid = np.linspace(0, half, 4001)
        vals = [two_direction_bound(spec, a) for a in grid]
        assert grid[int(np.argmax(vals))] == pytest.approx(spec.theta / 4, abs=half / 2000)
        assert two_direction_bound(spec, spec.theta / 4) == pytest.approx(spanning_ratio_bound(spec), abs=1e-9)


def test_lemma3_rhs_examples():
    t = math.pi / 4
    c8 = 1 / (math.cos(t / 2) - math.sin(t / 2))
    assert rhs(0, 0, t) == pytest.approx(c8, rel=1e-12)
    assert rhs(t / 2, t / 2, t) == pytest.approx((math.cos(t / 2) - math.sin(t / 2)) / (1 - math.sin(t)), rel=1e-12)
    assert rhs(t / 2, t / 2, t) == pytest.approx(c8, rel=1e-12)
    t = 2 * math.pi / 7
    expect = (math.cos(t / 2) - math.sin(t / 4)) / (math.cos(t / 4) - math.sin(t))
    assert rhs(t / 4, t / 2, t) == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx(family_of(7).c_const, rel=1e-12)


def test_lemma3_rhs_degenerate():
    with pytest.raises(DegenerateDenominator):
        rhs(0, math.pi / 2, math.pi / 3)


def _decreasing(f, lo, hi, n=500):
    vals = [f(b) for b in np.linspace(lo, hi, n)]
    return all(b < a for a, b in zip(vals, vals[1:])), vals


@pytest.mark.parametrize("m", [8, 12, 16])
def test_four_k_plus_four_case_thresholds(m):
    t, c = 2 * math.pi / m, family_of(m).c_const
    ok, vals = _decreasing(lambda b: rhs(b, t - b, t), t / 2, t)
    assert ok and vals[0] == pytest.approx(c, rel=1e-12)
    # with gamma = beta the threshold is flat, so its maximum is c at every beta
    for b in np.linspace(0, t / 2, 50):
        assert rhs(b, b, t) == pytest.approx(c, rel=1e-12)


@pytest.mark.parametrize("m", [7, 11, 15])
def test_four_k_plus_three_case_thresholds(m):
    t, c = 2 * math.pi / m, family_of(m).c_const
    ok, vals = _decreasing(lambda b: rhs(b, 3 * t / 4 - b, t), t / 4, 3 * t / 4)
    assert ok and vals[0] == pytest.approx(c, rel=1e-12)
    for b in np.linspace(0, t / 2, 50):
        assert rhs(b, t / 4 + b, t) == pytest.approx(c, rel=1e-9)


@pytest.mark.parametrize("m", [9, 13, 17])
def test_four_k_plus_five_case_thresholds(m):
    t, c = 2 * math.pi / m, family_of(m).c_const
    ok, vals = _decreasing(lambda b: rhs(b, 5 * t / 4 - b, t), 3 * t / 4, 5 * t / 4)
    assert ok and vals[0] < c
    ok, vals = _decreasing(lambda b: rhs(b, t / 4 - b, t), 0, t / 4)
    assert ok and vals[0] == pytest.approx(c, rel=1e-12)
    # the remaining sub-case stays at or below c
    for b in np.linspace(t / 4, t, 50):
        assert rhs(b, b - t / 4, t) <= c


def test_lemma2_equality_limit():
    # w just inside C_1 of v at m=6: the path bound meets the corner path
    t = math.pi / 3
    u, v = (0.0, 0.0), (-0.3, 0.6)
    e = 1e-7
    r = 0.4
    w = (v[0] + r * math.sin(t / 2 + e), v[1] + r * math.cos(t / 2 + e))
    assert cone_of(u, w, 6) == 0 and cone_of(v, w, 6) == 1
    assert lemma2_check(u, v, w, 6)
    a = _corner_a(v, w, t)
    tri = canonical_triangle(v, w, 6)
    lhs = max(math.dist(v, tri.corner_ccw) + math.dist(tri.corner_ccw, w), math.dist(v, tri.corner_cw) + math.dist(tri.corner_cw, w))
    assert lhs == pytest.approx(math.dist(v, a) + math.dist(a, w), abs=1e-6)
    assert max(math.dist(tri.corner_ccw, w), math.dist(tri.corner_cw, w)) == pytest.approx(math.dist(a, w), abs=1e-6)


def test_lemma2_precondition():
    # w in cone 0 of v
    with pytest.raises(PreconditionViolated):
        lemma2_check((0, 0), (-0.05, 0.5), (0.05, 1.0), 6)
    # w not in cone 0 of u
    with pytest.raises(PreconditionViolated):
        lemma2_check((0, 0), (-0.05, 0.5), (1.0, 0.2), 6)
    # v right of uw
    with pytest.raises(PreconditionViolated):
        lemma2_check((0, 0), (0.3, 0.5), (0.1, 1.0), 6)


def test_lemma3_equality_at_corner():
    # m=8: v on the left side of the triangle at w's height; w straight right of v lies on the bisector of C_2^v
    t = math.pi / 4
    u = (0.0, 0.0)
    w = (0.1, 1.0)
    v = (-math.tan(t / 2) * 1.0, 1.0)
    cfg = lemma3_config(u, v, w, 8)
    assert cfg.beta == pytest.approx(0, abs=1e-12) and cfg.gamma == pytest.approx(0, abs=1e-9)
    assert lemma3_check(u, v, w, 8)
    lhs, rhs_ = lemma3_sides(u, v, w, 8, family_of(8).c_const)
    assert lhs == pytest.approx(rhs_, rel=1e-12)


def test_lemma3_threshold_is_sharp():
    t = math.pi / 4
    u, w = (0.0, 0.0), (0.1, 1.0)
    v = (-math.tan(t / 2) + 0.01, 0.995)
    cfg = lemma3_config(u, v, w, 8)
    lo, hi = 0.0, 10.0
    for _ in range(80):
        mid = (lo + hi) / 2
        if lemma3_check(u, v, w, 8, c=mid):
            hi = mid
        else:
            lo = mid
    assert not lemma3_check(u, v, w, 8, c=hi - 1e-6)
    assert lemma3_check(u, v, w, 8, c=family_of(8).c_const)
    # the closed-form threshold is sufficient
    assert hi <= rhs(cfg.beta, cfg.gamma, cfg.theta) + 1e-9


def test_lemma3_precondition():
    with pytest.raises(PreconditionViolated):
        lemma3_check((0, 0), (-0.05, 0.5), (0.05, 1.0), 8)


@pytest.mark.parametrize("m", ALL_M)
def test_lemma_fuzz_small(m):
    rng = np.random.default_rng(m)
    two, _ = lemma2_samples(m, rng, 300)
    three, _ = lemma3_samples(m, rng, 300)
    assert len(two) == len(three) == 300
    assert all(ok for *_, ok in two)
    assert all(ok for *_, ok in three)


def test_classify_examples():
    assert classify_configuration((0, 0), (0.1, 1), 6) == ConfigType.TypeIII
    assert classify_configuration((0, 0), (0, 1), 6) == ConfigType.TypeIII
    assert classify_configuration((0, 0), (-0.1, 1), 6) == ConfigType.TypeIV
    # k=2 at m=10: cone 1 is Type II, cone 2 is Type I for x=2
    assert classify_configuration((0, 0), (1, 1.2), 10) == ConfigType.TypeII
    assert classify_configuration((0, 0), (1, 0.1), 10) == ConfigType.TypeI
    assert classify_configuration((0, 0), (1, -0.1), 10) == ConfigType.TypeI
    # k=1 at m=6: cone 1 is Type I
    assert classify_configuration((0, 0), (1, 0.1), 6) == ConfigType.TypeI


def test_classify_cone_k_uses_corner_distances():
    # m=13: k=2, cone 2 spans about 41.5..69.2 degrees
    p = (math.sin(55 * DEG), math.cos(55 * DEG))
    assert cone_of((0, 0), p, 13) == 2
    assert classify_configuration((0, 0), p, 13, cw_corner_dist_cmp=1) == ConfigType.TypeI
    assert classify_configuration((0, 0), p, 13, cw_corner_dist_cmp=-1) == ConfigType.TypeII
    assert classify_configuration((0, 0), p, 13, cw_corner_dist_cmp=0) == ConfigType.TypeII
    # near the upper ray cur is close to the upper corner, so |c cur| < |d cur|
    up = (math.sin(43 * DEG), math.cos(43 * DEG))
    low = (math.sin(68 * DEG), math.cos(68 * DEG))
    assert classify_configuration((0, 0), up, 13) == ConfigType.TypeII
    assert classify_configuration((0, 0), low, 13) == ConfigType.TypeI
    # m=9: k=1, so cone 2 is already past cone k
    assert classify_configuration((0, 0), (1, 0.3), 9) == ConfigType.TypeI


@given(st.integers(6, 13), st.integers(0, 12), st.floats(-1, 1), st.floats(-1, 1))
def test_rotate_to_cone_zero(m, i, x, y):
    i %= m
    theta = 2 * math.pi / m
    (px, py), = rotate_to_cone_zero([(x, y)], i, theta)
    assert math.hypot(px, py) == pytest.approx(math.hypot(x, y), abs=1e-12)
    # the bisector of cone i maps to vertical-up
    (bx, by), = rotate_to_cone_zero([(math.sin(i * theta), math.cos(i * theta))], i, theta)
    assert (bx, by) == pytest.approx((0, 1), abs=1e-12)
    (mx, my), = rotate_to_cone_zero([(x, y)], i, theta, mirror=True)
    assert (mx, my) == pytest.approx((-px, py), abs=1e-12)
