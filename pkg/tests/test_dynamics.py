import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from critcurves.dynamics import (L_MINUS, L_PLUS, Ray, boundary_segment, iterate, kappa_of,
                                 mobius_fixed_points, mobius_slope, orbit_code, orbit_letters,
                                 region_classify, rotation_density, scan_grid, sector_rays, step,
                                 symmetry_point_residual, theta_on_rank1, theta_scan, zeta)
from critcurves.verify import CURVE_WORDS, _curve_point_samples
from critcurves.words import block_sequence, boundary_equivalent, parse_word

annulus = st.tuples(st.floats(-1.99, 1.99), st.floats(-1.99, 1.99)).filter(
    lambda p: not (p[0] < 0 and p[1] < 0 and p[0] * p[1] >= 4))


def test_step_examples():
    r, w = step(L_PLUS, 0.7, -0.3)
    assert w == "b" and r == Ray(-1.0, 0.0)
    r, w = step(L_MINUS, 0.7, -0.3)
    assert w == "a" and r == Ray(1.0, 0.0)
    r, w = step((1.0, 0.0), 0.7, -0.3)
    assert w == "a" and r == Ray.of(0.7, 1.0)


@given(annulus, st.floats(-math.pi, math.pi))
def test_step_keeps_unit_length(p, t):
    r, _ = step((math.cos(t), math.sin(t)), *p)
    assert abs(r.x ** 2 + r.y ** 2 - 1.0) < 1e-12


def test_quarter_turn():
    tr = orbit_code(0.0, 0.0, L_MINUS, 4)
    assert tr.code == "aabb"
    assert tr.rays[-1] == Ray(0.0, -1.0)


def test_first_block_at_zeta3():
    tr = orbit_code(1.0, 0.37, L_MINUS, 3)
    assert tr.code == "aaa"
    assert tr.boundary_hits[0] == (3, "L+")


def test_worked_example_segment():
    seg = boundary_segment(0.0, zeta(5), sign=1, max_steps=100, min_steps=23)
    word, tr = seg
    assert len(word) == 23 and tr.boundary_hits[-1] == (23, "L+")
    free = {t for t, _ in tr.boundary_hits}
    assert boundary_equivalent(word, parse_word("(a^2b^5)^3a^2"), free)


def test_periodic_segment():
    # the orbit of (0,-1) is periodic with period 20; the segment reaching L+ has 23 letters
    a, b = 1.0, 2 * math.cos(3 * math.pi / 11)
    word, tr = boundary_segment(a, b, sign=1, max_steps=100, min_steps=21)
    assert len(word) == 23 and (20, "L-") in tr.boundary_hits
    free = {t for t, _ in tr.boundary_hits}
    assert boundary_equivalent(word, parse_word("(a^3b^4)^2a^3b^3a^3"), free)
    back = iterate(L_MINUS, a, b, 20)
    assert abs(back.x) < 1e-9 and back.y < 0


def test_segment_examples():
    word, _ = boundary_segment(math.sqrt(2), 0.3, sign=1)
    assert word.letters == "aaaa"
    assert boundary_segment(2.5, 2.5, sign=1, max_steps=1000) is None


def test_rotation_examples():
    est = rotation_density(0.0, 0.0, iters=10 ** 5)
    assert abs(est.theta - 0.25) <= est.err_bound and abs(est.rho - 0.5) <= est.err_bound
    est = rotation_density(1.0, -3.0, iters=10 ** 5)
    assert abs(est.theta - 0.25) <= est.err_bound


@pytest.mark.parametrize("a,b", [(0.3, 1.2), (0.8, 1.35), (0.5, 1.1)])
def test_rotation_bounds_in_domain(a, b):
    # a in (zeta_2, zeta_3) and b in (zeta_3, zeta_4)
    est = rotation_density(a, b, iters=10 ** 5)
    assert 1 / 7 - est.err_bound <= est.theta <= 1 / 5 + est.err_bound
    assert 2 / 6 - est.err_bound <= est.rho <= 3 / 6 + est.err_bound


def test_theta_rank1_examples():
    assert theta_on_rank1(3, 2.5)[0] == 0.0
    assert theta_on_rank1(3, -2.5)[0] == 0.25
    for kap in range(2, 8):
        for ell in range(2, 8):
            assert abs(theta_on_rank1(kap, zeta(ell))[0] - 1 / (kap + ell)) < 1e-15


@pytest.mark.parametrize("kap", [2, 3, 4, 5])
def test_theta_rank1_matches_orbit(kap):
    iters = 10 ** 5
    for b in (-2.4, -1.3, 0.0, 0.9, 1.7, 2.3):
        est = rotation_density(zeta(kap), b, iters=iters)
        assert abs(est.theta - theta_on_rank1(kap, b)[0]) <= 2 / iters


def test_sector_rays():
    # kappa = 2 and a in (-2, 0]: the single ray (U_1, U_2) = (1, a)
    a = -0.4
    assert sector_rays(a, 2) == [Ray.of(1.0, a)]
    last = sector_rays(zeta(5), 5)[-1]
    assert abs(last.y) < 1e-12 and last.x > 0
    lo, hi = zeta(4), zeta(5)
    prev = None
    for a in np.linspace(lo + 1e-3, hi, 20):
        angles = [r.angle for r in sector_rays(float(a), 5)]
        if prev is not None:
            assert all(x > y for x, y in zip(angles, prev))
        prev = angles
    with pytest.raises(ValueError):
        sector_rays(1.9, 3)


def test_mobius():
    assert mobius_slope(1.3, math.inf) == 0.0
    lp, lm = mobius_fixed_points(2.5)
    assert abs(lp * lm - 1.0) < 1e-15
    assert abs(mobius_slope(2.5, lp) - lp) < 1e-12
    assert mobius_fixed_points(1.0) is None


def test_mobius_reversal():
    # m -> 1/m conjugates the slope map to its inverse: 1/mu(1/mu(m)) = m
    a = 0.7
    for m in (-3.0, -0.2, 0.5, 4.0):
        assert abs(1 / mobius_slope(a, 1 / mobius_slope(a, m)) - m) < 1e-12


def test_region_examples():
    assert region_classify(3.0, 0.0) == "interiorTheta0"
    assert region_classify(-3.0, -3.0) == "annulus"
    assert region_classify(0.0, 0.0) == "annulus"
    assert region_classify(-1.0, -1.0) == "interiorThetaHalf"
    assert region_classify(-3.0, -3.0, convention="dynamical") == "interiorThetaHalf"
    assert region_classify(2.0, -1.0) == "boundary"


@given(annulus, st.integers(1, 50))
def test_reversibility(p, k):
    lhs = iterate(L_MINUS, *p, -k + 1)
    rhs = iterate(L_PLUS, *p, k).reflect()
    assert abs(lhs.x - rhs.x) < 1e-9 and abs(lhs.y - rhs.y) < 1e-9


@given(annulus)
def test_exchange_conjugacy(p):
    a, b = p
    x = orbit_letters(a, b, L_MINUS, 5000)
    y = orbit_letters(b, a, L_PLUS, 5000)
    assert np.array_equal(x, 1 - y)


@given(annulus)
def test_ray_count_bounds(p):
    a, b = p
    kap = kappa_of(a)
    code = "".join("ab"[c] for c in orbit_letters(a, b, L_MINUS, 10 ** 4))
    runs = [len(r) for r in code.split("b") if r][1:-1]
    assert all(r in (kap - 1, kap) for r in runs)


def test_compiled_code_matches_python():
    for a, b in [(0.3, -1.1), (1.5, 1.2), (-0.7, 0.4)]:
        bits = orbit_letters(a, b, L_MINUS, 500)
        assert "".join("ab"[c] for c in bits) == orbit_code(a, b, L_MINUS, 500).code


def test_boundary_words_on_curves():
    for w, a, b in _curve_point_samples(CURVE_WORDS, 5):
        word, tr = boundary_segment(a, b, sign=w.sign, max_steps=10 * len(w))
        bs = block_sequence(word)
        assert word == w and bs.palindromic
        assert (len(word) % 2 == 1) == (bs.middle % 2 == 0)
        assert symmetry_point_residual(tr, len(word), a, b) < 1e-9


def test_kappa_of():
    assert kappa_of(1.0) == 3 and kappa_of(1.01) == 4 and kappa_of(2.0) is None
    assert kappa_of(-1.0) == 2


def test_scan_small():
    scan = theta_scan((0.0, 2.0, 0.0, 2.0), res=8, iters=2000)
    assert scan.theta.shape == (8, 8)
    assert abs(scan.theta[0, 0] - 0.25) < 1e-3
    assert np.all((scan.theta >= 0) & (scan.theta <= 0.5))
    with pytest.raises(ValueError):
        scan_grid((0, 1, 0, 1), 0)
