"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed together at the
end of the pytest run (see conftest.py) and also immediately with ``-s``.
"""

import math
import time

import numpy as np
import pytest

from critcurves.continuant import (continuant, continuant_bruteforce, curve_polys,
                                   negative_index_sequence, palindromic_factors, q_sequence)
from critcurves.curves import (angle_sum, asymptotes, delta_sequence, diagonal_anchors,
                               gradient_parallel_residual, intersection_sequence, trace_branch)
from critcurves.dynamics import (L_MINUS, L_PLUS, boundary_segment, iterate, orbit_letters,
                                 rotation_density, theta_on_rank1, theta_scan, zeta)
from critcurves.generation import pencil, pencil_lattice, verify_pencil
from critcurves.poly import BivarPoly, poisson_bracket
from critcurves.verify import CURVE_WORDS, _annulus_point, _curve_point_samples, random_palindromic_word
from critcurves.words import Word, block_sequence, complexity_profile, parse_word

RESULTS = []

W = parse_word("(a^3b^4)^3a^2")


def record(key, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {key}: {title}" + (f"  ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def _qt(s):
    # Q_t of the letters s = w_1..w_{t-1}
    return continuant(s)


def test_criterion_01_continuant_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1001)
    bad = []
    for _ in range(200):
        w = random_palindromic_word(rng, max_len=25)
        n, k = len(w), len(w) // 2
        q = q_sequence(w)
        C, Ct = palindromic_factors(w)
        if q[n] != C * Ct:
            bad.append(("factorization", str(w)))
        red = w.reduced
        for t in range(1, n + 1):
            s = red[:t - 1]
            if _qt(s) != _qt(s[::-1]):
                bad.append(("reversal", str(w), t))
        for cut in range(0, n):
            u, v = red[:cut], red[cut:]
            rhs = _qt(u) * _qt(v) - (_qt(u[:-1]) * _qt(v[1:]) if u and v else BivarPoly())
            if _qt(u + v) != rhs:
                bad.append(("splitting", str(w), cut))
        neg = negative_index_sequence(list(red), n)
        if any(neg[t] != -q[t] for t in range(1, n + 1)):
            bad.append(("negative index", str(w)))
        if n - 1 <= 12 and q[n] != continuant_bruteforce(red):
            bad.append(("euler rule", str(w)))
        ds = delta_sequence(w)
        if not ds.sum_identity:
            bad.append(("delta sum", str(w)))
        acc = BivarPoly()
        for t in range(n + 1):
            if ds.Delta[t] != acc:
                bad.append(("delta partial sums", str(w), t))
                break
            if t < n:
                acc = acc + ds.Xi[t]
        if n % 2 and ds.Delta[k + 1] != poisson_bracket(q[k], q[k + 1]) * C:
            bad.append(("delta middle", str(w)))
    # Euler rule on all short letter sequences, not only palindromes
    for m in range(0, 12):
        for code in range(2 ** m):
            s = "".join("ab"[(code >> i) & 1] for i in range(m))
            if continuant(s) != continuant_bruteforce(s):
                bad.append(("euler rule exhaustive", s))
    dt = time.perf_counter() - t0
    record("1", "continuant identity suite on 200 palindromic words", not bad and dt < 60,
           f"{dt:.1f} s, {len(bad)} failures")


def test_criterion_02_golden_polynomials():
    P = BivarPoly.parse
    got = (curve_polys("aaa").C, curve_polys("aaaa").C, q_sequence("aabb")[4])
    ok = got == (P("a - 1"), P("a^2 - 2"), P("a b^2 - a - b"))
    record("2", "C(a^3) = a - 1, C(a^4) = a^2 - 2, Q_4(a^2b^2) = a b^2 - a - b", ok,
           ", ".join(map(str, got)))


def _warm():
    intersection_sequence(W, 1.0, 2 * math.cos(3 * math.pi / 11))


def test_criterion_03_worked_example_e():
    _warm()
    t0 = time.perf_counter()
    data = intersection_sequence(W, 0.0, 2 * math.cos(math.pi / 5))
    dt = time.perf_counter() - t0
    ok = (data.T == (2, 7, 9, 14, 16, 21) and data.period == 7
          and [d.ranks for d in data.decompositions] == [(1, 5, 1), (2, 3, 2), (3, 1, 3)]
          and data.improper == (2, 9, 16)
          and data.proper_code == parse_word("(a^2b^5)^3a^2")
          and dt < 1.0)
    record("3", "intersection data at (0, 2cos(pi/5))", ok,
           f"T={data.T}, period {data.period}, proper {data.proper_code}, {dt * 1e3:.1f} ms")


def test_criterion_04_worked_example_em():
    _warm()
    t0 = time.perf_counter()
    data = intersection_sequence(W, 1.0, 2 * math.cos(3 * math.pi / 11))
    dt = time.perf_counter() - t0
    (d,) = data.decompositions
    ok = (data.T == (3, 20) and data.period == 20
          and data.proper_code == parse_word("(a^3b^4)^2a^3b^3a^3")
          and d.u == Word("aaa") and d.v == parse_word("(b^4a^3)^2b^3")
          and d.ranks == (1, 5, 1) and dt < 1.0)
    record("4", "intersection data at (1, 2cos(3pi/11))", ok,
           f"T={data.T}, period {data.period}, u={d.u}, v={d.v}, {dt * 1e3:.1f} ms")


def test_criterion_05_pencil_endpoints():
    iters = 10 ** 5
    spec = pencil(1, 2, 4, 3)
    chk = verify_pencil(spec, tol=1e-6, theta_iters=iters)
    want = {(0.0, 2 * math.cos(math.pi / 5)), (1.0, 2 * math.cos(3 * math.pi / 11))}
    got = set(chk.measured)
    close = all(min(max(abs(p[0] - q[0]), abs(p[1] - q[1])) for q in got) <= 1e-6 for p in want)
    single = chk.ok and close and abs(chk.theta_measured - 0.15) <= 2 / iters
    t0 = time.perf_counter()
    failures = []
    cells = list(pencil_lattice(5, 5, 4))
    for cell in cells:
        c = verify_pencil(pencil(*cell), tol=1e-6, theta_iters=iters)
        if not c.ok:
            failures.append(cell)
    dt = time.perf_counter() - t0
    record("5", "pencil end-points and theta(e_m); full lattice", single and not failures and dt < 600,
           f"(2,4,3): err {max(chk.err_e, chk.err_em):.1e}, theta {chk.theta_measured}; "
           f"{len(cells) - len(failures)}/{len(cells)} cells in {dt:.1f} s")


def test_criterion_06_rank1_theta():
    iters = 10 ** 5
    worst = 0.0
    plateaus = True
    for kap in range(2, 7):
        for b in np.linspace(-2.5, 2.5, 21):
            est = rotation_density(zeta(kap), float(b), iters=iters)
            th = theta_on_rank1(kap, float(b))[0]
            worst = max(worst, abs(est.theta - th))
            if b > 2 and abs(est.theta) > 2e-5 or b < -2 and abs(est.theta - 1 / (kap + 1)) > 2e-5:
                plateaus = False
    record("6", "rank-1 theta along a = zeta_kappa", worst <= 2e-5 and plateaus, f"worst {worst:.2e}")


def test_criterion_07_branch_structure():
    rng = np.random.default_rng(1007)
    bad = []
    for _ in range(20):
        w = random_palindromic_word(rng, max_len=15, min_len=3)
        n = len(w)
        anchors = diagonal_anchors(w)
        if sum(x.on_critical_factor for x in anchors) != n // 2:
            bad.append(("anchors", str(w)))
        asy = asymptotes(w)
        if (len(asy.vertical), len(asy.horizontal)) != (w.reduced.count("a"), w.reduced.count("b")) \
                or asy.count != n - 1:
            bad.append(("asymptotes", str(w)))
        for x in anchors:
            if not x.on_critical_factor:
                continue
            tr = trace_branch(w, step=5e-3, anchor_j=x.j, endpoints=False)
            if w.rank == 1:
                line = tr.a if w[0] == "a" else tr.b
                if not np.allclose(line, x.zeta, atol=1e-12):
                    bad.append(("line", str(w), x.j))
            elif not np.all(np.diff(tr.a) * np.diff(tr.b) < 0):
                bad.append(("monotone", str(w), x.j))
    record("7", "anchors, monotone branches and asymptotes on 20 random words", not bad,
           f"{len(bad)} failures {bad}" if bad else "0 failures")


def test_criterion_08_geometry_residuals():
    counts = {}
    worst_g = worst_s = 0.0
    for w, a, b in _curve_point_samples(CURVE_WORDS, 60, legal_only=False):
        counts[str(w)] = counts.get(str(w), 0) + 1
        worst_g = max(worst_g, gradient_parallel_residual(w, a, b))
        worst_s = max(worst_s, angle_sum(w, a, b).deviation)
    ok = len(counts) == 10 and min(counts.values()) >= 50 and worst_g < 1e-8 and worst_s < 1e-8
    record("8", "gradient-parallel and angle-sum residuals", ok,
           f"{sum(counts.values())} points on {len(counts)} curves, worst {worst_g:.1e} / {worst_s:.1e}")


def test_criterion_09_reversibility_palindromes():
    rng = np.random.default_rng(1009)
    worst = 0.0
    for _ in range(100):
        a, b = _annulus_point(rng)
        for k in range(1, 51):
            lhs = iterate(L_MINUS, a, b, -k + 1)
            rhs = iterate(L_PLUS, a, b, k).reflect()
            worst = max(worst, abs(lhs.x - rhs.x), abs(lhs.y - rhs.y))
    words = list(CURVE_WORDS) + [str(pencil(*c).word) for c in [(1, 2, 3, 2), (2, 3, 3, 1), (3, 3, 2, 2), (4, 3, 3, 1)]]
    found = bad = 0
    for w, a, b in _curve_point_samples(words, 10):
        for sign in (1, -1):
            seg = boundary_segment(a, b, sign=sign, max_steps=10 * len(w))
            if seg is None:
                continue
            word, _ = seg
            found += 1
            bs = block_sequence(word)
            if len(word) < 2:
                continue
            if not bs.palindromic or (len(word) % 2 == 1) != (bs.middle % 2 == 0):
                bad += 1
    record("9", "reversibility and palindromic boundary words", worst <= 1e-9 and found > 0 and bad == 0,
           f"worst {worst:.1e}; {found} boundary words, {bad} violations")


def test_criterion_10_scan():
    iters = 10 ** 4
    theta_scan((0.0, 2.0, 0.0, 2.0), res=4, iters=100)  # compile outside the timed run
    t0 = time.perf_counter()
    sc = theta_scan((0.0, 2.0, 0.0, 2.0), res=256, iters=iters, workers=1)
    dt = time.perf_counter() - t0
    worst = 0.0
    for kap, z in ((2, 0.0), (3, 1.0)):
        i = int(np.flatnonzero(sc.avals == z)[0])
        ref = np.array([theta_on_rank1(kap, float(b))[0] for b in sc.bvals])
        worst = max(worst, float(np.max(np.abs(sc.theta[i] - ref))))
        # theta is symmetric in (a, b), so the column b = zeta_kappa follows the same formula
        j = int(np.flatnonzero(sc.bvals == z)[0])
        ref = np.array([theta_on_rank1(kap, float(a))[0] for a in sc.avals])
        worst = max(worst, float(np.max(np.abs(sc.theta[:, j] - ref))))
    record("10", "256x256 scan of [0,2]^2 at 1e4 iterations", dt < 60 and worst <= 2e-4,
           f"{dt:.1f} s on one worker, rank-1 lines worst {worst:.2e}")


def test_criterion_11_complexity_substitute():
    bits = orbit_letters(-1 / 3, 2 / 3, L_MINUS, 10 ** 6)
    prof = complexity_profile(bits, 20)
    ok = prof.K == tuple(2 * n for n in range(1, 21))
    record("11", "complexity K(n) = 2n for n <= 20 at (-1/3, 2/3)", ok, f"K = {prof.K}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
