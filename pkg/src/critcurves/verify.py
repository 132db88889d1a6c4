"""Self-check suites over the library's identities and dynamical properties.

Each suite returns a JSON-ready dict with per-property counts, failures and
worst residuals. Randomised inputs come from fixed seeds, so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Tolerances
from .continuant import (continuant, continuant_bruteforce, curve_polys, matrix_from_continuants,
                         matrix_of_word, negative_index_sequence, palindromic_factors, q_sequence,
                         symmetry_cofactor)
from .curves import (angle_sum, asymptotes, curve_spec, delta_sequence, diagonal_anchors,
                     gradient_parallel_residual, intersection_sequence, median_checks,
                     rotation_at_double_point, tangency_residuals, trace_branch)
from .dynamics import (L_MINUS, L_PLUS, boundary_segment, iterate, kappa_of, orbit_letters,
                       region_classify, rotation_density, symmetry_point_residual, theta_on_rank1,
                       zeta)
from .generation import (axis_word, grid_intersection, grid_theta, grid_words, pencil,
                         pencil_lattice, rotational_domain, verify_pencil)
from .poly import A, B, ONE, UnivarPoly, chebyshev_U, cyclotomic, psi, totient
from .words import Word, block_sequence

SUITES = ("continuant", "dynamics", "curves", "pencils", "appendix")
SCHEMA = 1


@dataclass
class Property:
    name: str
    count: int = 0
    failures: int = 0
    worst: float | None = None
    examples: list = field(default_factory=list)

    def record(self, ok: bool, residual: float | None = None, detail=None):
        self.count += 1
        if residual is not None and math.isfinite(residual):
            self.worst = residual if self.worst is None else max(self.worst, residual)
        if not ok:
            self.failures += 1
            if len(self.examples) < 5 and detail is not None:
                self.examples.append(detail)

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.count > 0

    def to_json(self) -> dict:
        return {"name": self.name, "count": self.count, "failures": self.failures,
                "worst": self.worst, "ok": self.ok, "examples": self.examples}


class _Props(dict):
    def __missing__(self, key):
        p = self[key] = Property(key)
        return p


def _report(suite: str, props: _Props, seconds: float) -> dict:
    items = [p.to_json() for p in props.values()]
    return {"schema": SCHEMA, "suite": suite, "ok": all(p["ok"] for p in items),
            "seconds": round(seconds, 3), "properties": items}


# random inputs


def random_word(rng, n: int) -> Word:
    return Word("".join(rng.choice(["a", "b"], size=n)))


def random_palindromic_word(rng, max_len: int = 25, min_len: int = 3, odd_rank: bool = True) -> Word:
    """Word whose reduced part is a palindrome; odd rank unless asked otherwise."""
    n = int(rng.integers(min_len, max_len + 1))
    half = "".join(rng.choice(["a", "b"], size=(n - 1) // 2))
    mid = str(rng.choice(["a", "b"])) if (n - 1) % 2 else ""
    red = half + mid + half[::-1]
    first = red[0] if odd_rank else ("b" if red[0] == "a" else "a")
    return Word(first + red)


def _annulus_point(rng):
    while True:
        a, b = rng.uniform(-2.0, 2.0, size=2)
        if region_classify(a, b) == "annulus":
            return float(a), float(b)


# suites


def suite_continuant(seed: int = 1, count: int = 200, max_len: int = 25) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    P = _Props()
    words = [random_palindromic_word(rng, max_len) for _ in range(count)]
    for w in words:
        q = q_sequence(w)
        n = len(w)
        C, Ct = palindromic_factors(w)
        P["factorization"].record(q[n] == C * Ct, detail=str(w))
        ok = all(q[n - t] - q[t] == C * symmetry_cofactor(w, t) for t in range(0, n + 1))
        P["symmetry_cofactor"].record(ok, detail=str(w))
        ds = delta_sequence(w)
        P["delta_sum"].record(ds.sum_identity, detail=str(w))
        if ds.middle_identity is not None:
            P["delta_middle"].record(ds.middle_identity, detail=str(w))
        if n <= 12:
            P["euler_rule"].record(q[n] == continuant_bruteforce(w.letters[1:]), detail=str(w))
    for n in range(1, 13):
        for _ in range(4):
            letters = list(random_word(rng, n).letters)
            P["euler_rule"].record(continuant(letters) == continuant_bruteforce(letters),
                                   detail="".join(letters))
    for _ in range(count):
        t = int(rng.integers(1, 16))
        letters = list(random_word(rng, max(t - 1, 1)).letters)[:t - 1]
        P["reversal"].record(continuant(letters) == continuant(letters[::-1]), detail="".join(letters))
        m = int(rng.integers(2, 20))
        letters = list(random_word(rng, m).letters)
        k = int(rng.integers(1, m))
        lhs = continuant(letters)
        rhs = continuant(letters[:k]) * continuant(letters[k:]) - continuant(letters[:k - 1]) * continuant(letters[k + 1:])
        P["splitting"].record(lhs == rhs, detail=("".join(letters), k))
        neg = list(random_word(rng, m).letters)
        seq = negative_index_sequence(neg, m)
        ok = all(seq[s] == -continuant(neg[:s - 1]) for s in range(1, m + 1))
        P["negative_index"].record(ok, detail="".join(neg))
    for _ in range(50):
        w = random_word(rng, int(rng.integers(1, 31)))
        M = matrix_of_word(w)
        P["unit_determinant"].record(M.det() == ONE, detail=str(w))
        P["matrix_closed_form"].record(M == matrix_from_continuants(w), detail=str(w))
    for n in range(1, 31):
        P["chebyshev_specialisation"].record(q_sequence("a" * n)[n] == chebyshev_U(n).to_bivar("a"),
                                             detail=n)
    golden = [(curve_polys("a^3").C, A - 1), (curve_polys("a^4").C, A * A - 2),
              (q_sequence("a^2b^2")[4], A * B * B - A - B)]
    for got, want in golden:
        P["golden_values"].record(got == want, detail=str(got))
    return _report("continuant", P, time.perf_counter() - t0)


def _curve_point_samples(words, per_curve: int, step: float = 2e-3, legal_only: bool = True):
    for w in words:
        tr = trace_branch(w, step=step)
        idx = np.where(tr.legal)[0] if legal_only else np.arange(len(tr.a))
        if len(idx) < 3:
            continue
        idx = idx[1:-1]
        pick = idx[np.linspace(0, len(idx) - 1, min(per_curve, len(idx))).astype(int)]
        for i in pick:
            yield tr.word, float(tr.a[i]), float(tr.b[i])


CURVE_WORDS = ("(a^3b^4)^3a^2", "a^3b^4a^2", "a^3(b^4a^2)^2", "b^3a^3b^2", "a^3b^3a^2",
               "b^3a^3b^3a^3b^2", "a^4b^3a^3b^3a^3", "a^4b^4a^4b^4a^3", "(a^4b^3)^2a^3", "b^4a^3b^3a^3b^3")


def suite_dynamics(seed: int = 2, tol: Tolerances = DEFAULT, iters: int = 10 ** 5) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    P = _Props()
    for _ in range(100):
        a, b = _annulus_point(rng)
        worst = 0.0
        for k in range(1, 51):
            lhs = iterate(L_MINUS, a, b, -k + 1, tol.eps_b)
            rhs = iterate(L_PLUS, a, b, k, tol.eps_b).reflect()
            worst = max(worst, abs(lhs.x - rhs.x), abs(lhs.y - rhs.y))
        P["reversibility"].record(worst <= 1e-9, worst, detail=(a, b))
    for _ in range(50):
        a, b = _annulus_point(rng)
        x = orbit_letters(a, b, L_MINUS, 10 ** 4, tol.eps_b)
        y = orbit_letters(b, a, L_PLUS, 10 ** 4, tol.eps_b)
        P["exchange_conjugacy"].record(bool(np.array_equal(x, 1 - y)), detail=(a, b))
        kap = kappa_of(a)
        codes = "".join("ab"[c] for c in x)
        runs = [len(r) for r in codes.split("b") if r][1:-1]
        ok = all(r in (kap - 1, kap) for r in runs)
        P["ray_count_bounds"].record(ok, detail=(a, b, sorted(set(runs))))
    for kap in range(2, 7):
        for b in np.linspace(-2.5, 2.5, 21):
            est = rotation_density(zeta(kap), float(b), iters=iters, eps=tol.eps_b)
            th, rho = theta_on_rank1(kap, float(b))
            err = abs(est.theta - th)
            P["rank1_theta"].record(err <= 2e-5, err, detail=(kap, float(b), est.theta, th))
            if b <= 2.0:
                err = abs(est.rho - rho)
                P["rank1_density"].record(err <= 2.0 / iters + 2e-5, err, detail=(kap, float(b)))
    for w, a, b in _curve_point_samples(CURVE_WORDS, 10):
        seg = boundary_segment(a, b, sign=w.sign, max_steps=10 * len(w), eps=tol.eps_b)
        if seg is None:
            P["boundary_word_found"].record(False, detail=(str(w), a, b))
            continue
        word, trace = seg
        P["boundary_word_found"].record(word == w, detail=(str(w), str(word), a, b))
        bs = block_sequence(word)
        P["palindromic_reduced"].record(bs.palindromic, detail=str(word))
        n = len(word)
        P["parity_law"].record((n % 2 == 1) == (bs.middle % 2 == 0), detail=str(word))
        res = symmetry_point_residual(trace, n, a, b)
        P["symmetry_line"].record(res <= 1e-9, res, detail=(str(word), a, b))
    for (a, b), want in [((3.0, 0.0), "interiorTheta0"), ((0.0, 0.0), "annulus"), ((2.0, 1.0), "boundary"),
                         ((-1.0, -1.0), "interiorThetaHalf"), ((-3.0, -3.0), "annulus")]:
        got = region_classify(a, b)
        P["region_examples"].record(got == want, detail=(a, b, got))
    return _report("dynamics", P, time.perf_counter() - t0)


def suite_curves(seed: int = 3, tol: Tolerances = DEFAULT, words: int = 20, max_len: int = 15) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    P = _Props()
    for _ in range(words):
        w = random_palindromic_word(rng, max_len, min_len=4)
        n = len(w)
        anchors = diagonal_anchors(w)
        on_c = sum(1 for x in anchors if x.on_critical_factor)
        P["anchor_count"].record(on_c == n // 2, detail=(str(w), on_c))
        Ct = curve_spec(w, "Ctilde")
        ok = all(x.on_critical_factor or abs(Ct.value(x.zeta, x.zeta)) <= 1e-8 * max(1.0, float(np.max(np.abs(Ct.q(x.zeta, x.zeta)))))
                 for x in anchors)
        P["anchor_cofactor"].record(ok, detail=str(w))
        asy = asymptotes(w)
        red = w.reduced
        ok = len(asy.vertical) == red.count("a") and len(asy.horizontal) == red.count("b")
        P["asymptote_count"].record(ok and asy.count == n - 1, detail=(str(w), len(asy.vertical), len(asy.horizontal)))
        for x in anchors:
            if not x.on_critical_factor:
                continue
            tr = trace_branch(w, step=5e-3, anchor_j=x.j, endpoints=False)
            if w.rank == 1:
                # rank-1 branches are the vertical (or horizontal) lines through the anchor
                line = tr.a if w[0] == "a" else tr.b
                P["rank1_line"].record(bool(np.allclose(line, x.zeta, atol=1e-12)), detail=(str(w), x.j))
                continue
            da, db = np.diff(tr.a), np.diff(tr.b)
            P["monotone_branch"].record(bool(np.all(da * db < 0)), detail=(str(w), x.j))
    per = {}
    for w, a, b in _curve_point_samples(CURVE_WORDS, 60, legal_only=False):
        per[str(w)] = per.get(str(w), 0) + 1
        r = gradient_parallel_residual(w, a, b, tol, check=False)
        P["gradient_parallel"].record(r < 1e-8, r, detail=(str(w), a, b))
        d = angle_sum(w, a, b).deviation
        P["angle_sum"].record(d < 1e-8, d, detail=(str(w), a, b))
    P["points_per_curve"].record(len(per) == len(CURVE_WORDS) and min(per.values()) >= 50, detail=per)
    # worked example
    w = Word("aaabbbbaaabbbbaaabbbbaa")
    e = (0.0, zeta(5))
    data = intersection_sequence(w, *e, tol, check=False)
    P["worked_example_T"].record(data.T == (2, 7, 9, 14, 16, 21) and data.period == 7, detail=data.T)
    P["worked_example_ranks"].record([d.ranks for d in data.decompositions] == [(1, 5, 1), (2, 3, 2), (3, 1, 3)],
                                     detail=[d.ranks for d in data.decompositions])
    P["worked_example_improper"].record(data.improper == (2, 9, 16), detail=data.improper)
    P["worked_example_code"].record(str(data.proper_code) == "a^2b^5a^2b^5a^2b^5a^2", detail=str(data.proper_code))
    em = (1.0, 2.0 * math.cos(3 * math.pi / 11))
    data2 = intersection_sequence(w, *em, tol, check=False)
    P["worked_example_em"].record(data2.T == (3, 20) and data2.period == 20
                                  and str(data2.proper_code) == "a^3b^4a^3b^4a^3b^3a^3"
                                  and [d.ranks for d in data2.decompositions] == [(1, 5, 1)], detail=data2.T)
    for mc in median_checks(w, *e, tol):
        cr = mc.crosses()
        worst = min(cr.values())
        P["transversality"].record(worst > 1e-6, worst, detail=(mc.j, cr))
    for j, k, c in tangency_residuals(w, *e, tol):
        P["tangency"].record(c < 1e-9, c, detail=(j, k))
    return _report("curves", P, time.perf_counter() - t0)


def suite_pencils(tol: float = 1e-6, iters: int = 10 ** 5, kmax: int = 5, lmax: int = 5, mmax: int = 4) -> dict:
    t0 = time.perf_counter()
    P = _Props()
    bases = {}
    for cell in pencil_lattice(kmax, lmax, mmax):
        spec = pencil(*cell)
        tr = trace_branch(spec.word)
        chk = verify_pencil(spec, tol=tol, trace=tr, theta_iters=iters)
        P["endpoints"].record(chk.err_e <= tol and chk.err_em <= tol, max(chk.err_e, chk.err_em),
                              detail=chk.to_json())
        P["theta_em"].record(chk.theta_err is not None and chk.theta_err <= 2.0 / iters, chk.theta_err,
                             detail=cell)
        if chk.measured:
            bases.setdefault(cell[:3], []).append(chk.measured[0])
            e = rotation_density(*spec.e, iters=iters)
            err = abs(e.theta - float(spec.theta_e))
            P["theta_e"].record(err <= 2.0 / iters, err, detail=cell)
            # interior points of the matched arc
            arc = next(x for x in tr.arcs if x.lower is not None and x.upper is not None
                       and {(x.lower.a, x.lower.b), (x.upper.a, x.upper.b)} == set(chk.measured))
            doms = set()
            for frac in (0.25, 0.5, 0.75):
                i = int(arc.start + frac * (arc.stop - arc.start))
                a, b = float(tr.a[i]), float(tr.b[i])
                d = rotational_domain(a, b)
                doms.add(d)
                est = rotation_density(a, b, iters=iters)
                ka, kb = kappa_of(a), kappa_of(b)
                lo, hi = 1.0 / (ka + kb), 1.0 / (ka + kb - 2)
                ok = lo - est.err_bound <= est.theta <= hi + est.err_bound
                P["theta_interior_bounds"].record(ok, detail=(cell, a, b, est.theta, lo, hi))
            span = {rotational_domain(float(x), float(y)) for x, y in
                    zip(tr.a[arc.start + 1:arc.stop], tr.b[arc.start + 1:arc.stop])}
            span.discard(None)
            ok = len(span) == 2 and sum(abs(p - q) for p, q in zip(*sorted(span))) == 1
            P["two_adjacent_domains"].record(ok, detail=(cell, sorted(span)))
    for key, pts in bases.items():
        spread = max(max(abs(p[0] - q[0]), abs(p[1] - q[1])) for p in pts for q in pts)
        P["basis_sharing"].record(spread <= 1e-8, spread, detail=key)
    for k in range(2, kmax + 1):
        for l in range(2, lmax + 1):
            w, ends = axis_word(k, l)
            tr = trace_branch(w)
            arcs = [x for x in tr.arcs if x.lower is not None and x.upper is not None]
            err = min((max(abs(arc.lower.a - ends[0][0]), abs(arc.lower.b - ends[0][1]),
                           abs(arc.upper.a - ends[1][0]), abs(arc.upper.b - ends[1][1])) for arc in arcs),
                      default=math.inf)
            P["axis_endpoints"].record(err <= tol, err, detail=(k, l))
            lo_a, hi_a, lo_b, hi_b = zeta(k), zeta(k + 1), zeta(l), zeta(l + 1)
            inside = all(lo_a - 1e-9 <= a <= hi_a + 1e-9 and lo_b - 1e-9 <= b <= hi_b + 1e-9
                         for arc in arcs for a, b in zip(tr.a[arc.start:arc.stop + 1], tr.b[arc.start:arc.stop + 1]))
            P["axis_single_domain"].record(bool(arcs) and inside, detail=(k, l))
    for case in ("-", "+"):
        for k, l, n, m in [(2, 4, 3, 0), (2, 4, 0, 3), (2, 3, 1, 1), (3, 3, 2, 1), (2, 2, 1, 1), (2, 5, 2, 2)]:
            want = grid_theta(case, k, l, n, m)
            w, w2 = grid_words(case, k, l, n, m)
            try:
                p = grid_intersection(case, k, l, n, m)
                got = rotation_at_double_point(w, w2, *p)
                est = rotation_density(*p, iters=iters)
                ok = got == want and abs(est.theta - float(want)) <= est.err_bound
                P["grid_theta"].record(ok, abs(est.theta - float(want)),
                                       detail=(case, k, l, n, m, str(got), str(want)))
            except (ValueError, ArithmeticError) as exc:
                P["grid_theta"].record(False, detail=(case, k, l, n, m, str(exc)))
    for k, l in [(2, 3), (3, 4), (4, 4)]:
        vals = {grid_theta("-", k + d, l - d, n, 3 - n) for d in (0, 1) if l - d >= 2 for n in range(4)}
        P["grid_theta_sums"].record(len(vals) == 1, detail=(k, l, [str(v) for v in vals]))
    return _report("pencils", P, time.perf_counter() - t0)


def suite_appendix(max_n: int = 40) -> dict:
    t0 = time.perf_counter()
    P = _Props()
    for n in range(1, max_n + 1):
        Un = chebyshev_U(n)
        ok = all(Un == chebyshev_U(k) * chebyshev_U(n - k + 1) - chebyshev_U(k - 1) * chebyshev_U(n - k)
                 for k in range(1, n + 1))
        P["U_product"].record(ok, detail=n)
    for n in range(1, 30):
        U = chebyshev_U(n)
        worst = 0.0
        for th in np.linspace(0.05, math.pi - 0.05, 37):
            # exact evaluation at the rounded abscissa keeps cancellation out of the comparison
            x = 2 * math.cos(th)
            worst = max(worst, abs(float(U(Fraction(x))) - math.sin(n * th) / math.sin(th)))
        P["U_trig"].record(worst < 1e-9, worst, detail=n)
    for n in range(1, 61):
        p = psi(n)
        roots = [2 * math.cos(2 * math.pi * k / n) for k in range(1, n + 1) if math.gcd(k, n) == 1]
        worst = max(abs(p(r)) for r in roots) / max(1.0, max(abs(c) for c in p.c))
        deg_ok = n < 3 or p.degree == totient(n) // 2
        P["psi_roots"].record(worst < 1e-9, worst, detail=n)
        P["psi_degree_monic"].record(deg_ok and p.c[-1] == 1, detail=n)
    for n in range(3, 61):
        # x^h Psi_n(x + 1/x) = sum_k c_k (x^2 + 1)^k x^(h - k) must give C_n(x)
        p, h = psi(n), totient(n) // 2
        acc = UnivarPoly()
        for k, ck in enumerate(p.c):
            acc = acc + (UnivarPoly((1, 0, 1)) ** k).shift(h - k) * ck
        P["psi_definition"].record(acc == cyclotomic(n), detail=n)
    for n in range(1, 41):
        # U_n factors into Psi_d over the divisors d > 2 of 2n
        prod = UnivarPoly((1,))
        for d in range(3, 2 * n + 1):
            if (2 * n) % d == 0:
                prod = prod * psi(d)
        P["U_psi_factorisation"].record(prod == chebyshev_U(n), detail=n)
    return _report("appendix", P, time.perf_counter() - t0)


def run_suite(name: str, **kw) -> dict:
    runners = {"continuant": suite_continuant, "dynamics": suite_dynamics, "curves": suite_curves,
               "pencils": suite_pencils, "appendix": suite_appendix}
    if name == "all":
        reports = [runners[s]() for s in SUITES]
        return {"schema": SCHEMA, "suite": "all", "ok": all(r["ok"] for r in reports), "suites": reports}
    if name not in runners:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return runners[name](**kw)
