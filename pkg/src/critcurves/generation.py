"""Rank-1 lines, rank-2 axes and the first-generation pencils of critical curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import CurveTrace, curve_spec, trace_branch
from .dynamics import rotation_density, zeta
from .words import Word, parse_word


def rank1_curve(letter: str, kappa: int) -> tuple[Word, float]:
    """a^kappa lies on the line a = zeta_kappa; b^kappa on b = zeta_kappa."""
    if kappa < 2:
        raise ValueError("kappa must be at least 2")
    if letter not in ("a", "b"):
        raise ValueError("letter must be 'a' or 'b'")
    return Word(letter * kappa), zeta(kappa)


def c_point(kappa: int, ell: int) -> tuple[float, float]:
    """c_{kappa,ell} = (zeta_kappa, zeta_ell), where theta = 1/(kappa + ell)."""
    return zeta(kappa), zeta(ell)


def theta_zeta(sign: str | int, j: int, m: int) -> tuple[Fraction, float]:
    """vartheta = m / (m j +- 1) and zeta = 2 cos(pi vartheta)."""
    s = _sign(sign)
    den = m * j + s
    if den == 0:
        raise ZeroDivisionError(f"m j {'+' if s > 0 else '-'} 1 vanishes for j={j}, m={m}")
    th = Fraction(m, den)
    return th, 2.0 * math.cos(math.pi * th)


def _sign(sign) -> int:
    if sign in ("+", "plus", 1):
        return 1
    if sign in ("-", "minus", -1):
        return -1
    raise ValueError(f"bad sign {sign!r}")


def axis_word(kappa: int, ell: int) -> tuple[Word, tuple[tuple[float, float], tuple[float, float]]]:
    """The rank-2 word a^{kappa+1} b^ell with end-points c_{kappa,ell+1} and c_{kappa+1,ell}."""
    if kappa < 2 or ell < 2:
        raise ValueError("kappa and ell must be at least 2")
    return Word("a" * (kappa + 1) + "b" * ell), (c_point(kappa, ell + 1), c_point(kappa + 1, ell))


def axis_partner(kappa: int, ell: int) -> Word:
    """b^{ell+1} a^kappa, which gives the same curve as the axis word."""
    return Word("b" * (ell + 1) + "a" * kappa)


@dataclass(frozen=True)
class PencilSpec:
    family: int
    kappa: int
    ell: int
    m: int
    word: Word
    e: tuple[float, float]
    e_m: tuple[float, float]
    theta_e: Fraction
    theta_em: Fraction
    basis: tuple[int, int]

    def to_json(self) -> dict:
        return {"family": self.family, "kappa": self.kappa, "ell": self.ell, "m": self.m,
                "word": str(self.word), "e": list(self.e), "e_m": list(self.e_m),
                "theta_e": str(self.theta_e), "theta_em": str(self.theta_em)}


def _check_constraints(family, kappa, ell, m):
    if m < 1:
        raise ValueError("m must be at least 1")
    if family in (1, 2):
        if not (kappa >= 2 and ell > 2):
            raise ValueError(f"family {family} needs kappa >= 2 and ell > 2")
    elif family in (3, 4):
        if not (kappa > 2 and ell >= 2):
            raise ValueError(f"family {family} needs kappa > 2 and ell >= 2")
    else:
        raise ValueError("family must be 1, 2, 3 or 4")


def pencil(family: int, kappa: int, ell: int, m: int) -> PencilSpec:
    """Word and predicted end-points of a first-generation curve.

    ====  ==========================  ==================  =====================  ==========================
    row   word                        basis e             e_m                    theta(e_m)
    ====  ==========================  ==================  =====================  ==========================
    1     (a^{k+1} b^l)^m a^k         c_{k, l+1}          (zeta_{k+1}, zeta-_{l,m})  vartheta-_{k+l+1, m}
    2     a^{k+1} (b^l a^k)^m         c_{k+1, l-1}        (zeta_k, zeta+_{l,m})      vartheta+_{k+l, m}
    3     (b^{l+1} a^k)^m b^l         c_{k+1, l}          (zeta-_{k,m}, zeta_{l+1})  vartheta-_{k+l+1, m}
    4     b^{l+1} (a^k b^l)^m         c_{k-1, l+1}        (zeta+_{k,m}, zeta_l)      vartheta+_{k+l, m}
    ====  ==========================  ==================  =====================  ==========================
    """
    _check_constraints(family, kappa, ell, m)
    k, l = kappa, ell
    if family == 1:
        text = f"(a^{k + 1}b^{l})^{m}a^{k}"
        basis = (k, l + 1)
        e_m = (zeta(k + 1), theta_zeta("-", l, m)[1])
        th = theta_zeta("-", k + l + 1, m)[0]
    elif family == 2:
        text = f"a^{k + 1}(b^{l}a^{k})^{m}"
        basis = (k + 1, l - 1)
        e_m = (zeta(k), theta_zeta("+", l, m)[1])
        th = theta_zeta("+", k + l, m)[0]
    elif family == 3:
        text = f"(b^{l + 1}a^{k})^{m}b^{l}"
        basis = (k + 1, l)
        e_m = (theta_zeta("-", k, m)[1], zeta(l + 1))
        th = theta_zeta("-", k + l + 1, m)[0]
    else:
        text = f"b^{l + 1}(a^{k}b^{l})^{m}"
        basis = (k - 1, l + 1)
        e_m = (theta_zeta("+", k, m)[1], zeta(l))
        th = theta_zeta("+", k + l, m)[0]
    return PencilSpec(family, k, l, m, parse_word(text), c_point(*basis), e_m,
                      Fraction(1, basis[0] + basis[1]), th, basis)


def grid_theta(case: str, kappa: int, ell: int, n: int, m: int) -> Fraction:
    """Rotation number vartheta-+_{kappa+ell+1, n+m+1} at an intersection of two pencil curves."""
    if kappa < 2 or ell < 2:
        raise ValueError("kappa and ell must be at least 2")
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    return theta_zeta(case, kappa + ell + 1, n + m + 1)[0]


@dataclass(frozen=True)
class PencilCheck:
    spec: PencilSpec
    measured: tuple[tuple[float, float], ...]
    err_e: float
    err_em: float
    n_arcs: int
    ok: bool
    note: str = ""
    theta_measured: float | None = None
    theta_err: float | None = None

    def to_json(self) -> dict:
        d = self.spec.to_json()
        d.update({"measured": [list(p) for p in self.measured], "err_e": self.err_e,
                  "err_em": self.err_em, "arcs": self.n_arcs, "ok": self.ok, "note": self.note,
                  "theta_measured": self.theta_measured, "theta_err": self.theta_err})
        return d


def _dist(p, q):
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def verify_pencil(spec: PencilSpec, tol: float = 1e-6, step: float = 1e-3,
                  trace: CurveTrace | None = None, theta_iters: int | None = None) -> PencilCheck:
    """Trace the pencil word and compare the end-points of its legal arcs with the prediction.

    Every legal arc is inspected; the check passes when one of them has end-points
    matching e and e_m within ``tol`` in each coordinate. With ``theta_iters`` the
    rotation number at the predicted e_m is also measured and must lie within
    2/theta_iters of theta(e_m).
    """
    tr = trace if trace is not None else trace_branch(spec.word, step=step)
    best = (math.inf, math.inf, ())
    for arc in tr.arcs:
        ends = [(x.a, x.b) for x in (arc.lower, arc.upper) if x is not None]
        if len(ends) != 2:
            continue
        for p, q in (ends, ends[::-1]):
            ee, em = _dist(p, spec.e), _dist(q, spec.e_m)
            if max(ee, em) < max(best[0], best[1]):
                best = (ee, em, (p, q))
    ok = max(best[0], best[1]) <= tol
    note = "" if tr.arcs else "no legal arc found"
    th = th_err = None
    if theta_iters:
        est = rotation_density(*spec.e_m, iters=theta_iters)
        th, th_err = est.theta, abs(est.theta - float(spec.theta_em))
        if th_err > est.err_bound:
            ok = False
            note = (note + "; " if note else "") + "theta mismatch at e_m"
    return PencilCheck(spec, best[2], best[0], best[1], len(tr.arcs), ok, note, th, th_err)


def pencil_lattice(kmax: int = 5, lmax: int = 5, mmax: int = 4):
    """All (family, kappa, ell, m) cells allowed by the row constraints."""
    for family in (1, 2, 3, 4):
        for k in range(2, kmax + 1):
            for l in range(2, lmax + 1):
                for m in range(1, mmax + 1):
                    try:
                        _check_constraints(family, k, l, m)
                    except ValueError:
                        continue
                    yield family, k, l, m


def rotational_domain(a: float, b: float) -> tuple[int, int] | None:
    """(kappa, ell) with zeta_kappa <= a <= zeta_{kappa+1} and likewise for b (first quadrant)."""
    def idx(x):
        if x < 0 or x >= 2:
            return None
        k = 2
        while zeta(k + 1) < x:
            k += 1
        return k
    ka, kb = idx(a), idx(b)
    if ka is None or kb is None:
        return None
    return ka, kb


def grid_words(case: str, kappa: int, ell: int, n: int, m: int) -> tuple[Word, Word]:
    """The pair of odd-rank words whose curves cross inside D_{kappa,ell} with rotation grid_theta."""
    if kappa < 2 or ell < 2 or n < 0 or m < 0:
        raise ValueError("need kappa, ell >= 2 and n, m >= 0")
    k, l = kappa, ell
    if _sign(case) < 0:
        w = f"(a^{k + 1}b^{l})^{n}a^{k}" if n else f"a^{k}"
        w2 = f"(b^{l + 1}a^{k})^{m}b^{l}" if m else f"b^{l}"
    else:
        # b exponent l+1 here: with l the total length, hence theta, would not depend on n + m alone
        w = f"a^{k + 1}(b^{l + 1}a^{k})^{n}" if n else f"a^{k + 1}"
        w2 = f"b^{l + 1}(a^{k + 1}b^{l})^{m}" if m else f"b^{l + 1}"
    return parse_word(w), parse_word(w2)


def grid_intersection(case: str, kappa: int, ell: int, n: int, m: int,
                      step: float = 1e-3) -> tuple[float, float]:
    """Crossing of the two grid curves inside D_{kappa,ell}, polished by Newton's method."""
    w, w2 = grid_words(case, kappa, ell, n, m)
    s1, s2 = curve_spec(w), curve_spec(w2)
    lo_a, hi_a = zeta(kappa), zeta(kappa + 1)
    lo_b, hi_b = zeta(ell), zeta(ell + 1)
    tr = _trace_or_line(w, step)
    vals = np.array([s2.value(x, y) for x, y in zip(tr[0], tr[1])])
    for i in range(len(vals) - 1):
        if (vals[i] < 0) != (vals[i + 1] < 0):
            x0 = np.array([0.5 * (tr[0][i] + tr[0][i + 1]), 0.5 * (tr[1][i] + tr[1][i + 1])])
            z = _newton2(s1, s2, x0)
            if z is not None and lo_a - 1e-9 <= z[0] <= hi_a + 1e-9 and lo_b - 1e-9 <= z[1] <= hi_b + 1e-9:
                return z
    raise ValueError(f"no crossing of {w} and {w2} inside D_{kappa},{ell}")


def _trace_or_line(w: Word, step: float):
    if w.rank == 1:
        z = zeta(len(w))
        t = np.arange(-2.0, 2.0 + step, step)
        return (np.full_like(t, z), t) if w[0] == "a" else (t, np.full_like(t, z))
    tr = trace_branch(w, step=step, endpoints=False)
    return tr.a, tr.b


def _newton2(s1, s2, z, iters: int = 30):
    z = np.array(z, dtype=float)
    for _ in range(iters):
        f1, a1, b1 = s1.grad(*z)
        f2, a2, b2 = s2.grad(*z)
        det = a1 * b2 - a2 * b1
        if det == 0.0:
            return None
        dz = np.array([(f1 * b2 - f2 * b1) / det, (a1 * f2 - a2 * f1) / det])
        z = z - dz
        if np.max(np.abs(dz)) < 1e-15:
            break
    ok = all(abs(sp.value(*z)) <= 1e-10 * max(1.0, float(np.hypot(*sp.grad(*z)[1:]))) for sp in (s1, s2))
    return (float(z[0]) + 0.0, float(z[1]) + 0.0) if ok else None
