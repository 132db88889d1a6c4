"""Critical curves C_w = 0 in the (a, b) parameter plane.

Branches of a critical curve are decreasing graphs b(a). In the rotated
frame s = a - b, p = a + b each branch is therefore a graph p(s) with
|dp/ds| < 1, which is what the tracer exploits: the root at s + h lies
within h of the root at s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .config import DEFAULT, Tolerances
from .continuant import curve_polys, q_sequence
from .dynamics import boundary_segment, zeta_nj
from .poly import ZERO, BivarPoly, poisson_bracket, squarefree_decomposition
from .words import Word, as_word, boundary_equivalent


class NotOnCurveError(ValueError):
    pass


class TraceError(RuntimeError):
    def __init__(self, message, last_sample=None):
        super().__init__(message if last_sample is None else f"{message} (last good sample {last_sample})")
        self.last_sample = last_sample


# numeric curve evaluation


@dataclass(frozen=True)
class CurveSpec:
    """A word with the recipe C = Q_i1 + sgn Q_i2 for its curve polynomial."""

    word: Word
    codes: np.ndarray
    i1: int
    i2: int
    sgn: float

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def sign(self) -> int:
        return self.word.sign

    def value(self, a, b) -> float:
        return _kernels.curve_value(self.codes, float(a), float(b), self.i1, self.i2, self.sgn)

    def grad(self, a, b) -> tuple[float, float, float]:
        return _kernels.curve_grad(self.codes, float(a), float(b), self.i1, self.i2, self.sgn)

    def q(self, a, b) -> np.ndarray:
        return _kernels.q_values(self.codes, float(a), float(b))

    def on_curve(self, a, b, tol: Tolerances = DEFAULT) -> bool:
        c, ca, cb = self.grad(a, b)
        return abs(c) <= tol.eps_c * max(1.0, math.hypot(ca, cb))


def word_codes(w) -> np.ndarray:
    w = as_word(w)
    return (np.frombuffer(w.letters.encode("ascii"), dtype=np.uint8) == ord("b")).astype(np.uint8)


def curve_spec(w, factor: str = "C") -> CurveSpec:
    """Numeric recipe for C_w (``factor="C"``) or its cofactor (``"Ctilde"``)."""
    w = as_word(w)
    n, k = len(w), len(w) // 2
    codes = word_codes(w)
    if factor == "C":
        if w.rank % 2 == 0:
            return CurveSpec(w, codes, n, 0, 0.0)
        if n % 2:
            return CurveSpec(w, codes, k + 1, k, -1.0)
        return CurveSpec(w, codes, k + 1, k - 1, -1.0)
    if factor == "Ctilde":
        if w.rank % 2 == 0:
            raise ValueError("even-rank words have no proper cofactor")
        if n % 2:
            return CurveSpec(w, codes, k + 1, k, 1.0)
        return CurveSpec(w, codes, k, 0, 0.0)
    raise ValueError(f"unknown factor {factor!r}")


def _as_spec(w) -> CurveSpec:
    return w if isinstance(w, CurveSpec) else curve_spec(w)


def _require_on_curve(spec: CurveSpec, a, b, tol: Tolerances):
    if not spec.on_curve(a, b, tol):
        raise NotOnCurveError(f"({a}, {b}) is not on the curve of {spec.word} "
                              f"(|C| = {abs(spec.value(a, b)):.3e})")


def q_zero_threshold(q: np.ndarray, tol: Tolerances = DEFAULT) -> float:
    return tol.eps_q * max(1.0, float(np.max(np.abs(q))))


# legality


def expected_signs(w) -> np.ndarray:
    """Sign of Q_t required at t = 1..n-1 for the orbit to follow w."""
    w = as_word(w)
    s = np.array([1 if ch == "a" else -1 for ch in w.letters[1:]], dtype=float)
    return s * w.sign


def legal_mask(w, avals, bvals, tol: Tolerances = DEFAULT, strict: bool = False) -> np.ndarray:
    """Legality at many curve points from the signs of Q_1..Q_{n-1}.

    Along the orbit of the initial boundary ray the abscissae are
    x_t = sign(w) Q_t, so letter t is a exactly when sign(w) Q_t > 0. A
    vanishing Q_t marks a boundary ray, where the letter is free; with
    ``strict`` only exact zeros count as free.
    """
    spec = _as_spec(w)
    avals = np.ascontiguousarray(avals, dtype=float)
    bvals = np.ascontiguousarray(bvals, dtype=float)
    Q = _kernels.q_matrix(spec.codes, avals, bvals)
    if spec.n < 2:
        return np.ones(len(avals), dtype=bool)
    inner = Q[1:spec.n]
    if strict:
        free = inner == 0.0
    else:
        scale = np.maximum(1.0, np.max(np.abs(Q), axis=0))
        free = np.abs(inner) <= tol.eps_q * scale
    ok = (np.sign(inner) == expected_signs(spec.word)[:, None]) | free
    return np.all(ok, axis=0)


def is_legal_point(w, a: float, b: float, tol: Tolerances = DEFAULT, check: bool = True) -> bool:
    """Simulate the boundary segment from the initial boundary ray and compare codes.

    Legal means the orbit returns to a boundary ray after exactly |w| steps
    with a code that agrees with w away from boundary rays.
    """
    w = as_word(w)
    if check:
        _require_on_curve(curve_spec(w), a, b, tol)
    n = len(w)
    res = boundary_segment(a, b, w.sign, max_steps=n, min_steps=n, eps=tol.eps_b)
    if res is None:
        return False
    word, trace = res
    free = {t for t, _ in trace.boundary_hits if t < n}
    return len(word) == n and boundary_equivalent(w, word, free)


def proper_code(w, a: float, b: float, tol: Tolerances = DEFAULT) -> Word | None:
    """The actual code of the boundary segment of length |w|, if there is one."""
    w = as_word(w)
    res = boundary_segment(a, b, w.sign, max_steps=len(w), min_steps=len(w), eps=tol.eps_b)
    return None if res is None else res[0]


# anchors and asymptotes


@dataclass(frozen=True)
class Anchor:
    j: int
    zeta: float
    on_critical_factor: bool
    legal_anchor: bool


def diagonal_anchors(w, tol: float = 1e-8) -> list[Anchor]:
    """The points (zeta_{n,j}, zeta_{n,j}) where Q_n meets the diagonal, j = 1..n-1."""
    spec = curve_spec(w)
    n, rank = spec.n, spec.word.rank
    out = []
    for j in range(1, n):
        z = zeta_nj(n, j)
        q = spec.q(z, z)
        c = spec.value(z, z)
        out.append(Anchor(j, z, abs(c) <= tol * max(1.0, float(np.max(np.abs(q)))), j == rank))
    return out


@dataclass(frozen=True)
class Asymptotes:
    vertical_poly: tuple[int, ...]     # coefficients in a, lowest first
    horizontal_poly: tuple[int, ...]   # coefficients in b, lowest first
    vertical: tuple[float, ...]
    horizontal: tuple[float, ...]

    @property
    def count(self) -> int:
        return len(self.vertical) + len(self.horizontal)


def _real_roots(coeffs_low_first, imag_tol=1e-7):
    """Real roots with multiplicity; repeated roots are split off exactly first."""
    out = []
    for f, mult in squarefree_decomposition(coeffs_low_first):
        r = np.roots([float(x) for x in f[::-1]])
        real = [float(x.real) for x in r if abs(x.imag) <= imag_tol * max(1.0, abs(x))]
        out += real * mult
    return tuple(sorted(out))


def asymptotes(w) -> Asymptotes:
    """Asymptotes of Q_n = 0 from its leading coefficients.

    The coefficient of the top power of a is a polynomial in b whose roots
    give the horizontal asymptotes; symmetrically for the vertical ones.
    """
    w = as_word(w)
    Qn = q_sequence(w)[len(w)]
    na, nb = Qn.degree()
    hpoly = [Qn.coeff(na, j) for j in range(nb + 1)]
    vpoly = [Qn.coeff(i, nb) for i in range(na + 1)]
    while hpoly and hpoly[-1] == 0:
        hpoly.pop()
    while vpoly and vpoly[-1] == 0:
        vpoly.pop()
    return Asymptotes(tuple(vpoly), tuple(hpoly), _real_roots(vpoly), _real_roots(hpoly))


# intersection data and polygonals


@dataclass(frozen=True)
class Decomposition:
    t: int
    u: Word
    v: Word
    u_prime: Word
    ranks: tuple[int, int, int]

    def to_json(self) -> dict:
        return {"t": self.t, "u": str(self.u), "v": str(self.v), "u_prime": str(self.u_prime),
                "ranks": list(self.ranks)}


@dataclass(frozen=True)
class IntersectionData:
    T: tuple[int, ...]
    period: int | None
    decompositions: tuple[Decomposition, ...]
    proper_code: Word | None
    improper: tuple[int, ...]
    simple: bool
    paired: bool

    def to_json(self) -> dict:
        return {"T": list(self.T), "period": self.period,
                "decompositions": [d.to_json() for d in self.decompositions],
                "proper_code": None if self.proper_code is None else str(self.proper_code),
                "improper": list(self.improper), "simple": self.simple}


class UnpairedIntersectionError(ValueError):
    pass


def intersection_sequence(w, a: float, b: float, tol: Tolerances = DEFAULT,
                          check: bool = True) -> IntersectionData:
    """Indices 0 < t < n with Q_t = 0 at a curve point, and the induced decompositions.

    For critical words the sequence must be symmetric under t -> n - t;
    other words get the raw sequence with ``paired`` reporting the symmetry.

    The decompositions w = u v u' (|u| = t_j, j <= |T|/2) are read off the
    proper code, i.e. the letters actually produced by the orbit.
    """
    spec = curve_spec(w)
    w = spec.word
    if check:
        _require_on_curve(spec, a, b, tol)
    n = len(w)
    q = spec.q(a, b)
    thr = q_zero_threshold(q, tol)
    T = tuple(t for t in range(1, n) if abs(q[t]) < thr)
    paired = all((n - t) in T for t in T)
    critical = w.rank % 2 == 1 and w.is_reduced_palindrome()
    if critical and not paired:
        raise UnpairedIntersectionError(f"intersection sequence {T} is not symmetric under t -> {n}-t")
    proper = proper_code(w, a, b, tol)
    code = proper if proper is not None else w
    improper = tuple(t for t in T if proper is not None and proper[t] != w[t])
    decs = []
    for t in T[:len(T) // 2]:
        u, v, u2 = Word(code.letters[:t]), Word(code.letters[t:n - t]), Word(code.letters[n - t:])
        decs.append(Decomposition(t, u, v, u2, (u.rank, v.rank, u2.rank)))
    simple = not T or len(set(w.letters[1:T[0]])) <= 1
    return IntersectionData(T, T[1] if len(T) >= 2 else None, tuple(decs), proper, improper,
                            simple, paired)


@dataclass(frozen=True)
class Polygonal:
    Gamma: np.ndarray
    vertices: tuple[int, ...]
    intersection_points: tuple[int, ...]
    regular: bool
    median_distances: tuple[float, ...]

    @property
    def median(self) -> tuple[np.ndarray, np.ndarray]:
        return self.Gamma[0], self.Gamma[-1]

    def symmetry_defect(self) -> float:
        """max_t |Gamma_t + Gamma_{n-1-t} - Gamma_{n-1}| relative to |Gamma_{n-1}|."""
        G = self.Gamma
        d = G + G[::-1] - G[-1]
        return float(np.max(np.hypot(d[:, 0], d[:, 1])) / max(1e-300, np.hypot(*G[-1])))

    def to_json(self) -> dict:
        return {"Gamma": self.Gamma.tolist(), "vertices": list(self.vertices),
                "intersection_points": list(self.intersection_points), "regular": self.regular}


def _segment_distance(P, A, B) -> float:
    d = B - A
    L2 = float(d @ d)
    if L2 == 0.0:
        return float(np.hypot(*(P - A)))
    u = min(1.0, max(0.0, float((P - A) @ d) / L2))
    return float(np.hypot(*(P - A - u * d)))


def gamma_sequence(w, a: float, b: float) -> np.ndarray:
    w = as_word(w)
    q = _kernels.q_values(word_codes(w), float(a), float(b))[:len(w)]
    isa = np.frombuffer(w.letters.encode("ascii"), dtype=np.uint8) == ord("a")
    g = np.zeros((len(w), 2))
    g[isa, 0] = q[isa] ** 2
    g[~isa, 1] = q[~isa] ** 2
    return np.cumsum(g, axis=0)


def polygonal(w, a: float, b: float, tol: Tolerances = DEFAULT, check: bool = True) -> Polygonal:
    """The cumulative sums Gamma_t of (Q_t^2, 0) for w_t = a and (0, Q_t^2) for w_t = b."""
    spec = curve_spec(w)
    w = spec.word
    if check:
        _require_on_curve(spec, a, b, tol)
    n = len(w)
    G = gamma_sequence(w, a, b)
    q = spec.q(a, b)
    thr = q_zero_threshold(q, tol)
    inter = tuple(t for t in range(1, n) if abs(q[t]) < thr)
    vertices = tuple(t - 1 for t in range(1, n) if w[t] != w[t - 1])
    scale = max(1e-300, float(np.hypot(*G[-1])))
    dists = tuple(_segment_distance(G[t], G[0], G[-1]) / scale for t in inter)
    regular = all(d > tol.eps_g for d in dists)
    return Polygonal(G, vertices, inter, regular, dists)


def gradient_parallel_residual(w, a: float, b: float, tol: Tolerances = DEFAULT,
                               check: bool = True) -> float:
    """|grad C x Gamma_{n-1}| / (|grad C| |Gamma_{n-1}|)."""
    spec = _as_spec(w)
    if check:
        _require_on_curve(spec, a, b, tol)
    _, ca, cb = spec.grad(a, b)
    G = gamma_sequence(spec.word, a, b)[-1]
    ng, nG = math.hypot(ca, cb), math.hypot(*G)
    if ng == 0.0 or nG == 0.0:
        raise ZeroDivisionError("vanishing gradient or polygonal end-point")
    return abs(ca * G[1] - cb * G[0]) / (ng * nG)


@dataclass(frozen=True)
class AngleSum:
    S: float
    S_mod_pi: float
    reference: float
    deviation: float


def angle_sum(w, a: float, b: float) -> AngleSum:
    """S = sum_{t=1..n} atan2(Q_{t-1}, Q_t), compared with n pi / 4 modulo pi."""
    spec = _as_spec(w)
    q = spec.q(a, b)
    n = spec.n
    S = float(np.sum(np.arctan2(q[:n], q[1:n + 1])))
    ref = (math.pi * n / 4.0) % math.pi
    m = S % math.pi
    dev = abs(m - ref)
    return AngleSum(S, m, ref, min(dev, math.pi - dev))


def ray_collisions(w, a: float, b: float, tol: float = 1e-9) -> list[tuple[int, int]]:
    """Pairs t < s of orbit rays z_t = (Q_t, Q_{t-1}) with the same direction."""
    spec = _as_spec(w)
    q = spec.q(a, b)
    n = spec.n
    ang = np.arctan2(np.concatenate(([-1.0], q[:n])), q[:n + 1])
    out = []
    for t in range(n + 1):
        for s in range(t + 1, n + 1):
            d = abs((ang[t] - ang[s] + math.pi) % (2 * math.pi) - math.pi)
            if d < tol:
                out.append((t, s))
    return out


# Poisson-bracket observables


@dataclass(frozen=True)
class DeltaSeq:
    Delta: tuple[BivarPoly, ...]
    Xi: tuple[BivarPoly, ...]
    sum_identity: bool
    middle_identity: bool | None


def delta_sequence(w) -> DeltaSeq:
    """Exact Delta_t = Q_t {Q_{t-1}, C} - Q_{t-1} {Q_t, C} and the increments Xi_i.

    Xi_i = Q_i^2 dC/da when w_i = b and -Q_i^2 dC/db when w_i = a. The
    identity Delta_t = Xi_0 + ... + Xi_{t-1} is checked for every t, and for
    odd n also Delta_{k+1} = {Q_k, Q_{k+1}} C.
    """
    w = as_word(w)
    qs = q_sequence(w)
    n, k = len(w), len(w) // 2
    C = curve_polys(w).C
    Ca, Cb = C.partials()
    brackets = []
    for t in range(-1, n + 1):
        qa, qb = qs[t].partials()
        brackets.append(qa * Cb - qb * Ca)

    def br(t):
        return brackets[t + 1]

    Delta = tuple(qs[t] * br(t - 1) - qs[t - 1] * br(t) for t in range(0, n + 1))
    Xi = []
    for i in range(n):
        sq = qs[i] * qs[i]
        Xi.append(sq * Ca if w[i] == "b" else -(sq * Cb))
    ok = True
    acc = ZERO
    for t in range(n + 1):
        if Delta[t] != acc:
            ok = False
            break
        if t < n:
            acc = acc + Xi[t]
    middle = None
    if n % 2:
        middle = Delta[k + 1] == poisson_bracket(qs[k], qs[k + 1]) * C
    return DeltaSeq(Delta, tuple(Xi), ok, middle)


# tracing


@dataclass(frozen=True)
class Endpoint:
    a: float
    b: float
    s: float
    trigger_t: int
    intersection: IntersectionData | None
    regular: bool | None
    simple: bool | None
    diagnosis: str = ""

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "trigger_t": self.trigger_t,
                "intersection": None if self.intersection is None else self.intersection.to_json(),
                "regular": self.regular, "simple": self.simple, "diagnosis": self.diagnosis}


@dataclass(frozen=True)
class LegalArc:
    start: int          # sample index range, inclusive
    stop: int
    lower: Endpoint | None   # None when the arc runs into the edge of the traced domain
    upper: Endpoint | None


@dataclass
class CurveTrace:
    word: Word
    s: np.ndarray
    a: np.ndarray
    b: np.ndarray
    legal: np.ndarray
    anchors: list
    anchor_j: int
    arcs: list = field(default_factory=list)
    endpoints: list = field(default_factory=list)

    @property
    def samples(self):
        return list(zip(self.a.tolist(), self.b.tolist(), self.legal.tolist()))

    def to_csv(self) -> str:
        lines = ["a,b,legal"]
        lines += [f"{x:.17g},{y:.17g},{int(l)}" for x, y, l in zip(self.a, self.b, self.legal)]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"word": str(self.word), "anchor_j": self.anchor_j, "samples": len(self.a),
                "legal_samples": int(np.sum(self.legal)),
                "arcs": [{"start": arc.start, "stop": arc.stop,
                          "lower": None if arc.lower is None else arc.lower.to_json(),
                          "upper": None if arc.upper is None else arc.upper.to_json()}
                         for arc in self.arcs],
                "endpoints": [e.to_json() for e in self.endpoints]}


def _in_box(a, b, box):
    return box[0] <= a <= box[1] and box[2] <= b <= box[3]


class _Branch:
    """Root finding for one branch in the (s, p) frame."""

    def __init__(self, spec: CurveSpec):
        self.spec = spec
        self.args = (spec.codes, 0.0, spec.i1, spec.i2, spec.sgn)

    def f(self, p, s):
        return _kernels.curve_value_sp(self.spec.codes, p, s, self.spec.i1, self.spec.i2, self.spec.sgn)

    def slope(self, s, p):
        _, ca, cb = self.spec.grad(0.5 * (p + s), 0.5 * (p - s))
        cs, cp = 0.5 * (ca - cb), 0.5 * (ca + cb)
        if cp == 0.0:
            return 0.0
        return max(-1.0, min(1.0, -cs / cp))

    def solve(self, s, center, radius, max_radius):
        """Root in p near ``center``; the bracket widens up to ``max_radius``."""
        r = radius
        while True:
            lo, hi = center - r, center + r
            flo, fhi = self.f(lo, s), self.f(hi, s)
            if flo == 0.0:
                return lo
            if fhi == 0.0:
                return hi
            if (flo < 0) != (fhi < 0):
                return brentq(self.f, lo, hi, args=(s,), xtol=1e-15, rtol=1e-15, maxiter=200)
            if r >= max_radius:
                return None
            r = min(2.0 * r, max_radius)


def _trace_direction(br: _Branch, s0, p0, direction, h0, box, max_steps, h_min=1e-9):
    pts = []
    s, p = s0, p0
    slope = br.slope(s, p)
    h = h0
    for _ in range(max_steps):
        s1 = s + direction * h
        pred = p + direction * h * slope
        # 1-Lipschitz: the root lies within h of p, hence within 2h of pred
        p1 = br.solve(s1, pred, max(h * 1e-3, 1e-12), 1.01 * (h + abs(pred - p)))
        if p1 is None or abs(p1 - pred) > 0.25 * h + 1e-12:
            h *= 0.5
            if h < h_min:
                raise TraceError("failed to bracket the branch", (0.5 * (p + s), 0.5 * (p - s)))
            continue
        a1, b1 = 0.5 * (p1 + s1), 0.5 * (p1 - s1)
        if not _in_box(a1, b1, box):
            break
        s, p = s1, p1
        slope = br.slope(s, p)
        pts.append((s, p))
        h = min(h0, 2.0 * h)
    return pts


def trace_branch(w, step: float = 1e-3, tol: Tolerances = DEFAULT, anchor_j: int | None = None,
                 box=(-2.0, 2.0, -2.0, 2.0), max_steps: int = 10 ** 6,
                 endpoints: bool = True) -> CurveTrace:
    """Trace the branch of C_w through the diagonal anchor j (default: the rank).

    Samples run in increasing s = a - b, that is in increasing a and
    decreasing b. Each sample is tagged with its legality, and every change
    of legality is refined to an end-point unless ``endpoints`` is false.
    """
    spec = curve_spec(w)
    wd = spec.word
    if step <= 0:
        raise ValueError("step must be positive")
    j = wd.rank if anchor_j is None else anchor_j
    anchors = diagonal_anchors(wd)
    z = zeta_nj(len(wd), j)
    br = _Branch(spec)
    p0 = br.solve(0.0, 2 * z, 1e-9, 1e-3)
    if p0 is None:
        raise TraceError(f"no root of C near the anchor j={j}")
    back = _trace_direction(br, 0.0, p0, -1, step, box, max_steps)
    fwd = _trace_direction(br, 0.0, p0, +1, step, box, max_steps)
    pts = back[::-1] + [(0.0, p0)] + fwd
    S = np.array([q[0] for q in pts])
    P = np.array([q[1] for q in pts])
    A, B = 0.5 * (P + S), 0.5 * (P - S)
    legal = legal_mask(spec, A, B, tol)
    trace = CurveTrace(wd, S, A, B, legal, anchors, j)
    if endpoints:
        detect_endpoints(trace, tol, _branch=br)
    return trace


def _violations(spec, a, b, tol):
    q = spec.q(a, b)
    thr = q_zero_threshold(q, tol)
    exp = expected_signs(spec.word)
    inner = q[1:spec.n]
    return [t + 1 for t in range(len(inner)) if abs(inner[t]) > thr and np.sign(inner[t]) != exp[t]]


def _refine_flip(br: _Branch, trace: CurveTrace, i_legal: int, i_illegal: int, tol: Tolerances):
    """Locate the zero of the offending Q_t between a legal and an illegal sample."""
    spec = br.spec
    viol = _violations(spec, trace.a[i_illegal], trace.b[i_illegal], tol)
    if not viol:
        viol = list(range(1, spec.n))
    s_l, s_r = trace.s[i_legal], trace.s[i_illegal]
    p_l = trace.a[i_legal] + trace.b[i_legal]

    def point(s):
        d = abs(s - s_l)
        p = br.solve(s, p_l, max(d, 1e-14), 1.01 * d + 1e-12)
        if p is None:
            raise TraceError("lost the branch while refining an end-point", (trace.a[i_legal], trace.b[i_legal]))
        return 0.5 * (p + s), 0.5 * (p - s)

    def g(s, t):
        a, b = point(s)
        return spec.q(a, b)[t]

    for t in viol:
        gl, gr = g(s_l, t), g(s_r, t)
        if gl == 0.0:
            return s_l, t
        if (gl < 0) != (gr < 0):
            s_star = brentq(g, s_l, s_r, args=(t,), xtol=1e-15, rtol=1e-15, maxiter=200)
            return s_star, t
    # no single Q_t changes sign between the samples: bisect on strict legality
    lo, hi = s_l, s_r
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        a, b = point(mid)
        if legal_mask(spec, np.array([a]), np.array([b]), tol, strict=True)[0]:
            lo = mid
        else:
            hi = mid
        if abs(hi - lo) < 1e-13:
            break
    return lo, 0


def _endpoint_at(spec, br, s_star, s_ref, p_ref, t, tol) -> Endpoint:
    d = abs(s_star - s_ref)
    p = br.solve(s_star, p_ref, max(d, 1e-14), 1.01 * d + 1e-12)
    if p is None:
        raise TraceError("lost the branch at an end-point", (0.5 * (p_ref + s_ref), 0.5 * (p_ref - s_ref)))
    a, b = float(0.5 * (p + s_star)) + 0.0, float(0.5 * (p - s_star)) + 0.0
    try:
        inter = intersection_sequence(spec.word, a, b, tol, check=False)
        poly = polygonal(spec.word, a, b, tol, check=False)
        diag = "" if inter.T else "empty intersection sequence at the legality change"
        return Endpoint(a, b, float(s_star), t, inter, poly.regular, inter.simple, diag)
    except UnpairedIntersectionError as exc:
        return Endpoint(a, b, float(s_star), t, None, None, None, str(exc))


def detect_endpoints(trace: CurveTrace, tol: Tolerances = DEFAULT, _branch=None) -> list[Endpoint]:
    """Refine each legality change of a trace and attach intersection data.

    Fills ``trace.arcs`` with every maximal run of legal samples and
    ``trace.endpoints`` with the refined end-points, ordered by s.
    """
    spec = curve_spec(trace.word)
    br = _branch or _Branch(spec)
    legal = trace.legal
    arcs, ends = [], []
    i, N = 0, len(legal)
    while i < N:
        if not legal[i]:
            i += 1
            continue
        j = i
        while j + 1 < N and legal[j + 1]:
            j += 1
        lower = upper = None
        if i > 0:
            s_star, t = _refine_flip(br, trace, i, i - 1, tol)
            lower = _endpoint_at(spec, br, s_star, trace.s[i], trace.a[i] + trace.b[i], t, tol)
            ends.append(lower)
        if j < N - 1:
            s_star, t = _refine_flip(br, trace, j, j + 1, tol)
            upper = _endpoint_at(spec, br, s_star, trace.s[j], trace.a[j] + trace.b[j], t, tol)
            ends.append(upper)
        arcs.append(LegalArc(i, j, lower, upper))
        i = j + 1
    trace.arcs = arcs
    trace.endpoints = ends
    return ends


# double points


def _legal_fast(w, a, b, tol):
    return bool(legal_mask(w, np.array([a]), np.array([b]), tol)[0])


def rotation_at_double_point(w, w2, a: float, b: float, tol: Tolerances = DEFAULT) -> Fraction:
    """Rotation number at a legal intersection of two critical curves, from ranks and lengths."""
    w, w2 = as_word(w), as_word(w2)
    for x in (w, w2):
        spec = curve_spec(x)
        c, ca, cb = spec.grad(a, b)
        if abs(c) > 1e3 * tol.eps_c * max(1.0, math.hypot(ca, cb)):
            raise NotOnCurveError(f"({a}, {b}) is not on the curve of {x}")
        if not _legal_fast(x, a, b, tol):
            raise ValueError(f"({a}, {b}) is not legal for {x}")
    if w2.rank > w.rank:
        w, w2 = w2, w
    if w.sign != w2.sign:
        return Fraction(w.rank + w2.rank, 2 * (len(w) + len(w2)))
    if w2.rank != w.rank:
        w3 = w2
    else:
        T = intersection_sequence(w2, a, b, tol, check=False).T
        if not T:
            raise ValueError("equal ranks and an empty intersection sequence: no prefix to use")
        w3 = Word(w2.letters[:T[0]])
    if len(w) == len(w3):
        raise ValueError("degenerate same-sign configuration")
    return Fraction(w.rank - w3.rank, 2 * (len(w) - len(w3)))


@dataclass(frozen=True)
class MedianCheck:
    j: int
    A: tuple[float, float]
    A_u: tuple[float, float]
    A_v: tuple[float, float]
    A_uv: tuple[float, float]

    def crosses(self) -> dict:
        """Normalised cross products of the medians (0 means parallel)."""
        def cr(x, y):
            return abs(x[0] * y[1] - x[1] * y[0]) / (math.hypot(*x) * math.hypot(*y))
        vs = {"A": self.A, "u": self.A_u, "v": self.A_v, "uv": self.A_uv}
        keys = list(vs)
        return {f"{p}|{q}": cr(vs[p], vs[q]) for i, p in enumerate(keys) for q in keys[i + 1:]}


def median_checks(w, a: float, b: float, tol: Tolerances = DEFAULT) -> list[MedianCheck]:
    """Medians of the sub-polygonals G_u, G_v, G_uv at a double point, one per decomposition."""
    w = as_word(w)
    inter = intersection_sequence(w, a, b, tol, check=False)
    G = gamma_sequence(w, a, b)
    T = inter.T
    out = []
    for j in range(1, len(T) // 2 + 1):
        k = len(T) - j + 1
        tj, tk = T[j - 1], T[k - 1]
        out.append(MedianCheck(j, tuple(G[-1] - G[0]), tuple(G[tj - 1] - G[0]),
                               tuple(G[tk - 1] - G[tj]), tuple(G[tk - 1] - G[0])))
    return out


def tangency_residuals(w, a: float, b: float, tol: Tolerances = DEFAULT) -> list[tuple[int, int, float]]:
    """Cross products of A_uv,j and A_u,k for j odd and k even (expected parallel when |T| > 2)."""
    w = as_word(w)
    T = intersection_sequence(w, a, b, tol, check=False).T
    G = gamma_sequence(w, a, b)
    half = len(T) // 2
    out = []
    for j in range(1, half + 1, 2):
        tk = T[len(T) - j]
        Auv = G[tk - 1] - G[0]
        for k in range(2, half + 1, 2):
            Au = G[T[k - 1] - 1] - G[0]
            c = abs(Auv[0] * Au[1] - Auv[1] * Au[0]) / (np.hypot(*Auv) * np.hypot(*Au))
            out.append((j, k, float(c)))
    return out
