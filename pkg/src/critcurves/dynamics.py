"""Orbits of rays under F(x, y) = (w x - y, x), with w = a on the right half plane
(including the negative ordinate semi-axis) and w = b on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .config import DEFAULT
from .poly import chebyshev_U
from .words import Word

L_PLUS = (0.0, 1.0)
L_MINUS = (0.0, -1.0)


def zeta(j: int) -> float:
    """zeta_j = 2 cos(pi / j)."""
    return 2.0 * math.cos(math.pi / j)


def zeta_nj(n: int, j: int) -> float:
    return 2.0 * math.cos(math.pi * j / n)


@dataclass(frozen=True)
class Ray:
    x: float
    y: float

    @classmethod
    def of(cls, x: float, y: float) -> "Ray":
        r = math.hypot(x, y)
        if r == 0.0:
            raise ValueError("the zero vector has no direction")
        return cls(x / r, y / r)

    @property
    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def boundary(self, eps: float = DEFAULT.eps_b) -> str | None:
        """'L+' or 'L-' when the ray lies in the boundary band, else None."""
        if abs(self.x) <= eps:
            return "L+" if self.y > 0 else "L-"
        return None

    def reflect(self) -> "Ray":
        """Image under R(x, y) = (y, x)."""
        return Ray(self.y, self.x)

    def __iter__(self):
        yield self.x
        yield self.y


def branch_letter(x: float, y: float, eps: float = DEFAULT.eps_b) -> str:
    if x > eps or (x >= -eps and y <= 0.0):
        return "a"
    return "b"


def step(r, a: float, b: float, eps: float = DEFAULT.eps_b) -> tuple[Ray, str]:
    x, y = r
    letter = branch_letter(x, y, eps)
    w = a if letter == "a" else b
    return Ray.of(w * x - y, x), letter


def inverse_step(r, a: float, b: float, eps: float = DEFAULT.eps_b) -> tuple[Ray, str]:
    """Preimage of a ray. The preimage has x = y', so y' decides the branch."""
    x1, y1 = r
    # preimage is (y1, w y1 - x1); on y1 = 0 both branches agree
    letter = "a" if y1 > eps else "b" if y1 < -eps else ("a" if x1 >= 0 else "b")
    w = a if letter == "a" else b
    return Ray.of(y1, w * y1 - x1), letter


def iterate(r, a: float, b: float, k: int, eps: float = DEFAULT.eps_b) -> Ray:
    """F^k of a ray for any integer k."""
    r = Ray.of(*r)
    if k >= 0:
        for _ in range(k):
            r, _ = step(r, a, b, eps)
    else:
        for _ in range(-k):
            r, _ = inverse_step(r, a, b, eps)
    return r


@dataclass(frozen=True)
class OrbitTrace:
    """Rays z_0..z_n, the code w_0..w_{n-1} (letter t chosen at ray t), and boundary hits."""

    xs: np.ndarray
    ys: np.ndarray
    code: str
    boundary_hits: tuple[tuple[int, str], ...]

    @property
    def rays(self) -> list[Ray]:
        return [Ray(float(x), float(y)) for x, y in zip(self.xs, self.ys)]

    def __len__(self):
        return len(self.code)

    def to_json(self) -> dict:
        return {"code": self.code,
                "rays": [[float(x), float(y)] for x, y in zip(self.xs, self.ys)],
                "boundary_hits": [[i, w] for i, w in self.boundary_hits]}


def orbit_code(a: float, b: float, start=L_MINUS, n: int = 100,
               eps: float = DEFAULT.eps_b) -> OrbitTrace:
    if n < 1:
        raise ValueError("n must be positive")
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    r = Ray.of(*start)
    xs[0], ys[0] = r.x, r.y
    letters = []
    hits = []
    for t in range(1, n + 1):
        r, letter = step(r, a, b, eps)
        letters.append(letter)
        xs[t], ys[t] = r.x, r.y
        which = r.boundary(eps)
        if which:
            hits.append((t, which))
    return OrbitTrace(xs, ys, "".join(letters), tuple(hits))


def orbit_letters(a: float, b: float, start=L_MINUS, n: int = 10 ** 6,
                  eps: float = DEFAULT.eps_b) -> np.ndarray:
    """Compiled code generation: uint8 array with 0 for a and 1 for b."""
    r = Ray.of(*start)
    return _kernels.orbit_bits(float(a), float(b), r.x, r.y, int(n), float(eps))


def boundary_segment(a: float, b: float, sign: int = 1, max_steps: int = 10 ** 4,
                     min_steps: int = 1, eps: float = DEFAULT.eps_b):
    """Boundary word from L- (sign +1) or L+ (sign -1) to the next boundary ray.

    The first boundary hit at or after ``min_steps`` ends the segment; earlier
    hits are kept in the trace. Returns (Word, OrbitTrace) or None if no hit
    occurs within ``max_steps``.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    start = L_MINUS if sign > 0 else L_PLUS
    r = Ray.of(*start)
    xs, ys = [r.x], [r.y]
    letters, hits = [], []
    for t in range(1, max_steps + 1):
        r, letter = step(r, a, b, eps)
        letters.append(letter)
        xs.append(r.x)
        ys.append(r.y)
        which = r.boundary(eps)
        if which:
            hits.append((t, which))
            if t >= min_steps:
                code = "".join(letters)
                return Word(code), OrbitTrace(np.array(xs), np.array(ys), code, tuple(hits))
    return None


# rotation number and density


def region_classify(a: float, b: float, tol: float = 1e-12, convention: str = "displayed") -> str:
    """Place (a, b) relative to the resonances of rotation number 0 and 1/2.

    The rotation-0 resonance is max(a, b) >= 2. For rotation 1/2 the
    ``displayed`` convention uses the set {ab <= 4, a, b < 0} as written;
    ``dynamical`` uses {ab >= 4, a, b < 0}, which is where the rotation number
    actually equals 1/2 (for instance theta(-1, -1) = 1/3).
    """
    if abs(max(a, b) - 2.0) <= tol:
        return "boundary"
    if max(a, b) > 2.0:
        return "interiorTheta0"
    if a < 0 and b < 0:
        if abs(a * b - 4.0) <= tol:
            return "boundary"
        inside = a * b < 4.0 if convention == "displayed" else a * b > 4.0
        if inside:
            return "interiorThetaHalf"
    elif convention not in ("displayed", "dynamical"):
        raise ValueError(f"unknown convention {convention!r}")
    return "annulus"


@dataclass(frozen=True)
class RotEstimate:
    theta: float
    rho: float
    iters: int
    err_bound: float
    region: str

    @property
    def density_defined(self) -> bool:
        return self.region != "interiorTheta0"

    def to_json(self) -> dict:
        return {"theta": self.theta, "rho": self.rho, "iters": self.iters,
                "err_bound": self.err_bound, "region": self.region}


def rotation_density(a: float, b: float, iters: int = 10 ** 5,
                     eps: float = DEFAULT.eps_b, min_iters: int = 1000) -> RotEstimate:
    """Frequency estimates of the rotation number and the density.

    theta counts ab factors in the code of (0, 1); rho averages the
    a-frequency of the codes of (0, 1) and (0, -1). Both are within about
    2/iters of their limits.
    """
    if iters < min_iters:
        raise ValueError(f"iters must be at least {min_iters}")
    n_ab, n_ap, n_am = _kernels.rotation_counts(float(a), float(b), int(iters), float(eps))
    return RotEstimate(n_ab / iters, (n_ap + n_am) / (2 * iters), iters, 2.0 / iters,
                       region_classify(a, b))


def theta_on_rank1(kappa: int, b: float) -> tuple[float, float]:
    """(theta, rho) on the vertical line a = zeta_kappa."""
    if kappa < 2:
        raise ValueError("kappa must be at least 2")
    if b > 2.0:
        theta = 0.0
    elif b < -2.0:
        theta = 1.0 / (kappa + 1)
    else:
        t = math.acos(b / 2.0)
        theta = t / (kappa * t + math.pi)
    return theta, kappa * theta


def sector_rays(a: float, kappa: int) -> list[Ray]:
    """Rays r_j = (U_j(a), U_{j+1}(a)), j = 1..kappa-1, for a in (zeta_{kappa-1}, zeta_kappa].

    At a = zeta_kappa the last ray is (1, 0).
    """
    if kappa < 2:
        raise ValueError("kappa must be at least 2")
    lo = zeta(kappa - 1)
    hi = zeta(kappa)
    if not (lo < a <= hi + 1e-14):
        raise ValueError(f"a={a} outside ({lo}, {hi}]")
    rays = []
    for j in range(1, kappa):
        u, v = chebyshev_U(j)(float(a)), chebyshev_U(j + 1)(float(a))
        if abs(v) < 1e-13:
            v = 0.0
        rays.append(Ray.of(u, v))
    return rays


def mobius_slope(a: float, m: float) -> float:
    """Slope of the image ray under M_a: m -> 1/(a - m), with inf -> 0 and a -> inf."""
    if math.isinf(m):
        return 0.0
    if m == a:
        return math.inf
    return 1.0 / (a - m)


def mobius_fixed_points(a: float) -> tuple[float, float] | None:
    """lambda_+ and lambda_- for |a| > 2, else None."""
    if abs(a) <= 2.0:
        return None
    s = math.sqrt((a / 2.0) ** 2 - 1.0)
    return a / 2.0 + s, a / 2.0 - s


def kappa_of(a: float) -> int | None:
    """The kappa with a in (zeta_{kappa-1}, zeta_kappa], or None for a <= -2 or a >= 2."""
    if a <= -2.0 or a >= 2.0:
        return None
    k = 2
    while zeta(k) < a:
        k += 1
    return k


def symmetry_point_residual(trace: OrbitTrace, n: int, a: float, b: float) -> float:
    """Distance of the designated ray of an n-letter boundary segment to its symmetry line.

    Odd n: the ray z_{(n+1)/2} lies on y = x. Even n: z_{n/2+1} lies on the
    set x = (a/2) y for y > 0 and x = (b/2) y for y <= 0.
    """
    if n % 2:
        t = (n + 1) // 2
        x, y = trace.xs[t], trace.ys[t]
        return abs(x - y) / math.sqrt(2.0)
    t = n // 2 + 1
    x, y = trace.xs[t], trace.ys[t]
    c = (a if y > 0 else b) / 2.0
    return abs(x - c * y) / math.hypot(1.0, c)


def theta_rank1_exact(kappa: int, ell: int) -> Fraction:
    return Fraction(1, kappa + ell)


SCAN_MAX_RES = 4096
SCAN_MAX_EXTENT = 4.0


@dataclass(frozen=True)
class ThetaScan:
    """theta estimates on a grid: row i has a = avals[i], column j has b = bvals[j]."""

    avals: np.ndarray
    bvals: np.ndarray
    theta: np.ndarray
    iters: int

    def regions(self) -> list[list[str]]:
        return [[region_classify(float(a), float(b)) for b in self.bvals] for a in self.avals]


def scan_grid(region, res: int):
    """Left-edge sample points x0 + i (x1 - x0) / res, i = 0..res-1, on each axis."""
    x0, x1, y0, y1 = (float(v) for v in region)
    if not (x0 < x1 and y0 < y1):
        raise ValueError("region must satisfy x0 < x1 and y0 < y1")
    if max(abs(x0), abs(x1), abs(y0), abs(y1)) > SCAN_MAX_EXTENT:
        raise ValueError(f"region must lie within [-{SCAN_MAX_EXTENT}, {SCAN_MAX_EXTENT}]^2")
    if not 1 <= res <= SCAN_MAX_RES:
        raise ValueError(f"resolution must be between 1 and {SCAN_MAX_RES}")
    i = np.arange(res)
    return x0 + i * (x1 - x0) / res, y0 + i * (y1 - y0) / res


def theta_scan(region=(0.0, 2.0, 0.0, 2.0), res: int = 256, iters: int = 10 ** 4,
               eps: float = DEFAULT.eps_b, workers: int | None = None) -> ThetaScan:
    """Rotation-number estimates over a grid; rows run in parallel threads.

    The compiled kernel releases the GIL, so rows scale with the number of
    cores; results do not depend on ``workers``.
    """
    from concurrent.futures import ThreadPoolExecutor
    import os

    if iters < 1:
        raise ValueError("iters must be positive")
    avals, bvals = scan_grid(region, res)
    out = np.empty((len(avals), len(bvals)))

    def row(i):
        _kernels.theta_points(np.full(len(bvals), avals[i]), bvals, int(iters), float(eps), out[i])

    workers = workers or os.cpu_count() or 1
    if workers == 1:
        for i in range(len(avals)):
            row(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(row, range(len(avals))))
    return ThetaScan(avals, bvals, out, int(iters))
