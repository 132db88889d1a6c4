"""Exact integer polynomials in one indeterminate X and two indeterminates a, b."""

from __future__ import annotations

import math
import re
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache

import numpy as np

_KRONECKER_MIN = 600  # product of term counts above which packed multiplication pays off
_HALF = np.uint64(1 << 63)


def _kronecker_mul(p: dict, q: dict) -> dict | None:
    """Multiply through one big-integer product, or return None if digits overflow int64."""
    ma = max(abs(c) for c in p.values())
    mb = max(abs(c) for c in q.values())
    if ma * mb * min(len(p), len(q)) >= 1 << 62:
        return None
    da = max(i for i, _ in p) + max(i for i, _ in q)
    D = max(j for _, j in p) + max(j for _, j in q) + 1
    L = (da + 1) * D
    off = int.from_bytes((b"\x00" * 7 + b"\x80") * L, "little")

    def encode(P):
        idx = np.fromiter((i * D + j for i, j in P), dtype=np.int64, count=len(P))
        val = np.fromiter(P.values(), dtype=np.int64, count=len(P))
        dig = np.full(L, _HALF, dtype=np.uint64)
        dig[idx] = val.astype(np.uint64) + _HALF
        return int.from_bytes(dig.tobytes(), "little") - off

    prod = encode(p) * encode(q) + off
    dig = (np.frombuffer(prod.to_bytes(L * 8, "little"), dtype=np.uint64) - _HALF).view(np.int64)
    nz = np.flatnonzero(dig)
    return {divmod(int(e), D): int(dig[e]) for e in nz}


def _dict_mul(p: dict, q: dict) -> dict:
    out = defaultdict(int)
    for (i, j), c in p.items():
        for (k, l), d in q.items():
            out[i + k, j + l] += c * d
    return {e: c for e, c in out.items() if c}


class BivarPoly:
    """Polynomial sum c_ij a^i b^j with arbitrary-precision integer coefficients.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif isinstance(coeffs, int):
            coeffs = {(0, 0): coeffs}
        c = {}
        for (i, j), v in dict(coeffs).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            v = int(v)
            if v:
                c[int(i), int(j)] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "BivarPoly":
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def var(cls, name: str) -> "BivarPoly":
        if name == "a":
            return cls({(1, 0): 1})
        if name == "b":
            return cls({(0, 1): 1})
        raise ValueError(f"unknown indeterminate {name!r}")

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __iter__(self):
        return iter(self._c.items())

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> tuple[int, int]:
        """(deg_a, deg_b); (-1, -1) for the zero polynomial."""
        if not self._c:
            return (-1, -1)
        return (max(i for i, _ in self._c), max(j for _, j in self._c))

    def total_degree(self) -> int:
        return max((i + j for i, j in self._c), default=-1)

    def coeff(self, i: int, j: int) -> int:
        return self._c.get((i, j), 0)

    # arithmetic

    @staticmethod
    def _lift(x):
        if isinstance(x, BivarPoly):
            return x
        if isinstance(x, int):
            return BivarPoly.const(x)
        return NotImplemented

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __neg__(self):
        return BivarPoly._raw({e: -c for e, c in self._c.items()})

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        c = dict(self._c)
        for e, v in o._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return BivarPoly._raw(c)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not self._c or not o._c:
            return BivarPoly._raw({})
        if len(o._c) == 1:
            ((k, l), d), = o._c.items()
            return BivarPoly._raw({(i + k, j + l): c * d for (i, j), c in self._c.items()})
        if len(self._c) == 1:
            return o * self
        if len(self._c) * len(o._c) >= _KRONECKER_MIN:
            c = _kronecker_mul(self._c, o._c)
            if c is not None:
                return BivarPoly._raw(c)
        return BivarPoly._raw(_dict_mul(self._c, o._c))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = BivarPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_var(self, name: str) -> "BivarPoly":
        """Multiply by the indeterminate a or b (an exponent shift)."""
        if name == "a":
            return BivarPoly._raw({(i + 1, j): c for (i, j), c in self._c.items()})
        if name == "b":
            return BivarPoly._raw({(i, j + 1): c for (i, j), c in self._c.items()})
        raise ValueError(f"unknown indeterminate {name!r}")

    # calculus

    def partial(self, name: str) -> "BivarPoly":
        if name == "a":
            return BivarPoly._raw({(i - 1, j): i * c for (i, j), c in self._c.items() if i})
        if name == "b":
            return BivarPoly._raw({(i, j - 1): j * c for (i, j), c in self._c.items() if j})
        raise ValueError(f"unknown indeterminate {name!r}")

    def partials(self) -> tuple["BivarPoly", "BivarPoly"]:
        return self.partial("a"), self.partial("b")

    # evaluation

    def _rows(self):
        rows = defaultdict(dict)
        for (i, j), c in self._c.items():
            rows[i][j] = c
        return rows

    def eval(self, a: float, b: float) -> float:
        """Horner evaluation in double precision; raises OverflowError on a non-finite result."""
        if not self._c:
            return 0.0
        da, db = self.degree()
        rows = self._rows()
        acc = 0.0
        for i in range(da, -1, -1):
            row = rows.get(i)
            inner = 0.0
            if row:
                for j in range(max(row), -1, -1):
                    inner = inner * b + float(row.get(j, 0))
            acc = acc * a + inner
        if not math.isfinite(acc) and math.isfinite(a) and math.isfinite(b):
            raise OverflowError(f"polynomial value overflowed at ({a}, {b})")
        return acc

    __call__ = eval

    def eval_exact(self, a, b) -> Fraction:
        """Exact evaluation at rational (or integer) arguments."""
        a, b = Fraction(a), Fraction(b)
        return sum((c * a ** i * b ** j for (i, j), c in self._c.items()), Fraction(0))

    def eval_array(self, a, b):
        """Vectorised double-precision evaluation over numpy arrays."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        out = np.zeros(np.broadcast(a, b).shape)
        if not self._c:
            return out
        da, _ = self.degree()
        rows = self._rows()
        for i in range(da, -1, -1):
            row = rows.get(i)
            inner = np.zeros_like(out)
            if row:
                for j in range(max(row), -1, -1):
                    inner = inner * b + float(row.get(j, 0))
            out = out * a + inner
        return out

    def specialize_b(self, b: int) -> "UnivarPoly":
        """Substitute an integer for b, giving a polynomial in a."""
        coeffs = defaultdict(int)
        for (i, j), c in self._c.items():
            coeffs[i] += c * b ** j
        n = max(coeffs, default=-1)
        return UnivarPoly([coeffs.get(i, 0) for i in range(n + 1)])

    # text and JSON

    def _sorted_terms(self):
        return sorted(self._c.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0]))

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for (i, j), c in self._sorted_terms():
            mono = " ".join(x for x in (_power("a", i), _power("b", j)) if x)
            mag = abs(c)
            body = mono if mono and mag == 1 else (f"{mag} {mono}" if mono else str(mag))
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"BivarPoly({str(self)!r})"

    def to_json(self) -> list:
        return [[i, j, str(c)] for (i, j), c in self._sorted_terms()]

    @classmethod
    def from_json(cls, data) -> "BivarPoly":
        return cls({(int(i), int(j)): int(c) for i, j, c in data})

    @classmethod
    def parse(cls, text: str) -> "BivarPoly":
        """Parse the canonical text form (``*`` between factors is also accepted)."""
        s = text.replace("*", " ").replace("−", "-").strip()
        if not s:
            raise ValueError("empty polynomial text")
        s = re.sub(r"\s*([+-])\s*", r" \1 ", s).strip()
        tokens = s.split(" ")
        sign = 1
        acc = defaultdict(int)
        expect_term = True
        buf = []

        def flush():
            nonlocal buf
            if not buf:
                raise ValueError(f"malformed polynomial: {text!r}")
            c, i, j = 1, 0, 0
            for tok in buf:
                m = re.fullmatch(r"([ab])(?:\^(\d+))?", tok)
                if m:
                    e = int(m.group(2) or 1)
                    if m.group(1) == "a":
                        i += e
                    else:
                        j += e
                elif tok.isdigit():
                    c *= int(tok)
                else:
                    raise ValueError(f"bad token {tok!r} in {text!r}")
            acc[i, j] += sign * c
            buf = []

        for tok in tokens:
            if tok in "+-" and tok:
                if buf:
                    flush()
                    sign = 1
                sign = sign * (-1 if tok == "-" else 1)
                expect_term = True
            elif tok:
                buf.append(tok)
                expect_term = False
        if expect_term:
            raise ValueError(f"dangling operator in {text!r}")
        flush()
        return cls(acc)


def _power(name, e):
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


A = BivarPoly.var("a")
B = BivarPoly.var("b")
ONE = BivarPoly.const(1)
ZERO = BivarPoly()


def poly_arith(p: BivarPoly, q: BivarPoly, op: str) -> BivarPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def poly_partials(p: BivarPoly) -> tuple[BivarPoly, BivarPoly]:
    return p.partials()


def poisson_bracket(f: BivarPoly, g: BivarPoly) -> BivarPoly:
    """{f, g} = f_a g_b - f_b g_a."""
    fa, fb = f.partials()
    ga, gb = g.partials()
    return fa * gb - fb * ga


class UnivarPoly:
    """Polynomial in X with integer coefficients, stored lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = UnivarPoly([other])
        if not isinstance(other, UnivarPoly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        if isinstance(other, int):
            other = UnivarPoly([other])
        n = max(len(self.c), len(other.c))
        return UnivarPoly([(self.c[i] if i < len(self.c) else 0) + (other.c[i] if i < len(other.c) else 0)
                           for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UnivarPoly([-x for x in self.c])

    def __sub__(self, other):
        if isinstance(other, int):
            other = UnivarPoly([other])
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return UnivarPoly([x * other for x in self.c])
        if not self.c or not other.c:
            return UnivarPoly()
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return UnivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = UnivarPoly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int = 1) -> "UnivarPoly":
        """Multiply by X^k."""
        return UnivarPoly((0,) * k + self.c) if self.c else self

    def divmod(self, d: "UnivarPoly") -> tuple["UnivarPoly", "UnivarPoly"]:
        """Division by a monic (or unit-leading) divisor."""
        if not d.c:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = d.c[-1]
        if lead not in (1, -1):
            raise ValueError("divisor must have leading coefficient +-1")
        r = list(self.c)
        q = [0] * max(len(r) - len(d.c) + 1, 0)
        for k in range(len(q) - 1, -1, -1):
            f = r[k + len(d.c) - 1] * lead
            q[k] = f
            if f:
                for j, y in enumerate(d.c):
                    r[k + j] -= f * y
        return UnivarPoly(q), UnivarPoly(r)

    def __call__(self, x):
        acc = 0.0 if isinstance(x, float) else 0
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def to_bivar(self, name: str = "a") -> BivarPoly:
        if name == "a":
            return BivarPoly({(i, 0): v for i, v in enumerate(self.c)})
        return BivarPoly({(0, i): v for i, v in enumerate(self.c)})

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            v = self.c[i]
            if not v:
                continue
            mono = _power("X", i)
            mag = abs(v)
            body = mono if mono and mag == 1 else (f"{mag} {mono}" if mono else str(mag))
            if not parts:
                parts.append(("-" if v < 0 else "") + body)
            else:
                parts.append(("- " if v < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"UnivarPoly({str(self)!r})"


X = UnivarPoly([0, 1])


@lru_cache(maxsize=None)
def chebyshev_U(n: int) -> UnivarPoly:
    """U_n with U_{-1} = -1, U_0 = 0 and U_{n+1} = X U_n - U_{n-1}.

    U_n(2 cos t) = sin(n t) / sin t.
    """
    if n < -1:
        raise ValueError("n must be >= -1")
    if n == -1:
        return UnivarPoly([-1])
    if n == 0:
        return UnivarPoly()
    u_prev, u = UnivarPoly(), UnivarPoly([1])
    for _ in range(1, n):
        u_prev, u = u, u.shift() - u_prev
    return u


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> UnivarPoly:
    """The n-th cyclotomic polynomial, by exact division of x^n - 1."""
    if n < 1:
        raise ValueError("n must be positive")
    num = UnivarPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num, r = num.divmod(cyclotomic(d))
            assert not r.c
    return num


@lru_cache(maxsize=None)
def _x_power_sum(k: int) -> UnivarPoly:
    """P_k with P_k(x + 1/x) = x^k + x^-k."""
    if k == 0:
        return UnivarPoly([2])
    if k == 1:
        return X
    return _x_power_sum(k - 1).shift() - _x_power_sum(k - 2)


@lru_cache(maxsize=None)
def psi(n: int) -> UnivarPoly:
    """Minimal polynomial of 2 cos(2 pi / n) over the integers.

    For n >= 3 the cyclotomic polynomial is self-reciprocal of degree 2h, so
    x^-h C_n(x) regroups into a polynomial in X = x + 1/x.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return UnivarPoly([-2, 1])
    if n == 2:
        return UnivarPoly([2, 1])
    c = cyclotomic(n).c
    h = (len(c) - 1) // 2
    out = UnivarPoly([c[h]])
    for k in range(1, h + 1):
        out = out + _x_power_sum(k) * c[h + k]
    return out


def _qdivmod(f: list, g: list) -> tuple[list, list]:
    f = list(f)
    q = [Fraction(0)] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and any(f):
        c = f[-1] / g[-1]
        k = len(f) - len(g)
        q[k] = c
        for i, x in enumerate(g):
            f[i + k] -= c * x
        f.pop()
        while f and f[-1] == 0:
            f.pop()
    return q, f


def _qgcd(f: list, g: list) -> list:
    while g:
        f, g = g, _qdivmod(f, g)[1]
    return [x / f[-1] for x in f]


def _qderiv(f: list) -> list:
    return [i * x for i, x in enumerate(f)][1:]


def squarefree_decomposition(coeffs) -> list[tuple[list, int]]:
    """Factors f_i (monic, rational, lowest degree first) with f = lc * prod f_i^i, by Yun's algorithm."""
    f = [Fraction(x) for x in coeffs]
    while f and f[-1] == 0:
        f.pop()
    if len(f) <= 1:
        return []
    a0 = _qgcd(f, _qderiv(f))
    b = _qdivmod(f, a0)[0]
    c = _qdivmod(_qderiv(f), a0)[0]
    d = [x - y for x, y in _zip_pad(c, _qderiv(b))]
    out, i = [], 1
    while len(b) > 1:
        a = _qgcd(b, d) if any(d) else [x / b[-1] for x in b]
        b = _qdivmod(b, a)[0]
        c = _qdivmod(d, a)[0] if any(d) else []
        d = [x - y for x, y in _zip_pad(c, _qderiv(b))]
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def _zip_pad(f, g):
    n = max(len(f), len(g))
    f = list(f) + [Fraction(0)] * (n - len(f))
    g = list(g) + [Fraction(0)] * (n - len(g))
    out = list(zip(f, g))
    while out and out[-1][0] == out[-1][1]:
        out.pop()
    return out


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
