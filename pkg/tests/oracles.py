"""Independent reference computations built on sympy."""

import sympy
from sympy.polys.matrices import DomainMatrix

from critcurves.poly import BivarPoly, UnivarPoly

a, b, x = sympy.symbols("a b x")


def to_sympy(p: BivarPoly):
    return sum((c * a**i * b**j for (i, j), c in p), sympy.Integer(0))


def from_sympy(expr) -> BivarPoly:
    poly = sympy.Poly(sympy.expand(expr), a, b)
    return BivarPoly({m: int(c) for m, c in poly.terms()})


def univar_to_sympy(u: UnivarPoly):
    return sum((c * x**i for i, c in enumerate(u.c)), sympy.Integer(0))


def tridiagonal_continuant(letters) -> BivarPoly:
    """Determinant of the tridiagonal matrix with the letters on the diagonal and ones beside it."""
    m = len(letters)
    if m == 0:
        return BivarPoly.const(1)
    sym = {"a": a, "b": b}
    M = sympy.zeros(m, m)
    for i, ch in enumerate(letters):
        M[i, i] = sym[ch]
        if i + 1 < m:
            M[i, i + 1] = M[i + 1, i] = 1
    dm = DomainMatrix.from_Matrix(M).convert_to(sympy.ZZ[a, b])
    return from_sympy(dm.det().as_expr())
