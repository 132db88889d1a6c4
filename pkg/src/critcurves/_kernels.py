"""Compiled inner loops for long orbits and parameter scans."""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def step_ray(x, y, a, b, eps):
    """One normalised step of F; returns (x', y', is_a)."""
    if x > eps or (x >= -eps and y <= 0.0):
        w = a
        is_a = True
    else:
        w = b
        is_a = False
    nx = w * x - y
    ny = x
    r = math.sqrt(nx * nx + ny * ny)
    return nx / r, ny / r, is_a


@njit(cache=True, nogil=True)
def orbit_bits(a, b, x, y, n, eps):
    """Letters of n steps from (x, y): 0 for a, 1 for b."""
    out = np.empty(n, dtype=np.uint8)
    for t in range(n):
        x, y, is_a = step_ray(x, y, a, b, eps)
        out[t] = 0 if is_a else 1
    return out


@njit(cache=True, nogil=True)
def rotation_counts(a, b, iters, eps):
    """(#ab factors from (0, 1), #a from (0, 1), #a from (0, -1)) over iters letters."""
    x, y = 0.0, 1.0
    n_ab = 0
    n_a_plus = 0
    prev_a = False
    for t in range(iters):
        x, y, is_a = step_ray(x, y, a, b, eps)
        if is_a:
            n_a_plus += 1
        elif prev_a:
            n_ab += 1
        prev_a = is_a
    x, y = 0.0, -1.0
    n_a_minus = 0
    for t in range(iters):
        x, y, is_a = step_ray(x, y, a, b, eps)
        if is_a:
            n_a_minus += 1
    return n_ab, n_a_plus, n_a_minus


@njit(cache=True, nogil=True)
def theta_row(avals, b, iters, eps, out):
    """Fill out[i] with the ab-frequency estimate of the rotation number at (avals[i], b)."""
    for i in range(avals.shape[0]):
        a = avals[i]
        x, y = 0.0, 1.0
        n_ab = 0
        prev_a = False
        for t in range(iters):
            x, y, is_a = step_ray(x, y, a, b, eps)
            if not is_a and prev_a:
                n_ab += 1
            prev_a = is_a
        out[i] = n_ab / iters


@njit(cache=True, nogil=True)
def q_values(codes, a, b):
    """Q_0..Q_n at one parameter point (codes: 0 for a, 1 for b)."""
    n = codes.shape[0]
    q = np.empty(n + 1)
    q[0] = 0.0
    q[1] = 1.0
    for t in range(1, n):
        w = a if codes[t] == 0 else b
        q[t + 1] = w * q[t] - q[t - 1]
    return q


@njit(cache=True, nogil=True)
def q_values_grad(codes, a, b):
    """Q_t with its partial derivatives in a and b, by forward differentiation."""
    n = codes.shape[0]
    q = np.zeros(n + 1)
    qa = np.zeros(n + 1)
    qb = np.zeros(n + 1)
    q[1] = 1.0
    for t in range(1, n):
        if codes[t] == 0:
            q[t + 1] = a * q[t] - q[t - 1]
            qa[t + 1] = q[t] + a * qa[t] - qa[t - 1]
            qb[t + 1] = a * qb[t] - qb[t - 1]
        else:
            q[t + 1] = b * q[t] - q[t - 1]
            qa[t + 1] = b * qa[t] - qa[t - 1]
            qb[t + 1] = q[t] + b * qb[t] - qb[t - 1]
    return q, qa, qb


@njit(cache=True, nogil=True)
def curve_value(codes, a, b, i1, i2, sgn):
    """Q_{i1} + sgn Q_{i2}."""
    q = q_values(codes, a, b)
    return q[i1] + sgn * q[i2]


@njit(cache=True, nogil=True)
def curve_value_sp(codes, p, s, i1, i2, sgn):
    """Same as curve_value in the rotated frame p = a + b, s = a - b."""
    q = q_values(codes, 0.5 * (p + s), 0.5 * (p - s))
    return q[i1] + sgn * q[i2]


@njit(cache=True, nogil=True)
def curve_grad(codes, a, b, i1, i2, sgn):
    q, qa, qb = q_values_grad(codes, a, b)
    return q[i1] + sgn * q[i2], qa[i1] + sgn * qa[i2], qb[i1] + sgn * qb[i2]


@njit(cache=True, nogil=True)
def q_matrix(codes, avals, bvals):
    """Q_t at many points: array of shape (n + 1, len(avals))."""
    n = codes.shape[0]
    m = avals.shape[0]
    out = np.empty((n + 1, m))
    for j in range(m):
        q = q_values(codes, avals[j], bvals[j])
        for t in range(n + 1):
            out[t, j] = q[t]
    return out


@njit(cache=True, nogil=True)
def theta_points(avals, bvals, iters, eps, out):
    """Same estimate as theta_row at the points (avals[i], bvals[i])."""
    for i in range(avals.shape[0]):
        a = avals[i]
        b = bvals[i]
        x, y = 0.0, 1.0
        n_ab = 0
        prev_a = False
        for t in range(iters):
            x, y, is_a = step_ray(x, y, a, b, eps)
            if not is_a and prev_a:
                n_ab += 1
            prev_a = is_a
        out[i] = n_ab / iters
