"""Independent reference implementations used only by the tests.

Nothing here imports the package; each oracle takes a different route to
the quantity it checks.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import integrate, special
from scipy.linalg import solve_banded


def oscillator_coefficients(K: int) -> list:
    """Quartic-oscillator ground-state coefficients from the polynomial ansatz.

    psi = exp(-x^2/2) * sum_k eps^k phi_k(x) with phi_k = sum_j A[k][j] x^(2j)
    turns the Schrodinger equation into a difference equation in j; the
    x^0 component yields E_k = -A[k][1].
    """
    A = [[Fraction(1)]]
    E = [Fraction(1, 2)]

    def get(k, j):
        if k < 0 or j < 0 or j >= len(A[k]):
            return Fraction(0)
        return A[k][j]

    for k in range(1, K + 1):
        row = [Fraction(0)] * (2 * k + 2)
        A.append(row)
        for j in range(2 * k, 0, -1):
            rhs = sum((E[i] * get(k - i, j) for i in range(1, k)), Fraction(0))
            rhs -= get(k - 1, j - 2)
            rhs += (j + 1) * (2 * j + 1) * row[j + 1]
            row[j] = rhs / (2 * j)
        E.append(-row[1])
    return E


def exponential_integral_value() -> float:
    """int_0^inf e^-t/(1+t) dt = e * E1(1)."""
    return math.e * special.exp1(1.0)


def quad_value(f, a=0.0, b=np.inf) -> float:
    val, _ = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def si_scaled(alpha: float) -> float:
    """(2/pi) Si(alpha) from the library sine integral."""
    return 2 / math.pi * special.sici(alpha)[0]


def heat_fd(g, h, f, t_end: float, points: int = 2000, dt: float = 1e-4, startup: int = 4):
    """Crank-Nicolson for u_t = u_xx on [0, pi] with backward-Euler start steps.

    Returns (x, u) on the grid x_j = j*pi/points, j = 0..points.
    """
    x = np.linspace(0.0, math.pi, points + 1)
    dx = x[1] - x[0]
    u = np.array([f(xx) for xx in x], dtype=float)
    m = points - 1
    steps = int(round(t_end / dt))
    t = 0.0

    def step(u, t, k, theta):
        r = k / dx**2
        ab = np.zeros((3, m))
        ab[0, 1:] = -theta * r
        ab[1, :] = 1 + 2 * theta * r
        ab[2, :-1] = -theta * r
        inner = u[1:-1]
        lap = u[:-2] - 2 * inner + u[2:]
        rhs = inner + (1 - theta) * r * lap
        gl, hr = g(t + k), h(t + k)
        rhs[0] += theta * r * gl
        rhs[-1] += theta * r * hr
        new = np.empty_like(u)
        new[1:-1] = solve_banded((1, 1), ab, rhs)
        new[0], new[-1] = gl, hr
        return new

    for _ in range(startup):
        for _ in range(2):
            u = step(u, t, dt / 2, 1.0)
            t += dt / 2
    for _ in range(steps - startup):
        u = step(u, t, dt, 0.5)
        t += dt
    return x, u
