"""Sine series on [0, pi], endpoint asymptotics, Gibbs-aware acceleration
and the heat equation with time-dependent Dirichlet data.

Coefficients are stored either in the plain unit (a_n itself) or in the
``scaled`` unit where a_n = (2/pi) * stored value; the scaled unit keeps
polynomial profiles exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import mpmath
import numpy as np

from .accel import extrapolate_to_zero
from .core import is_exact, quadrature, to_real
from .errors import ConvergenceFailure, InsufficientTerms, ModeBudgetExceeded, TailMismatch

ONE = "one"
SCALED = "two-over-pi"


# ---------------------------------------------------------------------------
# profiles: named functions on [0, pi] with exact sine coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    name: str
    func: Callable
    scaled_coefficient: Optional[Callable[[int], Fraction]] = None  # n -> stored value, unit SCALED
    plain_coefficient: Optional[Callable[[int], Fraction]] = None  # n -> a_n, unit ONE

    def __call__(self, x):
        return self.func(x)


def _odd(n: int) -> int:
    return n % 2


PROFILES = {
    "zero": Profile("zero", lambda x: 0 * x, scaled_coefficient=lambda n: Fraction(0)),
    "one": Profile("one", lambda x: 0 * x + 1, scaled_coefficient=lambda n: Fraction(2 * _odd(n), n)),
    "sin": Profile("sin", lambda x: np.sin(x) if isinstance(x, np.ndarray) else mpmath.sin(x),
                   plain_coefficient=lambda n: Fraction(int(n == 1))),
    "x(pi-x)": Profile("x(pi-x)", lambda x: x * (math.pi - x) if isinstance(x, (float, np.ndarray)) else x * (mpmath.pi - x),
                       scaled_coefficient=lambda n: Fraction(4 * _odd(n), n**3)),
    "1-x/pi": Profile("1-x/pi", lambda x: 1 - x / math.pi if isinstance(x, (float, np.ndarray)) else 1 - x / mpmath.pi,
                      scaled_coefficient=lambda n: Fraction(1, n)),
    "x/pi": Profile("x/pi", lambda x: x / math.pi if isinstance(x, (float, np.ndarray)) else x / mpmath.pi,
                    scaled_coefficient=lambda n: Fraction((-1) ** (n + 1), n)),
}


@dataclass(frozen=True)
class Constant:
    """Time-independent boundary value."""

    value: object

    def __call__(self, t):
        return self.value


TIME_FUNCTIONS = {
    "zero": Constant(Fraction(0)),
    "one": Constant(Fraction(1)),
    "sin": lambda t: np.sin(t) if isinstance(t, (float, np.ndarray)) else mpmath.sin(t),
    "1-exp(-t)": lambda t: 1 - (np.exp(-t) if isinstance(t, (float, np.ndarray)) else mpmath.exp(-t)),
}


@dataclass(frozen=True)
class SampledFunction:
    """Piecewise-linear interpolant of samples (xs increasing)."""

    xs: tuple
    ys: tuple

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValueError("need at least two (x, y) samples of equal count")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("sample abscissae must be strictly increasing")

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys) if isinstance(x, np.ndarray) else float(
            np.interp(float(x), self.xs, self.ys)
        )

    def sine_coefficients(self, N: int) -> np.ndarray:
        """a_1..a_N of the interpolant, integrated exactly segment by segment (float64)."""
        x = np.asarray(self.xs, dtype=float)
        y = np.asarray(self.ys, dtype=float)
        if x[0] > 1e-12 or x[-1] < math.pi - 1e-12:
            raise ValueError("samples must cover [0, pi]")
        n = np.arange(1, N + 1, dtype=float)[:, None]
        x0, x1, y0, y1 = x[:-1], x[1:], y[:-1], y[1:]
        s = (y1 - y0) / (x1 - x0)
        a = y0 - s * x0

        # antiderivative of (a + s x) sin(n x)
        def F(t):
            return -(a + s * t) * np.cos(n * t) / n + s * np.sin(n * t) / n**2

        return (2 / math.pi) * (F(x1) - F(x0)).sum(axis=1)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "SampledFunction":
        xs, ys = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    x, y = float(row[0]), float(row[1])
                except ValueError:
                    if xs:
                        raise
                    continue  # header line
                xs.append(x)
                ys.append(y)
        return cls(tuple(xs), tuple(ys))


def resolve_profile(source):
    if isinstance(source, str):
        if source in PROFILES:
            return PROFILES[source]
        path = Path(source)
        if path.suffix == ".csv" and path.exists():
            return SampledFunction.from_csv(path)
        raise KeyError(f"unknown profile {source!r}")
    return source


def resolve_time_function(source):
    if isinstance(source, str):
        if source in TIME_FUNCTIONS:
            return TIME_FUNCTIONS[source]
        path = Path(source)
        if path.suffix == ".csv" and path.exists():
            return SampledFunction.from_csv(path)
        raise KeyError(f"unknown boundary function {source!r}")
    if is_exact(source) or isinstance(source, (float, mpmath.mpf)):
        return Constant(source)
    return source


# ---------------------------------------------------------------------------
# sine series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SineSeries:
    """coeffs[k] belongs to sin((k+1) x); a_n = coeffs * (1 or 2/pi) per ``unit``."""

    coeffs: tuple
    unit: str = ONE
    tail_model: Optional[tuple] = None  # (c_even, c_odd): a_n ~ 2 c / (pi n)

    def __len__(self):
        return len(self.coeffs)

    def plain(self, digits: int = 30) -> list:
        if self.unit == ONE:
            return list(self.coeffs)
        with mpmath.workdps(digits):
            k = 2 / mpmath.pi
            return [k * to_real(c, digits) if is_exact(c) else k * c for c in self.coeffs]

    def as_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.plain()], dtype=float)

    def evaluate(self, x, terms: Optional[int] = None):
        """Partial sum at x (float or array) in float64."""
        a = self.as_floats()[: terms or len(self)]
        x = np.asarray(x, dtype=float)
        n = np.arange(1, len(a) + 1)
        return np.sin(np.multiply.outer(x, n)) @ a


def sine_coefficients(f, N: int, digits: int = 15) -> SineSeries:
    """a_1..a_N of f on [0, pi]; exact for catalog profiles, quadrature otherwise."""
    f = resolve_profile(f)
    if N < 1:
        raise ValueError("N must be >= 1")
    if isinstance(f, Profile) and f.scaled_coefficient is not None:
        return SineSeries(tuple(f.scaled_coefficient(n) for n in range(1, N + 1)), SCALED)
    if isinstance(f, Profile) and f.plain_coefficient is not None:
        return SineSeries(tuple(f.plain_coefficient(n) for n in range(1, N + 1)), ONE)
    if isinstance(f, SampledFunction):
        return SineSeries(tuple(float(v) for v in f.sine_coefficients(N)), ONE)
    out = []
    with mpmath.workdps(digits + 5):
        pi = mpmath.pi
        for n in range(1, N + 1):
            nodes = [pi * k / n for k in range(n + 1)]
            val = quadrature(lambda x, n=n: f(x) * mpmath.sin(n * x), nodes, digits)
            out.append(2 / pi * val)
    return SineSeries(tuple(out), ONE)


# ---------------------------------------------------------------------------
# endpoint values from the coefficient tail
# ---------------------------------------------------------------------------


def _parity_limit(ns: Sequence[int], values: Sequence, order: int, rtol):
    """Limit of values(n) as n -> inf by Neville extrapolation in h = 1/n."""
    ns, values = list(ns[-(order + 1):]), list(values[-(order + 1):])
    steps = [Fraction(1, n) for n in ns]
    estimates = extrapolate_to_zero(steps, values)
    best = estimates[-1]
    if len(estimates) >= 2:
        gap = abs(estimates[-1] - estimates[-2])
        if gap > rtol * max(1, abs(best)):
            raise TailMismatch(f"1/n extrapolation does not settle (successive orders differ by {float(gap):.3g})")
    return best


def tail_constants(s: SineSeries, order: int = 6, rtol=1e-6) -> tuple:
    """(c_even, c_odd) with a_n ~ 2 c_parity / (pi n)."""
    if len(s) < 8:
        raise InsufficientTerms(f"endpoint recovery needs at least 8 coefficients, got {len(s)}")
    exact_path = s.unit == SCALED and all(is_exact(c) for c in s.coeffs)
    limits = {}
    for parity in (0, 1):
        ns = [n for n in range(1, len(s) + 1) if n % 2 == parity]
        if exact_path:
            vals = [n * s.coeffs[n - 1] for n in ns]
        else:
            vals = [n * c for n, c in zip(ns, [s.plain()[n - 1] for n in ns])]
        limit = _parity_limit(ns, vals, order, rtol)
        if not exact_path:
            limit = limit * mpmath.pi / 2
        limits[parity] = limit
    return limits[0], limits[1]


def endpoint_recovery(s: SineSeries, order: int = 6, rtol=1e-6) -> tuple:
    """(f(0), f(pi)) from the 1/n tails: odd n see f0 + fpi, even n see f0 - fpi."""
    c_even, c_odd = tail_constants(s, order, rtol)
    return (c_odd + c_even) / 2, (c_odd - c_even) / 2


@dataclass(frozen=True)
class BoundaryLayer:
    """f0 (1 - x/pi) + fpi x/pi, whose sine coefficients are exactly 2(f0 + (-1)^(n+1) fpi)/(pi n)."""

    f0: object
    fpi: object

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return float(self.f0) * (1 - x / math.pi) + float(self.fpi) * x / math.pi

    def describe(self) -> str:
        return f"{self.f0}*(1 - x/pi) + {self.fpi}*(x/pi)"


def gibbs_accelerate(s: SineSeries, order: int = 6, rtol=1e-6) -> tuple:
    """Split s into a closed-form boundary layer plus fast-decaying residual coefficients."""
    f0, fpi = endpoint_recovery(s, order, rtol)
    layer = BoundaryLayer(f0, fpi)
    exact_path = s.unit == SCALED and all(is_exact(c) for c in s.coeffs) and is_exact(f0)
    if exact_path:
        residual = tuple(c - (f0 + (-1) ** (n + 1) * fpi) / n for n, c in enumerate(s.coeffs, start=1))
        return layer, SineSeries(residual, SCALED)
    plain = s.plain()
    with mpmath.workdps(30):
        k = 2 / mpmath.pi
        residual = tuple((to_real(c, 30) if is_exact(c) else c) - k * (f0 + (-1) ** (n + 1) * fpi) / n
                         for n, c in enumerate(plain, start=1))
    return layer, SineSeries(residual, ONE)


def _si_series(a, digits: int):
    # Maclaurin series; terms peak near e^a, so carry that many extra digits
    with mpmath.workdps(digits + int(float(a) / 2.3) + 10):
        a = mpmath.mpf(a)
        term, total, k = a, a, 0
        eps = mpmath.mpf(10) ** -(digits + 5)
        while abs(term) > eps * abs(total):
            k += 1
            term *= -a * a / ((2 * k) * (2 * k + 1))
            total += term / (2 * k + 1)
        return +total


def _si_asymptotic(a, digits: int):
    # Si = pi/2 - f cos a - g sin a, auxiliary series truncated at their smallest term
    with mpmath.workdps(digits + 10):
        a = mpmath.mpf(a)
        f = g = mpmath.mpf(0)
        tf, tg = 1 / a, 1 / (a * a)
        k = 0
        while True:
            f += tf
            g += tg
            nf = -tf * (2 * k + 1) * (2 * k + 2) / (a * a)
            ng = -tg * (2 * k + 2) * (2 * k + 3) / (a * a)
            if abs(nf) >= abs(tf) or abs(nf) < mpmath.mpf(10) ** -(digits + 8):
                break
            tf, tg, k = nf, ng, k + 1
        return mpmath.pi / 2 - f * mpmath.cos(a) - g * mpmath.sin(a)


def gibbs_overshoot(alpha, digits: int = 20):
    """(2/pi) Si(alpha) = (2/pi) int_0^alpha sin(s)/s ds."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha == 0:
        return mpmath.mpf(0)
    with mpmath.workdps(digits + 5):
        a = to_real(alpha) if is_exact(alpha) else mpmath.mpf(alpha)
        # the asymptotic series is accurate to about e^-a
        if a > 2.31 * (digits + 8):
            si = _si_asymptotic(a, digits)
        else:
            si = _si_series(a, digits)
        return 2 * si / mpmath.pi


# ---------------------------------------------------------------------------
# heat equation u_t = u_xx on [0, pi]
# ---------------------------------------------------------------------------


@dataclass
class HeatProblem:
    f: object
    g: object
    h: object
    modes: int
    time_grid: Sequence

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("modes must be >= 1")
        times = list(self.time_grid)
        if any(t < 0 for t in times) or any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("time grid must be increasing and nonnegative")
        self.f = resolve_profile(self.f)
        self.g = resolve_time_function(self.g)
        self.h = resolve_time_function(self.h)


@dataclass
class HeatSolution:
    times: tuple
    mode_coeffs: list  # mode_coeffs[k][n-1] = a_n(t_k) (accelerated: residual b_n)
    accelerated: bool
    closed_part: str
    layers: list = field(default_factory=list)  # BoundaryLayer per time when accelerated

    def evaluate(self, x, k: int) -> np.ndarray:
        """u(x, t_k) in float64."""
        a = np.array([float(c) for c in self.mode_coeffs[k]])
        x = np.asarray(x, dtype=float)
        n = np.arange(1, len(a) + 1)
        u = np.sin(np.multiply.outer(x, n)) @ a
        if self.accelerated:
            u = u + self.layers[k](x)
        return u

    def truncation_estimate(self, x, k: int) -> np.ndarray:
        """Bound on the omitted tail at x."""
        a = [abs(float(c)) for c in self.mode_coeffs[k]]
        N = len(a)
        last = max(a[-2:]) if N >= 2 else a[-1]
        if self.accelerated:
            # residual tail ~ |b_N| (N/n)^3 summed over n > N
            return np.full_like(np.asarray(x, dtype=float), last * N / 2)
        x = np.asarray(x, dtype=float)
        guard = np.minimum(np.abs(np.sin(x / 2)), np.abs(np.cos(x / 2)))
        return last / np.maximum(guard, 1e-12)


def _duhamel(n: int, t, g, h, digits: int):
    """(2/(pi n)) int_0^{n^2 t} e^{-u} phi_n(t - u/n^2) du."""
    sign = 1 if n % 2 else -1
    if isinstance(g, Constant) and isinstance(h, Constant):
        phi = to_real(g.value) + sign * to_real(h.value)
        return 2 * phi / (mpmath.pi * n) * -mpmath.expm1(-(n**2) * t)
    top = n**2 * t
    cut = min(top, mpmath.mpf(digits) * mpmath.log(10) + 10)
    phi = lambda u: g(t - u / n**2) + sign * h(t - u / n**2)
    if cut <= 0:
        return mpmath.mpf(0)
    pieces = [mpmath.mpf(0)] + [mpmath.mpf(2) ** j for j in range(0, 7) if 2**j < cut] + [cut]
    val = quadrature(lambda u: mpmath.exp(-u) * phi(u), pieces, digits)
    return 2 * val / (mpmath.pi * n)


def _decay_check(residual: Sequence, t) -> None:
    w = [abs(float(b)) * n**3 for n, b in enumerate(residual, start=1)]
    N = len(w)
    if N < 8:
        return
    half = w[N // 2 - 1]
    if w[-1] > 1e-10 and w[-1] > 2 * half and w[-1] >= max(w[N // 2 - 1 :]):
        raise ModeBudgetExceeded(
            f"residual n^3|b_n| still growing at n={N} (t={float(t):.4g}); increase the mode count"
        )


def heat_solve(problem: HeatProblem, accelerate: bool = True, digits: int = 20) -> HeatSolution:
    """Mode coefficients a_n(t) = e^{-n^2 t} a_n(0) + Duhamel term, per time in the grid.

    With ``accelerate`` the tail (2/(pi n)) phi_n(t) is removed from every
    mode and carried by the boundary layer g(t)(1 - x/pi) + h(t) x/pi.
    """
    N = problem.modes
    initial = sine_coefficients(problem.f, N, digits=min(digits, 15))
    with mpmath.workdps(digits + 5):
        a0 = [to_real(c) if is_exact(c) else mpmath.mpf(c) for c in initial.plain(digits + 5)]
        rows, layers = [], []
        for t in problem.time_grid:
            tt = to_real(t) if is_exact(t) else mpmath.mpf(t)
            g_t = problem.g(tt)
            h_t = problem.h(tt)
            row = []
            for n in range(1, N + 1):
                a = mpmath.exp(-(n**2) * tt) * a0[n - 1] + _duhamel(n, tt, problem.g, problem.h, digits)
                if accelerate:
                    phi = to_real(g_t) + (1 if n % 2 else -1) * to_real(h_t)
                    a -= 2 * phi / (mpmath.pi * n)
                row.append(a)
            if accelerate:
                if tt > 0:
                    _decay_check(row, tt)
                layers.append(BoundaryLayer(g_t, h_t))
            rows.append(row)
    closed = "g(t)*(1 - x/pi) + h(t)*(x/pi)" if accelerate else "none"
    return HeatSolution(tuple(problem.time_grid), rows, accelerate, closed, layers)
