"""Case studies: anharmonic oscillator, Casimir force, two-level branch
points and perturbative roots of x**5 + x - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .core import DEFAULT_DIGITS, CoefficientSequence, explicit, is_exact, to_real
from .errors import DomainError, ResourceLimit
from .pade import staircase_evaluate
from .resum import zeta_negative

MAX_ANHARMONIC_ORDER = 25
MAX_QUINTIC_ORDER = 400


# ---------------------------------------------------------------------------
# anharmonic oscillator  H = p^2/2 + x^2/2 + eps x^4
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationSeries:
    coeffs: tuple
    subtracted: bool = False

    def __len__(self):
        return len(self.coeffs)

    def subtract(self) -> "PerturbationSeries":
        """F(eps) = (E(eps) - E(0)) / eps."""
        if self.subtracted:
            return self
        return PerturbationSeries(tuple(self.coeffs[1:]), True)

    def as_sequence(self) -> CoefficientSequence:
        name = "anharmonic-F" if self.subtracted else "anharmonic-E"
        return explicit(self.coeffs, name=name)


def _apply_quartic(psi: dict) -> dict:
    """(a + a^dag)^4 / 4 on sum psi[m] (a^dag)^m |0>, using a|m) = m|m-1)."""
    for _ in range(4):
        nxt: dict = {}
        for m, c in psi.items():
            if m:
                nxt[m - 1] = nxt.get(m - 1, 0) + m * c
            nxt[m + 1] = nxt.get(m + 1, 0) + c
        psi = nxt
    return {m: c / 4 for m, c in psi.items() if c}


def anharmonic_coefficients(K: int, limit: int = MAX_ANHARMONIC_ORDER) -> PerturbationSeries:
    """Ground-state energy coefficients E_0..E_K by Rayleigh-Schrodinger recursion.

    States are kept in the unnormalized basis (a^dag)^m |0>, where both
    ladder operators act with integer matrix elements, so every quantity
    stays rational.  Intermediate normalization: psi_k has no |0) part.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    if K > limit:
        raise ResourceLimit(f"order {K} exceeds the configured bound {limit}")
    energies = [Fraction(1, 2)]
    states = [{0: Fraction(1)}]
    for k in range(1, K + 1):
        v_psi = _apply_quartic(states[k - 1])
        e_k = v_psi.get(0, Fraction(0))
        energies.append(e_k)
        if k == K:
            break
        psi: dict = {}
        support = set(v_psi)
        for j in range(1, k + 1):
            support.update(states[k - j])
        for m in support:
            if m == 0:
                continue
            rhs = -v_psi.get(m, 0) + sum(energies[j] * states[k - j].get(m, 0) for j in range(1, k + 1))
            if rhs:
                psi[m] = rhs / m
        states.append(psi)
    return PerturbationSeries(tuple(energies))


def half_integer_gamma(n: int) -> Fraction:
    """Gamma(n + 1/2) / sqrt(pi) = (2n)! / (4**n n!)."""
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n))


def anharmonic_asymptotic(n: int, digits: int = DEFAULT_DIGITS):
    """(-1)**(n+1) sqrt(6) pi**(-3/2) 3**n Gamma(n + 1/2), large-order estimate of E_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with mpmath.workdps(digits):
        # the sqrt(pi) inside Gamma cancels against pi**(-3/2)
        mag = mpmath.sqrt(6) / mpmath.pi * 3**n * to_real(half_integer_gamma(n), digits)
        return mag if n % 2 else -mag


def asymptotic_ratio(n: int, digits: int = DEFAULT_DIGITS):
    """|E_n| / |formula(n)|."""
    coeff = anharmonic_coefficients(n).coeffs[n]
    with mpmath.workdps(digits):
        return abs(to_real(coeff, digits)) / abs(anharmonic_asymptotic(n, digits))


@dataclass(frozen=True)
class PadeTableEntry:
    label: str
    value: object


def anharmonic_pade_table(depth: int, coefficients: Optional[Sequence] = None, eps=Fraction(1)) -> list:
    """1/2 + staircase Pade values of F(eps) = (E(eps) - 1/2)/eps at eps.

    Uses E_0..E_{2 depth + 1} from the recursion unless explicit
    ``coefficients`` (E_0, E_1, ...) are supplied.
    """
    need = 2 * depth + 2
    if coefficients is None:
        series = anharmonic_coefficients(need - 1)
    else:
        series = PerturbationSeries(tuple(Fraction(c) if is_exact(c) else c for c in coefficients))
        if len(series) < need:
            raise ValueError(f"depth {depth} needs {need} coefficients, got {len(series)}")
    e0 = series.coeffs[0]
    F = series.subtract().as_sequence()
    return [PadeTableEntry(label, e0 + value) for label, value in staircase_evaluate(F, eps, depth)]


# ---------------------------------------------------------------------------
# diagram counting
# ---------------------------------------------------------------------------


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def diagram_count(n: int) -> Fraction:
    """(4n-1)!! / (n! 24**n): total symmetry weight of order-n vacuum diagrams."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(double_factorial(4 * n - 1), math.factorial(n) * 24**n)


def zero_dimensional_coefficient(n: int) -> Fraction:
    """|coefficient of eps**n| in int exp(-x^2/2 - eps x^4/4!) dx / sqrt(2 pi).

    Gaussian moments come from alpha-derivatives: <x^{2k}> = (-2 d/dalpha)^k alpha^{-1/2} at alpha = 1.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    k = 2 * n
    moment = Fraction(1)
    exponent = Fraction(-1, 2)
    for _ in range(k):
        moment *= -2 * exponent
        exponent -= 1
    return moment / (math.factorial(n) * 24**n)


# ---------------------------------------------------------------------------
# Casimir force
# ---------------------------------------------------------------------------


def casimir_energy(L, digits: int = DEFAULT_DIGITS):
    """Energy per unit area -pi^2/(720 L^3), built from zeta(-3) = 1/120."""
    if L <= 0:
        raise DomainError("plate separation must be positive")
    with mpmath.workdps(digits):
        L = to_real(L, digits) if is_exact(L) else mpmath.mpf(L)
        return -(mpmath.pi**2) / 6 * to_real(zeta_negative(3), digits) / L**3


def casimir_force(L, digits: int = DEFAULT_DIGITS) -> tuple:
    """(energy per area, force per area) = (-pi^2/(720 L^3), -pi^2/(240 L^4))."""
    energy = casimir_energy(L, digits)
    with mpmath.workdps(digits):
        L = to_real(L, digits) if is_exact(L) else mpmath.mpf(L)
        # force = -dE/dL
        return energy, 3 * energy / L


# ---------------------------------------------------------------------------
# two-level system
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoLevelSystem:
    a: object
    b: object
    c: object


def two_level_spectrum(sys: TwoLevelSystem, eps, digits: int = DEFAULT_DIGITS) -> tuple:
    """Eigenvalues of [[a, eps c], [eps c, b]] and the branch points +-i(a-b)/(2c)."""
    with mpmath.workdps(digits):
        a, b, c = (to_real(v, digits) if is_exact(v) else mpmath.mpmathify(v) for v in (sys.a, sys.b, sys.c))
        e = to_real(eps, digits) if is_exact(eps) else mpmath.mpmathify(eps)
        root = mpmath.sqrt((a - b) ** 2 + 4 * e**2 * c**2)
        plus, minus = (a + b + root) / 2, (a + b - root) / 2
        if c == 0:
            branch = ()
        else:
            bp = mpmath.mpc(0, 1) * (a - b) / (2 * c)
            branch = (bp, -bp)
        if isinstance(plus, mpmath.mpc) and mpmath.im(plus) == 0 and mpmath.im(minus) == 0:
            plus, minus = mpmath.re(plus), mpmath.re(minus)
        return plus, minus, branch


# ---------------------------------------------------------------------------
# x^5 + x - 1 = 0 by regular and singular perturbation
# ---------------------------------------------------------------------------


REGULAR_RADIUS = mpmath.mpf(5) / 4  # raised to 4/5 on use
SINGULAR_RADIUS = Fraction(4**4, 5**5)


def regular_radius(digits: int = DEFAULT_DIGITS):
    with mpmath.workdps(digits):
        return (mpmath.mpf(5) / 4) ** (mpmath.mpf(4) / 5)


def _fifth_power_coeff(x: Sequence, y: Sequence, n: int, partial: bool) -> Fraction:
    """Order-n coefficient of y = x**5 from x_0..x_n and y_0..y_{n-1} (x_0 = 1).

    With ``partial`` the k = n term is omitted (x_n still unknown).
    """
    top = n - 1 if partial else n
    return sum((Fraction(6 * k - n) * x[k] * y[n - k] for k in range(1, top + 1)), Fraction(0)) / n


def quintic_regular_coefficients(K: int) -> list:
    """x(eps) = sum a_n eps**n solving x^5 + eps x - 1 = 0 with a_0 = 1."""
    if K > MAX_QUINTIC_ORDER:
        raise ResourceLimit(f"order {K} exceeds {MAX_QUINTIC_ORDER}")
    a = [Fraction(1)]
    y = [Fraction(1)]  # coefficients of x**5
    for n in range(1, K + 1):
        rest = _fifth_power_coeff(a, y, n, partial=True)
        # order n: y_n + a_{n-1} = 0 with y_n = 5 a_n + rest
        a.append(-(a[n - 1] + rest) / 5)
        y.append(-a[n - 1])
    return a


def quintic_singular_coefficients(K: int) -> list:
    """x(eps) = sum c_n eps**n solving eps x^5 + x - 1 = 0 with c_0 = 1."""
    if K > MAX_QUINTIC_ORDER:
        raise ResourceLimit(f"order {K} exceeds {MAX_QUINTIC_ORDER}")
    c = [Fraction(1)]
    y = [Fraction(1)]
    for n in range(1, K + 1):
        c.append(-y[n - 1])
        y.append(_fifth_power_coeff(c, y, n, partial=False))
    return c


def quintic_root(digits: int = 15, lo=Fraction(0), hi=Fraction(1)):
    """Real root of x^5 + x - 1 by bisection to 10**-digits."""
    with mpmath.workdps(digits + 10):
        lo, hi = to_real(lo), to_real(hi)
        tol = mpmath.mpf(10) ** (-digits)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if mid**5 + mid - 1 > 0:
                hi = mid
            else:
                lo = mid
        return (lo + hi) / 2


def runaway_roots(eps, digits: int = 30) -> list:
    """The four roots of eps x^5 + x - 1 that leave every bounded region as eps -> 0."""
    with mpmath.workdps(digits):
        e = to_real(eps, digits) if is_exact(eps) else mpmath.mpf(eps)
        roots = mpmath.polyroots([e, 0, 0, 0, 1, -1], maxsteps=200, extraprec=2 * digits)
        roots = sorted(roots, key=lambda r: abs(r - 1))
        return roots[1:]


def runaway_scaling_exponent(eps_values: Sequence = (1e-4, 1e-6, 1e-8, 1e-10)) -> float:
    """Least-squares slope of log mean|runaway root| against log eps (expect -1/4)."""
    xs, ys = [], []
    for e in eps_values:
        roots = runaway_roots(mpmath.mpf(e))
        xs.append(math.log(e))
        ys.append(math.log(float(sum(abs(r) for r in roots) / len(roots))))
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


@dataclass
class QuinticReport:
    variant: str
    coefficients: list
    radius: object
    partial_sum: object
    reference_root: object
    pade: list = None  # staircase (label, value) for the singular variant
    delta_series: list = None  # c_m of y(delta) = sum c_m delta^(4m+1), delta = eps^(1/4)
    runaway_exponent: Optional[float] = None

    @property
    def pade_value(self):
        return self.pade[-1][1] if self.pade else None


def quintic_root_study(variant: str, K: int, eps=Fraction(1), digits: int = 30) -> QuinticReport:
    """Perturbative solution of the quintic and its comparison with bisection.

    regular:  x^5 + eps x - 1 = 0, convergent for eps < (5/4)^(4/5).
    singular: eps x^5 + x - 1 = 0, convergent only for eps < 4^4/5^5; the
    staircase Pade of the divergent series is reported alongside.  With
    x = y / delta, delta = eps^(1/4), the equation becomes
    y^5 + y - delta = 0: the surviving root is y = sum c_m delta^(4m+1) and
    the other four tend to the fourth roots of -1, i.e. x ~ eps^(-1/4).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if variant not in ("regular", "singular"):
        raise ValueError(f"unknown variant {variant!r}")
    eps = Fraction(eps) if is_exact(eps) else eps
    reference = quintic_root(digits) if eps == 1 else _root_at(variant, eps, digits)
    if variant == "regular":
        coeffs = quintic_regular_coefficients(K)
        radius = regular_radius(digits)
    else:
        coeffs = quintic_singular_coefficients(K)
        radius = SINGULAR_RADIUS
    with mpmath.workdps(digits):
        e = to_real(eps, digits) if is_exact(eps) else mpmath.mpf(eps)
        partial = mpmath.fsum(to_real(c, digits) * e**n for n, c in enumerate(coeffs))
    report = QuinticReport(variant, coeffs, radius, partial, reference)
    if variant == "singular":
        depth = (len(coeffs) - 1) // 2
        report.pade = staircase_evaluate(explicit(coeffs, name="quintic-singular"), eps, depth)
        report.delta_series = list(coeffs)
        report.runaway_exponent = runaway_scaling_exponent()
    return report


def _root_at(variant: str, eps, digits: int):
    """Root continuously connected to x = 1 at eps = 0, by bisection on [0, 1]."""
    with mpmath.workdps(digits + 10):
        e = to_real(eps) if is_exact(eps) else mpmath.mpf(eps)
        if variant == "regular":
            f = lambda x: x**5 + e * x - 1
        else:
            f = lambda x: e * x**5 + x - 1
        lo, hi = mpmath.mpf(0), mpmath.mpf(1)
        tol = mpmath.mpf(10) ** (-digits)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if f(mid) > 0:
                hi = mid
            else:
                lo = mid
        return (lo + hi) / 2
