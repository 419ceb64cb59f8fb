"""Values for divergent series.

Euler (Abel-limit) summation, Borel summation in closed form and by
Borel-Padé quadrature, axiomatic summation of periodic patterns and
geometric series, zeta regularization and the Riemann rearrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import accel
from .core import (
    CoefficientSequence,
    bernoulli_numbers,
    estimate_radius,
    generated,
    is_exact,
    quadrature_semi_infinite,
    recognize_rational,
    to_real,
)
from .errors import (
    ConvergenceFailure,
    GeneratorExhausted,
    InconsistentSummation,
    PoleOnPath,
    SingularSystem,
)
from .pade import pade_approximant


@dataclass
class SummationResult:
    value: object
    method: str
    diagnostics: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return is_exact(self.value)


# ---------------------------------------------------------------------------
# series factories used by the worked examples
# ---------------------------------------------------------------------------


def alternating_powers(p: int) -> CoefficientSequence:
    """1 - 2**p + 3**p - 4**p + ... (indices from 1)."""
    return generated(lambda n: Fraction((-1) ** (n - 1) * n**p), f"alternating-powers-{p}", start=1)


def periodic(pattern: Sequence, name: str = "periodic") -> CoefficientSequence:
    pattern = [Fraction(x) for x in pattern]
    return generated(lambda n: pattern[n % len(pattern)], name)


# ---------------------------------------------------------------------------
# Euler summation
# ---------------------------------------------------------------------------


def _power_series_at(seq: CoefficientSequence, x, digits: int, max_terms: int, window: int = 64):
    """sum c_n x**n at 0 < x < 1, truncated once ``window`` consecutive terms are negligible."""
    tol = mpmath.mpf(10) ** (-(digits + 5))
    total = mpmath.mpf(0)
    power = x ** seq.start
    quiet = 0
    terms = seq.terms
    chunk = 4096
    for k in range(max_terms):
        if k >= len(terms):
            try:
                seq = seq.extended(min(max_terms, len(terms) + chunk))
            except GeneratorExhausted:
                if k >= len(seq.terms):
                    break
            terms = seq.terms
        c = terms[k]
        if seq.sign_convention != "as-is" and (seq.start + k) % 2:
            c = -c
        term = c * power if c else 0
        total += term
        quiet = quiet + 1 if abs(term) < tol * max(1, abs(total)) else 0
        if quiet >= window and k > window:
            return total, seq
        power *= x
    if seq.generator is None and len(seq.terms) <= max_terms:
        return total, seq
    raise ConvergenceFailure(f"power series not converged after {max_terms} terms at x={mpmath.nstr(x, 8)}")


def euler_sum(
    seq: CoefficientSequence,
    digits: int = 30,
    ladder: int = 8,
    max_terms: int = 400_000,
    max_denominator: int = 10_000,
) -> SummationResult:
    """Abel limit x -> 1- of sum a_n x**n.

    The power series is evaluated at x_j = 1 - 2**-j, j = 1..ladder, and the
    ladder is extrapolated to h = 2**-j -> 0 by Richardson (Romberg) steps;
    iterated Shanks on the same ladder provides an independent estimate.
    A limit within tolerance of a small-denominator rational is returned
    exactly and the recognition is recorded in the diagnostics.
    """
    radius = estimate_radius(seq)
    if radius < 0.9:
        raise ConvergenceFailure(f"estimated radius of convergence {radius:.3g} < 1; Abel limit undefined")
    with mpmath.workdps(digits + 10):
        xs = [1 - mpmath.mpf(2) ** (-j) for j in range(1, ladder + 1)]
        values = []
        for x in xs:
            v, seq = _power_series_at(seq, x, digits + 5, max_terms)
            values.append(v)
        diffs = [abs(values[i + 1] - values[i]) for i in range(len(values) - 1)]
        if len(diffs) >= 2 and diffs[-1] > 0.9 * diffs[-2] and diffs[-1] > mpmath.mpf(10) ** (-digits):
            raise ConvergenceFailure(
                "Abel ladder does not stabilize: successive differences "
                + ", ".join(mpmath.nstr(d, 4) for d in diffs[-3:])
            )
        estimates = accel.romberg_ladder(values, ratio=2)
        value, spread = accel.best_estimate(estimates)
        shanks_value = accel.iterated_shanks_limit(values)
        tol = mpmath.mpf(10) ** (-(digits // 3))
        if spread is None or spread > tol * max(1, abs(value)):
            raise ConvergenceFailure(f"ladder extrapolation spread {mpmath.nstr(spread, 3)} too large")
        diagnostics = [
            f"ladder x_j = 1 - 2^-j, j=1..{ladder}",
            "ladder values: " + ", ".join(mpmath.nstr(v, 12) for v in values),
            f"richardson spread {mpmath.nstr(spread, 3)}",
        ]
        if shanks_value is not None:
            diagnostics.append(f"iterated shanks estimate {mpmath.nstr(shanks_value, 15)}")
        rational = recognize_rational(value, max(10 * spread, mpmath.mpf(10) ** (-(digits // 2))), max_denominator)
        if rational is not None:
            diagnostics.append(f"limit recognized as {rational} (|diff| <= {mpmath.nstr(10 * spread, 3)})")
            return SummationResult(rational, "euler", diagnostics)
        return SummationResult(+value, "euler", diagnostics)


def euler_alternating_power(p: int) -> Fraction:
    """s_p = p-th derivative of 1/(1+e^-x) at x = 0, exactly.

    With s = sigma(x), sigma' = s(1-s); each derivative is a polynomial in s,
    evaluated at sigma(0) = 1/2.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    poly = [Fraction(0), Fraction(1)]  # s
    logistic = [Fraction(0), Fraction(1), Fraction(-1)]  # s - s^2
    for _ in range(p):
        deriv = [k * c for k, c in enumerate(poly)][1:]
        prod = [Fraction(0)] * (len(deriv) + len(logistic) - 1)
        for i, a in enumerate(deriv):
            for j, b in enumerate(logistic):
                prod[i + j] += a * b
        poly = prod
    half = Fraction(1, 2)
    return sum((c * half**k for k, c in enumerate(poly)), Fraction(0))


# ---------------------------------------------------------------------------
# Borel summation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpPolynomial:
    """p(t) * exp(-rate * t) with exact polynomial coefficients."""

    coeffs: tuple
    rate: Fraction = Fraction(1)

    def t_d_dt(self) -> "ExpPolynomial":
        # t d/dt [p e^{-rt}] = t (p' - r p) e^{-rt}
        c = list(self.coeffs)
        out = [Fraction(0)] * (len(c) + 1)
        for k, a in enumerate(c):
            out[k] += k * a
            out[k + 1] -= self.rate * a
        return ExpPolynomial(tuple(out), self.rate)

    def times_t_exp(self, power: int = 1, extra_rate: Fraction = Fraction(1)) -> "ExpPolynomial":
        """Multiply by t**power * exp(-extra_rate t)."""
        return ExpPolynomial((Fraction(0),) * power + tuple(self.coeffs), self.rate + extra_rate)

    def divide_t(self) -> "ExpPolynomial":
        if self.coeffs and self.coeffs[0] != 0:
            raise ValueError("p(0) != 0: not divisible by t")
        return ExpPolynomial(tuple(self.coeffs[1:]), self.rate)

    def integral(self) -> Fraction:
        """Integral over [0, inf): sum_k p_k k! / rate**(k+1)."""
        return sum(
            (c * math.factorial(k) / self.rate ** (k + 1) for k, c in enumerate(self.coeffs)),
            Fraction(0),
        )


def borel_sum_closed(p: int) -> Fraction:
    """Borel sum of 1 - 2**p + 3**p - ... from g = (t d/dt)**(p-1) (t e^-t).

    The sum is the integral of t e^-t g(t) dt/t; p = 0 is the plain
    1 - 1 + 1 - ... with g = e^-t.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    if p == 0:
        return ExpPolynomial((Fraction(1),)).times_t_exp(0).integral()
    g = ExpPolynomial((Fraction(0), Fraction(1)))
    for _ in range(p - 1):
        g = g.t_d_dt()
    return g.times_t_exp(1).divide_t().integral()


def _positive_real_poles(den: Sequence, digits: int) -> list:
    coeffs = [to_real(c, digits) if is_exact(c) else c for c in den]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    with mpmath.workdps(digits):
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=4 * digits)
        eps = mpmath.mpf(10) ** (-(digits // 2))
        return [r for r in roots if abs(mpmath.im(r)) <= eps * max(1, abs(r)) and mpmath.re(r) >= -eps]


def _borel_pade(borel: list, order: int):
    """Highest-quality near-diagonal approximant of the Borel transform at ``order``."""
    for m in range(order, -1, -1):
        try:
            return pade_approximant(borel[: 2 * order + 1], 2 * order - m, m)
        except SingularSystem:
            continue
    raise SingularSystem("no Padé approximant of the Borel transform exists")


def borel_sum_numeric(
    seq: CoefficientSequence,
    point=Fraction(1),
    digits: int = 20,
    max_order: int = 20,
    sweep: int = 3,
) -> SummationResult:
    """Borel-Padé sum: integral of g(t) e^-t with g continued by diagonal Padé.

    g(t) = sum a_n point**n t**n / n!.  The [M/M] approximants for the last
    ``sweep`` values of M are integrated and must agree.
    """
    available = len(seq) if seq.generator is None else 2 * max_order + 1
    coeffs = seq.signed(min(available, 2 * max_order + 1))
    if len(coeffs) < 4:
        raise ValueError("Borel-Padé needs at least four coefficients")
    point = Fraction(point) if is_exact(point) else point
    shift = seq.start
    borel = [c * point ** (shift + k) / math.factorial(shift + k) for k, c in enumerate(coeffs)]
    if shift:
        borel = [Fraction(0)] * shift + borel
    top = (len(borel) - 1) // 2
    orders = list(range(max(1, top - sweep + 1), top + 1))
    values = []
    diagnostics = []
    with mpmath.workdps(digits + 10):
        for order in orders:
            approx = _borel_pade(borel, order)
            poles = _positive_real_poles(approx.den, digits + 10)
            if poles:
                raise PoleOnPath(f"{approx.label} has a pole at t = {mpmath.nstr(poles[0], 8)}")
            num = [to_real(c) for c in approx.num]
            den = [to_real(c) for c in approx.den]
            integrand = lambda t, num=num, den=den: mpmath.polyval(num[::-1], t) / mpmath.polyval(den[::-1], t) * mpmath.exp(-t)
            values.append(quadrature_semi_infinite(integrand, digits))
            diagnostics.append(f"{approx.label}: {mpmath.nstr(values[-1], digits)}")
        spread = max(values) - min(values)
        diagnostics.append(f"pade sweep spread {mpmath.nstr(spread, 3)} over orders {orders}")
        if spread > mpmath.mpf(10) ** (-(digits // 2)) * max(1, abs(values[-1])):
            raise ConvergenceFailure(f"Borel-Padé sweep does not stabilize (spread {mpmath.nstr(spread, 3)})")
        return SummationResult(+values[-1], "borel", diagnostics)


# ---------------------------------------------------------------------------
# generic (axiomatic) summation
# ---------------------------------------------------------------------------


def generic_sum_periodic(pattern: Sequence, prefix: Sequence = ()) -> Fraction:
    """S of prefix followed by the pattern repeated forever.

    Adding the p shifted copies of S = pattern_0 + S(shifted) gives
    p*S = sum of the partial sums of one block, provided the block sums
    to zero; otherwise the axioms force S = S + (block sum).
    """
    pattern = [Fraction(x) if is_exact(x) else x for x in pattern]
    if not pattern:
        raise ValueError("pattern must be non-empty")
    block = sum(pattern)
    if block != 0:
        raise InconsistentSummation(f"block sum {block} != 0: S = S + {block} has no finite solution")
    prefix_total = 0
    total = 0
    for x in pattern:
        total += prefix_total
        prefix_total += x
    return sum(prefix, Fraction(0)) + total / len(pattern)


def geometric_sum(first, ratio) -> Fraction:
    """S = first + ratio*S, i.e. first / (1 - ratio)."""
    if ratio == 1:
        raise InconsistentSummation("ratio 1: S = first + S has no finite solution")
    if is_exact(first) and is_exact(ratio):
        return Fraction(first) / (1 - Fraction(ratio))
    return first / (1 - ratio)


# ---------------------------------------------------------------------------
# zeta regularization
# ---------------------------------------------------------------------------


def zeta_negative(k: int) -> Fraction:
    """zeta(-k) = -B_{k+1}/(k+1) with the B_1 = +1/2 convention."""
    if k < 0:
        raise ValueError("k must be >= 0")
    B = bernoulli_numbers(k + 1)
    b = Fraction(1, 2) if k == 0 else B[k + 1]
    return -b / (k + 1)


# ---------------------------------------------------------------------------
# Riemann rearrangement of 1 - 1/2 + 1/3 - ...
# ---------------------------------------------------------------------------


def riemann_rearrange(target, N: int) -> list:
    """First N terms of the greedy rearrangement aimed at ``target``.

    Entry +n stands for the term 1/n (n odd), -n for -1/n (n even).
    A positive term is taken while the partial sum is <= target.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    exact_target = is_exact(target)
    target = Fraction(target) if exact_target else mpmath.mpf(target)
    next_pos, next_neg = 1, 2
    total = Fraction(0)
    out = []
    for _ in range(N):
        below = total <= target if exact_target else to_real(total, 40) <= target
        if below:
            out.append(next_pos)
            total += Fraction(1, next_pos)
            next_pos += 2
        else:
            out.append(-next_neg)
            total -= Fraction(1, next_neg)
            next_neg += 2
    return out


def rearranged_sum(indices: Sequence) -> Fraction:
    return sum((Fraction(1, i) if i > 0 else Fraction(-1, -i) for i in indices), Fraction(0))


@dataclass(frozen=True)
class Run:
    sign: int
    first: int  # first odd (sign +1) or even (sign -1) denominator in the run
    count: int
    partial_sum: object  # sum after the run


def riemann_rearrange_runs(target, runs: int, digits: int = 30) -> list:
    """The same greedy rearrangement, compressed into runs of equal sign.

    Run lengths are found by bisection on closed-form block sums
    sum_{i=a}^{b} 1/(2i-1) = (psi(b+1/2) - psi(a-1/2))/2, so targets far
    from log 2 (billions of terms) stay cheap.
    """
    out = []
    with mpmath.workdps(digits + 10):
        target = mpmath.mpf(target) if not is_exact(target) else to_real(target, digits + 10)
        total = mpmath.mpf(0)
        next_pos, next_neg = 1, 1  # i-th positive term 1/(2i-1), i-th negative -1/(2i)

        def pos_block(a, b):
            return (mpmath.digamma(b + mpmath.mpf(1) / 2) - mpmath.digamma(a - mpmath.mpf(1) / 2)) / 2

        def neg_block(a, b):
            return (mpmath.digamma(b + 1) - mpmath.digamma(a)) / 2

        for _ in range(runs):
            if total <= target:
                need = target - total
                count = _first_exceeding(lambda c: pos_block(next_pos, next_pos + c - 1), need)
                total += pos_block(next_pos, next_pos + count - 1)
                out.append(Run(1, 2 * next_pos - 1, count, +total))
                next_pos += count
            else:
                need = total - target
                count = _first_exceeding(lambda c: neg_block(next_neg, next_neg + c - 1), need, inclusive=True)
                total -= neg_block(next_neg, next_neg + count - 1)
                out.append(Run(-1, 2 * next_neg, count, +total))
                next_neg += count
    return out


def _first_exceeding(block, need, inclusive: bool = False) -> int:
    """Smallest c >= 1 with block(c) > need, or block(c) >= need when inclusive."""

    def done(c):
        v = block(c)
        return v >= need if inclusive else v > need

    hi = 1
    while not done(hi):
        hi *= 2
    lo = hi // 2
    if lo < 1:
        return 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if done(mid):
            hi = mid
        else:
            lo = mid
    return hi
