"""Continued fractions, moments, Padé approximants and Stieltjes diagnostics.

The series handled here are written ``f(z) ~ sum (-1)**n a_n z**n`` and are
matched to the S-fraction

    1 / (1 + b_1 z / (1 + b_2 z / (1 + ...)))

through the moment functional L[x**(2k)] = a_k, L[odd] = 0, whose monic
orthogonal polynomials obey P_{n+1} = x P_n - b_n P_{n-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .core import (
    CoefficientSequence,
    explicit,
    is_exact,
    poly_eval,
    poly_mul,
    series_divide,
    solve_linear,
    determinant,
    to_real,
)
from .errors import ConvergenceFailure, DegenerateMoments, SingularSystem


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentSequence:
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(x) if is_exact(x) else x for x in self.a))

    def __len__(self):
        return len(self.a)

    def normalized(self) -> "MomentSequence":
        if self.a[0] == 0:
            raise ValueError("a_0 must be nonzero to normalize")
        return MomentSequence(tuple(x / self.a[0] for x in self.a))

    @classmethod
    def from_series(cls, seq: CoefficientSequence, count: int) -> "MomentSequence":
        return cls(tuple(seq.magnitudes(count)))


@dataclass(frozen=True)
class ContFracCoeffs:
    """b_1, b_2, ...; ``terminated`` marks a fraction ending in a zero layer."""

    b: tuple
    terminated: bool = False
    consistent: bool = True

    def __len__(self):
        return len(self.b)


@dataclass(frozen=True)
class OrthogonalPolySet:
    polys: tuple  # coefficient tuples of monic P_0..P_K, lowest degree first


@dataclass(frozen=True)
class PadeRational:
    num: tuple
    den: tuple
    orders: tuple

    def __call__(self, z):
        return poly_eval(self.num, z) / poly_eval(self.den, z)

    def series(self, order: int) -> list:
        num = list(self.num) + [0] * max(0, order + 1 - len(self.num))
        return series_divide(num, list(self.den), order)

    @property
    def label(self) -> str:
        return f"P^{self.orders[0]}_{self.orders[1]}"


# ---------------------------------------------------------------------------
# moments <-> continued fraction
# ---------------------------------------------------------------------------


def _functional(moments: Sequence, poly: Sequence):
    total = 0
    for j, c in enumerate(poly):
        if c and j % 2 == 0:
            total += c * moments[j // 2]
    return total


def _next_poly(p_n: Sequence, p_prev: Sequence, b_n) -> list:
    out = [0] + list(p_n)
    for j, c in enumerate(p_prev):
        out[j] -= b_n * c
    return out


def orthogonal_polynomials(b: Sequence, K: int) -> OrthogonalPolySet:
    """Monic P_0..P_K from the three-term recurrence with coefficients b."""
    polys = [[Fraction(1)], [Fraction(0), Fraction(1)]]
    for n in range(1, K):
        polys.append(_next_poly(polys[n], polys[n - 1], b[n - 1]))
    return OrthogonalPolySet(tuple(tuple(p) for p in polys[: K + 1]))


def moments_to_contfrac(a: MomentSequence) -> ContFracCoeffs:
    """b_1..b_{len(a)-1} with b_n = L[P_n**2] / L[P_{n-1}**2].

    A vanishing norm terminates the fraction: the zero layer is kept as the
    last b and the result is flagged instead of raising.
    """
    if not isinstance(a, MomentSequence):
        a = MomentSequence(tuple(a))
    moments = a.a
    if len(moments) < 2:
        raise ValueError("need at least a_0 and a_1")
    if moments[0] == 0:
        raise DegenerateMoments("a_0 = 0")
    b = []
    p_prev, p_n = [Fraction(1)], [Fraction(0), Fraction(1)]
    norm_prev = moments[0]
    for n in range(1, len(moments)):
        norm = _functional(moments, poly_mul(p_n, p_n))
        b_n = norm / norm_prev
        b.append(b_n)
        if norm == 0:
            rebuilt = contfrac_to_moments(ContFracCoeffs(tuple(b), True), len(moments) - 1).a
            return ContFracCoeffs(tuple(b), True, tuple(rebuilt) == tuple(moments))
        p_prev, p_n = p_n, _next_poly(p_n, p_prev, b_n)
        norm_prev = norm
    return ContFracCoeffs(tuple(b))


def contfrac_to_moments(b, K: int) -> MomentSequence:
    """a_0..a_K as weighted Dyck-path sums (a down-step from height h weighs b_h)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if isinstance(b, ContFracCoeffs):
        coeffs, terminated = list(b.b), b.terminated
    else:
        coeffs, terminated = list(b), False
    if len(coeffs) < K and not terminated:
        raise ValueError(f"a_{K} needs b_1..b_{K}, got {len(coeffs)}")
    coeffs = [Fraction(x) if is_exact(x) else x for x in coeffs] + [0] * max(0, K - len(coeffs))
    # weights[h]: weighted count of paths of the current length ending at height h
    weights = [Fraction(1)] + [0] * (K + 1)
    moments = [Fraction(1)]
    for step in range(1, 2 * K + 1):
        top = min(step, 2 * K - step)
        new = [0] * (K + 2)
        for h in range(0, top + 1):
            up = weights[h - 1] if h >= 1 else 0
            down = weights[h + 1] * coeffs[h] if h + 1 <= K else 0
            new[h] = up + down
        weights = new
        if step % 2 == 0:
            moments.append(weights[0])
    return MomentSequence(tuple(moments))


# ---------------------------------------------------------------------------
# Padé approximants
# ---------------------------------------------------------------------------


def pade_approximant(seq, n: int, m: int) -> PadeRational:
    """[n/m] approximant of ``sum c_k z**k`` (positional coefficients of ``seq``)."""
    if n < 0 or m < 0:
        raise ValueError("orders must be non-negative")
    c = list(seq.signed(n + m + 1)) if isinstance(seq, CoefficientSequence) else list(seq)[: n + m + 1]
    if len(c) < n + m + 1:
        raise ValueError(f"[{n}/{m}] needs {n + m + 1} coefficients")
    c = [Fraction(x) if is_exact(x) else x for x in c]

    def coef(k):
        return c[k] if k >= 0 else 0

    if m:
        matrix = [[coef(k - j) for j in range(1, m + 1)] for k in range(n + 1, n + m + 1)]
        rhs = [-coef(k) for k in range(n + 1, n + m + 1)]
        q = [Fraction(1)] + solve_linear(matrix, rhs)
    else:
        q = [Fraction(1)]
    p = [sum(q[j] * coef(k - j) for j in range(min(k, m) + 1)) for k in range(n + 1)]
    result = PadeRational(tuple(p), tuple(q), (n, m))
    expansion = result.series(n + m)
    exact_path = all(is_exact(x) for x in c)
    for k in range(n + m + 1):
        gap = expansion[k] - c[k]
        if (exact_path and gap != 0) or (not exact_path and abs(gap) > 1e-20 * (1 + abs(c[k]))):
            raise SingularSystem(f"[{n}/{m}] fails to match the series at order {k}")
    return result


def _staircase_b(seq: CoefficientSequence, depth: int):
    count = 2 * depth + 1
    a = seq.magnitudes(count)
    scale = a[0]
    if scale == 0:
        raise DegenerateMoments("leading coefficient is zero")
    if count == 1:
        return scale, ContFracCoeffs(())
    frac = moments_to_contfrac(MomentSequence(tuple(x / scale for x in a)))
    return scale, frac


def _b_at(frac: ContFracCoeffs, j: int):
    if j <= len(frac.b):
        return frac.b[j - 1]
    if frac.terminated and frac.consistent:
        return 0
    if frac.terminated:
        raise DegenerateMoments(f"moment sequence terminates before b_{j} and later moments disagree")
    raise ValueError(f"b_{j} not available")


def staircase_label(k: int) -> str:
    """Label of the k-th convergent (k >= 1): P^0_0, P^0_1, P^1_1, ..."""
    return f"P^{(k - 1) // 2}_{k // 2}"


def staircase_evaluate(seq: CoefficientSequence, z, depth: int) -> list:
    """Convergents P^0_0 .. P^depth_depth at z by the three-term recurrence.

    A_k = A_{k-1} + b_{k-1} z A_{k-2}, B_k likewise, starting from
    A_{-1}=1, A_0=0, B_{-1}=0, B_0=1 with the first partial numerator 1.
    """
    scale, frac = _staircase_b(seq, depth)
    if not is_exact(z):
        z = to_real(z) if not isinstance(z, (complex, mpmath.mpc)) else mpmath.mpc(z)
    a_prev, a_cur = Fraction(1), Fraction(0)
    b_prev, b_cur = Fraction(0), Fraction(1)
    out = []
    for k in range(1, 2 * depth + 2):
        partial = 1 if k == 1 else _b_at(frac, k - 1) * z
        a_prev, a_cur = a_cur, a_cur + partial * a_prev
        b_prev, b_cur = b_cur, b_cur + partial * b_prev
        if b_cur == 0:
            raise DegenerateMoments(f"convergent {staircase_label(k)} has a pole at z")
        out.append((staircase_label(k), scale * a_cur / b_cur))
    return out


def staircase_rationals(seq: CoefficientSequence, depth: int) -> list:
    """The staircase convergents as PadeRational objects."""
    scale, frac = _staircase_b(seq, depth)
    a_prev, a_cur = [Fraction(1)], [Fraction(0)]
    b_prev, b_cur = [Fraction(0)], [Fraction(1)]
    out = []
    for k in range(1, 2 * depth + 2):
        partial = [Fraction(1)] if k == 1 else [0, _b_at(frac, k - 1)]
        a_prev, a_cur = a_cur, _poly_add(a_cur, poly_mul(partial, a_prev))
        b_prev, b_cur = b_cur, _poly_add(b_cur, poly_mul(partial, b_prev))
        n, m = (k - 1) // 2, k // 2
        num = tuple(scale * x for x in _pad(a_cur, n + 1))
        out.append(PadeRational(num, tuple(_pad(b_cur, m + 1)), (n, m)))
    return out


def _poly_add(p, q):
    size = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(size)]


def _pad(p, size):
    p = list(p)[:size]
    return p + [Fraction(0)] * (size - len(p))


# ---------------------------------------------------------------------------
# Stieltjes diagnostics
# ---------------------------------------------------------------------------


@dataclass
class HankelReport:
    dets: list  # (order, det) for (a_{i+j})
    shifted_dets: list  # (order, det) for (a_{i+j+1})
    passed: bool
    boundary: bool
    first_failure: Optional[tuple] = None  # ("plain"|"shifted", order)

    def summary(self) -> str:
        if self.first_failure:
            return f"fail ({self.first_failure[0]} order {self.first_failure[1]})"
        return "boundary (vanishing determinant)" if self.boundary else "pass"


def stieltjes_hankel_check(a) -> HankelReport:
    """Leading Hankel determinants of (a_{i+j}) and (a_{i+j+1}); all must be positive."""
    moments = a.a if isinstance(a, MomentSequence) else tuple(a)
    if len(moments) < 2:
        raise ValueError("need at least two moments")
    dets, shifted = [], []
    for k in range(1, (len(moments) + 1) // 2 + 1):
        if 2 * k - 2 < len(moments):
            dets.append((k, determinant([[moments[i + j] for j in range(k)] for i in range(k)])))
        if 2 * k - 1 < len(moments):
            shifted.append((k, determinant([[moments[i + j + 1] for j in range(k)] for i in range(k)])))
    failure = None
    for kind, table in (("plain", dets), ("shifted", shifted)):
        for order, d in table:
            if d < 0 and (failure is None or order < failure[1]):
                failure = (kind, order)
    boundary = any(d == 0 for _, d in dets + shifted)
    return HankelReport(dets, shifted, failure is None and not boundary, boundary, failure)


@dataclass
class CarlemanReport:
    c_estimate: float
    slope: float
    growth_exponent: float
    satisfied: bool


def carleman_check(a, threshold: float = 0.5) -> CarlemanReport:
    """Evidence for a_n <= (2n)! c**n on the available prefix.

    The least-squares slope of log(a_n / (2n)!) against n estimates log c.
    The verdict looks at how the increments of that log-ratio grow with
    log n: factorial growth beyond (2n)! makes them rise like log n.
    """
    moments = a.a if isinstance(a, MomentSequence) else tuple(a)
    if len(moments) < 4:
        raise ValueError("need at least four moments")
    with mpmath.workdps(30):
        logs = [
            float(mpmath.log(abs(to_real(x, 30))) - mpmath.loggamma(2 * n + 1))
            for n, x in enumerate(moments)
        ]
    n_vals = list(range(len(logs)))
    slope = _lsq_slope(n_vals, logs)
    increments = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)]
    xs = [math.log(i + 1) for i in range(1, len(increments))]
    growth = _lsq_slope(xs, increments[1:]) if len(xs) >= 2 else 0.0
    tail = increments[len(increments) // 2 :]
    late_slope = sum(tail) / len(tail)
    return CarlemanReport(math.exp(max(slope, late_slope)), slope, growth, growth <= threshold)


def _lsq_slope(xs, ys) -> float:
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


@dataclass
class HerglotzReport:
    samples: int
    violations: list = field(default_factory=list)
    degenerate: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def herglotz_probe(p, samples: int = 64, digits: int = 30) -> HerglotzReport:
    """Sample Im(-p(z)) * Im(z) > 0 off the real axis, avoiding poles."""
    golden = (math.sqrt(5) - 1) / 2
    report = HerglotzReport(samples=0)
    with mpmath.workdps(digits):
        tiny = mpmath.mpf(10) ** (-(digits - 5))
        for i in range(samples):
            r = mpmath.mpf(10) ** (-2 + 4 * mpmath.mpf(i) / max(1, samples - 1))
            theta = mpmath.pi * (0.02 + 0.96 * ((i * golden) % 1))
            for sign in (1, -1):
                z = mpmath.mpc(r * mpmath.cos(theta), sign * r * mpmath.sin(theta))
                den = _eval(p.den, z) if isinstance(p, PadeRational) else 1
                if abs(den) < tiny:
                    continue
                value = p(z) if not isinstance(p, PadeRational) else _eval(p.num, z) / den
                report.samples += 1
                product = -mpmath.im(value) * sign
                if abs(product) <= tiny * max(1, abs(value)):
                    report.degenerate += 1
                elif product < 0:
                    report.violations.append(complex(z))
    return report


def _eval(coeffs, z):
    return poly_eval([to_real(c) if is_exact(c) else c for c in coeffs], z)


# ---------------------------------------------------------------------------
# continued exponentials
# ---------------------------------------------------------------------------


def _exp_series(h: Sequence, K: int) -> list:
    """exp of a power series with h[0] = 0, through order K."""
    g = [Fraction(1)]
    for n in range(1, K + 1):
        acc = sum((k * h[k] * g[n - k] for k in range(1, n + 1) if k < len(h)), Fraction(0))
        g.append(acc / n)
    return g


def _cont_exp_coeffs(a: Sequence, K: int) -> list:
    tower = [Fraction(1)] + [Fraction(0)] * K
    for j in range(K, 0, -1):
        coef = a[j] if j < len(a) else 0
        h = [Fraction(0)] + [coef * t for t in tower[:K]]
        tower = _exp_series(h, K)
    return [a[0] * t for t in tower]


def continued_exponential(a: Sequence, K: int) -> CoefficientSequence:
    """Taylor coefficients c_0..c_K of a_0 exp(a_1 z exp(a_2 z exp(...)))."""
    a = [Fraction(x) if is_exact(x) else x for x in a]
    if not a or a[0] == 0:
        raise ValueError("a_0 must be nonzero")
    return explicit(_cont_exp_coeffs(a, K), name="continued-exponential")


def continued_exponential_match(c, K: int) -> list:
    """Invert :func:`continued_exponential`: tower coefficients a_0..a_K from c_0..c_K."""
    c = list(c.signed(K + 1)) if isinstance(c, CoefficientSequence) else [Fraction(x) if is_exact(x) else x for x in c]
    if c[0] == 0:
        raise ValueError("c_0 must be nonzero")
    a = [c[0]]
    lead = c[0]
    for n in range(1, K + 1):
        trial = _cont_exp_coeffs(a + [0], n)
        residual = c[n] - trial[n]
        if lead == 0:
            if residual != 0:
                raise ValueError(f"no tower matches c_{n}: earlier layer vanished")
            a.append(Fraction(0))
            continue
        a.append(residual / lead)
        lead *= a[-1]
    return a


def self_exponential(z, digits: int = 30, max_iter: int = 100_000):
    """Fixed point of w = exp(z w), i.e. the infinite tower exp(z exp(z ...))."""
    with mpmath.workdps(digits + 5):
        z = to_real(z) if is_exact(z) else mpmath.mpf(z)
        w = mpmath.mpf(1)
        tol = mpmath.mpf(10) ** (-digits)
        for _ in range(max_iter):
            nxt = mpmath.exp(z * w)
            if abs(nxt - w) < tol:
                return +nxt
            w = nxt
    raise ConvergenceFailure("fixed-point iteration did not converge")
