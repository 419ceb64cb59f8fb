"""Numeric tower, coefficient sequences, partial sums, quadrature and Bernoulli numbers.

Two scalar levels are used throughout the package:

* exact rationals, represented by :class:`fractions.Fraction` (``int`` is
  accepted on input and normalized to ``Fraction``);
* precision reals, represented by :class:`mpmath.mpf` evaluated under an
  explicit decimal digit budget (default :data:`DEFAULT_DIGITS`).

Mixing the two promotes to ``mpf``.  Operations that care report the
promotion through :func:`promote`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

import mpmath

from .errors import ConvergenceFailure, GeneratorExhausted, SingularSystem

DEFAULT_DIGITS = 50

Scalar = Union[Fraction, mpmath.mpf]

AS_IS = "as-is"
ALTERNATING = "alternating-implied"
SIGN_CONVENTIONS = (AS_IS, ALTERNATING)


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def exact(x) -> Fraction:
    """Return ``x`` as a Fraction; refuses to silently rationalize a real."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def to_real(x, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    with mpmath.workdps(digits):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def promote(values: Iterable, digits: int = DEFAULT_DIGITS) -> tuple[list, bool]:
    """Bring a collection onto one level of the tower.

    Returns ``(values, promoted)``: all-exact input comes back as Fractions
    with ``promoted=False``; any real in the mix turns everything into mpf and
    sets ``promoted=True``.
    """
    values = list(values)
    if all(is_exact(v) for v in values):
        return [Fraction(v) for v in values], False
    return [to_real(v, digits) for v in values], True


def parse_scalar(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"``, an integer or a terminating decimal into a Fraction."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rationals must be given as strings, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_scalar(x, digits: int = 15) -> str:
    """Render exact values as ``p/q`` and reals in fixed point with ``digits`` decimals."""
    if is_exact(x):
        q = Fraction(x)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    if isinstance(x, (complex, mpmath.mpc)):
        re = format_scalar(mpmath.mpf(mpmath.re(x)), digits)
        im = format_scalar(mpmath.mpf(mpmath.im(x)), digits)
        sign = "-" if im.startswith("-") else "+"
        return f"{re}{sign}{im.lstrip('-')}j"
    with mpmath.workdps(digits + 20):
        text = mpmath.nstr(mpmath.mpf(x), digits + 15, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    with localcontext() as ctx:
        ctx.prec = max(28, len(text) + digits + 5)
        d = Decimal(text).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    if d == 0:
        d = abs(d)
    return f"{d:f}"


def recognize_rational(value, tol, max_denominator: int = 10_000) -> Optional[Fraction]:
    """Closest rational with bounded denominator, if it lies within ``tol`` of ``value``."""
    with mpmath.workdps(40):
        v = mpmath.mpf(value)
        approx = Fraction(str(mpmath.nstr(v, 35))).limit_denominator(max_denominator)
        if abs(v - mpmath.mpf(approx.numerator) / approx.denominator) <= tol:
            return approx
    return None


# ---------------------------------------------------------------------------
# exact linear algebra and polynomials (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Gaussian elimination; exact on Fractions. Raises SingularSystem."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        if is_exact(a[col][col]) and all(is_exact(a[r][col]) for r in range(col, n)):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        else:
            pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
            if a[pivot][col] == 0:
                pivot = None
        if pivot is None:
            raise SingularSystem(f"matrix is singular at column {col}")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor:
                for c in range(col, n + 1):
                    a[r][c] -= factor * a[col][c]
    x = [0] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n] - sum(a[r][c] * x[c] for c in range(r + 1, n))
        x[r] = acc / a[r][r]
    return x


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued elimination."""
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def poly_eval(coeffs: Sequence, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def poly_mul(p: Sequence, q: Sequence, order: Optional[int] = None) -> list:
    """Product of two coefficient lists, optionally truncated after ``order``."""
    if not p or not q:
        return []
    size = len(p) + len(q) - 1
    if order is not None:
        size = min(size, order + 1)
    out = [0] * size
    for i, a in enumerate(p):
        if i >= size or not a:
            continue
        for j, b in enumerate(q[: size - i]):
            out[i + j] += a * b
    return out


def series_divide(num: Sequence, den: Sequence, order: int) -> list:
    """Power-series coefficients of num/den through ``order`` (den[0] != 0)."""
    out = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc if den[0] == 1 else acc / den[0])
    return out


# ---------------------------------------------------------------------------
# coefficient sequences and partial sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientSequence:
    """Series coefficients, finite or extendable through ``generator``.

    ``terms[k]`` is the coefficient with index ``start + k``.  Under the
    ``alternating-implied`` convention the stored values are the magnitudes
    a_n and the series is ``sum (-1)**n a_n x**n``.
    """

    terms: tuple = ()
    sign_convention: str = AS_IS
    origin: str = "explicit"
    name: str = ""
    start: int = 0
    generator: Optional[Callable[[int], Scalar]] = field(default=None, compare=False, repr=False)
    limit: Optional[int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.sign_convention not in SIGN_CONVENTIONS:
            raise ValueError(f"unknown sign convention {self.sign_convention!r}")
        object.__setattr__(self, "terms", tuple(_normalize(t) for t in self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def extendable(self) -> bool:
        return self.generator is not None

    def extended(self, count: int) -> "CoefficientSequence":
        """A copy holding at least ``count`` stored terms."""
        if count <= len(self.terms):
            return self
        if self.generator is None or (self.limit is not None and count > self.limit):
            raise GeneratorExhausted(
                f"{self.name or self.origin}: {count} terms requested, {len(self.terms)} available"
            )
        new = [self.generator(self.start + k) for k in range(len(self.terms), count)]
        return replace(self, terms=self.terms + tuple(new))

    def raw(self, count: int) -> list:
        return list(self.extended(count).terms[:count])

    def signed(self, count: int) -> list:
        """Coefficients c_k of ``sum c_k x**(start+k)`` with the sign convention applied."""
        raw = self.raw(count)
        if self.sign_convention == AS_IS:
            return raw
        return [t if (self.start + k) % 2 == 0 else -t for k, t in enumerate(raw)]

    def magnitudes(self, count: int) -> list:
        """The a_n of ``sum (-1)**n a_n z**n`` regardless of stored convention."""
        raw = self.raw(count)
        if self.sign_convention == ALTERNATING:
            return raw
        return [t if (self.start + k) % 2 == 0 else -t for k, t in enumerate(raw)]


def _normalize(t):
    if isinstance(t, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(t, int):
        return Fraction(t)
    if isinstance(t, str):
        return parse_scalar(t)
    return t


def explicit(coeffs: Iterable, sign_convention: str = AS_IS, name: str = "", start: int = 0) -> CoefficientSequence:
    return CoefficientSequence(tuple(coeffs), sign_convention, "explicit", name, start)


def generated(
    rule: Callable[[int], Scalar],
    name: str,
    sign_convention: str = AS_IS,
    start: int = 0,
    limit: Optional[int] = None,
) -> CoefficientSequence:
    return CoefficientSequence((), sign_convention, f"generator:{name}", name, start, rule, limit)


@dataclass(frozen=True)
class PartialSums:
    """``values[k]`` is A_{start+k}."""

    values: tuple
    start: int = 0

    def __len__(self) -> int:
        return len(self.values)

    def at(self, index: int):
        k = index - self.start
        if not 0 <= k < len(self.values):
            raise IndexError(f"A_{index} not available (have A_{self.start}..A_{self.start + len(self.values) - 1})")
        return self.values[k]

    @property
    def last_index(self) -> int:
        return self.start + len(self.values) - 1


def partial_sums(seq: CoefficientSequence, point=Fraction(1), N: int = 0) -> PartialSums:
    """A_0..A_N of ``sum a_n point**n`` (N+1 terms starting at ``seq.start``)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    coeffs = seq.signed(N + 1)
    point = _normalize(point)
    acc = Fraction(0) if is_exact(point) and all(is_exact(c) for c in coeffs) else mpmath.mpf(0)
    power = point ** seq.start
    out = []
    for c in coeffs:
        acc = acc + c * power
        out.append(acc)
        power = power * point
    return PartialSums(tuple(out), seq.start)


def estimate_radius(seq: CoefficientSequence, n: int = 100) -> float:
    """Crude radius of convergence from the growth of max|a_k| between n and 2n."""
    try:
        coeffs = seq.signed(2 * n + 1)
    except GeneratorExhausted:
        coeffs = seq.signed(len(seq))
        n = max(1, (len(coeffs) - 1) // 2)
    logs = []
    for c in coeffs:
        logs.append(-math.inf if c == 0 else float(mpmath.log(abs(to_real(c, 20)))))
    early = max(logs[: n + 1])
    late = max(logs[: 2 * n + 1])
    if late == -math.inf:
        return math.inf
    if early == -math.inf:
        early = late
    return math.exp(-(late - early) / n)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


def quadrature(f: Callable, points: Sequence, digits: int = 15) -> mpmath.mpf:
    """Tanh-sinh quadrature over consecutive ``points``; error below 10**-digits."""
    with mpmath.workdps(digits + 10):
        value, err = mpmath.quad(f, list(points), error=True, maxdegree=10)
        tol = mpmath.mpf(10) ** (-digits)
        if not mpmath.isfinite(value) or err > tol:
            raise ConvergenceFailure(f"quadrature error estimate {mpmath.nstr(err, 3)} exceeds {tol}")
        return +value


def quadrature_semi_infinite(integrand: Callable, digits: int = 15) -> mpmath.mpf:
    """Integral over [0, inf) of an exponentially decaying integrand.

    Double-exponential (tanh-sinh) rule on the doubling partition
    0, 1, 2, 4, ..., 64, inf.
    """
    points = [mpmath.mpf(0)] + [mpmath.mpf(2) ** k for k in range(7)] + [mpmath.inf]
    return quadrature(integrand, points, digits)


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


def bernoulli_numbers(K: int) -> list[Fraction]:
    """B_0..B_K with B_1 = -1/2, from sum_{j<=k} C(k+1, j) B_j = 0."""
    if K < 0:
        raise ValueError("K must be >= 0")
    B = [Fraction(1)]
    for k in range(1, K + 1):
        acc = sum((math.comb(k + 1, j) * B[j] for j in range(k)), Fraction(0))
        B.append(-acc / (k + 1))
    return B


# ---------------------------------------------------------------------------
# series-definition JSON files
# ---------------------------------------------------------------------------

_SERIES_KEYS = {"name", "kind", "sign_convention", "coefficients"}


def series_from_json(obj: dict) -> CoefficientSequence:
    """Build a sequence from a parsed series-definition object."""
    if not isinstance(obj, dict):
        raise ValueError("series definition must be a JSON object")
    unknown = set(obj) - _SERIES_KEYS
    if unknown:
        raise ValueError(f"unknown keys in series definition: {sorted(unknown)}")
    name = obj.get("name")
    kind = obj.get("kind")
    if not isinstance(name, str) or kind not in ("explicit", "catalog"):
        raise ValueError("series definition needs a string 'name' and kind 'explicit' or 'catalog'")
    convention = obj.get("sign_convention", AS_IS)
    if convention not in SIGN_CONVENTIONS:
        raise ValueError(f"unknown sign_convention {convention!r}")
    raw = obj.get("coefficients", [])
    if not isinstance(raw, list) or not all(isinstance(c, str) for c in raw):
        raise ValueError("coefficients must be a list of 'p/q' strings")
    coeffs = [parse_scalar(c) for c in raw]
    if kind == "catalog":
        from .catalog import lookup

        seq = lookup(name)
        if coeffs and seq.raw(len(coeffs)) != coeffs:
            raise ValueError(f"coefficients do not match catalog series {name!r}")
        return seq
    if not coeffs:
        raise ValueError("explicit series needs at least one coefficient")
    return CoefficientSequence(tuple(coeffs), convention, "explicit", name)


def series_to_json(seq: CoefficientSequence, count: Optional[int] = None) -> dict:
    terms = seq.raw(count if count is not None else len(seq))
    if not all(is_exact(t) for t in terms):
        raise ValueError("only exact coefficients can be serialized")
    kind = "explicit" if seq.origin == "explicit" else "catalog"
    return {
        "name": seq.name,
        "kind": kind,
        "sign_convention": seq.sign_convention,
        "coefficients": [format_scalar(t) for t in terms],
    }


def load_series(path: Union[str, Path]) -> CoefficientSequence:
    with open(path, encoding="utf-8") as fh:
        return series_from_json(json.load(fh))


def dump_series(seq: CoefficientSequence, path: Union[str, Path], count: Optional[int] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(series_to_json(seq, count), fh, indent=2)
        fh.write("\n")
