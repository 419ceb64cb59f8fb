"""Convergence acceleration of partial-sum sequences.

Shanks transformation (single and iterated) and Richardson extrapolation of
arbitrary order, plus a Neville-style extrapolation to zero step for
sequences sampled at non-consecutive nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import PartialSums, is_exact
from .errors import DegenerateDenominator, InsufficientTerms


@dataclass(frozen=True)
class AccelTable:
    """Rows of successively transformed sequences; ``None`` marks a 0/0 entry."""

    rows: tuple  # of (label, tuple of values)
    source: PartialSums

    def row(self, k: int) -> tuple:
        return self.rows[k][1]

    @property
    def final(self):
        """Last defined entry of the deepest row."""
        for value in reversed(self.rows[-1][1]):
            if value is not None:
                return value
        return None


def _as_field(x):
    return Fraction(x) if isinstance(x, int) and not isinstance(x, bool) else x


def shanks_transform(a_prev, a, a_next):
    """(A_{N+1} A_{N-1} - A_N**2) / (A_{N+1} - 2 A_N + A_{N-1}); None when the denominator vanishes."""
    a_prev, a, a_next = _as_field(a_prev), _as_field(a), _as_field(a_next)
    den = a_next - 2 * a + a_prev
    if den == 0:
        return None
    return (a_next * a_prev - a * a) / den


def shanks(sums: PartialSums, iterations: int = 1) -> AccelTable:
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if len(sums) < 2 * iterations + 1:
        raise InsufficientTerms(f"{iterations} Shanks iterations need {2 * iterations + 1} partial sums, got {len(sums)}")
    rows = [("A", tuple(sums.values))]
    current = sums.values
    for j in range(1, iterations + 1):
        nxt = []
        for i in range(1, len(current) - 1):
            window = current[i - 1 : i + 2]
            nxt.append(None if None in window else shanks_transform(*window))
        if all(v is None for v in nxt):
            raise DegenerateDenominator(f"Shanks row {j} is entirely 0/0")
        rows.append((f"S^{j}", tuple(nxt)))
        current = nxt
    return AccelTable(tuple(rows), sums)


def richardson_combination(values: Sequence, N, order: int):
    """(1/k!) sum_l (-1)**(k-l) (N+l)**k C(k,l) A_{N+l} for values = (A_N, ..., A_{N+k}).

    ``N`` may be any ring element (ints, Fractions, symbols).
    """
    k = order
    if len(values) != k + 1:
        raise InsufficientTerms(f"order {k} needs {k + 1} values, got {len(values)}")
    total = 0
    for l, a in enumerate(values):
        total += (-1) ** (k - l) * math.comb(k, l) * (N + l) ** k * _as_field(a)
    return total / math.factorial(k)


def richardson(sums: PartialSums, order: int, N_start: int):
    """Order-k Richardson extrapolation from A_N .. A_{N+k}."""
    if order < 1:
        raise ValueError("order must be >= 1")
    try:
        window = [sums.at(N_start + l) for l in range(order + 1)]
    except IndexError as exc:
        raise InsufficientTerms(str(exc)) from exc
    return richardson_combination(window, N_start, order)


def extrapolate_to_zero(steps: Sequence, values: Sequence) -> list:
    """Neville extrapolation of values(h) to h = 0 using every node.

    Returns the estimates of increasing order built from the trailing
    nodes: ``out[j]`` uses the last ``j + 1`` samples.  Exact on exact input
    whenever values(h) is a polynomial of degree < len(steps).
    """
    if len(steps) != len(values) or not steps:
        raise ValueError("steps and values must be non-empty and of equal length")
    h = [_as_field(s) for s in steps]
    p = [_as_field(v) for v in values]
    n = len(h)
    out = [p[-1]]
    # p[i] holds the interpolant through nodes i..i+j evaluated at 0
    for j in range(1, n):
        for i in range(n - j):
            p[i] = (h[i] * p[i + 1] - h[i + j] * p[i]) / (h[i] - h[i + j])
        out.append(p[n - j - 1])
    return out


def romberg_ladder(values: Sequence, ratio=2) -> list:
    """Extrapolate a ladder sampled at h_j = ratio**-j to h = 0 (Richardson/Romberg)."""
    steps = [Fraction(1, ratio**j) if is_exact(ratio) else ratio ** (-j) for j in range(len(values))]
    return extrapolate_to_zero(steps, values)


def best_estimate(estimates: Sequence) -> tuple:
    """Value and spread from the last two entries of an estimate list."""
    if len(estimates) == 1:
        return estimates[0], None
    return estimates[-1], abs(estimates[-1] - estimates[-2])


def iterated_shanks_limit(values: Sequence) -> Optional[object]:
    """Apply Shanks as many times as the data allow and return the final entry."""
    sums = PartialSums(tuple(values))
    its = (len(values) - 1) // 2
    if its < 1:
        return values[-1] if values else None
    try:
        return shanks(sums, its).final
    except DegenerateDenominator:
        return None
