"""Built-in coefficient sequences, addressable by name."""

from __future__ import annotations

import math
from fractions import Fraction

from .core import ALTERNATING, CoefficientSequence, bernoulli_numbers, explicit, generated
from .resum import alternating_powers, periodic


def _euler_numbers(n: int) -> Fraction:
    """|E_{2n}|: 1, 1, 5, 61, 1385, ... (moments of the sech weight)."""
    # secant numbers from the boustrophedon (Seidel) triangle
    row = [1]
    out = [1]
    for k in range(1, 2 * n + 1):
        nxt = [0]
        for v in reversed(row):
            nxt.append(nxt[-1] + v)
        row = nxt
        out.append(row[-1])
    return Fraction(out[2 * n])


def _self_exponential(n: int) -> Fraction:
    return Fraction(n + 1) ** (n - 1) / math.factorial(n)


def _anharmonic(count: int, subtracted: bool) -> CoefficientSequence:
    from .physics import anharmonic_coefficients

    series = anharmonic_coefficients(count)
    if subtracted:
        series = series.subtract()
    return series.as_sequence()


def _quintic(variant: str) -> CoefficientSequence:
    from .physics import quintic_regular_coefficients, quintic_singular_coefficients

    rule = quintic_regular_coefficients if variant == "regular" else quintic_singular_coefficients
    cache: dict = {}

    def coeff(n: int):
        if n not in cache:
            cache.update(enumerate(rule(min(400, max(n, 64, 2 * len(cache))))))
        return cache[n]

    return generated(coeff, f"quintic-{variant}", limit=400)


_BUILDERS = {
    "log2": (lambda: generated(lambda n: Fraction((-1) ** (n - 1), n), "log2", start=1),
             "1 - 1/2 + 1/3 - ... = log 2"),
    "basel": (lambda: generated(lambda n: Fraction(1, n * n), "basel", start=1), "sum 1/n^2 = pi^2/6"),
    "euler-factorial": (lambda: generated(lambda n: Fraction(math.factorial(n)), "euler-factorial", ALTERNATING),
                        "sum (-1)^n n! z^n, Stieltjes with value 0.596347... at z=1"),
    "grandi": (lambda: generated(lambda n: Fraction((-1) ** n), "grandi"), "1 - 1 + 1 - ..."),
    "alternating-integers": (lambda: alternating_powers(1), "1 - 2 + 3 - 4 + ..."),
    "ones": (lambda: generated(lambda n: Fraction(1), "ones"), "1 + 1 + 1 + ..."),
    "powers-of-two": (lambda: generated(lambda n: Fraction(2**n), "powers-of-two"), "1 + 2 + 4 + 8 + ..."),
    "anharmonic-E": (lambda: _anharmonic(25, False), "ground-state energy of p^2/2 + x^2/2 + eps x^4"),
    "anharmonic-F": (lambda: _anharmonic(25, True), "(E(eps) - 1/2)/eps for the quartic oscillator"),
    "euler-numbers": (lambda: generated(_euler_numbers, "euler-numbers", ALTERNATING, limit=200),
                      "moments 1, 1, 5, 61, 1385, ... with b_n = n^2"),
    "self-exponential": (lambda: generated(_self_exponential, "self-exponential"),
                         "z e^{z e^{z ...}}: (n+1)^(n-1)/n!"),
    "interleaved-double-factorial": (
        lambda: generated(lambda n: Fraction(0) if n % 2 else Fraction((-1) ** (n // 2) * math.factorial(n)),
                          "interleaved-double-factorial"),
        "sum (-1)^k (2k)! z^(2k), Borel transform 1/(1+t^2)"),
    "quintic-regular": (lambda: _quintic("regular"), "root of x^5 + eps x - 1 in powers of eps"),
    "quintic-singular": (lambda: _quintic("singular"), "root of eps x^5 + x - 1 in powers of eps"),
    "bernoulli": (lambda: explicit(bernoulli_numbers(40), name="bernoulli"), "B_0..B_40 (B_1 = -1/2)"),
}


def names() -> list:
    return sorted(_BUILDERS)


def describe(name: str) -> str:
    return _BUILDERS[name][1]


def lookup(name: str) -> CoefficientSequence:
    """Series by catalog name; also accepts alternating-powers-<p> and periodic:<a,b,...>."""
    if name in _BUILDERS:
        seq = _BUILDERS[name][0]()
        return CoefficientSequence(seq.terms, seq.sign_convention, f"catalog:{name}", name, seq.start,
                                   seq.generator, seq.limit)
    if name.startswith("alternating-powers-"):
        return alternating_powers(int(name.rsplit("-", 1)[1]))
    if name.startswith("periodic:"):
        return periodic([Fraction(x) for x in name.split(":", 1)[1].split(",")], name)
    raise KeyError(f"unknown catalog series {name!r}")
