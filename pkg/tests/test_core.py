import json
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from resummation import catalog
from resummation.core import (
    ALTERNATING,
    CoefficientSequence,
    bernoulli_numbers,
    explicit,
    format_scalar,
    generated,
    is_exact,
    load_series,
    dump_series,
    parse_scalar,
    partial_sums,
    quadrature_semi_infinite,
    series_from_json,
    series_to_json,
    solve_linear,
)
from resummation.errors import GeneratorExhausted, SingularSystem

from oracles import exponential_integral_value, quad_value


def test_partial_sums_log2():
    sums = partial_sums(catalog.lookup("log2"), 1, 2)
    assert sums.values == (1, Fraction(1, 2), Fraction(5, 6))
    assert sums.start == 1


def test_partial_sums_zero_and_geometric():
    assert partial_sums(explicit([0, 0, 0, 0]), 1, 3).values == (0, 0, 0, 0)
    ones = generated(lambda n: Fraction(1), "ones")
    assert partial_sums(ones, Fraction(1, 2), 2).values == (1, Fraction(3, 2), Fraction(7, 4))


def test_partial_sums_exhausted():
    with pytest.raises(GeneratorExhausted):
        partial_sums(explicit([1, 2]), 1, 5)
    with pytest.raises(GeneratorExhausted):
        partial_sums(generated(lambda n: Fraction(n), "lim", limit=3), 1, 5)


def test_alternating_convention_applies_signs():
    seq = CoefficientSequence((Fraction(1), Fraction(1), Fraction(2)), ALTERNATING)
    assert seq.signed(3) == [1, -1, 2]
    assert partial_sums(seq, 1, 2).values == (1, 0, 2)


@given(st.lists(st.fractions(max_denominator=50).map(lambda f: f.limit_denominator(50)), min_size=1, max_size=12),
       st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_partial_sums_telescoping(coeffs, point):
    sums = partial_sums(explicit(coeffs), point, len(coeffs) - 1).values
    assert sums[0] == coeffs[0]
    for k in range(1, len(coeffs)):
        assert sums[k] - sums[k - 1] == coeffs[k] * point**k
    assert all(is_exact(s) for s in sums)


def test_quadrature_semi_infinite_examples():
    assert abs(quadrature_semi_infinite(lambda t: mpmath.exp(-2 * t), 15) - 0.5) < 1e-12
    assert abs(quadrature_semi_infinite(lambda t: t * mpmath.exp(-2 * t), 15) - 0.25) < 1e-12
    val = quadrature_semi_infinite(lambda t: mpmath.exp(-t) / (1 + t), 20)
    # second rule: scipy adaptive Gauss-Kronrod, and the closed form e*E1(1)
    assert abs(val - quad_value(lambda t: math.exp(-t) / (1 + t))) < 1e-8
    assert abs(val - exponential_integral_value()) < 1e-8
    assert abs(val - mpmath.mpf("0.59634736")) < 1e-8


def test_quadrature_precision_monotone():
    f = lambda t: mpmath.exp(-t) / (1 + t)
    with mpmath.workdps(60):
        a = quadrature_semi_infinite(f, 25)
        b = quadrature_semi_infinite(f, 50)
    assert abs(a - b) < mpmath.mpf(10) ** (-24)


def test_bernoulli_numbers():
    assert bernoulli_numbers(1) == [1, Fraction(-1, 2)]
    B = bernoulli_numbers(12)
    assert B[2] == Fraction(1, 6)
    assert B[4] == Fraction(-1, 30)
    assert B[12] == Fraction(-691, 2730)
    assert all(B[k] == 0 for k in range(3, 13, 2))


def test_bernoulli_generating_function():
    import sympy

    x = sympy.symbols("x")
    series = sympy.series(x / (sympy.exp(x) - 1), x, 0, 11).removeO()
    B = bernoulli_numbers(10)
    for k in range(11):
        expected = Fraction(str(series.coeff(x, k) * sympy.factorial(k)))
        # x/(e^x - 1) has B_1 = -1/2
        assert B[k] == expected


def test_scalar_parsing_and_formatting():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-21/8") == Fraction(-21, 8)
    with pytest.raises(ValueError):
        parse_scalar("abc")
    assert format_scalar(Fraction(6, 4)) == "3/2"
    assert format_scalar(Fraction(4, 2)) == "2"
    assert format_scalar(mpmath.mpf(1) / 3, 5) == "0.33333"
    with mpmath.workdps(60):
        assert format_scalar(mpmath.pi, 50) == "3.14159265358979323846264338327950288419716939937511"


def test_exact_linear_solve():
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert solve_linear(A, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(SingularSystem):
        solve_linear([[1, 2], [2, 4]], [1, 2])


def test_series_json_roundtrip(tmp_path):
    seq = explicit([Fraction(3, 4), Fraction(-21, 8), Fraction(333, 16)], name="F")
    obj = series_to_json(seq)
    assert obj["coefficients"] == ["3/4", "-21/8", "333/16"]
    path = tmp_path / "f.json"
    dump_series(seq, path)
    assert load_series(path).terms == seq.terms
    assert json.loads(path.read_text())["kind"] == "explicit"


def test_series_json_catalog_and_validation():
    seq = series_from_json({"name": "euler-numbers", "kind": "catalog", "sign_convention": "alternating-implied",
                            "coefficients": ["1", "1", "5"]})
    assert seq.raw(4) == [1, 1, 5, 61]
    with pytest.raises(ValueError):
        series_from_json({"name": "x", "kind": "explicit", "coefficients": [0.5]})
    with pytest.raises(ValueError):
        series_from_json({"name": "x", "kind": "explicit", "coefficients": ["1"], "extra": 1})
    with pytest.raises(ValueError):
        series_from_json({"name": "log2", "kind": "catalog", "coefficients": ["2"]})
