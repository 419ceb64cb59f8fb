"""One test per acceptance criterion; each records a PASS/FAIL line for the terminal summary."""

import math
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from resummation import catalog
from resummation.accel import richardson, shanks
from resummation.core import partial_sums
from resummation.fourier import HeatProblem, gibbs_overshoot, heat_solve
from resummation.pade import ContFracCoeffs, MomentSequence, contfrac_to_moments, moments_to_contfrac, staircase_evaluate
from resummation.physics import (
    anharmonic_coefficients,
    anharmonic_pade_table,
    asymptotic_ratio,
    casimir_energy,
    casimir_force,
    quintic_root_study,
)
from resummation.resum import alternating_powers, borel_sum_closed, euler_sum, generic_sum_periodic, periodic, zeta_negative

from oracles import exponential_integral_value, heat_fd, quad_value

FOUR_COEFFICIENTS = (Fraction(1, 2), Fraction(3, 4), Fraction(-21, 8), Fraction(333, 16))
TABLE = {"P^0_1": 0.66667, "P^1_1": 0.95600, "P^1_2": 0.73385, "P^2_2": 0.87411,
         "P^2_3": 0.76506, "P^3_3": 0.84110, "P^3_4": 0.78102, "P^4_4": 0.82529}


def test_criterion_1_euler_number_roundtrip(acceptance):
    start = time.perf_counter()
    b = moments_to_contfrac(MomentSequence((1, 1, 5, 61))).b
    a = contfrac_to_moments(ContFracCoeffs(tuple(b) + (16,)), 4).a
    elapsed = time.perf_counter() - start
    ok = b == (1, 4, 9) and a[4] == 1385 and isinstance(a[4], (int, Fraction)) and elapsed < 1
    acceptance(1, "Euler-number roundtrip", ok, f"b=({', '.join(map(str, b))}), a4={a[4]}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_anharmonic_pade_table(acceptance):
    start = time.perf_counter()
    few = {e.label: float(e.value) for e in anharmonic_pade_table(1, FOUR_COEFFICIENTS)}
    full = {e.label: float(e.value) for e in anharmonic_pade_table(4, anharmonic_coefficients(9).coeffs)}
    elapsed = time.perf_counter() - start
    ok_few = round(few["P^0_1"], 5) == 0.66667 and round(few["P^1_1"], 5) == 0.95600
    worst = max(abs(full[k] - v) for k, v in TABLE.items())
    ok = ok_few and worst <= 1e-4 and elapsed < 10
    acceptance(2, "anharmonic Pade table", ok, f"max deviation {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_cross_method_agreement(acceptance):
    expected = [Fraction(1, 2), Fraction(1, 4), Fraction(0), Fraction(-1, 8)]
    got = []
    for p, value in enumerate(expected):
        seq = alternating_powers(p)
        routes = (euler_sum(seq).value, borel_sum_closed(p), generic_sum_periodic([1, -1]) if p == 0 else value)
        got.append(all(r == value and isinstance(r, Fraction) for r in routes))
    patterns = {(1, -1, 0): Fraction(1, 3), (1, 0, -1, 0, 0): Fraction(2, 5)}
    for pattern, value in patterns.items():
        got.append(euler_sum(periodic(pattern, "p")).value == value and generic_sum_periodic(pattern) == value)
    ok = all(got)
    acceptance(3, "cross-method exact agreement", ok, f"{sum(got)}/{len(got)} cases exact")
    assert ok


def test_criterion_4_shanks_log2(acceptance):
    start = time.perf_counter()
    sums = partial_sums(catalog.lookup("log2"), 1, 7)
    raw = abs(float(sums.values[-1]) - math.log(2))
    err = abs(float(shanks(sums, 3).final) - math.log(2))
    elapsed = time.perf_counter() - start
    ok = err < 1e-4 and raw > 5e-2 and raw / err >= 500 and elapsed < 1
    acceptance(4, "Shanks on log 2", ok, f"raw {raw:.2e}, accelerated {err:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_5_richardson_basel(acceptance):
    start = time.perf_counter()
    sums = partial_sums(catalog.lookup("basel"), 1, 13)
    raw = abs(float(sums.at(10)) - math.pi**2 / 6)
    err = abs(float(richardson(sums, 3, 10)) - math.pi**2 / 6)
    elapsed = time.perf_counter() - start
    ok = err < 1e-5 and abs(raw - 9.5e-2) < 1e-3 and elapsed < 1
    acceptance(5, "Richardson on sum 1/n^2", ok, f"raw {raw:.2e}, order 3 {err:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_6_stieltjes_bracketing(acceptance):
    start = time.perf_counter()
    values = dict(staircase_evaluate(catalog.lookup("euler-factorial"), 1, 13))
    elapsed = time.perf_counter() - start
    oracle = exponential_integral_value()
    diag = [float(values[f"P^{n}_{n}"]) for n in range(13)]
    sub = [float(values[f"P^{n}_{n + 1}"]) for n in range(13)]
    decreasing = all(x > y for x, y in zip(diag, diag[1:]))
    increasing = all(x < y for x, y in zip(sub, sub[1:]))
    close = abs(diag[-1] - oracle) < 1e-3 and abs(sub[-1] - oracle) < 1e-3
    ok = decreasing and increasing and close and abs(oracle - 0.59634736) < 1e-8 and elapsed < 5
    acceptance(6, "Stieltjes bracketing", ok, f"[12/12]={diag[-1]:.8f}, [12/13]={sub[-1]:.8f}, {elapsed:.2f}s")
    assert ok


@pytest.fixture(scope="module")
def heat_run():
    start = time.perf_counter()
    sol = heat_solve(HeatProblem("zero", "one", "zero", 100, [Fraction(1, 2), Fraction(5)]), accelerate=True)
    grid, u = heat_fd(lambda t: 1.0, lambda t: 0.0, lambda x: 0.0, 0.5)
    inner = slice(1, -1)
    fd_dev = float(np.max(np.abs(sol.evaluate(grid[inner], 0) - u[inner])))
    steady_dev = float(np.max(np.abs(sol.evaluate(grid[inner], 1) - (1 - grid[inner] / math.pi))))
    return fd_dev, steady_dev, time.perf_counter() - start


def test_criterion_7_heat_against_finite_differences(heat_run):
    fd_dev, _, elapsed = heat_run
    assert fd_dev < 1e-4 and elapsed < 30


@pytest.mark.xfail(strict=True, reason=(
    "the exact solution at t=5 still carries the slowest transient (2/pi) e^-5 sin x, "
    "about 4.29e-3 from 1 - x/pi, so a 1e-6 bound cannot hold for a correct solver"))
def test_criterion_7_heat_steady_profile(acceptance, heat_run):
    fd_dev, steady_dev, elapsed = heat_run
    transient = 2 / math.pi * math.exp(-5)
    ok = fd_dev < 1e-4 and steady_dev < 1e-6 and elapsed < 30
    acceptance(7, "heat equation", ok,
               f"t=0.5 vs FD {fd_dev:.1e}; t=5 vs 1-x/pi {steady_dev:.2e} (slowest transient {transient:.2e}); {elapsed:.1f}s")
    # the deviation is the physical transient, not solver error
    assert abs(steady_dev - transient) < 1e-4 * transient
    assert ok


def test_criterion_8_gibbs_overshoot(acceptance):
    start = time.perf_counter()
    value = float(gibbs_overshoot(mpmath.pi))
    oracle = 2 / math.pi * quad_value(lambda s: math.sin(s) / s if s else 1.0, 0.0, math.pi)
    tail = [abs(float(gibbs_overshoot(a)) - 1) for a in (10, 100, 1000)]
    elapsed = time.perf_counter() - start
    ok = abs(value - 1.17898) <= 1e-5 and abs(value - oracle) < 1e-10 and tail[0] > tail[1] > tail[2] and elapsed < 1
    acceptance(8, "Gibbs overshoot", ok, f"{value:.8f} vs quadrature {oracle:.8f}, {elapsed:.2f}s")
    assert ok


def test_criterion_9_zeta_casimir(acceptance):
    z3 = zeta_negative(3)
    energy, force = casimir_force(1)
    h = mpmath.mpf(10) ** -6
    with mpmath.workdps(50):
        tol = mpmath.mpf(10) ** -45
        e_ok = abs(energy + mpmath.pi**2 / 720) < tol
        f_ok = abs(force + mpmath.pi**2 / 240) < tol
        derivative = -(casimir_energy(1 + h) - casimir_energy(1 - h)) / (2 * h)
        fd_err = abs(derivative - force)
    ok = z3 == Fraction(1, 120) and e_ok and f_ok and fd_err < 1e-8
    acceptance(9, "zeta and Casimir", ok, f"zeta(-3)={z3}, derivative error {float(fd_err):.1e}")
    assert ok


def test_criterion_10_quintic(acceptance):
    start = time.perf_counter()
    regular = quintic_root_study("regular", 60, 1)
    singular = quintic_root_study("singular", 60, 1)
    growth = [abs(quintic_root_study("singular", K, 1).partial_sum) for K in (20, 40)] + [abs(singular.partial_sum)]
    elapsed = time.perf_counter() - start
    root = regular.reference_root
    pade_err = abs(mpmath.mpf(singular.pade_value.numerator) / singular.pade_value.denominator - root)
    ok = (abs(regular.partial_sum - root) < 1e-4 and abs(root - mpmath.mpf("0.754878")) < 1e-6
          and growth[0] < growth[1] < growth[2] and growth[2] > 1e50 and pade_err < 1e-4 and elapsed < 5)
    acceptance(10, "quintic root", ok,
               f"regular error {float(abs(regular.partial_sum - root)):.1e}, singular |S_60|={float(growth[2]):.1e}, "
               f"Pade error {float(pade_err):.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_11_asymptotic_ratio(acceptance):
    start = time.perf_counter()
    r10, r20 = asymptotic_ratio(10), asymptotic_ratio(20)
    elapsed = time.perf_counter() - start
    ok = abs(r20 - 1) < abs(r10 - 1) and abs(r20 - 1) <= 0.2 and elapsed < 60
    acceptance(11, "large-order formula", ok, f"ratio n=10 {float(r10):.4f}, n=20 {float(r20):.4f}, {elapsed:.2f}s")
    assert ok
