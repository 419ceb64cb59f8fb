"""Command-line front end.

Every subcommand builds a RunConfig and goes through ``run``, which returns
an exit code and the rendered report; output depends only on the config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import mpmath
import numpy as np

from . import accel, catalog, fourier, pade, physics, resum
from .core import DEFAULT_DIGITS, format_scalar, is_exact, load_series, parse_scalar, partial_sums, to_real
from .errors import ConvergenceFailure, InconsistentSummation, ResummationError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3

COMMANDS = ("accel", "resum", "pade", "heat", "anharmonic", "casimir", "quintic", "two-level", "catalog")
FORMATS = ("csv", "table", "json")

# keys accepted in RunConfig.params, per command
PARAMS = {
    "accel": {"method", "terms", "iterations", "order", "start", "point"},
    "resum": {"pattern", "prefix", "method", "power", "geometric", "zeta", "point", "rearrange", "count"},
    "pade": {"orders", "staircase", "at", "contfrac", "count"},
    "heat": {"f", "g", "h", "modes", "accelerate", "times", "eval_grid"},
    "anharmonic": {"table", "depth", "coefficients", "asymptotic"},
    "casimir": {"L"},
    "quintic": {"variant", "K", "eps"},
    "two-level": {"a", "b", "c", "eps"},
    "catalog": set(),
}


class InvalidInput(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    params: dict = field(default_factory=dict)
    format: str = "table"
    digits: int = DEFAULT_DIGITS

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InvalidInput(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise InvalidInput(f"unknown format {self.format!r}")
        if not isinstance(self.digits, int) or self.digits < 10:
            raise InvalidInput("digits must be an integer >= 10")
        unknown = set(self.params) - PARAMS[self.command]
        if unknown:
            raise InvalidInput(f"unknown parameters for {self.command}: {sorted(unknown)}")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


@dataclass
class Report:
    header: list
    rows: list  # lists of already-formatted strings


def render(report: Report, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.header)
        writer.writerows(report.rows)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(zip(report.header, r)) for r in report.rows], indent=2) + "\n"
    widths = [max(len(str(x)) for x in col) for col in zip(report.header, *report.rows)]
    line = lambda r: "  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip()
    out = [line(report.header), line(["-" * w for w in widths])] + [line(r) for r in report.rows]
    return "\n".join(out) + "\n"


def _fmt(x, digits: int) -> str:
    if isinstance(x, (float, np.floating)):
        x = mpmath.mpf(float(x))
        digits = min(digits, 15)
    return format_scalar(x, digits)


# ---------------------------------------------------------------------------
# input parsing helpers
# ---------------------------------------------------------------------------


def _scalar(text, what: str) -> Fraction:
    try:
        return parse_scalar(str(text))
    except ValueError as exc:
        raise InvalidInput(f"{what}: {exc}") from exc


def _scalar_list(text, what: str) -> list:
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        text = str(text).strip()
        if text.startswith("["):
            try:
                items = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"{what}: {exc}") from exc
        else:
            items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise InvalidInput(f"{what}: empty list")
    return [_scalar(t, what) for t in items]


def _int(text, what: str, minimum: int = 0) -> int:
    try:
        v = int(text)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{what} must be an integer") from exc
    if v < minimum:
        raise InvalidInput(f"{what} must be >= {minimum}")
    return v


def _series(config: RunConfig):
    if not config.input:
        raise InvalidInput("--input (series JSON file or catalog name) is required")
    path = Path(config.input)
    try:
        if path.suffix == ".json" or path.exists():
            return load_series(path)
        return catalog.lookup(config.input)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InvalidInput(f"cannot load series {config.input!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_accel(config: RunConfig) -> Report:
    p, d = config.params, config.digits
    seq = _series(config)
    terms = _int(p.get("terms", 8), "terms", 1)
    point = _scalar(p.get("point", "1"), "point")
    sums = partial_sums(seq, point, terms - 1)
    method = p.get("method", "shanks")
    if method == "shanks":
        iterations = _int(p.get("iterations", 1), "iterations", 1)
        table = accel.shanks(sums, iterations)
        rows = []
        for label, values in table.rows:
            rows.append([label] + ["" if v is None else _fmt(v, d) for v in values])
        width = max(len(r) for r in rows)
        rows = [r + [""] * (width - len(r)) for r in rows]
        return Report(["row"] + [f"v{i}" for i in range(width - 1)], rows)
    if method == "richardson":
        order = _int(p.get("order", 1), "order", 1)
        start = _int(p.get("start", sums.start), "start", 0)
        value = accel.richardson(sums, order, start)
        return Report(["order", "N", "value"], [[str(order), str(start), _fmt(value, d)]])
    raise InvalidInput(f"unknown accel method {method!r}")


def _cmd_resum(config: RunConfig) -> Report:
    p, d = config.params, config.digits
    header = ["method", "value"]
    if "pattern" in p:
        pattern = _scalar_list(p["pattern"], "pattern")
        prefix = _scalar_list(p["prefix"], "prefix") if p.get("prefix") else []
        return Report(header, [["generic", _fmt(resum.generic_sum_periodic(pattern, prefix), d)]])
    if "geometric" in p:
        first, ratio = _scalar_list(p["geometric"], "geometric")
        return Report(header, [["generic", _fmt(resum.geometric_sum(first, ratio), d)]])
    if "zeta" in p:
        k = _int(p["zeta"], "zeta", 0)
        return Report(header, [["zeta", _fmt(resum.zeta_negative(k), d)]])
    if "rearrange" in p:
        target = _scalar(p["rearrange"], "rearrange")
        runs = resum.riemann_rearrange_runs(target, _int(p.get("count", 10), "count", 1), d)
        return Report(["sign", "first", "count", "partial_sum"],
                      [["+" if r.sign > 0 else "-", str(r.first), str(r.count), _fmt(r.partial_sum, min(d, 20))]
                       for r in runs])
    method = p.get("method", "euler")
    if "power" in p:
        power = _int(p["power"], "power", 0)
        if method == "closed":
            return Report(header, [["borel-closed", _fmt(resum.borel_sum_closed(power), d)]])
        if method == "logistic":
            return Report(header, [["euler-logistic", _fmt(resum.euler_alternating_power(power), d)]])
        seq = resum.alternating_powers(power)
    else:
        seq = _series(config)
    if method == "euler":
        result = resum.euler_sum(seq, digits=min(d, 30))
    elif method == "borel":
        result = resum.borel_sum_numeric(seq, _scalar(p.get("point", "1"), "point"), digits=min(d, 30))
    else:
        raise InvalidInput(f"unknown resum method {method!r}")
    return Report(header, [[result.method, _fmt(result.value, min(d, 30))]])


def _cmd_pade(config: RunConfig) -> Report:
    p, d = config.params, config.digits
    seq = _series(config)
    if p.get("contfrac"):
        count = _int(p.get("count", 6), "count", 2)
        frac = pade.moments_to_contfrac(pade.MomentSequence.from_series(seq, count).normalized())
        rows = [[f"b_{i}", _fmt(b, d)] for i, b in enumerate(frac.b, start=1)]
        if frac.terminated:
            rows.append(["terminated", "yes" if frac.consistent else "inconsistent"])
        return Report(["coefficient", "value"], rows)
    z = _scalar(p.get("at", "1"), "at")
    if p.get("staircase") is not None:
        depth = _int(p["staircase"], "staircase", 0)
        values = pade.staircase_evaluate(seq, z, depth)
        return Report(["label", "value"], [[label, _fmt(v, d)] for label, v in values])
    if p.get("orders"):
        try:
            n, m = (int(x) for x in str(p["orders"]).split(","))
        except ValueError as exc:
            raise InvalidInput("orders must be 'n,m'") from exc
        approx = pade.pade_approximant(seq, n, m)
        return Report(["label", "numerator", "denominator", "value"], [[
            approx.label,
            " ".join(format_scalar(c) for c in approx.num),
            " ".join(format_scalar(c) for c in approx.den),
            _fmt(approx(z), d),
        ]])
    raise InvalidInput("pade needs --orders n,m, --staircase depth or --contfrac")


def _cmd_heat(config: RunConfig) -> Report:
    p, d = config.params, config.digits
    try:
        problem = fourier.HeatProblem(
            p.get("f", "zero"), p.get("g", "zero"), p.get("h", "zero"),
            _int(p.get("modes", 100), "modes", 1),
            _scalar_list(p.get("times", "1"), "times"),
        )
    except (KeyError, ValueError) as exc:
        raise InvalidInput(str(exc)) from exc
    solution = fourier.heat_solve(problem, bool(p.get("accelerate", False)), digits=min(d, 20))
    M = _int(p.get("eval_grid", 9), "eval_grid", 1)
    xs = np.array([math.pi * (j + 1) / (M + 1) for j in range(M)])
    rows = []
    for k, t in enumerate(solution.times):
        u = solution.evaluate(xs, k)
        err = solution.truncation_estimate(xs, k)
        for x, val, e in zip(xs, u, err):
            rows.append([format_scalar(t), _fmt(float(x), 12), _fmt(float(val), 12), f"{float(e):.3e}"])
    return Report(["t", "x", "u", "truncation"], rows)


def _cmd_anharmonic(config: RunConfig) -> Report:
    p, d = config.params, config.digits
    if p.get("table"):
        depth = _int(p.get("depth", 4), "depth", 1)
        entries = physics.anharmonic_pade_table(depth)
        # paired layout: (P^{n}_{n+1}, P^{n+1}_{n+1}) per row
        rows = []
        for i in range(1, len(entries) - 1, 2):
            left, right = entries[i], entries[i + 1]
            rows.append([left.label, _fmt(to_real(left.value, d), 5), right.label, _fmt(to_real(right.value, d), 5)])
        return Report(["lower", "value", "upper", "value"], rows)
    if p.get("asymptotic") is not None:
        n = _int(p["asymptotic"], "asymptotic", 1)
        coeff = physics.anharmonic_coefficients(n).coeffs[n]
        formula = physics.anharmonic_asymptotic(n, d)
        ratio = physics.asymptotic_ratio(n, d)
        return Report(["n", "coefficient", "formula", "ratio"],
                      [[str(n), _fmt(coeff, d), _fmt(formula, min(d, 20)), _fmt(ratio, min(d, 20))]])
    K = _int(p.get("coefficients", 5), "coefficients", 0)
    series = physics.anharmonic_coefficients(K)
    return Report(["order", "coefficient"], [[str(k), _fmt(c, d)] for k, c in enumerate(series.coeffs)])


def _cmd_casimir(config: RunConfig) -> Report:
    L = _scalar(config.params.get("L", "1"), "L")
    energy, force = physics.casimir_force(L, config.digits)
    d = min(config.digits, 30)
    return Report(["L", "energy_per_area", "force_per_area"], [[format_scalar(L), _fmt(energy, d), _fmt(force, d)]])


def _cmd_quintic(config: RunConfig) -> Report:
    p = config.params
    d = min(config.digits, 30)
    variant = p.get("variant", "regular")
    if variant not in ("regular", "singular"):
        raise InvalidInput("variant must be regular or singular")
    K = _int(p.get("K", 60), "K", 1)
    eps = _scalar(p.get("eps", "1"), "eps")
    report = physics.quintic_root_study(variant, K, eps, digits=d)
    rows = [
        ["radius", _fmt(report.radius, d)],
        ["partial_sum", _fmt(report.partial_sum, d) if abs(report.partial_sum) < 1e6 else mpmath.nstr(report.partial_sum, 6)],
        ["bisection_root", _fmt(report.reference_root, d)],
    ]
    if report.pade:
        rows.append([f"pade_{report.pade[-1][0]}", _fmt(to_real(report.pade_value, d), d)])
        rows.append(["runaway_exponent", f"{report.runaway_exponent:.6f}"])
    return Report(["quantity", "value"], rows)


def _cmd_two_level(config: RunConfig) -> Report:
    p, d = config.params, min(config.digits, 30)
    a, b, c = (_scalar(p.get(k, dflt), k) for k, dflt in (("a", "1"), ("b", "0"), ("c", "1")))
    raw = str(p.get("eps", "1"))
    try:
        eps = parse_scalar(raw)
    except ValueError:
        try:
            eps = mpmath.mpc(complex(raw.replace("i", "j")))
        except ValueError as exc:
            raise InvalidInput(f"eps: not a number: {raw!r}") from exc
    plus, minus, branch = physics.two_level_spectrum(physics.TwoLevelSystem(a, b, c), eps, config.digits)
    rows = [["E_plus", _fmt(plus, d)], ["E_minus", _fmt(minus, d)]]
    rows += [[f"branch_point_{i}", _fmt(bp, d)] for i, bp in enumerate(branch, start=1)]
    return Report(["quantity", "value"], rows)


def _cmd_catalog(config: RunConfig) -> Report:
    return Report(["name", "description"], [[n, catalog.describe(n)] for n in catalog.names()])


HANDLERS = {
    "accel": _cmd_accel,
    "resum": _cmd_resum,
    "pade": _cmd_pade,
    "heat": _cmd_heat,
    "anharmonic": _cmd_anharmonic,
    "casimir": _cmd_casimir,
    "quintic": _cmd_quintic,
    "two-level": _cmd_two_level,
    "catalog": _cmd_catalog,
}


def run(config: RunConfig) -> tuple:
    """Execute ``config``; returns (exit code, text)."""
    try:
        config.validate()
        with mpmath.workdps(config.digits):
            report = HANDLERS[config.command](config)
        return EXIT_OK, render(report, config.format)
    except InvalidInput as exc:
        return EXIT_INVALID, f"error: {exc}\n"
    except (ConvergenceFailure, InconsistentSummation) as exc:
        return EXIT_NUMERIC, f"error: {type(exc).__name__}: {exc}\n"
    except ResummationError as exc:
        return EXIT_INVALID, f"error: {type(exc).__name__}: {exc}\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _default_digits() -> int:
    env = os.environ.get("RESUM_DIGITS")
    if env is None:
        return DEFAULT_DIGITS
    try:
        return int(env)
    except ValueError:
        return -1  # rejected by validation


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--digits", type=int, default=None, help="precision budget (>= 10; env RESUM_DIGITS)")
    common.add_argument("--input", help="series JSON file or catalog name")

    parser = argparse.ArgumentParser(prog="resummation", description="Summation of convergent and divergent series.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("accel", parents=[common], help="Shanks / Richardson acceleration of partial sums")
    sp.add_argument("--method", choices=("shanks", "richardson"), default="shanks")
    sp.add_argument("--terms", type=int, default=8, help="number of partial sums")
    sp.add_argument("--iterations", type=int, default=1)
    sp.add_argument("--order", type=int, default=1)
    sp.add_argument("--start", type=int, help="N of the first partial sum used by Richardson")
    sp.add_argument("--point", default="1")

    sp = sub.add_parser("resum", parents=[common], help="values of divergent series")
    sp.add_argument("--pattern", help="periodic pattern, e.g. 1,-1,0 or a JSON array of 'p/q' strings")
    sp.add_argument("--prefix", help="explicit terms preceding the pattern")
    sp.add_argument("--method", choices=("euler", "borel", "closed", "logistic"), default="euler")
    sp.add_argument("--power", type=int, help="sum 1 - 2^p + 3^p - ...")
    sp.add_argument("--geometric", help="first,ratio")
    sp.add_argument("--zeta", type=int, help="zeta(-k)")
    sp.add_argument("--point", default="1")
    sp.add_argument("--rearrange", help="target of the greedy rearrangement of 1 - 1/2 + 1/3 - ...")
    sp.add_argument("--count", type=int, default=10, help="number of runs for --rearrange")

    sp = sub.add_parser("pade", parents=[common], help="Pade approximants and continued fractions")
    sp.add_argument("--orders", help="n,m")
    sp.add_argument("--staircase", type=int, help="depth of the staircase sequence")
    sp.add_argument("--at", default="1", help="evaluation point")
    sp.add_argument("--contfrac", action="store_true", help="print continued-fraction coefficients b_n")
    sp.add_argument("--count", type=int, default=6, help="moments used by --contfrac")

    sp = sub.add_parser("heat", parents=[common], help="heat equation on [0, pi] with Dirichlet data")
    sp.add_argument("--f", default="zero", help="initial profile: " + ", ".join(fourier.PROFILES) + " or CSV path")
    sp.add_argument("--g", default="zero", help="left boundary: " + ", ".join(fourier.TIME_FUNCTIONS) + " or CSV path")
    sp.add_argument("--h", default="zero", help="right boundary (same choices as --g)")
    sp.add_argument("--modes", type=int, default=100)
    sp.add_argument("--accelerate", action="store_true")
    sp.add_argument("--times", default="1", help="comma-separated times")
    sp.add_argument("--eval-grid", dest="eval_grid", type=int, default=9, help="interior evaluation points")

    sp = sub.add_parser("anharmonic", parents=[common], help="quartic oscillator perturbation series")
    sp.add_argument("--table", action="store_true", help="staircase Pade table at eps = 1")
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--coefficients", type=int, help="print E_0..E_K")
    sp.add_argument("--asymptotic", type=int, help="compare E_n with its large-order formula")

    sp = sub.add_parser("casimir", parents=[common], help="Casimir energy and force per area")
    sp.add_argument("--L", default="1")

    sp = sub.add_parser("quintic", parents=[common], help="perturbative root of x^5 + x - 1")
    sp.add_argument("--variant", choices=("regular", "singular"), default="regular")
    sp.add_argument("--K", type=int, default=60)
    sp.add_argument("--eps", default="1")

    sp = sub.add_parser("two-level", parents=[common], help="two-level spectrum and branch points")
    for name, dflt in (("a", "1"), ("b", "0"), ("c", "1"), ("eps", "1")):
        sp.add_argument(f"--{name}", default=dflt)

    sub.add_parser("catalog", parents=[common], help="list built-in series")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "format", "digits", "input"}
    params = {k: v for k, v in vars(args).items() if k not in skip and v is not None and v is not False}
    digits = args.digits if args.digits is not None else _default_digits()
    return RunConfig(args.command, args.input, params, args.format, digits)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    code, text = run(config_from_args(args))
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
