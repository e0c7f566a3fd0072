"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 numerical failure or I/O error,
3 domain error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from functools import partial
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import legendre, oracle, phase
from ._parallel import default_workers, parallel_map
from .errors import DomainError, NumericalFailure
from .fock import AUTO, ModelParams
from .gibbs import entropy_identity_residual
from .varsolve import solve

SOLUTION_FIELDS = ("beta", "mu", "lambda", "r_star", "pressure", "density", "n2_mean",
                   "condensate_fraction", "degenerate_branch")
AXIS_NAMES = ("beta", "mu", "lambda")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class SweepSpec:
    axes: List[tuple]
    fixed: Dict[str, float]
    out: Optional[str] = None
    format: str = "csv"
    workers: int = 1
    cutoff: object = AUTO

    def __post_init__(self):
        names = [a[0] for a in self.axes]
        if not names:
            raise UsageError("sweep needs at least one --axis")
        for name, _, _, count in self.axes:
            if name not in AXIS_NAMES:
                raise UsageError(f"unknown axis {name!r}; choose from {AXIS_NAMES}")
            if count < 1:
                raise UsageError(f"axis {name} needs count >= 1")
        if len(set(names)) != len(names):
            raise UsageError("axes must be distinct")
        for name in AXIS_NAMES:
            given = name in self.fixed
            if given == (name in names):
                raise UsageError(f"{name} must be either fixed or an axis, exactly once")

    def points(self):
        values = [np.linspace(start, stop, count) for _, start, stop, count in self.axes]
        names = [a[0] for a in self.axes]
        for combo in itertools.product(*values):
            p = dict(self.fixed)
            p.update(zip(names, map(float, combo)))
            yield p["beta"], p["mu"], p["lambda"]


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if not math.isfinite(v):
        raise NumericalFailure(f"refusing to serialise non-finite value {v}")
    return format(v, ".17g")


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    v = float(value)
    if not math.isfinite(v):
        raise NumericalFailure(f"refusing to serialise non-finite value {v}")
    return float(format(v, ".17g"))


def render(header: Sequence[str], rows: Sequence[Sequence], fmt: str = "csv") -> str:
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        objs = [{k: _json_value(v) for k, v in zip(header, row)} for row in rows]
        return json.dumps(objs, indent=1) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def write_output(text: str, path: Optional[str]) -> None:
    """Write ``text`` to ``path`` atomically, or to stdout when ``path`` is None."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(records: Sequence[dict], path: Optional[str] = None, fmt: str = "csv") -> str:
    """Serialise solution records with the fixed column set; returns the text."""
    if not records:
        raise ValueError("no records to emit")
    text = render(SOLUTION_FIELDS, [[r[k] for k in SOLUTION_FIELDS] for r in records], fmt)
    write_output(text, path)
    return text


def _solve_record(point, cutoff=AUTO):
    beta, mu, lam = point
    return solve(ModelParams(beta, mu, lam, cutoff)).as_record()


def run_sweep(spec: SweepSpec) -> str:
    records = parallel_map(partial(_solve_record, cutoff=spec.cutoff), list(spec.points()), spec.workers)
    return emit(records, spec.out, spec.format)


def _cutoff(text: str):
    if text == AUTO:
        return AUTO
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cutoff must be an integer or 'auto', got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("cutoff must be >= 1")
    return n


def _axis(values):
    name, start, stop, count = values
    try:
        return name, float(start), float(stop), int(count)
    except ValueError:
        raise UsageError(f"bad --axis {' '.join(values)}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--cutoff", type=_cutoff, default=AUTO, help="occupation cutoff N or 'auto'")
    common.add_argument("--threads", type=int, default=default_workers(), help="worker processes")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = _Parser(prog="mfbh", description="Thermodynamics of the long-range-hopping Bose-Hubbard model")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model(sp, mu=True):
        sp.add_argument("--beta", type=float, required=True)
        if mu:
            sp.add_argument("--mu", type=float, required=True)
        sp.add_argument("--lambda", dest="lam", type=float, required=True)

    model(sub.add_parser("pressure", parents=[common], help="solve the variational problem"))

    sp = sub.add_parser("sweep", parents=[common], help="grid of solves")
    sp.add_argument("--beta", type=float)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--axis", action="append", nargs=4, default=[],
                    metavar=("NAME", "START", "STOP", "COUNT"))

    sp = sub.add_parser("rate", parents=[common], help="tabulate the rate function")
    model(sp)
    sp.add_argument("--x-max", type=float, default=2.0)
    sp.add_argument("--x-count", type=int, default=21)

    sp = sub.add_parser("phase-boundary", parents=[common], help="critical beta against density")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--rho", type=float, nargs="+", required=True)
    sp.add_argument("--beta-min", type=float, default=1.0)
    sp.add_argument("--beta-max", type=float, default=500.0)

    for name in ("isotherm", "condensate"):
        sp = sub.add_parser(name, parents=[common], help=f"{name} at fixed beta and lambda")
        model(sp, mu=False)
        sp.add_argument("--rho-min", type=float, required=True)
        sp.add_argument("--rho-max", type=float, required=True)
        sp.add_argument("--rho-count", type=int, default=30)

    sp = sub.add_parser("lambda-critical", parents=[common], help="critical coupling at integer density")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--beta", type=float, default=200.0)

    sp = sub.add_parser("oracle-compare", parents=[common], help="finite-V exact diagonalisation")
    model(sp)
    sp.add_argument("--site-cutoff", type=int, default=3)
    sp.add_argument("--V", type=int, nargs="+", default=[2, 3, 4, 5])

    sp = sub.add_parser("entropy-check", parents=[common], help="relative-entropy identity residual")
    model(sp)
    sp.add_argument("--nu", type=complex, required=True)

    sp = sub.add_parser("growth-exponent", parents=[common], help="fit p~(nu) ~ nu^alpha")
    model(sp)
    sp.add_argument("--nu-min", type=float, default=20.0)
    sp.add_argument("--nu-max", type=float, default=200.0)
    sp.add_argument("--n-points", type=int, default=8)
    return p


def _dispatch(a) -> None:
    def table(header, rows):
        write_output(render(header, rows, a.format), a.out)

    cmd = a.command
    if cmd == "pressure":
        emit([_solve_record((a.beta, a.mu, a.lam), a.cutoff)], a.out, a.format)
    elif cmd == "sweep":
        fixed = {k: v for k, v in (("beta", a.beta), ("mu", a.mu), ("lambda", a.lam)) if v is not None}
        run_sweep(SweepSpec([_axis(x) for x in a.axis], fixed, a.out, a.format, a.threads, a.cutoff))
    elif cmd == "rate":
        x = np.linspace(0.0, a.x_max, a.x_count)
        t = legendre.rate_function(ModelParams(a.beta, a.mu, a.lam, a.cutoff), x)
        table(("x", "I", "r_argmax"), list(zip(t.x_grid, t.I_values, t.r_argmax)))
    elif cmd == "phase-boundary":
        crit = parallel_map(partial(_critical, a.lam, (a.beta_min, a.beta_max), a.cutoff), a.rho, a.threads)
        table(("lambda", "rho", "beta_c"), [(a.lam, r, b) for r, b in zip(a.rho, crit)])
    elif cmd in ("isotherm", "condensate"):
        if a.rho_count < 1 or not 0 < a.rho_min <= a.rho_max:
            raise UsageError("need 0 < rho-min <= rho-max and rho-count >= 1")
        rho = np.linspace(a.rho_min, a.rho_max, a.rho_count)
        pts = phase.isotherm(a.lam, a.beta, rho, a.cutoff, a.threads)
        emit([pt.solution.as_record() for pt in pts], a.out, a.format)
    elif cmd == "lambda-critical":
        table(("k", "beta", "lambda_c"), [(a.k, a.beta, phase.lambda_critical(a.k, a.beta, a.cutoff))])
    elif cmd == "oracle-compare":
        rep = oracle.convergence_report(a.beta, a.mu, a.lam, a.site_cutoff, a.V)
        table(("V", "p_V", "deviation"), rep)
    elif cmd == "entropy-check":
        res = entropy_identity_residual(ModelParams(a.beta, a.mu, a.lam, a.cutoff), a.nu)
        table(("beta", "mu", "lambda", "abs_nu", "residual"), [(a.beta, a.mu, a.lam, abs(a.nu), res)])
    elif cmd == "growth-exponent":
        s = legendre.growth_exponent(ModelParams(a.beta, a.mu, a.lam, a.cutoff), a.nu_min, a.nu_max, a.n_points)
        table(("lambda", "mu", "beta", "exponent"), [(a.lam, a.mu, a.beta, s)])


def _critical(lam, bracket, cutoff, rho):
    return phase.critical_beta(lam, rho, bracket, cutoff)


def run(argv=None) -> int:
    """Parse ``argv`` and execute one subcommand; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
        _dispatch(args)
    except UsageError as exc:
        print(f"mfbh: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"mfbh: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalFailure as exc:
        print(f"mfbh: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"mfbh: I/O error on {getattr(exc, 'filename', None) or '?'}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"mfbh: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
