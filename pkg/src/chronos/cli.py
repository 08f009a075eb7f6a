"""Command-line front end.

Four subcommands: `spectrum` prints computed versus predicted clock
levels, `check` runs a named invariant suite, `run` executes a scenario
file, and `subspace` lists the physical-subspace basis.  All output is
CSV with LF line endings and 17-significant-digit floats; tables go to
stdout unless --out names a file.

Exit codes: 0 all pass, 1 check or run failure, 2 usage or validation
error, 3 numerical non-convergence.  CHRONOS_NO_COLOR disables ANSI
coloring of diagnostics.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

from .axes import PhysicalConstants, energy_aligned_grids
from .checks import run_suite
from .constraints import first_constraint_operator, physical_subspace
from .dynamics import InitialState, Scenario, run_scenario
from .exceptions import (
    ChronosError,
    ConvergenceError,
    ScenarioStepError,
    ScenarioSyntaxError,
    ScenarioValidationError,
    UnknownSuiteError,
)
from .linalg import eig_hermitian
from .models import (
    OSCILLATOR,
    ModelSpec,
    clock_operator,
    free_particle_time_level,
    hamiltonian,
    predicted_time_level,
)
from .scenario import parse_scenario


def _format_value(value):
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return "%.17g" % value
    return str(value)


class ResultTable:
    """Rectangular named-column table rendered as CSV."""

    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width %d, table width %d"
                             % (len(values), len(self.columns)))
        self.rows.append(tuple(values))

    def render(self):
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_format_value(v) for v in row))
        return "\n".join(lines) + "\n"


def _diag(message):
    text = "error: %s" % message
    stream = sys.stderr
    if stream.isatty() and not os.environ.get("CHRONOS_NO_COLOR"):
        text = "\x1b[31m%s\x1b[0m" % text
    print(text, file=stream)


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _load_scenario(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario(handle.read())


def _default_scenario():
    constants = PhysicalConstants()
    qg, tg = energy_aligned_grids(constants)
    return Scenario(constants=constants, q_grid=qg, t_grid=tg,
                    model_kind=OSCILLATOR,
                    initial=InitialState("level", level=0), steps=(),
                    preset="energy-aligned")


def _scenario_from_args(args):
    if args.config is not None:
        return _load_scenario(args.config)
    return _default_scenario()


def cmd_spectrum(args):
    sc = _scenario_from_args(args)
    if args.levels < 0:
        raise ScenarioValidationError("levels must be nonnegative",
                                      field="--levels")
    model = ModelSpec(sc.model_kind, sc.constants, sc.q_grid)
    table = ResultTable(["n", "E_n", "t_n", "t_n_predicted", "abs_error"])
    if args.levels > 0:
        if args.levels > sc.q_grid.n:
            raise ScenarioValidationError(
                "levels %d exceed the grid dimension %d"
                % (args.levels, sc.q_grid.n), field="--levels")
        energies = eig_hermitian(hamiltonian(model)).values
        clock_values = eig_hermitian(clock_operator(model)).values
        for n in range(args.levels):
            energy = float(energies[n])
            clock = float(clock_values[n])
            if sc.model_kind == OSCILLATOR:
                predicted = predicted_time_level(n, sc.constants)
            else:
                predicted = free_particle_time_level(max(energy, 0.0),
                                                     sc.constants)
            table.add(n, energy, clock, predicted, abs(clock - predicted))
    _emit(table.render(), args.out)
    return 0


def cmd_check(args):
    sc = _load_scenario(args.config) if args.config is not None else None
    constants = sc.constants if sc is not None else None
    tol = sc.constraint_tol if sc is not None else None
    rows, all_passed = run_suite(args.suite, constants=constants,
                                 constraint_tol=tol)
    table = ResultTable(["name", "measured", "bound", "status"])
    for row in rows:
        table.add(row.name, row.measured, row.bound,
                  "pass" if row.passed else "fail")
    _emit(table.render(), args.out)
    return 0 if all_passed else 1


def _trajectory_csv(records, aborted_reason=None):
    width = len(records[0].probabilities) if records else 0
    columns = ["step_index", "kind", "q_mean", "p_mean", "energy_mean",
               "residual1", "subspace_weight"]
    columns += ["p%d" % i for i in range(width)]
    table = ResultTable(columns)
    for rec in records:
        table.add(rec.step_index, rec.kind, rec.q_mean, rec.p_mean,
                  rec.energy_mean, rec.residual1, rec.subspace_weight,
                  *rec.probabilities)
    text = table.render()
    if aborted_reason is not None:
        text += "# aborted: %s\n" % aborted_reason
    return text


def cmd_run(args):
    sc = _load_scenario(args.config)
    try:
        records = run_scenario(sc)
    except ScenarioStepError as exc:
        _emit(_trajectory_csv(exc.records, aborted_reason=str(exc)),
              args.out)
        _diag(str(exc))
        cause = exc.__cause__
        return 3 if isinstance(cause, ConvergenceError) else 1
    _emit(_trajectory_csv(records), args.out)
    return 0


def cmd_subspace(args):
    sc = _scenario_from_args(args)
    tol = args.tol if args.tol is not None else sc.constraint_tol
    if tol <= 0.0:
        raise ScenarioValidationError("tolerance must be positive",
                                      field="--tol")
    model = ModelSpec(sc.model_kind, sc.constants, sc.q_grid)
    cop = first_constraint_operator(hamiltonian(model), sc.t_grid,
                                    sc.constants)
    basis = physical_subspace(cop, tol)
    table = ResultTable(["index", "label", "residual"])
    for i in range(basis.count):
        label = basis.labels[i]
        table.add(i, "" if label is None else label, basis.residuals[i])
    _emit(table.render(), args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chronos",
        description="Spectral laboratory for conjugate time/energy "
                    "operator pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser(
        "spectrum", help="computed vs predicted clock levels")
    spectrum.add_argument("--config", help="scenario file supplying "
                          "constants, model, and grids")
    spectrum.add_argument("--levels", type=int, default=8,
                          help="number of levels to print (default 8)")
    spectrum.add_argument("--out", help="write CSV here instead of stdout")
    spectrum.set_defaults(func=cmd_spectrum)

    check = sub.add_parser("check", help="run one invariant suite")
    check.add_argument("--suite", required=True,
                       help="commutators, constraint1, constraint2, "
                            "generalized, uncertainty, or ladder")
    check.add_argument("--config", help="scenario file supplying constants "
                       "and tolerances")
    check.add_argument("--out", help="write CSV here instead of stdout")
    check.set_defaults(func=cmd_check)

    run = sub.add_parser("run", help="execute a scenario file")
    run.add_argument("--config", required=True, help="scenario file")
    run.add_argument("--out", help="write CSV here instead of stdout")
    run.set_defaults(func=cmd_run)

    subspace = sub.add_parser(
        "subspace", help="physical-subspace basis of the first constraint")
    subspace.add_argument("--config", help="scenario file")
    subspace.add_argument("--tol", type=float,
                          help="near-null threshold override")
    subspace.add_argument("--out", help="write CSV here instead of stdout")
    subspace.set_defaults(func=cmd_subspace)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except (ScenarioSyntaxError, ScenarioValidationError,
            UnknownSuiteError) as exc:
        _diag(str(exc))
        return 2
    except ConvergenceError as exc:
        _diag(str(exc))
        return 3
    except (ChronosError, OSError) as exc:
        _diag(str(exc))
        return 1
