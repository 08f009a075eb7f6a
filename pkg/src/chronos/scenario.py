"""Scenario file format: strict JSON parsing and canonical serialization.

A scenario document has exactly the top-level keys constants, preset,
model, initial, steps, and optionally tolerances.  Unknown keys anywhere
are rejected by name, every number must be finite, and parse/serialize
round-trips reproduce the same Scenario value.
"""
from __future__ import annotations

import json
import math

from .axes import (
    POSITION,
    TIME,
    AxisGrid,
    PhysicalConstants,
    energy_aligned_grids,
    time_aligned_grids,
)
from .dynamics import InitialState, Scenario, Step
from .exceptions import ScenarioSyntaxError, ScenarioValidationError
from .models import DEFAULT_RETAINED_LEVELS, KINDS

PRESETS = ("energy-aligned", "time-aligned")

TOP_KEYS = ("constants", "preset", "model", "initial", "steps", "tolerances")
CONSTANT_KEYS = ("hbar", "mass", "c", "omega")
GRID_KEYS = ("n", "origin", "spacing")

DEFAULT_CONSTRAINT_TOL = 1e-6
DEFAULT_EIGEN_TOL = 1e-9


def _fail(message, field):
    raise ScenarioValidationError(message, field=field)


def _object(value, field):
    if not isinstance(value, dict):
        _fail("expected an object", field)
    return value


def _reject_unknown(obj, allowed, field):
    for key in obj:
        if key not in allowed:
            _fail("unknown key %r" % (key,), field)


def _number(value, field, *, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail("expected a number", field)
    value = float(value)
    if not math.isfinite(value):
        _fail("number must be finite", field)
    if positive and value <= 0.0:
        _fail("number must be positive", field)
    return value


def _integer(value, field, *, low=None, high=None):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail("expected an integer", field)
    if low is not None and value < low:
        _fail("must be >= %d" % low, field)
    if high is not None and value >= high:
        _fail("must be < %d" % high, field)
    return value


def _parse_constants(value):
    obj = _object(value, "constants")
    _reject_unknown(obj, CONSTANT_KEYS, "constants")
    fields = {}
    for key in CONSTANT_KEYS:
        if key not in obj:
            _fail("missing key %r" % (key,), "constants")
        fields[key] = _number(obj[key], "constants.%s" % key, positive=True)
    return PhysicalConstants(**fields)


def _parse_grid(value, field, label):
    obj = _object(value, field)
    _reject_unknown(obj, GRID_KEYS, field)
    for key in GRID_KEYS:
        if key not in obj:
            _fail("missing key %r" % (key,), field)
    n = _integer(obj["n"], field + ".n", low=2)
    if n % 2 != 0:
        _fail("grid size must be even", field + ".n")
    origin = _number(obj["origin"], field + ".origin")
    spacing = _number(obj["spacing"], field + ".spacing", positive=True)
    return AxisGrid(n=n, origin=origin, spacing=spacing, label=label)


def _parse_preset(value, constants):
    if isinstance(value, str):
        if value == "energy-aligned":
            qg, tg = energy_aligned_grids(constants)
        elif value == "time-aligned":
            qg, tg = time_aligned_grids(constants)
        else:
            _fail("unknown preset %r (expected one of %s or explicit grids)"
                  % (value, ", ".join(PRESETS)), "preset")
        return qg, tg, value
    obj = _object(value, "preset")
    _reject_unknown(obj, ("q", "t"), "preset")
    for key in ("q", "t"):
        if key not in obj:
            _fail("missing key %r" % (key,), "preset")
    qg = _parse_grid(obj["q"], "preset.q", POSITION)
    tg = _parse_grid(obj["t"], "preset.t", TIME)
    return qg, tg, None


def _parse_initial(value, n_q, n_t):
    obj = _object(value, "initial")
    _reject_unknown(obj, ("level", "energy", "amplitudes"), "initial")
    if len(obj) != 1:
        _fail("exactly one of level, energy, amplitudes is required",
              "initial")
    if "level" in obj:
        level = _integer(obj["level"], "initial.level", low=0,
                         high=DEFAULT_RETAINED_LEVELS)
        return InitialState("level", level=level)
    if "energy" in obj:
        return InitialState("energy",
                            energy=_number(obj["energy"], "initial.energy"))
    raw = obj["amplitudes"]
    if not isinstance(raw, list):
        _fail("expected a list of [re, im] pairs", "initial.amplitudes")
    if len(raw) != n_q * n_t:
        _fail("expected %d amplitude pairs, got %d"
              % (n_q * n_t, len(raw)), "initial.amplitudes")
    amplitudes = []
    for i, pair in enumerate(raw):
        where = "initial.amplitudes[%d]" % i
        if not isinstance(pair, list) or len(pair) != 2:
            _fail("expected a [re, im] pair", where)
        amplitudes.append(complex(_number(pair[0], where),
                                  _number(pair[1], where)))
    return InitialState("amplitudes", amplitudes=tuple(amplitudes))


def _parse_steps(value):
    if not isinstance(value, list):
        _fail("expected a list", "steps")
    steps = []
    for i, raw in enumerate(value):
        where = "steps[%d]" % i
        obj = _object(raw, where)
        _reject_unknown(obj, ("evolve", "jump"), where)
        if len(obj) != 1:
            _fail("exactly one of evolve, jump is required", where)
        if "evolve" in obj:
            steps.append(Step("evolve",
                              dt=_number(obj["evolve"], where + ".evolve")))
            continue
        jump = _object(obj["jump"], where + ".jump")
        _reject_unknown(jump, ("from", "to", "at"), where + ".jump")
        for key in ("from", "to", "at"):
            if key not in jump:
                _fail("missing key %r" % (key,), where + ".jump")
        from_level = _integer(jump["from"], where + ".jump.from", low=0,
                              high=DEFAULT_RETAINED_LEVELS)
        to_level = _integer(jump["to"], where + ".jump.to", low=0,
                            high=DEFAULT_RETAINED_LEVELS)
        if from_level == to_level:
            _fail("jump levels must differ", where + ".jump")
        steps.append(Step("jump", from_level=from_level, to_level=to_level,
                          at_time=_number(jump["at"], where + ".jump.at")))
    return tuple(steps)


def _parse_tolerances(value):
    if value is None:
        return DEFAULT_CONSTRAINT_TOL, DEFAULT_EIGEN_TOL
    obj = _object(value, "tolerances")
    _reject_unknown(obj, ("constraint_tol", "eigen_tol"), "tolerances")
    constraint_tol = DEFAULT_CONSTRAINT_TOL
    eigen_tol = DEFAULT_EIGEN_TOL
    if "constraint_tol" in obj:
        constraint_tol = _number(obj["constraint_tol"],
                                 "tolerances.constraint_tol", positive=True)
    if "eigen_tol" in obj:
        eigen_tol = _number(obj["eigen_tol"], "tolerances.eigen_tol",
                            positive=True)
    return constraint_tol, eigen_tol


def parse_scenario(text):
    """Parse and fully validate a scenario document.

    Raises ScenarioSyntaxError (with line and column) for malformed JSON
    and ScenarioValidationError (with the offending key path) for schema
    violations.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioSyntaxError("not valid UTF-8: %s" % exc) from exc

    def reject_constant(name):
        _fail("non-finite number %s" % name, "<document>")

    try:
        doc = json.loads(text, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, line=exc.lineno,
                                  column=exc.colno) from exc
    doc = _object(doc, "<document>")
    _reject_unknown(doc, TOP_KEYS, "<document>")
    for key in ("constants", "preset", "model", "initial", "steps"):
        if key not in doc:
            _fail("missing key %r" % (key,), "<document>")
    try:
        constants = _parse_constants(doc["constants"])
    except ValueError as exc:
        raise ScenarioValidationError(str(exc), field="constants") from None
    try:
        q_grid, t_grid, preset = _parse_preset(doc["preset"], constants)
    except ValueError as exc:
        raise ScenarioValidationError(str(exc), field="preset") from None
    model_kind = doc["model"]
    if model_kind not in KINDS:
        _fail("unknown model %r (expected one of %s)"
              % (model_kind, ", ".join(KINDS)), "model")
    initial = _parse_initial(doc["initial"], q_grid.n, t_grid.n)
    steps = _parse_steps(doc["steps"])
    constraint_tol, eigen_tol = _parse_tolerances(doc.get("tolerances"))
    return Scenario(constants=constants, q_grid=q_grid, t_grid=t_grid,
                    model_kind=model_kind, initial=initial, steps=steps,
                    constraint_tol=constraint_tol, eigen_tol=eigen_tol,
                    preset=preset)


def _grid_document(grid):
    return {"n": grid.n, "origin": grid.origin, "spacing": grid.spacing}


def serialize_scenario(sc):
    """Canonical JSON for a Scenario; parse(serialize(sc)) equals sc."""
    if sc.preset is not None:
        preset = sc.preset
    else:
        preset = {"q": _grid_document(sc.q_grid),
                  "t": _grid_document(sc.t_grid)}
    if sc.initial.kind == "level":
        initial = {"level": sc.initial.level}
    elif sc.initial.kind == "energy":
        initial = {"energy": sc.initial.energy}
    else:
        initial = {"amplitudes": [[a.real, a.imag]
                                  for a in sc.initial.amplitudes]}
    steps = []
    for step in sc.steps:
        if step.kind == "evolve":
            steps.append({"evolve": step.dt})
        else:
            steps.append({"jump": {"from": step.from_level,
                                   "to": step.to_level,
                                   "at": step.at_time}})
    doc = {
        "constants": {"hbar": sc.constants.hbar, "mass": sc.constants.mass,
                      "c": sc.constants.c, "omega": sc.constants.omega},
        "preset": preset,
        "model": sc.model_kind,
        "initial": initial,
        "steps": steps,
        "tolerances": {"constraint_tol": sc.constraint_tol,
                       "eigen_tol": sc.eigen_tol},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
