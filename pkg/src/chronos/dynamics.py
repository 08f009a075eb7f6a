"""Unitary dynamics and the scenario engine.

Covers the four unitaries of the formalism (time translation, energy
shift, ladder-with-translation steps, eigenvector swap) plus a small
declarative driver that chains evolve/jump steps and records observables
after each one.  All composite applications are Kronecker-factored.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .axes import (
    AxisGrid,
    CompositeState,
    PhysicalConstants,
    band_edge,
    momentum_operator,
    nearest_lattice_energy,
    position_operator,
    energy_operator,
)
from .constraints import (
    DEFAULT_TOL,
    first_constraint_operator,
    physical_subspace,
    separable_first,
)
from .exceptions import (
    ChronosError,
    IndexOutOfRangeError,
    OffLatticeError,
    ScenarioStepError,
    ScenarioValidationError,
    TruncationTopError,
    WrongKindError,
)
from .linalg import operator, unitary_exp
from .models import (
    OSCILLATOR,
    ModelSpec,
    clock_operator,
    energy_eigensystem,
    hamiltonian,
    ladder_operators,
    oscillator_time_quantum,
)

EIGEN_TOL = 1e-9
EQUIVALENCE_TOL = 1e-6


def time_translation(tg, constants, dt):
    """Unitary shifting sampled functions f(t) -> f(t + dt).

    Built as the exponential of the conjugate (energy) operator with
    parameter dt/hbar; integer-step shifts act as exact cyclic
    permutations of band-limited samples.
    """
    s_op = energy_operator(tg, constants)
    return unitary_exp(s_op, float(dt) / constants.hbar)


def energy_shift(tg, d_energy, constants):
    """Diagonal unitary of phases e^{-i dE t_j / hbar}.

    Maps the sampled energy eigenvector at E to the one at E + dE exactly,
    lattice or not, since the phases multiply pointwise.
    """
    phases = np.exp(-1j * float(d_energy) * tg.samples / constants.hbar)
    return operator(np.diag(phases), unitary=True, diagonal=True)


def eigen_swap_unitary(i, j, es):
    """Two-level swap of eigenvectors i and j, identity elsewhere.

    Hermitian involution; the minimal unitary rotating level i into level
    j with all phase freedom fixed to +1.
    """
    i, j = int(i), int(j)
    if i == j:
        raise ValueError("swap levels must differ, got %d" % i)
    if not (0 <= i < es.count and 0 <= j < es.count):
        raise IndexOutOfRangeError(
            "levels (%d, %d) outside retained range 0..%d"
            % (i, j, es.count - 1))
    vi = es.vector(i)
    vj = es.vector(j)
    u = np.eye(es.dim, dtype=np.complex128)
    u -= np.outer(vi, vi.conj()) + np.outer(vj, vj.conj())
    u += np.outer(vj, vi.conj()) + np.outer(vi, vj.conj())
    return operator(u, hermitian=True, unitary=True)


def _detected_level(state, es):
    # dominant retained level of the system factor
    coeffs = es.vectors.conj().T @ state.matrix
    weights = np.sum(np.abs(coeffs) ** 2, axis=1)
    return int(np.argmax(weights))


def _ladder_context(state, model, grids):
    if model.kind != OSCILLATOR:
        raise WrongKindError("ladder steps are defined for the oscillator")
    qg, tg = grids
    if state.n_q != qg.n or state.n_t != tg.n:
        raise ValueError("state does not live on the given grids")
    es = energy_eigensystem(model)
    return tg, es, _detected_level(state, es)


def ladder_step_up(state, model, grids):
    """One rung up: raising operator joint with a backward time translation.

    Returns the unnormalized image and its norm; on the clock-aligned
    solution at level n the norm is sqrt(n+1) and the normalized image is
    the solution at level n+1.
    """
    tg, es, n = _ladder_context(state, model, grids)
    if n >= es.count - 1:
        raise TruncationTopError(
            "raising applied at the top retained level %d" % n)
    _, a_dag = ladder_operators(es)
    tau = oscillator_time_quantum(model.constants)
    t_u = time_translation(tg, model.constants, -tau)
    new = a_dag.matrix @ state.matrix @ t_u.matrix.T
    coefficient = float(np.linalg.norm(new))
    out = CompositeState(new.ravel(), state.n_q, state.n_t, normalized=False)
    return out, coefficient


def ladder_step_down(state, model, grids):
    """One rung down: lowering operator joint with a forward time translation.

    Norm of the image is sqrt(n); the ground level is annihilated to the
    exact zero vector with coefficient 0.
    """
    tg, es, n = _ladder_context(state, model, grids)
    if n == 0:
        zero = np.zeros(state.n_q * state.n_t, dtype=np.complex128)
        return CompositeState(zero, state.n_q, state.n_t,
                              normalized=False), 0.0
    a, _ = ladder_operators(es)
    tau = oscillator_time_quantum(model.constants)
    t_u = time_translation(tg, model.constants, tau)
    new = a.matrix @ state.matrix @ t_u.matrix.T
    coefficient = float(np.linalg.norm(new))
    out = CompositeState(new.ravel(), state.n_q, state.n_t, normalized=False)
    return out, coefficient


def energy_jump(state, i, j, model, grids, tol=DEFAULT_TOL):
    """Swap the system between levels i and j with the matching phase kick.

    Applies (two-level swap) (x) (energy shift by E_j - E_i).  Both level
    energies must sit on the time grid's frequency lattice within tol, or
    the jump is refused; the result keeps the first-constraint residual of
    a solution and the norm is preserved.
    """
    qg, tg = grids
    es = energy_eigensystem(model)
    swap = eigen_swap_unitary(i, j, es)
    e_from = float(es.values[i])
    e_to = float(es.values[j])
    edge = band_edge(tg, model.constants)
    for name, value in (("from", e_from), ("to", e_to)):
        if abs(value) > edge:
            raise OffLatticeError(
                "%s-level energy %.6g beyond the band edge %.6g"
                % (name, value, edge))
        _, miss = nearest_lattice_energy(tg, value, model.constants)
        if miss > tol:
            raise OffLatticeError(
                "%s-level energy %.6g misses the frequency lattice by %.3g"
                % (name, value, miss))
    shift = energy_shift(tg, e_to - e_from, model.constants)
    new = swap.matrix @ state.matrix @ shift.matrix.T
    return CompositeState(new.ravel(), state.n_q, state.n_t)


@dataclass(frozen=True)
class Step:
    """One scenario step: either an evolution or an energy jump."""

    kind: str
    dt: float | None = None
    from_level: int | None = None
    to_level: int | None = None
    at_time: float | None = None

    def __post_init__(self):
        if self.kind == "evolve":
            if self.dt is None or not np.isfinite(self.dt):
                raise ValueError("evolve step needs a finite duration")
        elif self.kind == "jump":
            for name in ("from_level", "to_level", "at_time"):
                if getattr(self, name) is None:
                    raise ValueError("jump step needs %s" % name)
            if self.from_level == self.to_level:
                raise ValueError("jump levels must differ")
        else:
            raise ValueError("unknown step kind %r" % (self.kind,))


@dataclass(frozen=True)
class InitialState:
    """Starting state: an eigenlevel, a target energy, or raw amplitudes."""

    kind: str
    level: int | None = None
    energy: float | None = None
    amplitudes: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("level", "energy", "amplitudes"):
            raise ValueError("unknown initial kind %r" % (self.kind,))


@dataclass(frozen=True)
class Scenario:
    constants: PhysicalConstants
    q_grid: AxisGrid
    t_grid: AxisGrid
    model_kind: str
    initial: InitialState
    steps: tuple
    constraint_tol: float = DEFAULT_TOL
    eigen_tol: float = EIGEN_TOL
    preset: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class TrajectoryRecord:
    """Observables captured after one step (index 0 is the initial state)."""

    step_index: int
    kind: str
    q_mean: float
    p_mean: float
    energy_mean: float
    residual1: float
    subspace_weight: float
    probabilities: tuple


def validate_scenario(sc):
    """Numeric validation pass run before any step is applied.

    Checks that referenced levels are retained and that every jump's
    at-time lies within the constraint tolerance of a clock eigenvalue.
    """
    model = ModelSpec(sc.model_kind, sc.constants, sc.q_grid)
    es = energy_eigensystem(model)
    clock_values = np.sort(
        np.linalg.eigvalsh(clock_operator(model).matrix))[:es.count]
    if sc.initial.kind == "level":
        if not 0 <= sc.initial.level < es.count:
            raise ScenarioValidationError(
                "level %d outside retained range 0..%d"
                % (sc.initial.level, es.count - 1), field="initial.level")
    elif sc.initial.kind == "energy":
        gap = float(np.min(np.abs(es.values - sc.initial.energy)))
        if gap > sc.constraint_tol:
            raise ScenarioValidationError(
                "no retained eigenvalue within %g of energy %.6g"
                % (sc.constraint_tol, sc.initial.energy),
                field="initial.energy")
    for idx, step in enumerate(sc.steps):
        if step.kind != "jump":
            continue
        where = "steps[%d].jump" % idx
        for name, level in (("from", step.from_level),
                            ("to", step.to_level)):
            if not 0 <= level < es.count:
                raise ScenarioValidationError(
                    "%s-level %d outside retained range 0..%d"
                    % (name, level, es.count - 1), field=where)
        gap = float(np.min(np.abs(clock_values - step.at_time)))
        if gap > sc.constraint_tol:
            raise ScenarioValidationError(
                "at-time %.6g not within %g of any clock eigenvalue"
                % (step.at_time, sc.constraint_tol), field=where)
    return model, es


def _initial_state(sc, es, tg):
    if sc.initial.kind == "amplitudes":
        amp = np.asarray(sc.initial.amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amp)
        if norm == 0.0:
            raise ScenarioValidationError("amplitudes are all zero",
                                          field="initial.amplitudes")
        return CompositeState(amp / norm, sc.q_grid.n, tg.n)
    if sc.initial.kind == "level":
        n = sc.initial.level
    else:
        n = int(np.argmin(np.abs(es.values - sc.initial.energy)))
    return separable_first((float(es.values[n]), es.vector(n)), tg,
                           sc.constants)


def run_scenario(sc):
    """Apply the scenario's steps in order, recording after each one.

    Evolve steps act with the lifted time translation and are cross
    checked against the lifted Hamiltonian exponential whenever the state
    satisfies the first constraint; the two must agree within 1e-6.  Any
    failing step raises with the partial trajectory attached.
    """
    model, es = validate_scenario(sc)
    tg = sc.t_grid
    h_op = hamiltonian(model)
    cop = first_constraint_operator(h_op, tg, sc.constants)
    basis = physical_subspace(cop, sc.constraint_tol)
    q_op = position_operator(sc.q_grid)
    p_op = momentum_operator(sc.q_grid, sc.constants)

    records = []
    t_cache = {}
    h_cache = {}

    def observe(index, kind, state):
        coeffs = basis.coefficients(state) if basis.count else np.zeros(0)
        weight = float(np.sum(np.abs(coeffs) ** 2))
        if basis.count and weight >= 1e-14:
            probabilities = tuple(float(p)
                                  for p in np.abs(coeffs) ** 2 / weight)
        else:
            probabilities = (float("nan"),) * basis.count
        records.append(TrajectoryRecord(
            index, kind,
            state.expectation_left(q_op),
            state.expectation_left(p_op),
            state.expectation_left(h_op),
            cop.residual(state),
            weight,
            probabilities))

    def evolve(state, dt):
        if dt not in t_cache:
            t_cache[dt] = time_translation(tg, sc.constants, dt)
        new = state.matrix @ t_cache[dt].matrix.T
        if cop.residual(state) <= sc.constraint_tol:
            if dt not in h_cache:
                h_cache[dt] = unitary_exp(h_op, dt / sc.constants.hbar)
            alt = h_cache[dt].matrix @ state.matrix
            gap = float(np.linalg.norm(alt - new))
            if gap > EQUIVALENCE_TOL:
                raise ChronosError(
                    "evolution operators disagree by %.3e on a solution"
                    % gap)
        return CompositeState(new.ravel(), state.n_q, state.n_t)

    state = _initial_state(sc, es, tg)
    observe(0, "init", state)
    for index, step in enumerate(sc.steps, start=1):
        try:
            if step.kind == "evolve":
                state = evolve(state, float(step.dt))
            else:
                state = energy_jump(state, step.from_level, step.to_level,
                                    model, (sc.q_grid, tg),
                                    tol=sc.constraint_tol)
        except ChronosError as exc:
            raise ScenarioStepError(
                "step %d (%s) failed: %s" % (index, step.kind, exc),
                records) from exc
        observe(index, step.kind, state)
    return records
