"""Named invariant suites behind the command-line `check` subcommand.

Each suite measures a handful of quantities against fixed bounds and
reports one row per check.  Bounds are directional: a row passes when
measured <= bound or measured >= bound depending on the check, which the
row records explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .axes import (
    TIME,
    AxisGrid,
    PhysicalConstants,
    default_position_grid,
    energy_aligned_grids,
    energy_eigenvector,
    energy_lattice,
    energy_operator,
    gaussian_state,
    lift_system,
    lift_time,
    momentum_operator,
    position_operator,
    time_aligned_grids,
    time_operator,
    tensor_state,
)
from .constraints import (
    first_constraint_operator,
    first_constraint_residual,
    generalized_constraint_operator,
    generalized_residual,
    physical_subspace,
    second_constraint_operator,
    second_constraint_residual,
    separable_first,
    separable_second,
    uncertainty_product,
)
from .dynamics import ladder_step_down, ladder_step_up
from .exceptions import TruncationTopError, UnknownSuiteError
from .linalg import hermitian_defect, maxnorm, operator
from .models import (
    FREE_PARTICLE,
    OSCILLATOR,
    ModelSpec,
    energy_eigensystem,
    free_particle_clock_operator,
    harmonic_hamiltonian,
    ladder_operators,
    oscillator_clock_operator,
)

DEFAULT_CONSTRAINT_TOL = 1e-6


@dataclass(frozen=True)
class CheckRow:
    name: str
    measured: float
    bound: float
    relation: str  # "<=" or ">="

    @property
    def passed(self):
        if self.relation == "<=":
            return self.measured <= self.bound
        return self.measured >= self.bound


def _le(name, measured, bound):
    return CheckRow(name, float(measured), float(bound), "<=")


def _ge(name, measured, bound):
    return CheckRow(name, float(measured), float(bound), ">=")


def _commutator_suite(k, tol):
    rows = []
    qg = default_position_grid(k)
    q_op = position_operator(qg)
    p_op = momentum_operator(qg, k)
    length = k.oscillator_length
    # dedicated time grid wide enough to host interior Gaussians
    period = 4.0 * np.pi / k.omega
    tg = AxisGrid(n=128, origin=0.0, spacing=period / 128, label=TIME)
    t_op = time_operator(tg)
    s_op = energy_operator(tg, k)
    for name, op in (("position", q_op), ("momentum", p_op),
                     ("time", t_op), ("energy", s_op)):
        defect = hermitian_defect(op.matrix) / max(maxnorm(op.matrix), 1e-300)
        rows.append(_le("hermitian_defect_%s" % name, defect, 1e-12))
    comm_qp = q_op.matrix @ p_op.matrix - p_op.matrix @ q_op.matrix \
        - 1j * k.hbar * np.eye(qg.n)
    for sigma in (0.65, 0.8, 0.9):
        psi = gaussian_state(qg, 0.0, sigma * length)
        rows.append(_le("position_pair_sigma_%.2f" % sigma,
                        np.linalg.norm(comm_qp @ psi), 1e-6 * k.hbar))
    comm_ts = t_op.matrix @ s_op.matrix - s_op.matrix @ t_op.matrix \
        + 1j * k.hbar * np.eye(tg.n)
    for sigma in (0.45, 0.55):
        phi = gaussian_state(tg, period / 2.0, sigma / k.omega)
        rows.append(_le("time_pair_sigma_%.2f" % sigma,
                        np.linalg.norm(comm_ts @ phi), 1e-6 * k.hbar))
    # cross-factor commutators on a small composite
    small_q = AxisGrid(n=16, origin=-4.0, spacing=0.5, label="position")
    small_t = AxisGrid(n=16, origin=0.0, spacing=0.25, label=TIME)
    a = lift_system(position_operator(small_q), small_t.n)
    b = lift_time(energy_operator(small_t, k), small_q.n)
    rows.append(_le("cross_commutator",
                    maxnorm(a.matrix @ b.matrix - b.matrix @ a.matrix),
                    1e-14))
    return rows


def _constraint1_suite(k, tol):
    rows = []
    qg, tg = energy_aligned_grids(k)
    model = ModelSpec(OSCILLATOR, k, qg)
    h_op = harmonic_hamiltonian(model)
    cop = first_constraint_operator(h_op, tg, k)
    basis = physical_subspace(cop, tol)
    # expected count from exact lattice matching of the grid eigenvalues
    es = cop.system_eigensystem
    lattice = energy_lattice(tg, k)
    expected = sum(1 for value in es.values
                   if np.min(np.abs(lattice - value)) <= tol)
    rows.append(_le("level_count_gap", abs(basis.count - expected), 0.0))
    matched = [(float(v), es.vector(i)) for i, v in enumerate(es.values)
               if np.min(np.abs(lattice - v)) <= tol]
    residuals = [first_constraint_residual(separable_first(pair, tg, k),
                                           h_op, tg, k) for pair in matched]
    rows.append(_le("separable_residual_max",
                    max(residuals) if residuals else 0.0, tol))
    rows.append(_le("member_residual_max",
                    max(basis.residuals) if basis.count else 0.0, 2.0 * tol))
    if basis.count:
        p = basis.projector().matrix
        gaps = []
        for pair in matched:
            state = separable_first(pair, tg, k).amplitudes
            gaps.append(np.linalg.norm(state - p @ state))
        rows.append(_le("span_gap_max", max(gaps), tol))
    # deliberately detuned time period: no eigenvalue meets the lattice
    qg_s = AxisGrid(n=32, origin=-8.0, spacing=0.5, label="position")
    period = 4.0 * np.pi * 1.1 / k.omega
    tg_d = AxisGrid(n=16, origin=0.0, spacing=period / 16, label=TIME)
    h_small = harmonic_hamiltonian(ModelSpec(OSCILLATOR, k, qg_s))
    detuned = physical_subspace(
        first_constraint_operator(h_small, tg_d, k), tol)
    rows.append(_le("detuned_count", detuned.count, 0.0))
    return rows


def _constraint2_suite(k, tol):
    rows = []
    qg, tg = time_aligned_grids(k, n_t=16)
    model = ModelSpec(OSCILLATOR, k, qg)
    g_op = oscillator_clock_operator(model)
    cop = second_constraint_operator(g_op, tg)
    basis = physical_subspace(cop, tol)
    es = cop.system_eigensystem
    samples = tg.samples
    expected = sum(1 for value in es.values
                   if np.min(np.abs(samples - value)) <= tol)
    rows.append(_le("level_count_gap", abs(basis.count - expected), 0.0))
    ground, rounding = separable_second(
        (float(es.values[0]), es.vector(0)), tg)
    rows.append(_le("ground_residual",
                    second_constraint_residual(ground, g_op, tg), 1e-8))
    rows.append(_le("ground_rounding", rounding, 1e-8))
    rows.append(_le("member_residual_max",
                    max(basis.residuals) if basis.count else 0.0, 2.0 * tol))
    # free-particle mode whose clock value falls between samples: the
    # residual must equal the rounding distance up to rounding noise
    free = ModelSpec(FREE_PARTICLE, k, qg)
    g_free = free_particle_clock_operator(free)
    mode = qg.fourier_map[:, qg.n // 2 + 1]
    t_value = float(np.real(np.vdot(mode, g_free.matrix @ mode)))
    state, distance = separable_second((t_value, mode), tg)
    residual = second_constraint_residual(state, g_free, tg)
    rows.append(_le("off_grid_residual_gap", abs(residual - distance), 1e-8))
    return rows


def _generalized_suite(k, tol):
    rows = []
    qg = AxisGrid(n=32, origin=-8.0, spacing=0.5, label="position")
    period = 4.0 * np.pi / k.omega
    tg = AxisGrid(n=16, origin=0.0, spacing=period / 16, label=TIME)
    model = ModelSpec(OSCILLATOR, k, qg)
    h_op = harmonic_hamiltonian(model)
    g_op = oscillator_clock_operator(model)
    h_lift = lift_system(h_op, tg.n)
    g_lift = lift_system(g_op, tg.n)
    rng = np.random.default_rng(11)
    gap_first = 0.0
    gap_second = 0.0
    for _ in range(20):
        raw = rng.standard_normal(qg.n * tg.n) \
            + 1j * rng.standard_normal(qg.n * tg.n)
        raw /= np.linalg.norm(raw)
        gap_first = max(gap_first, abs(
            generalized_residual(raw, 1.0, 0.0, h_lift, tg, k)
            - first_constraint_residual(raw, h_op, tg, k)))
        gap_second = max(gap_second, abs(
            generalized_residual(raw, 0.0, 1.0, g_lift, tg, k)
            - second_constraint_residual(raw, g_op, tg)))
    rows.append(_le("first_reduction_gap", gap_first, 1e-12))
    rows.append(_le("second_reduction_gap", gap_second, 1e-12))
    # kernel of the reduced form matches the dedicated solver's kernel
    basis_gen = physical_subspace(
        generalized_constraint_operator(1.0, 0.0, h_lift, tg, k), tol)
    basis_first = physical_subspace(
        first_constraint_operator(h_op, tg, k), tol)
    if basis_gen.count and basis_gen.count == basis_first.count:
        gap = maxnorm(basis_gen.projector().matrix
                      - basis_first.projector().matrix)
        rows.append(_le("reduction_projector_gap", gap, 1e-8))
    else:
        rows.append(_le("reduction_count_gap",
                        abs(basis_gen.count - basis_first.count), 0.0))
    tighter = physical_subspace(
        generalized_constraint_operator(1.0, 0.0, h_lift, tg, k), tol * 1e-3)
    if tighter.count and basis_gen.count:
        p = basis_gen.projector().matrix
        nesting = max(np.linalg.norm(m.amplitudes - p @ m.amplitudes)
                      for m in tighter.members)
        rows.append(_le("tolerance_nesting_gap", nesting, 1e-8))
    # triangle bound for the doubly-constrained form
    combined = lift_system(h_op, tg.n).matrix + lift_system(g_op, tg.n).matrix
    f_both = operator(combined, hermitian=True)
    es = energy_eigensystem(model)
    psi0 = separable_first((float(es.values[0]), es.vector(0)), tg, k)
    r_both = generalized_residual(psi0, 1.0, 1.0, f_both, tg, k)
    r1 = first_constraint_residual(psi0, h_op, tg, k)
    r2 = second_constraint_residual(psi0, g_op, tg)
    rows.append(_le("triangle_excess", r_both - (r1 + r2), 1e-12))
    # detuned composite keeps an empty kernel
    tg_d = AxisGrid(n=16, origin=0.0, spacing=period * 1.1 / 16, label=TIME)
    detuned = physical_subspace(
        generalized_constraint_operator(
            1.0, 0.0, lift_system(h_op, tg_d.n), tg_d, k), tol)
    rows.append(_le("detuned_count", detuned.count, 0.0))
    return rows


def _uncertainty_suite(k, tol):
    rows = []
    period = 32.0 / k.omega
    tg = AxisGrid(n=256, origin=0.0, spacing=period / 256, label=TIME)
    center = period / 2.0
    floor = 0.49 * k.hbar
    for scale in (0.5, 1.0, 2.0):
        sigma = scale / k.omega
        phi = gaussian_state(tg, center, sigma)
        dt, ds, product = uncertainty_product(phi, tg, k)
        rows.append(_ge("product_sigma_%.1f" % scale, product, floor))
        if scale == 1.0:
            rows.append(_le("minimum_product_offset",
                            abs(product - 0.5 * k.hbar), 0.005 * k.hbar))
        if scale == 2.0:
            rows.append(_le("spread_accuracy",
                            abs(dt - sigma) / sigma, 0.01))
    lattice = energy_lattice(tg, k)
    mode = energy_eigenvector(tg, float(lattice[len(lattice) // 2 + 3]), k)
    _, ds, _ = uncertainty_product(mode, tg, k)
    rows.append(_le("eigenvector_energy_spread", ds, 1e-8))
    return rows


def _ladder_suite(k, tol):
    rows = []
    qg, tg = time_aligned_grids(k)
    model = ModelSpec(OSCILLATOR, k, qg)
    es = energy_eigensystem(model)
    grids = (qg, tg)

    def solution(n):
        delta = np.zeros(tg.n, dtype=np.complex128)
        delta[n] = 1.0
        return tensor_state(es.vector(n), delta)

    up_gap = 0.0
    down_gap = 0.0
    overlap_min = 1.0
    for n in range(15):
        out, coeff = ladder_step_up(solution(n), model, grids)
        up_gap = max(up_gap, abs(coeff - np.sqrt(n + 1.0)) / np.sqrt(n + 1.0))
        overlap = abs(np.vdot(solution(n + 1).amplitudes,
                              out.amplitudes / coeff))
        overlap_min = min(overlap_min, overlap)
        if n >= 1:
            out, coeff = ladder_step_down(solution(n), model, grids)
            down_gap = max(down_gap, abs(coeff - np.sqrt(n)) / np.sqrt(n))
    rows.append(_le("up_coefficient_gap", up_gap, 1e-6))
    rows.append(_le("down_coefficient_gap", down_gap, 1e-6))
    rows.append(_ge("up_overlap_min", overlap_min, 1.0 - 1e-8))
    zero_state, zero_coeff = ladder_step_down(solution(0), model, grids)
    rows.append(_le("ground_annihilation",
                    zero_coeff + float(np.linalg.norm(zero_state.amplitudes)),
                    0.0))
    try:
        ladder_step_up(solution(es.count - 1), model, grids)
        top_guard = 0.0
    except TruncationTopError:
        top_guard = 1.0
    rows.append(_ge("top_truncation_guard", top_guard, 1.0))
    a, a_dag = ladder_operators(es)
    comm = a.matrix @ a_dag.matrix - a_dag.matrix @ a.matrix
    alg_gap = max(np.linalg.norm(comm @ es.vector(n) - es.vector(n))
                  for n in range(es.count - 1))
    rows.append(_le("commutator_identity_gap", alg_gap, 1e-9))
    return rows


SUITES = {
    "commutators": _commutator_suite,
    "constraint1": _constraint1_suite,
    "constraint2": _constraint2_suite,
    "generalized": _generalized_suite,
    "uncertainty": _uncertainty_suite,
    "ladder": _ladder_suite,
}


def run_suite(name, constants=None, constraint_tol=None):
    """Run one named suite; returns (rows, all_passed)."""
    if name not in SUITES:
        raise UnknownSuiteError(
            "unknown suite %r (expected one of %s)"
            % (name, ", ".join(sorted(SUITES))))
    k = constants if constants is not None else PhysicalConstants()
    tol = constraint_tol if constraint_tol is not None \
        else DEFAULT_CONSTRAINT_TOL
    rows = SUITES[name](k, tol)
    return rows, all(row.passed for row in rows)
