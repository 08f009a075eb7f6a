"""Constraint equations on the composite space and their solution subspaces.

Three constraint operators are supported, each the difference of lifted
Hermitian pieces on the (system (x) time) product:

  first:        (I (x) s_op)  -  (H (x) I)
  second:       (I (x) t_op)  -  (G (x) I)
  generalized:  c_s (I (x) s_op) + c_t (I (x) t_op)  -  F

where s_op/t_op are the conjugate/sample operators of the time axis, H is
a Hamiltonian, G a clock operator, and F an arbitrary Hermitian composite.
States in the near-kernel of a constraint operator form the physical
subspace; measurement statistics are renormalized inside it.

Applications are Kronecker-factored throughout; the composite matrix is
materialized only for the dense near-null solve and only up to a size cap.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .axes import (
    TIME,
    AxisGrid,
    CompositeState,
    PhysicalConstants,
    energy_eigenvector,
    energy_lattice,
    energy_operator,
    time_operator,
    tensor_state,
)
from .exceptions import (
    DimensionMismatchError,
    EmptyBasisError,
    NotHermitianError,
    OutOfRangeError,
    WrongAxisError,
    ZeroOverlapError,
)
from .linalg import (
    OperatorMatrix,
    canonical_phase,
    eig_hermitian,
    identity,
    kron,
    near_null_space,
    near_null_space_matvec,
    operator,
)

FIRST = "first"
SECOND = "second"
GENERALIZED = "generalized"

# largest composite dimension for which the dense solve is materialized
MATERIALIZE_LIMIT = 4096

ZERO_WEIGHT = 1e-14
DEFAULT_TOL = 1e-6
# system eigenvalues closer than this count as one degenerate group
DEGENERACY_ATOL = 1e-9
# projection-weight gap below which a recovered label is ambiguous
LABEL_GAP = 1e-6


def _require_time(grid, what):
    if grid.label != TIME:
        raise WrongAxisError("%s needs a time grid, got %r"
                             % (what, grid.label))


@dataclass(frozen=True)
class ConstraintOperator:
    """One of the three constraint operators, kept in factored form."""

    kind: str
    n_q: int
    time_grid: AxisGrid
    constants: PhysicalConstants | None
    system_op: OperatorMatrix | None
    coeff_s: float
    coeff_t: float
    extra: OperatorMatrix | None

    @property
    def n_t(self):
        return self.time_grid.n

    @property
    def dim(self):
        return self.n_q * self.n_t

    @property
    def descriptor(self):
        if self.kind == GENERALIZED:
            return "generalized(c_s=%g, c_t=%g)" % (self.coeff_s, self.coeff_t)
        return self.kind

    @cached_property
    def _s_matrix(self):
        return energy_operator(self.time_grid, self.constants).matrix

    @cached_property
    def _t_samples(self):
        return self.time_grid.samples

    @cached_property
    def system_eigensystem(self):
        return eig_hermitian(self.system_op)

    def apply_matrix(self, m):
        """Constraint image of a state given as its (n_q, n_t) matrix."""
        if self.kind == FIRST:
            return m @ self._s_matrix.T - self.system_op.matrix @ m
        if self.kind == SECOND:
            return m * self._t_samples[None, :] - self.system_op.matrix @ m
        out = np.zeros_like(m)
        if self.coeff_s != 0.0:
            out = out + self.coeff_s * (m @ self._s_matrix.T)
        if self.coeff_t != 0.0:
            out = out + self.coeff_t * (m * self._t_samples[None, :])
        return out - (self.extra.matrix @ m.ravel()).reshape(m.shape)

    def apply_block(self, x):
        """Matvec for iterative solvers: columns of x are composite vectors."""
        out = np.empty_like(x)
        for j in range(x.shape[1]):
            m = x[:, j].reshape(self.n_q, self.n_t)
            out[:, j] = self.apply_matrix(m).ravel()
        return out

    def residual(self, state):
        """||D s|| / ||s|| via factored application."""
        m, norm = _state_matrix(state, self.n_q, self.n_t)
        if norm == 0.0:
            raise ValueError("residual of the zero state is undefined")
        return float(np.linalg.norm(self.apply_matrix(m))) / norm

    @cached_property
    def composite(self):
        """The materialized composite matrix; only below the size cap."""
        if self.dim > MATERIALIZE_LIMIT:
            raise DimensionMismatchError(
                "composite dimension %d exceeds the materialization cap %d; "
                "use the factored application" % (self.dim, MATERIALIZE_LIMIT))
        i_q = identity(self.n_q)
        if self.kind == FIRST:
            s_op = energy_operator(self.time_grid, self.constants)
            m = kron(i_q, s_op).matrix - kron(self.system_op,
                                              identity(self.n_t)).matrix
        elif self.kind == SECOND:
            m = kron(i_q, time_operator(self.time_grid)).matrix \
                - kron(self.system_op, identity(self.n_t)).matrix
        else:
            m = -self.extra.matrix
            if self.coeff_s != 0.0:
                s_op = energy_operator(self.time_grid, self.constants)
                m = m + self.coeff_s * kron(i_q, s_op).matrix
            if self.coeff_t != 0.0:
                m = m + self.coeff_t * kron(
                    i_q, time_operator(self.time_grid)).matrix
        return operator(m, hermitian=True)


def _state_matrix(state, n_q, n_t):
    if isinstance(state, CompositeState):
        if (state.n_q, state.n_t) != (n_q, n_t):
            raise DimensionMismatchError(
                "state is %d x %d, constraint is %d x %d"
                % (state.n_q, state.n_t, n_q, n_t))
        return state.matrix, state.norm
    a = np.asarray(state, dtype=np.complex128).ravel()
    if a.shape[0] != n_q * n_t:
        raise DimensionMismatchError(
            "state has %d amplitudes, constraint space has %d"
            % (a.shape[0], n_q * n_t))
    return a.reshape(n_q, n_t), float(np.linalg.norm(a))


def _verified_hermitian(candidate, what):
    # raw matrices are accepted but the symmetry claim is verified here
    if isinstance(candidate, OperatorMatrix):
        if not candidate.hermitian:
            raise NotHermitianError("%s must carry a verified hermitian "
                                    "flag" % what)
        return candidate
    return operator(candidate, hermitian=True)


def first_constraint_operator(hamiltonian_op, tg, constants):
    _require_time(tg, "first constraint")
    hamiltonian_op = _verified_hermitian(hamiltonian_op, "hamiltonian")
    return ConstraintOperator(FIRST, hamiltonian_op.dim, tg, constants,
                              hamiltonian_op, 1.0, 0.0, None)


def second_constraint_operator(clock_op, tg):
    _require_time(tg, "second constraint")
    clock_op = _verified_hermitian(clock_op, "clock operator")
    return ConstraintOperator(SECOND, clock_op.dim, tg, None,
                              clock_op, 0.0, 1.0, None)


def generalized_constraint_operator(coeff_s, coeff_t, extra, tg, constants):
    _require_time(tg, "generalized constraint")
    extra = _verified_hermitian(extra, "extra operator")
    n_q, rem = divmod(extra.dim, tg.n)
    if rem != 0 or n_q < 1:
        raise DimensionMismatchError(
            "composite dim %d is not a multiple of the time dim %d"
            % (extra.dim, tg.n))
    return ConstraintOperator(GENERALIZED, n_q, tg, constants, None,
                              float(coeff_s), float(coeff_t), extra)


def first_constraint_residual(state, hamiltonian_op, tg, constants):
    """||(I(x)s_op - H(x)I) state|| / ||state||, never materialized."""
    return first_constraint_operator(hamiltonian_op, tg,
                                     constants).residual(state)


def second_constraint_residual(state, clock_op, tg):
    """||(I(x)t_op - G(x)I) state|| / ||state||, never materialized."""
    return second_constraint_operator(clock_op, tg).residual(state)


def generalized_residual(state, coeff_s, coeff_t, extra, tg, constants):
    """Residual of the two-coefficient constraint c_s*s_op + c_t*t_op = F."""
    op = generalized_constraint_operator(coeff_s, coeff_t, extra, tg,
                                         constants)
    return op.residual(state)


def separable_first(pair, tg, constants):
    """Product solution of the first constraint from an energy eigenpair.

    pair is (E, psi_E); the result is psi_E (x) energy_eigenvector(E),
    normalized.  Off-band energies are refused, off-lattice ones warned
    about by the eigenvector constructor.
    """
    energy, system_vector = pair
    chi = energy_eigenvector(tg, energy, constants)
    return tensor_state(system_vector, chi)


def separable_second(pair, tg):
    """Product solution of the second constraint from a clock eigenpair.

    pair is (t, psi_t); t is rounded to the nearest time sample and the
    result is psi_t (x) (grid delta there).  Returns (state, rounding
    distance); values outside the sampled range are refused.
    """
    _require_time(tg, "separable second solution")
    t_value, system_vector = pair
    t_value = float(t_value)
    samples = tg.samples
    half = tg.spacing / 2.0
    if not samples[0] - half <= t_value <= samples[-1] + half:
        raise OutOfRangeError(
            "time %.6g outside sampled range [%.6g, %.6g]"
            % (t_value, samples[0] - half, samples[-1] + half))
    j = int(np.argmin(np.abs(samples - t_value)))
    delta = np.zeros(tg.n, dtype=np.complex128)
    delta[j] = 1.0
    return tensor_state(system_vector, delta), float(abs(samples[j] - t_value))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal near-kernel basis with recovered eigenvalue labels.

    labels holds one entry per member: the matched system eigenvalue, or
    None when the projection weights tie within LABEL_GAP (a degenerate
    multiplet is then visible as repeated or missing labels).
    """

    members: tuple
    labels: tuple
    residuals: tuple
    kind: str
    tol: float

    @property
    def count(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    @cached_property
    def _matrix(self):
        if not self.members:
            return np.zeros((0, 0), dtype=np.complex128)
        return np.stack([m.amplitudes for m in self.members], axis=1)

    def coefficients(self, state):
        """Projection coefficients <member_i | state>."""
        if isinstance(state, CompositeState):
            state = state.amplitudes
        state = np.asarray(state, dtype=np.complex128).ravel()
        if self.count and state.shape[0] != self._matrix.shape[0]:
            raise DimensionMismatchError(
                "state length %d, basis lives in dimension %d"
                % (state.shape[0], self._matrix.shape[0]))
        return self._matrix.conj().T @ state

    def projector(self):
        """Dense orthogonal projector onto the spanned subspace."""
        if not self.members:
            raise EmptyBasisError("projector of an empty basis")
        b = self._matrix
        return operator(b @ b.conj().T, hermitian=True)


def _matched_candidates(op, tol):
    """Product-basis kernel candidates: (label, system vector, axis vector).

    The product eigenbasis diagonalizes the separable constraints exactly,
    so a candidate's composite residual is |axis eigenvalue - system
    eigenvalue| and thresholding those gaps reproduces the singular-value
    threshold without forming the composite.
    """
    es = op.system_eigensystem
    out = []
    if op.kind == FIRST:
        lattice = energy_lattice(op.time_grid, op.constants)
        for m, value in enumerate(es.values):
            i = int(np.argmin(np.abs(lattice - value)))
            if abs(lattice[i] - value) <= tol:
                chi = energy_eigenvector(op.time_grid, float(lattice[i]),
                                         op.constants)
                out.append((float(value), es.vector(m), chi))
    else:
        samples = op.time_grid.samples
        for m, value in enumerate(es.values):
            i = int(np.argmin(np.abs(samples - value)))
            if abs(samples[i] - value) <= tol:
                delta = np.zeros(op.n_t, dtype=np.complex128)
                delta[i] = 1.0
                out.append((float(value), es.vector(m), delta))
    return out


def _project_out(vector, basis_columns, passes=2):
    v = np.array(vector, dtype=np.complex128, copy=True)
    for _ in range(passes):
        for u in basis_columns:
            v -= u * np.vdot(u, v)
    return v


def _dominant_label(op, vector):
    """System eigenvalue with the largest projection weight, or None on a tie."""
    es = op.system_eigensystem
    m = vector.reshape(op.n_q, op.n_t)
    coeffs = es.vectors.conj().T @ m
    weights = np.sum(np.abs(coeffs) ** 2, axis=1)
    # fold weights of numerically degenerate system levels together
    groups = []
    start = 0
    values = es.values
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[start] > DEGENERACY_ATOL:
            groups.append((float(np.mean(values[start:i])),
                           float(np.sum(weights[start:i]))))
            start = i
    groups.sort(key=lambda g: -g[1])
    if len(groups) > 1 and groups[0][1] - groups[1][1] < LABEL_GAP:
        return None
    return groups[0][0]


def _levelled_basis(op, vectors, tol):
    """Align an extracted kernel basis with the matched product solutions.

    The raw near-null vectors span the right subspace but mix degenerate
    directions arbitrarily; re-expressing the span through the matched
    (eigenvalue, product state) candidates makes member k track level k,
    so probability columns downstream keep a fixed meaning.  Directions
    the candidates miss are appended with projection-recovered labels.
    """
    if not vectors:
        return [], []
    b = np.stack(vectors, axis=1)
    aligned = []
    labels = []
    for label, psi, chi in _matched_candidates(op, tol):
        sep = np.outer(psi, chi).ravel()
        inside = b @ (b.conj().T @ sep)
        u = _project_out(inside, aligned)
        norm = np.linalg.norm(u)
        if norm >= 0.5:
            aligned.append(u / norm)
            labels.append(label)
    for j in range(b.shape[1]):
        u = _project_out(b[:, j], aligned)
        norm = np.linalg.norm(u)
        if norm >= 0.5:
            u = u / norm
            aligned.append(u)
            labels.append(_dominant_label(op, u))
    if len(aligned) != b.shape[1]:
        # alignment lost rank; fall back to the raw basis order
        aligned = [b[:, j] for j in range(b.shape[1])]
        labels = [_dominant_label(op, v) for v in aligned]
    cols = canonical_phase(np.stack(aligned, axis=1))
    return [cols[:, j] for j in range(cols.shape[1])], labels


def physical_subspace(op, tol=DEFAULT_TOL):
    """Near-kernel basis of a constraint operator with eigenvalue labels.

    Below the materialization cap the kernel comes from a dense singular
    value decomposition of the composite; above it the separable kinds use
    the exact product-eigenbasis selection and the generalized kind falls
    back to filtered subspace iteration on the factored application.
    """
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    if op.dim <= MATERIALIZE_LIMIT:
        vectors = near_null_space(op.composite, tol)
    elif op.kind in (FIRST, SECOND):
        cands = _matched_candidates(op, tol)
        cols = [np.outer(psi, chi).ravel() for _, psi, chi in cands]
        vectors = [c / np.linalg.norm(c) for c in cols]
    else:
        vectors = near_null_space_matvec(op.apply_block, op.dim, tol)
    if op.kind == GENERALIZED:
        labels = [None] * len(vectors)
    else:
        vectors, labels = _levelled_basis(op, vectors, tol)
    members = tuple(CompositeState(v, op.n_q, op.n_t) for v in vectors)
    residuals = tuple(op.residual(m) for m in members)
    return SubspaceBasis(members, tuple(labels), residuals, op.kind,
                         float(tol))


def generalized_solve(coeff_s, coeff_t, extra, tg, constants,
                      tol=DEFAULT_TOL):
    """Near-kernel basis of the generalized constraint; labels omitted."""
    op = generalized_constraint_operator(coeff_s, coeff_t, extra, tg,
                                         constants)
    return physical_subspace(op, tol)


def measurement_probabilities(state, basis):
    """Outcome distribution of the level measurement inside the subspace.

    Probabilities are |<member_i|state>|^2 renormalized over the basis;
    the pre-normalization subspace weight is returned alongside, so the
    caller can judge how much of the state was physical to begin with.
    """
    if basis.count == 0:
        raise EmptyBasisError("measurement against an empty basis")
    coeffs = basis.coefficients(state)
    weight = float(np.sum(np.abs(coeffs) ** 2))
    if weight < ZERO_WEIGHT:
        raise ZeroOverlapError(
            "subspace weight %.3e below %.1e" % (weight, ZERO_WEIGHT))
    probabilities = np.abs(coeffs) ** 2 / weight
    pairs = [(basis.labels[i], float(probabilities[i]))
             for i in range(basis.count)]
    return pairs, weight


def uncertainty_product(phi, tg, constants):
    """(spread of t_op, spread of s_op, their product) on a time-space state."""
    _require_time(tg, "uncertainty product")
    phi = np.asarray(phi, dtype=np.complex128).ravel()
    if phi.shape[0] != tg.n:
        raise DimensionMismatchError(
            "state length %d does not match grid size %d"
            % (phi.shape[0], tg.n))
    norm = np.linalg.norm(phi)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError("state must be normalized, got norm %.12g" % norm)
    density = np.abs(phi) ** 2
    t = tg.samples
    t_mean = float(np.dot(t, density))
    # centered norms avoid the cancellation of <x^2> - <x>^2 near eigenstates
    dt = float(np.sqrt(np.dot((t - t_mean) ** 2, density)))
    s_phi = energy_operator(tg, constants).matrix @ phi
    s_mean = float(np.real(np.vdot(phi, s_phi)))
    ds = float(np.linalg.norm(s_phi - s_mean * phi))
    return dt, ds, dt * ds
