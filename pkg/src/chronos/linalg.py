"""Dense complex linear algebra kernels.

Immutable operator values plus the four primitives everything else is
built from: Kronecker products, Hermitian eigendecomposition with a fixed
phase and ordering convention, unitary exponentials, and near-null-space
extraction.  Matrices are dense complex128; intended sizes are a few
hundred rows per factor space and a few thousand for composites.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    NotHermitianError,
    NotUnitaryError,
)

HERMITIAN_RTOL = 1e-12
UNITARY_ATOL = 1e-10
ORTHONORMAL_ATOL = 1e-10
RECONSTRUCT_RTOL = 1e-9

# components below this fraction of the column peak are ignored when
# picking the phase-fixing pivot
PHASE_PIVOT_RTOL = 1e-8


def maxnorm(a):
    """Largest absolute entry of an array (0.0 for an empty one)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def _frozen(a, dtype=np.complex128):
    out = np.array(a, dtype=dtype, copy=True, order="C")
    out.setflags(write=False)
    return out


def hermitian_defect(matrix):
    """max |A_ij - conj(A_ji)|, the distance from exact Hermitian symmetry."""
    matrix = np.asarray(matrix)
    return maxnorm(matrix - matrix.conj().T)


def unitary_defect(matrix):
    """max-norm of A^H A - I."""
    matrix = np.asarray(matrix)
    eye = np.eye(matrix.shape[0])
    return maxnorm(matrix.conj().T @ matrix - eye)


@dataclass(frozen=True)
class OperatorMatrix:
    """A square operator with structural flags.

    Flags are trusted by downstream code, so they are only set by
    constructors that either verify them numerically (`operator`) or
    guarantee them by construction (spectral builders, `kron`,
    `unitary_exp`).
    """

    matrix: np.ndarray
    hermitian: bool = False
    unitary: bool = False
    diagonal: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(
                "operator matrix must be square, got shape %r" % (m.shape,))
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def adjoint(self):
        return OperatorMatrix(self.matrix.conj().T, hermitian=self.hermitian,
                              unitary=self.unitary, diagonal=self.diagonal)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            if other.dim != self.dim:
                raise DimensionMismatchError(
                    "cannot compose %d-dim with %d-dim operator"
                    % (self.dim, other.dim))
            return OperatorMatrix(
                self.matrix @ other.matrix,
                unitary=self.unitary and other.unitary,
                diagonal=self.diagonal and other.diagonal)
        return self.matrix @ np.asarray(other)


def operator(matrix, *, hermitian=False, unitary=False, diagonal=False):
    """Wrap a square matrix, verifying every flag that is claimed.

    hermitian: max |A_ij - conj(A_ji)| <= 1e-12 * maxnorm(A)
    unitary:   maxnorm(A^H A - I) <= 1e-10
    diagonal:  off-diagonal part exactly zero
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if hermitian:
        defect = hermitian_defect(m)
        if defect > HERMITIAN_RTOL * max(maxnorm(m), 1e-300):
            raise NotHermitianError(
                "hermitian defect %.3e exceeds %.1e of maxnorm %.3e"
                % (defect, HERMITIAN_RTOL, maxnorm(m)))
    if unitary:
        defect = unitary_defect(m)
        if defect > UNITARY_ATOL:
            raise NotUnitaryError(
                "unitary defect %.3e exceeds %.1e" % (defect, UNITARY_ATOL))
    if diagonal and maxnorm(m - np.diag(np.diag(m))) != 0.0:
        raise DimensionMismatchError("matrix has nonzero off-diagonal part")
    return OperatorMatrix(m, hermitian=hermitian, unitary=unitary,
                          diagonal=diagonal)


def identity(dim):
    return OperatorMatrix(np.eye(dim), hermitian=True, unitary=True,
                          diagonal=True)


def diagonal_operator(values, *, hermitian=None):
    """Operator with the given diagonal; hermitian iff values are real."""
    values = np.asarray(values)
    if hermitian is None:
        hermitian = bool(np.isrealobj(values) or maxnorm(values.imag) == 0.0)
    unitary = bool(maxnorm(np.abs(values) - 1.0) <= UNITARY_ATOL)
    return OperatorMatrix(np.diag(values.astype(np.complex128)),
                          hermitian=hermitian, unitary=unitary, diagonal=True)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues ascending with matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, np.float64))
        object.__setattr__(self, "vectors", _frozen(self.vectors))
        if self.values.shape[0] != self.vectors.shape[1]:
            raise DimensionMismatchError(
                "%d eigenvalues for %d eigenvectors"
                % (self.values.shape[0], self.vectors.shape[1]))

    @property
    def dim(self):
        return self.vectors.shape[0]

    @property
    def count(self):
        return self.values.shape[0]

    def truncated(self, n):
        """Keep the lowest n eigenpairs."""
        if not 0 < n <= self.count:
            raise DimensionMismatchError(
                "cannot keep %d of %d eigenpairs" % (n, self.count))
        return EigenSystem(self.values[:n], self.vectors[:, :n])

    def vector(self, i):
        return self.vectors[:, i]


def canonical_phase(vectors):
    """Rotate each column so its first significant component is real positive.

    The pivot is the first component whose magnitude exceeds a small
    fraction of the column peak, which keeps the choice stable against
    rounding in components that are essentially zero.
    """
    vectors = np.array(vectors, dtype=np.complex128, copy=True)
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        mags = np.abs(col)
        peak = mags.max()
        if peak == 0.0:
            continue
        pivot = int(np.argmax(mags > PHASE_PIVOT_RTOL * peak))
        phase = col[pivot] / mags[pivot]
        col *= np.conj(phase)
        col[pivot] = col[pivot].real  # exact by convention
        vectors[:, j] = col
    return vectors


def _lexicographic_key(column):
    # interleave real and imaginary parts so comparison is componentwise
    parts = np.empty(2 * column.shape[0])
    parts[0::2] = column.real
    parts[1::2] = column.imag
    return tuple(parts)


def _order_degenerate(values, vectors):
    # eigh gives ascending values; inside exact ties fix the column order
    # lexicographically so equal inputs always produce equal outputs
    n = values.shape[0]
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and values[stop] == values[start]:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            order = sorted(range(stop - start),
                           key=lambda j: _lexicographic_key(block[:, j]))
            vectors[:, start:stop] = block[:, order]
        start = stop
    return vectors


def eig_hermitian(op):
    """Full eigendecomposition of a verified Hermitian operator.

    Values come back ascending; each eigenvector column has its first
    significant component rotated real positive, and exactly degenerate
    eigenvalues get their columns ordered lexicographically, so the result
    is a deterministic function of the input matrix.
    """
    if isinstance(op, OperatorMatrix):
        if not op.hermitian:
            raise NotHermitianError("operator is not flagged hermitian")
        m = op.matrix
    else:
        m = np.asarray(op, dtype=np.complex128)
    defect = hermitian_defect(m)
    if defect > HERMITIAN_RTOL * max(maxnorm(m), 1e-300):
        raise NotHermitianError(
            "hermitian defect %.3e exceeds %.1e of maxnorm"
            % (defect, HERMITIAN_RTOL))
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("eigendecomposition failed: %s" % exc) from exc
    vectors = canonical_phase(vectors)
    vectors = _order_degenerate(values, vectors)

    gram = vectors.conj().T @ vectors
    if maxnorm(gram - np.eye(values.shape[0])) > ORTHONORMAL_ATOL:
        raise ConvergenceError("eigenvectors lost orthonormality")
    recon = (vectors * values) @ vectors.conj().T
    if maxnorm(recon - m) > RECONSTRUCT_RTOL * max(maxnorm(m), 1e-300):
        raise ConvergenceError("eigendecomposition does not reconstruct input")
    return EigenSystem(values, vectors)


def kron(a, b):
    """Kronecker product; structural flags survive by the mixed-product rule."""
    if not isinstance(a, OperatorMatrix):
        a = OperatorMatrix(a)
    if not isinstance(b, OperatorMatrix):
        b = OperatorMatrix(b)
    return OperatorMatrix(np.kron(a.matrix, b.matrix),
                          hermitian=a.hermitian and b.hermitian,
                          unitary=a.unitary and b.unitary,
                          diagonal=a.diagonal and b.diagonal)


def unitary_exp(op, theta):
    """exp(-i * theta * A) for Hermitian A, via its eigendecomposition.

    The result is verified unitary to 1e-10 before it is returned.
    """
    theta = float(theta)
    if isinstance(op, OperatorMatrix) and op.diagonal and op.hermitian:
        u = np.diag(np.exp(-1j * theta * np.diag(op.matrix).real))
        return operator(u, unitary=True, diagonal=True)
    es = eig_hermitian(op)
    u = (es.vectors * np.exp(-1j * theta * es.values)) @ es.vectors.conj().T
    return operator(u, unitary=True)


def near_null_space(op, tol):
    """Orthonormal basis of the singular directions with sigma <= tol.

    Returns a list of vectors ordered by ascending singular value, each
    phase-fixed like an eigenvector column.  Empty list when the smallest
    singular value exceeds tol.
    """
    if isinstance(op, OperatorMatrix):
        m = op.matrix
    else:
        m = np.asarray(op, dtype=np.complex128)
    try:
        _, sigma, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("singular value decomposition failed: %s"
                               % exc) from exc
    keep = np.nonzero(sigma <= tol)[0]
    if keep.size == 0:
        return []
    # numpy orders sigma descending, so the kept block reversed is ascending
    rows = vh[keep[::-1], :]
    cols = canonical_phase(rows.conj().T)
    return [cols[:, j].copy() for j in range(cols.shape[1])]


def apply_left_factor(a, state_matrix):
    """(A (x) I) acting on a composite state reshaped to (n_left, n_right)."""
    a = a.matrix if isinstance(a, OperatorMatrix) else a
    return a @ state_matrix


def apply_right_factor(b, state_matrix):
    """(I (x) B) acting on a composite state reshaped to (n_left, n_right)."""
    b = b.matrix if isinstance(b, OperatorMatrix) else b
    return state_matrix @ b.T


def orthonormalize(block, against=None, passes=2):
    """Modified Gram-Schmidt; returns (Q, kept_norms).

    Columns whose remaining norm falls below 1e-10 are dropped.  When
    ``against`` is given its (orthonormal) columns are projected out first.
    """
    block = np.array(block, dtype=np.complex128, copy=True)
    kept = []
    norms = []
    basis = [] if against is None else [against[:, j]
                                        for j in range(against.shape[1])]
    for j in range(block.shape[1]):
        v = block[:, j]
        for _ in range(passes):
            for u in basis:
                v = v - u * (np.vdot(u, v))
            for u in kept:
                v = v - u * (np.vdot(u, v))
        norm = np.linalg.norm(v)
        norms.append(float(norm))
        if norm > 1e-10:
            kept.append(v / norm)
    q = (np.stack(kept, axis=1) if kept
         else np.zeros((block.shape[0], 0), dtype=np.complex128))
    return q, norms


def near_null_space_matvec(apply_op, dim, tol, *, block_size=16, degree=60,
                           max_sweeps=80, seed=7):
    """Near-null basis of a Hermitian operator known only through matvecs.

    Runs blocked subspace iteration on A*A with a Chebyshev filter that
    suppresses the spectrum above a moving cut, so only the directions
    with ||A v|| <= tol survive.  Intended for composite operators too
    large to materialize; certification is by directly measured residual.

    apply_op maps a (dim, k) block X to A X.
    """
    rng = np.random.default_rng(seed)

    def apply_sq(x):
        return apply_op(apply_op(x))

    # spectral radius estimate for A^2 via power iteration
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(40):
        w = apply_sq(v[:, None])[:, 0]
        lam = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        v = w / nw
    lam_max = max(lam * 1.1, 1e-30)

    floor = max(tol * tol, lam_max * 1e-13)

    def filtered(x, cut):
        # Chebyshev polynomial of A^2 mapped so [cut, lam_max] -> [-1, 1];
        # magnitudes below cut are amplified relative to the rest
        center = 0.5 * (lam_max + cut)
        half = 0.5 * (lam_max - cut)
        prev = x
        cur = (apply_sq(x) - center * x) / half
        for _ in range(degree - 1):
            nxt = 2.0 * (apply_sq(cur) - center * cur) / half - prev
            prev, cur = cur, nxt
            peak = maxnorm(cur)
            if peak > 1e12:  # rescale to dodge overflow, direction is all we keep
                cur = cur / peak
                prev = prev / peak
        return cur

    k = block_size
    x = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    x, _ = orthonormalize(x)
    cut = lam_max * 1e-6
    last_count = -1
    stable = 0
    for _ in range(max_sweeps):
        x = filtered(x, cut)
        x, _ = orthonormalize(x)
        if x.shape[1] < k:  # refill dropped directions with fresh noise
            extra = rng.standard_normal((dim, k - x.shape[1])) \
                + 1j * rng.standard_normal((dim, k - x.shape[1]))
            q, _ = orthonormalize(extra, against=x)
            x = np.concatenate([x, q], axis=1)
        # Rayleigh-Ritz on A^2 inside the block
        ax = apply_sq(x)
        h = x.conj().T @ ax
        h = 0.5 * (h + h.conj().T)
        theta, s = np.linalg.eigh(h)
        x = x @ s
        resid = np.linalg.norm(apply_op(x), axis=0)
        null_mask = resid <= max(tol, np.sqrt(floor))
        count = int(np.count_nonzero(null_mask))
        if count == k:
            # the whole block sits in the null cluster: widen it
            k *= 2
            extra = rng.standard_normal((dim, k - x.shape[1])) \
                + 1j * rng.standard_normal((dim, k - x.shape[1]))
            q, _ = orthonormalize(extra, against=x)
            x = np.concatenate([x, q], axis=1)
            stable = 0
            continue
        nonnull = theta[~null_mask]
        cut = max(float(nonnull.min()) * 0.5, floor * 4.0) \
            if nonnull.size else lam_max * 1e-6
        cut = min(cut, lam_max * 0.5)
        if count == last_count:
            stable += 1
            if stable >= 2:
                keep = np.nonzero(null_mask)[0]
                vecs = x[:, keep]
                resid_kept = resid[keep]
                order = np.argsort(resid_kept, kind="stable")
                vecs = canonical_phase(vecs[:, order])
                return [vecs[:, j].copy() for j in range(vecs.shape[1])]
        else:
            stable = 0
        last_count = count
    raise ConvergenceError(
        "near-null iteration did not stabilize in %d sweeps" % max_sweeps)
