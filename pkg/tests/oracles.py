"""Independent reference implementations used to pin expected values.

Everything here deliberately avoids the code paths under test: the Jacobi
solver touches no LAPACK eigenroutine, the Kronecker builder indexes entry
by entry, and the shift oracle is a plain np.roll.  Slow is fine, these run
on small inputs only.
"""

import math

import numpy as np


def _rotate(a, v, p, q):
    # one Jacobi rotation zeroing a[p, q] on a real symmetric matrix
    app, aqq, apq = a[p, p], a[q, q], a[p, q]
    phi = 0.5 * math.atan2(2.0 * apq, aqq - app)
    c, s = math.cos(phi), math.sin(phi)
    rows = a[[p, q], :].copy()
    a[p, :] = c * rows[0] - s * rows[1]
    a[q, :] = s * rows[0] + c * rows[1]
    cols = a[:, [p, q]].copy()
    a[:, p] = c * cols[:, 0] - s * cols[:, 1]
    a[:, q] = s * cols[:, 0] + c * cols[:, 1]
    vc = v[:, [p, q]].copy()
    v[:, p] = c * vc[:, 0] - s * vc[:, 1]
    v[:, q] = s * vc[:, 0] + c * vc[:, 1]


def jacobi_spectrum(matrix, eps=1e-14, max_sweeps=60):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Complex input is embedded as the real symmetric [[re, -im], [im, re]]
    whose spectrum doubles every eigenvalue; adjacent sorted pairs are then
    averaged back down.  Returns eigenvalues in ascending order.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    n = m.shape[0]
    a = np.block([[m.real, -m.imag], [m.imag, m.real]])
    a = 0.5 * (a + a.T)
    v = np.eye(2 * n)
    scale = max(np.abs(a).max(), 1.0)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(2 * n):
            for q in range(p + 1, 2 * n):
                if abs(a[p, q]) > eps * scale:
                    _rotate(a, v, p, q)
        for p in range(2 * n):
            off += np.abs(a[p, p + 1:]).sum()
        if off <= eps * scale * n:
            break
    doubled = np.sort(np.diag(a))
    return doubled.reshape(-1, 2).mean(axis=1)


def kron_by_index(a, b):
    """Kronecker product assembled entry by entry from the index formula."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    na, nb = a.shape[0], b.shape[0]
    out = np.zeros((na * nb, na * nb), dtype=np.complex128)
    for i in range(na):
        for j in range(na):
            for k in range(nb):
                for l in range(nb):
                    out[i * nb + k, j * nb + l] = a[i, j] * b[k, l]
    return out


def dft_columns(samples, freqs):
    """Normalized plane-wave columns built one entry at a time."""
    n = len(samples)
    out = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            out[j, k] = np.exp(1j * freqs[k] * samples[j]) / math.sqrt(n)
    return out


def rolled(values, steps):
    """Cyclic shift moving entry j to entry j - steps (f(t) -> f(t + dt))."""
    return np.roll(np.asarray(values), -steps)


def gaussian_moment(samples, spacing, center, sigma, power):
    """Riemann-sum moment <(x - center)^power> of a normalized Gaussian."""
    x = np.asarray(samples, dtype=float)
    density = np.exp(-((x - center) ** 2) / (2.0 * sigma ** 2))
    density /= density.sum() * spacing
    return float(((x - center) ** power * density).sum() * spacing)


def small_singular_count(matrix, tol):
    """Count singular values at or below tol via the Gram matrix spectrum.

    The cutoff is widened to the eigvalsh noise floor so a kernel value
    jittering at rounding level is still counted.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    gram = m.conj().T @ m
    gram = 0.5 * (gram + gram.conj().T)
    w = np.linalg.eigvalsh(gram)
    lam_max = max(float(w[-1]), 0.0)
    floor = 64.0 * m.shape[0] * np.finfo(np.float64).eps * lam_max
    cut = max(tol * tol, floor)
    return int(np.count_nonzero(w <= cut))


def ladder_matrix_elements(level, direction):
    """Exact oscillator ladder coefficients: sqrt(n+1) up, sqrt(n) down."""
    if direction == "up":
        return math.sqrt(level + 1.0)
    if direction == "down":
        return math.sqrt(float(level))
    raise ValueError("direction must be 'up' or 'down'")
