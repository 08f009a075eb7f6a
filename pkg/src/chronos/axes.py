"""Uniform periodic sample grids and the conjugate operator pairs on them.

Each one-dimensional variable (particle position, laboratory time) lives
on an evenly spaced periodic grid.  The variable itself becomes a diagonal
sample operator; its conjugate is built through the unitary discrete
Fourier map as frequency times a constant, so conjugate eigenpairs on the
induced frequency lattice are exact up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import warnings

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    OffLatticeWarning,
    OutOfBandError,
    WrongAxisError,
)
from .linalg import OperatorMatrix, kron, identity, operator

POSITION = "position"
TIME = "time"

NORM_ATOL = 1e-10
# relative miss beyond which a requested energy is flagged off-lattice
LATTICE_RTOL = 1e-9


@dataclass(frozen=True)
class PhysicalConstants:
    """Problem constants; every one strictly positive."""

    hbar: float = 1.0
    mass: float = 1.0
    c: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "c", "omega"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError("%s must be positive and finite, got %r"
                                 % (name, value))
            object.__setattr__(self, name, value)

    @property
    def oscillator_length(self):
        return float(np.sqrt(self.hbar / (self.mass * self.omega)))

    @property
    def rest_energy_scale(self):
        """m^2 c^4 / hbar, the rate constant pairing energies with times."""
        return self.mass ** 2 * self.c ** 4 / self.hbar


@dataclass(frozen=True)
class AxisGrid:
    """n evenly spaced samples origin + j*spacing, periodic with L = n*spacing."""

    n: int
    origin: float
    spacing: float
    label: str

    def __post_init__(self):
        if self.label not in (POSITION, TIME):
            raise WrongAxisError("unknown axis label %r" % (self.label,))
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("grid size must be even and >= 2, got %d" % self.n)
        if not (np.isfinite(self.spacing) and self.spacing > 0.0):
            raise ValueError("grid spacing must be positive, got %r"
                             % (self.spacing,))
        if not np.isfinite(self.origin):
            raise ValueError("grid origin must be finite")
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def period(self):
        return self.n * self.spacing

    @cached_property
    def samples(self):
        out = self.origin + self.spacing * np.arange(self.n, dtype=np.float64)
        out.setflags(write=False)
        return out

    @cached_property
    def frequencies(self):
        """2*pi*k/L for k = -n/2 .. n/2 - 1, ascending."""
        k = np.arange(-self.n // 2, self.n // 2, dtype=np.float64)
        out = 2.0 * np.pi * k / self.period
        out.setflags(write=False)
        return out

    @cached_property
    def fourier_map(self):
        """Unitary matrix whose column for frequency w samples e^{i w x}/sqrt(n)."""
        phase = np.outer(self.samples, self.frequencies)
        out = np.exp(1j * phase) / np.sqrt(self.n)
        out.setflags(write=False)
        return out


def _require_label(grid, label, what):
    if grid.label != label:
        raise WrongAxisError("%s needs a %s grid, got %r"
                             % (what, label, grid.label))


def _spectral_operator(grid, symbol):
    # Phi diag(symbol) Phi^H, symmetrized so the hermitian flag is exact
    phi = grid.fourier_map
    m = (phi * symbol) @ phi.conj().T
    m = 0.5 * (m + m.conj().T)
    return operator(m, hermitian=True)


def position_operator(grid):
    """Diagonal operator of the position samples."""
    _require_label(grid, POSITION, "position operator")
    return operator(np.diag(grid.samples.astype(np.complex128)),
                    hermitian=True, diagonal=True)


def momentum_operator(grid, constants):
    """Spectral derivative -i*hbar*d/dx on the position grid."""
    _require_label(grid, POSITION, "momentum operator")
    return _spectral_operator(grid, constants.hbar * grid.frequencies)


def time_operator(grid):
    """Diagonal operator of the time samples."""
    _require_label(grid, TIME, "time operator")
    return operator(np.diag(grid.samples.astype(np.complex128)),
                    hermitian=True, diagonal=True)


def energy_operator(grid, constants):
    """Conjugate of the time samples: +i*hbar*d/dt on the time grid.

    Its eigenvector at lattice energy E samples e^{-i E t / hbar}, so the
    sign pairs with the time operator opposite to the position pair.
    """
    _require_label(grid, TIME, "energy operator")
    return _spectral_operator(grid, -constants.hbar * grid.frequencies)


def band_edge(grid, constants):
    """Largest |E| the time grid can represent: hbar*pi/spacing."""
    _require_label(grid, TIME, "band edge")
    return constants.hbar * np.pi / grid.spacing


def energy_lattice(grid, constants):
    """Ascending array of energies exactly representable on the time grid."""
    _require_label(grid, TIME, "energy lattice")
    return np.sort(-constants.hbar * grid.frequencies)


def nearest_lattice_energy(grid, energy, constants):
    """(closest representable energy, absolute miss)."""
    lattice = energy_lattice(grid, constants)
    i = int(np.argmin(np.abs(lattice - energy)))
    return float(lattice[i]), float(abs(lattice[i] - energy))


def energy_eigenvector(grid, energy, constants):
    """Normalized grid samples of e^{-i E t / hbar}.

    Exact energy-operator eigenvector when E sits on the grid's frequency
    lattice; a warning is issued when it misses the lattice, and energies
    beyond the band edge are refused outright.
    """
    _require_label(grid, TIME, "energy eigenvector")
    energy = float(energy)
    edge = band_edge(grid, constants)
    if abs(energy) > edge:
        raise OutOfBandError(
            "energy %.6g outside representable band |E| <= %.6g"
            % (energy, edge))
    _, miss = nearest_lattice_energy(grid, energy, constants)
    if miss > LATTICE_RTOL * max(1.0, abs(energy)):
        warnings.warn(
            "energy %.6g misses the frequency lattice by %.3g"
            % (energy, miss), OffLatticeWarning, stacklevel=2)
    v = np.exp(-1j * energy * grid.samples / constants.hbar)
    return v / np.sqrt(grid.n)


def lift_system(op, n_t):
    """Extend a system-space operator to the composite space: A (x) I."""
    return kron(op, identity(n_t))


def lift_time(op, n_q):
    """Extend a time-space operator to the composite space: I (x) B."""
    return kron(identity(n_q), op)


@dataclass(frozen=True)
class CompositeState:
    """Vector on the (system (x) time) product space, row-major by system index."""

    amplitudes: np.ndarray
    n_q: int
    n_t: int
    normalized: bool = True

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128, copy=True).ravel()
        if a.shape[0] != self.n_q * self.n_t:
            raise DimensionMismatchError(
                "state has %d amplitudes for a %d x %d product"
                % (a.shape[0], self.n_q, self.n_t))
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        if self.normalized and abs(self.norm - 1.0) > NORM_ATOL:
            raise ValueError("state norm %.12g is not 1 within %.1e"
                             % (self.norm, NORM_ATOL))

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    @property
    def matrix(self):
        """(n_q, n_t) view; row i is the time profile of system sample i."""
        return self.amplitudes.reshape(self.n_q, self.n_t)

    def overlap(self, other):
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation_left(self, op):
        """<A (x) I> without forming the composite matrix."""
        m = self.matrix
        am = (op.matrix if isinstance(op, OperatorMatrix) else op) @ m
        return float(np.real(np.vdot(m, am))) / self.norm ** 2

    def expectation_right(self, op):
        """<I (x) B> without forming the composite matrix."""
        m = self.matrix
        mb = m @ (op.matrix if isinstance(op, OperatorMatrix) else op).T
        return float(np.real(np.vdot(m, mb))) / self.norm ** 2

    def rescaled(self):
        """Unit-norm copy."""
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return CompositeState(self.amplitudes / n, self.n_q, self.n_t)


def composite_state(amplitudes, n_q, n_t, normalized=True):
    return CompositeState(np.asarray(amplitudes), n_q, n_t,
                          normalized=normalized)


def tensor_state(system_part, time_part):
    """Normalized product state psi (x) phi."""
    psi = np.asarray(system_part, dtype=np.complex128).ravel()
    phi = np.asarray(time_part, dtype=np.complex128).ravel()
    amp = np.outer(psi, phi).ravel()
    norm = np.linalg.norm(amp)
    if norm == 0.0:
        raise ValueError("product of zero factors")
    return CompositeState(amp / norm, psi.shape[0], phi.shape[0])


def gaussian_state(grid, center, sigma):
    """Normalized grid samples of a Gaussian with position spread sigma.

    Sampled as exp(-(x-center)^2 / (4 sigma^2)) so |psi|^2 has standard
    deviation sigma.  Meant for wave packets well inside the grid span;
    no periodic wrapping is applied.
    """
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    x = grid.samples
    v = np.exp(-((x - center) ** 2) / (4.0 * sigma ** 2)).astype(np.complex128)
    return v / np.linalg.norm(v)


def default_position_grid(constants, n=128):
    """Position grid spanning 20 oscillator lengths, centered on zero."""
    width = 20.0 * constants.oscillator_length
    return AxisGrid(n=n, origin=-width / 2.0, spacing=width / n,
                    label=POSITION)


def energy_aligned_grids(constants, n_q=64, n_t=32):
    """Grid pair whose time-frequency lattice hits every oscillator level.

    The time period is 4*pi/omega, so representable energies step by
    hbar*omega/2 and the odd multiples land exactly on the oscillator
    spectrum hbar*omega*(n + 1/2) up to the band edge.
    """
    period = 4.0 * np.pi / constants.omega
    qg = default_position_grid(constants, n=n_q)
    tg = AxisGrid(n=n_t, origin=0.0, spacing=period / n_t, label=TIME)
    return qg, tg


def time_aligned_grids(constants, n_q=64, n_t=32):
    """Grid pair whose time samples sit exactly on the oscillator time levels.

    Sample j equals tau*(j + 1/2) with tau = hbar^2*omega/(m^2*c^4), the
    level spacing of the oscillator's clock operator.
    """
    tau = constants.hbar ** 2 * constants.omega \
        / (constants.mass ** 2 * constants.c ** 4)
    qg = default_position_grid(constants, n=n_q)
    tg = AxisGrid(n=n_t, origin=tau / 2.0, spacing=tau, label=TIME)
    return qg, tg
