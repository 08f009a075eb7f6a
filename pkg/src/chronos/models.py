"""Concrete system models: harmonic oscillator and free particle.

A model couples a position grid with physical constants and provides two
operators on the system space: the energy operator (Hamiltonian) and the
clock operator, a rescaled positive operator whose eigenvalues are the
internal time readings paired with the energy levels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .axes import POSITION, AxisGrid, PhysicalConstants, momentum_operator
from .exceptions import WrongAxisError, WrongKindError
from .linalg import eig_hermitian, operator

OSCILLATOR = "oscillator"
FREE_PARTICLE = "free_particle"
KINDS = (OSCILLATOR, FREE_PARTICLE)

DEFAULT_RETAINED_LEVELS = 16


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    constants: PhysicalConstants
    grid: AxisGrid

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WrongKindError("unknown model kind %r" % (self.kind,))
        if self.grid.label != POSITION:
            raise WrongAxisError("model grid must be position-labeled")


def _require_kind(model, kind, what):
    if model.kind != kind:
        raise WrongKindError("%s is defined for the %s model, got %r"
                             % (what, kind, model.kind))


def harmonic_hamiltonian(model):
    """p^2/(2m) + m*omega^2*q^2/2 on the model's position grid."""
    _require_kind(model, OSCILLATOR, "harmonic hamiltonian")
    k = model.constants
    p = momentum_operator(model.grid, k).matrix
    x = model.grid.samples
    m = p @ p / (2.0 * k.mass) \
        + np.diag(0.5 * k.mass * k.omega ** 2 * x ** 2).astype(np.complex128)
    m = 0.5 * (m + m.conj().T)
    return operator(m, hermitian=True)


def free_particle_hamiltonian(model):
    """p^2/(2m) on the model's position grid."""
    _require_kind(model, FREE_PARTICLE, "free-particle hamiltonian")
    k = model.constants
    p = momentum_operator(model.grid, k).matrix
    m = p @ p / (2.0 * k.mass)
    m = 0.5 * (m + m.conj().T)
    return operator(m, hermitian=True)


def hamiltonian(model):
    if model.kind == OSCILLATOR:
        return harmonic_hamiltonian(model)
    return free_particle_hamiltonian(model)


def oscillator_clock_operator(model):
    """Internal time operator of the oscillator: hbar/(m^2 c^4) times its energy.

    Spectrum hbar^2*omega/(m^2 c^4) * (n + 1/2), one reading per level.
    """
    _require_kind(model, OSCILLATOR, "oscillator clock operator")
    k = model.constants
    scale = k.hbar / (k.mass ** 2 * k.c ** 4)
    return operator(scale * harmonic_hamiltonian(model).matrix, hermitian=True)


def free_particle_clock_operator(model):
    """Internal time operator of the free particle: hbar/(m^3 c^4) * p^2."""
    _require_kind(model, FREE_PARTICLE, "free-particle clock operator")
    k = model.constants
    p = momentum_operator(model.grid, k).matrix
    m = k.hbar / (k.mass ** 3 * k.c ** 4) * (p @ p)
    m = 0.5 * (m + m.conj().T)
    return operator(m, hermitian=True)


def clock_operator(model):
    if model.kind == OSCILLATOR:
        return oscillator_clock_operator(model)
    return free_particle_clock_operator(model)


def oscillator_time_quantum(constants):
    """Clock-level spacing of the oscillator: hbar^2*omega/(m^2 c^4)."""
    return constants.hbar ** 2 * constants.omega \
        / (constants.mass ** 2 * constants.c ** 4)


def predicted_time_level(n, constants):
    """Closed-form oscillator clock reading for level n: quantum * (n + 1/2)."""
    if n < 0:
        raise ValueError("level must be nonnegative, got %d" % n)
    return oscillator_time_quantum(constants) * (n + 0.5)


def free_particle_time_level(energy, constants):
    """Closed-form free-particle clock reading at energy E: 2*hbar*E/(m^2 c^4).

    Follows from t = hbar*p^2/(m^3 c^4) with p^2 = 2 m E.
    """
    if energy < 0.0:
        raise ValueError("free-particle energy must be nonnegative")
    return 2.0 * constants.hbar * energy \
        / (constants.mass ** 2 * constants.c ** 4)


def energy_eigensystem(model, retained=DEFAULT_RETAINED_LEVELS):
    """Lowest `retained` eigenpairs of the model hamiltonian."""
    es = eig_hermitian(hamiltonian(model))
    return es.truncated(min(retained, es.count))


def ladder_operators(es):
    """Lowering and raising operators on a truncated eigenbasis.

    es holds the retained eigenpairs (columns in the grid basis).  The
    returned grid-basis matrices act as sqrt(n) steps between consecutive
    retained levels and annihilate everything outside the retained span,
    so the step amplitudes are exact by construction.
    """
    k = es.count
    if k < 2:
        raise WrongKindError("need at least two retained levels, got %d" % k)
    steps = np.sqrt(np.arange(1.0, k))
    lower_small = np.diag(steps, 1).astype(np.complex128)
    v = es.vectors
    lower = v @ lower_small @ v.conj().T
    return operator(lower), operator(lower.conj().T)
