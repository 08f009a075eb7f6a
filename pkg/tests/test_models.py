"""Hamiltonians, clock operators, spectra, ladder construction."""

import math

import numpy as np
import pytest

from chronos.axes import AxisGrid, PhysicalConstants, default_position_grid
from chronos.exceptions import WrongKindError
from chronos.linalg import eig_hermitian, maxnorm
from chronos.models import (
    FREE_PARTICLE,
    OSCILLATOR,
    ModelSpec,
    clock_operator,
    energy_eigensystem,
    free_particle_clock_operator,
    free_particle_hamiltonian,
    free_particle_time_level,
    hamiltonian,
    harmonic_hamiltonian,
    ladder_operators,
    oscillator_clock_operator,
    oscillator_time_quantum,
    predicted_time_level,
)

import oracles


def oscillator_model(n=128):
    k = PhysicalConstants()
    return ModelSpec(OSCILLATOR, k, default_position_grid(k, n=n))


def test_model_spec_validation():
    k = PhysicalConstants()
    grid = default_position_grid(k)
    with pytest.raises(WrongKindError):
        ModelSpec("rigid_rotor", k, grid)
    time_grid = AxisGrid(n=8, origin=0.0, spacing=0.5, label="time")
    with pytest.raises(Exception):
        ModelSpec(OSCILLATOR, k, time_grid)


def test_oscillator_spectrum_half_integer():
    model = oscillator_model()
    system = eig_hermitian(harmonic_hamiltonian(model))
    k = model.constants
    expected = k.hbar * k.omega * (np.arange(12) + 0.5)
    assert np.max(np.abs(system.values[:12] - expected)) < 1e-9


def test_oscillator_matches_jacobi_on_small_grid():
    # full cross-check of the discretized operator against cyclic Jacobi
    model = oscillator_model(n=16)
    ham = harmonic_hamiltonian(model)
    mine = eig_hermitian(ham).values
    reference = oracles.jacobi_spectrum(ham.matrix)
    assert np.max(np.abs(mine - reference)) < 1e-9


def test_oscillator_scales_with_constants():
    k = PhysicalConstants(hbar=0.5, mass=2.0, c=1.0, omega=3.0)
    model = ModelSpec(OSCILLATOR, k, default_position_grid(k))
    system = eig_hermitian(harmonic_hamiltonian(model))
    expected = k.hbar * k.omega * (np.arange(6) + 0.5)
    assert np.max(np.abs(system.values[:6] - expected)) < 1e-8


def test_free_particle_plane_wave_energies():
    k = PhysicalConstants()
    grid = AxisGrid(n=32, origin=-8.0, spacing=0.5, label="position")
    model = ModelSpec(FREE_PARTICLE, k, grid)
    ham = free_particle_hamiltonian(model)
    for idx in (0, 5, 17, 31):
        wave = grid.fourier_map[:, idx]
        want = (k.hbar * grid.frequencies[idx]) ** 2 / (2.0 * k.mass)
        assert np.linalg.norm(ham.matrix @ wave - want * wave) < 1e-11


def test_hamiltonian_dispatch():
    model = oscillator_model(n=32)
    assert maxnorm(hamiltonian(model).matrix
                   - harmonic_hamiltonian(model).matrix) == 0.0
    k = model.constants
    free = ModelSpec(FREE_PARTICLE, k, model.grid)
    assert maxnorm(hamiltonian(free).matrix
                   - free_particle_hamiltonian(free).matrix) == 0.0
    with pytest.raises(WrongKindError):
        harmonic_hamiltonian(free)
    with pytest.raises(WrongKindError):
        free_particle_hamiltonian(model)


def test_clock_operator_is_scaled_hamiltonian():
    model = oscillator_model(n=64)
    k = model.constants
    scale = k.hbar / (k.mass ** 2 * k.c ** 4)
    gap = clock_operator(model).matrix - scale * hamiltonian(model).matrix
    assert maxnorm(gap) < 1e-15
    values = eig_hermitian(oscillator_clock_operator(model)).values
    quantum = oscillator_time_quantum(k)
    assert np.max(np.abs(values[:8] - quantum * (np.arange(8) + 0.5))) < 1e-9


def test_time_level_formulas():
    k = PhysicalConstants(hbar=2.0, mass=3.0, c=1.5, omega=0.7)
    quantum = oscillator_time_quantum(k)
    assert quantum == pytest.approx(2.0 ** 2 * 0.7 / (3.0 ** 2 * 1.5 ** 4))
    assert predicted_time_level(4, k) == pytest.approx(quantum * 4.5)
    assert free_particle_time_level(5.0, k) == pytest.approx(
        2.0 * 2.0 * 5.0 / (3.0 ** 2 * 1.5 ** 4))


def test_free_particle_clock_matches_formula():
    k = PhysicalConstants()
    grid = AxisGrid(n=32, origin=-8.0, spacing=0.5, label="position")
    model = ModelSpec(FREE_PARTICLE, k, grid)
    clock = free_particle_clock_operator(model)
    for idx in (3, 11):
        wave = grid.fourier_map[:, idx]
        energy = (k.hbar * grid.frequencies[idx]) ** 2 / (2.0 * k.mass)
        want = free_particle_time_level(energy, k)
        assert np.linalg.norm(clock.matrix @ wave - want * wave) < 1e-12


def test_energy_eigensystem_truncation():
    model = oscillator_model(n=64)
    system = energy_eigensystem(model, retained=10)
    assert system.count == 10
    assert np.all(np.diff(system.values) > 0)
    full = energy_eigensystem(model, retained=64)
    assert np.allclose(system.values, full.values[:10])


def test_ladder_matrix_elements_match_oracle():
    model = oscillator_model()
    system = energy_eigensystem(model, retained=12)
    lower, raiser = ladder_operators(system)
    for n in range(11):
        up = raiser.matrix @ system.vector(n)
        coeff = np.vdot(system.vector(n + 1), up)
        assert abs(coeff - oracles.ladder_matrix_elements(n, "up")) < 1e-10
    for n in range(1, 12):
        down = lower.matrix @ system.vector(n)
        coeff = np.vdot(system.vector(n - 1), down)
        assert abs(coeff - oracles.ladder_matrix_elements(n, "down")) < 1e-10


def test_ladder_annihilates_ground_state():
    model = oscillator_model()
    system = energy_eigensystem(model, retained=6)
    lower, _ = ladder_operators(system)
    assert np.linalg.norm(lower.matrix @ system.vector(0)) < 1e-10


def test_ladder_commutator_on_retained_levels():
    model = oscillator_model()
    system = energy_eigensystem(model, retained=12)
    lower, raiser = ladder_operators(system)
    comm = lower.matrix @ raiser.matrix - raiser.matrix @ lower.matrix
    # identity on every retained level except the truncation boundary
    for n in range(11):
        vec = system.vector(n)
        assert np.linalg.norm(comm @ vec - vec) < 1e-9


def test_ladder_requires_two_levels():
    model = oscillator_model(n=32)
    system = energy_eigensystem(model, retained=1)
    with pytest.raises(WrongKindError):
        ladder_operators(system)
