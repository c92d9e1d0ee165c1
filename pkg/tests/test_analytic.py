import math

import numpy as np
import pytest

from vqsd import linalg
from vqsd.analytic import (SingleQubitState, eigenvalues_2x2, evolved_offdiag, extremum_angles,
                           pi_extrema, pi_surface)
from vqsd.ansatz import single_qubit_gate
from vqsd.errors import InvalidInputError
from vqsd.state import DensityMatrix, evolve, random_density_matrix

HALF = SingleQubitState(0.5, 0.5, 0)
SAMPLE = SingleQubitState(0.75, 0.25, 0.25)


def random_states(count, seed=0):
    return [SingleQubitState.from_matrix(random_density_matrix(1, seed=seed * 1000 + k).matrix)
            for k in range(count)]


def test_state_validation():
    with pytest.raises(InvalidInputError):
        SingleQubitState(0.6, 0.6, 0)
    with pytest.raises(InvalidInputError):
        SingleQubitState(0.5, 0.5, 0.6)
    s = SingleQubitState(0.7, 0.3, 0.1 - 0.2j)
    assert s.rho21 == 0.1 + 0.2j and s.real_part == 0.1 and s.imag_part == -0.2


def test_pi_surface_examples():
    for s in random_states(5):
        assert pi_surface(s, 0.0, 1.3) == pytest.approx(s.rho11, abs=1e-15)
    assert np.allclose(pi_surface(HALF, np.linspace(0, 6, 7), np.linspace(-3, 3, 7)), 0.5)


def test_pi_surface_matches_simulator():
    rng = np.random.default_rng(3)
    for s in random_states(200, seed=1):
        phi, theta, omega = rng.uniform(-math.pi, math.pi, 3)
        out = evolve(DensityMatrix(1, s.to_matrix()), single_qubit_gate(phi, theta, omega))
        assert abs(pi_surface(s, theta, phi) - out.matrix[0, 0].real) <= 1e-12
        assert abs(evolved_offdiag(s, theta, phi, omega) - out.matrix[0, 1]) <= 1e-12


def test_pi_extrema_examples():
    assert pi_extrema(HALF) == pytest.approx((0.5, 0.5))
    r = math.sqrt(0.0625 + 0.0625)
    assert pi_extrema(SAMPLE) == pytest.approx((0.5 - r, 0.5 + r), abs=1e-15)
    assert pi_extrema(SAMPLE) == pytest.approx((0.146447, 0.853553), abs=1e-6)
    pure = SingleQubitState.from_matrix(random_density_matrix(1, rank=1, seed=2).matrix)
    assert pi_extrema(pure) == pytest.approx((0, 1), abs=1e-12)


def test_eigenvalues_examples():
    assert eigenvalues_2x2(SingleQubitState(0.7, 0.3, 0)) == pytest.approx((0.3, 0.7), abs=1e-15)
    assert eigenvalues_2x2(HALF) == pytest.approx((0.5, 0.5))
    for s in random_states(100, seed=2):
        np.testing.assert_allclose(eigenvalues_2x2(s), linalg.eigh(s.to_matrix()).eigenvalues, atol=1e-12)
        assert pi_extrema(s) == eigenvalues_2x2(s)


def test_evolved_offdiag_examples():
    s = SingleQubitState(0.6, 0.4, 0.1 + 0.2j)
    assert evolved_offdiag(s, 0, 0, 0) == pytest.approx(s.rho12, abs=1e-15)
    assert evolved_offdiag(SingleQubitState(0.6, 0.4, 0), 0, 0.4, 1.1) == pytest.approx(0, abs=1e-15)


def test_offdiag_vanishes_at_extrema():
    rng = np.random.default_rng(0)
    for s in random_states(200, seed=3):
        ang = extremum_angles(s)
        for theta, phi in (ang.minus, ang.plus):
            assert abs(evolved_offdiag(s, theta, phi, rng.uniform(-3, 3))) <= 1e-12


def test_extremum_angles_plus_state():
    s = SingleQubitState(0.5, 0.5, 0.5)
    ang = extremum_angles(s)
    assert pi_surface(s, *ang.minus) == pytest.approx(0, abs=1e-12)
    assert pi_surface(s, *ang.plus) == pytest.approx(1, abs=1e-12)
    assert not ang.degenerate


def test_extremum_angles_self_consistent():
    for s in random_states(200, seed=4):
        ang = extremum_angles(s)
        lo, hi = pi_extrema(s)
        assert abs(pi_surface(s, *ang.minus) - lo) <= 1e-10
        assert abs(pi_surface(s, *ang.plus) - hi) <= 1e-10


def test_extremum_angles_real_and_imaginary_offdiag():
    for rho12 in (0.2, -0.2, 0.2j, -0.2j):
        s = SingleQubitState(0.7, 0.3, rho12)
        ang = extremum_angles(s)
        assert abs(pi_surface(s, *ang.minus) - pi_extrema(s)[0]) <= 1e-12


def test_extremum_angles_degenerate():
    s = SingleQubitState(0.3, 0.7, 0)
    ang = extremum_angles(s)
    assert ang.degenerate
    assert ang.minus[1] == 0
    assert pi_surface(s, *ang.minus) == pytest.approx(0.3)
    assert pi_surface(s, *ang.plus) == pytest.approx(0.7)
    mixed = extremum_angles(HALF)
    assert mixed.degenerate and mixed.minus == (0.0, 0.0)


def test_grid_brackets_extrema():
    grid = np.linspace(0, 2 * math.pi, 360, endpoint=False)
    theta, phi = np.meshgrid(grid, grid, indexing="ij")
    step = grid[1]
    for s in random_states(10, seed=5):
        vals = pi_surface(s, theta, phi)
        lo, hi = pi_extrema(s)
        # smooth surface: grid extremum within O(step^2) of the true one
        assert lo - 1e-12 <= vals.min() <= lo + step**2
        assert hi - step**2 <= vals.max() <= hi + 1e-12
