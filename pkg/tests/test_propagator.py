import math

import numpy as np
import pytest
from scipy.special import jv

from resonant_ratchet.propagator import (GammaTable, KickPotential, ResonanceError,
                                         ResonanceOrder, Trajectory, evolve, gamma_table,
                                         gauss_sum, kick_step, period_map,
                                         resonant_free_step, split_step_oracle)
from resonant_ratchet.state import (SQRT_2PI, GridSpec, TailMassError, named_state,
                                    plane_wave_state, random_state, to_position_samples,
                                    translate, uniform_state)

ORDERS = [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (2, 5), (1, 6),
          (5, 6), (1, 7), (3, 8), (7, 12), (5, 32)]


@pytest.fixture
def grid():
    return GridSpec(64, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def test_kick_potential():
    potential = KickPotential(2.0, 0.3, math.pi / 4)
    theta = np.linspace(0, 2 * np.pi, 50)
    expected = 2.0 * (np.cos(theta) + 0.3 * np.cos(2 * theta + math.pi / 4))
    assert np.allclose(potential(theta), expected, atol=1e-15)
    h = 1e-5
    difference = (potential(theta + h) - potential(theta - h)) / (2 * h)
    assert np.allclose(potential.derivative(theta), difference, atol=1e-8)
    assert np.allclose(np.abs(potential.phase_factor(theta)), 1, atol=1e-15)
    assert potential.force_bound() == pytest.approx(3.2)


def test_kick_potential_validation():
    with pytest.raises(ValueError):
        KickPotential(-1.0)
    with pytest.raises(ValueError):
        KickPotential(1.0, -0.1)


def test_kick_potential_symmetry():
    assert KickPotential(3.0).is_symmetric()
    assert KickPotential(3.0, 0.5, 0.0).is_symmetric()
    assert KickPotential(3.0, 0.5, math.pi).is_symmetric()
    assert not KickPotential(3.0, 2.0, math.pi / 4).is_symmetric()


def test_kick_potential_replace():
    potential = KickPotential(3.0, 0.5, 1.0)
    assert potential.replace(k=4.0) == KickPotential(4.0, 0.5, 1.0)
    assert hash(potential.replace()) == hash(potential)


def test_resonance_order():
    order = ResonanceOrder(1, 3)
    assert (order.r, order.q) == (1, 3)
    assert str(order) == '1/3'
    assert order.period == pytest.approx(4 * math.pi / 3)
    assert ResonanceOrder(2.0, 5) == ResonanceOrder(2, 5)
    assert hash(ResonanceOrder(2.0, 5)) == hash(ResonanceOrder(2, 5))


@pytest.mark.parametrize('r,q', [(2, 4), (0, 3), (3, 0), (-1, 3), (1.5, 3)])
def test_resonance_order_rejected(r, q):
    with pytest.raises(ResonanceError):
        ResonanceOrder(r, q)


def test_free_phases_exact_for_large_momenta():
    order = ResonanceOrder(1, 3)
    # 10**6 = 1 mod 3
    phases = order.free_phases([0, 3, 10**6])
    assert phases[0] == 1
    assert phases[1] == 1
    assert phases[2] == pytest.approx(np.exp(-2j * np.pi / 3), abs=1e-15)
    conjugate = ResonanceOrder(2, 3).free_phases(np.arange(-20, 21))
    assert np.allclose(conjugate, np.conj(order.free_phases(np.arange(-20, 21))), atol=1e-15)


def test_gamma_values():
    assert np.allclose(gamma_table(ResonanceOrder(1, 1)).gamma, [1], atol=1e-15)
    assert np.allclose(gamma_table(ResonanceOrder(1, 2)).gamma, [0, 2], atol=1e-15)
    s = math.sqrt(3)
    assert np.allclose(gamma_table(ResonanceOrder(1, 3)).gamma,
                       [-1j * s, 1.5 + 0.5j * s, 1.5 + 0.5j * s], atol=1e-14)


def test_gamma_table_indexing():
    order = ResonanceOrder(1, 5)
    table = gamma_table(order)
    assert len(table) == 5
    assert table[7] == table[2]
    assert table[-1] == table[4]
    assert table[3] == pytest.approx(gauss_sum(order, 3), abs=1e-15)


@pytest.mark.parametrize('r,q', ORDERS)
def test_gamma_identities(r, q):
    residuals = gamma_table(ResonanceOrder(r, q)).identity_residuals()
    assert ('modulus' in residuals) == (q % 2 == 1)
    for name, value in residuals.items():
        assert value <= 1e-12, name


def test_gamma_periodicity_checks_the_table():
    order = ResonanceOrder(2, 5)
    table = gamma_table(order)
    rotated = GammaTable(order, table.gamma * np.exp(0.1j))
    residuals = rotated.identity_residuals()
    # a common phase keeps the reflection symmetry but not the direct sums
    assert residuals['reflection'] <= 1e-12
    assert residuals['periodicity'] > 0.1


@pytest.mark.parametrize('r,q', ORDERS)
def test_free_step_representations_agree(grid, rng, r, q):
    order = ResonanceOrder(r, q)
    for _ in range(3):
        phi = random_state(grid, 40, rng)
        phase = resonant_free_step(phi, order, 'phase')
        gauss = resonant_free_step(phi, order, 'gauss')
        assert np.max(np.abs(phase.coeffs - gauss.coeffs)) <= 1e-12


def test_free_step_unknown_method(grid):
    with pytest.raises(ValueError):
        resonant_free_step(uniform_state(grid), ResonanceOrder(1, 3), 'euler')


def test_free_step_special_cases(grid, rng):
    phi = random_state(grid, 40, rng)
    # T = 4π is the identity, T = 2π a half turn
    assert np.array_equal(resonant_free_step(phi, ResonanceOrder(1, 1)).coeffs, phi.coeffs)
    half_turn = resonant_free_step(phi, ResonanceOrder(1, 2))
    assert np.allclose(half_turn.coeffs, translate(phi, math.pi).coeffs, atol=1e-13)
    uniform = uniform_state(grid)
    assert np.array_equal(resonant_free_step(uniform, ResonanceOrder(1, 3)).coeffs,
                          uniform.coeffs)
    moved = resonant_free_step(plane_wave_state(1, grid), ResonanceOrder(1, 3))
    assert moved.coefficient(1) == pytest.approx(np.exp(-2j * np.pi / 3), abs=1e-15)


def test_kick_step_jacobi_anger(grid):
    phi = kick_step(uniform_state(grid), KickPotential(1.0))
    m = grid.momenta()
    assert np.max(np.abs(phi.coeffs - (-1j)**m * jv(m, 1.0))) <= 1e-13


def test_kick_step_zero_strength(grid, rng):
    phi = random_state(grid, 40, rng)
    kicked = kick_step(phi, KickPotential(0.0))
    assert np.max(np.abs(kicked.coeffs - phi.coeffs)) <= 1e-13


def test_kick_step_conserves_norm():
    grid = GridSpec.for_kicks(10.0, 2.0, 1)
    phi = kick_step(uniform_state(grid), KickPotential(10.0, 2.0, math.pi / 4))
    assert phi.norm() == pytest.approx(1, abs=1e-12)


def test_period_map_of_uniform_state(grid):
    potential = KickPotential(3.0, 0.5, math.pi / 3)
    phi = period_map(uniform_state(grid), potential, ResonanceOrder(1, 3))
    samples = to_position_samples(phi)
    assert np.allclose(samples, potential.phase_factor(grid.angles()) / SQRT_2PI, atol=1e-12)


@pytest.mark.parametrize('r,q', [(1, 1), (1, 2), (1, 3), (2, 3), (1, 5), (3, 7)])
def test_period_map_matches_split_step(rng, r, q):
    order = ResonanceOrder(r, q)
    potential = KickPotential(3.0, 0.01, math.pi / 3)
    grid = GridSpec.for_kicks(potential.k, potential.a, 0, m_max=64)
    for _ in range(5):
        phi = random_state(grid, 8, rng)
        resonant = period_map(phi, potential, order)
        generic = split_step_oracle(phi, potential, order)
        assert np.max(np.abs(resonant.coeffs - generic.coeffs)) <= 1e-12


def test_evolve_records_every_kick():
    potential = KickPotential(2.0, 0.5, math.pi / 3)
    grid = GridSpec.for_kicks(potential.k, potential.a, 10)
    seen = []
    trajectory = evolve(uniform_state(grid), potential, ResonanceOrder(1, 3), 10,
                        observer=lambda n, phi: seen.append(n))
    assert len(trajectory) == 11
    assert list(trajectory.kicks()) == list(range(11))
    assert seen == list(range(11))
    assert trajectory.final.n_kicks == 10
    assert trajectory.final_state.grid == grid
    assert np.allclose(trajectory.norms(), 1, atol=1e-12)
    assert np.all(trajectory.p_second() >= 0)


def test_evolve_needs_a_kick(grid):
    with pytest.raises(ValueError):
        evolve(uniform_state(grid), KickPotential(1.0), ResonanceOrder(1, 3), 0)


def test_trajectory_kicks_increase(grid):
    trajectory = Trajectory(KickPotential(1.0), ResonanceOrder(1, 3))
    trajectory.append(uniform_state(grid), 0)
    with pytest.raises(ValueError):
        trajectory.append(uniform_state(grid), 0)


def test_evolve_aborts_on_tail_mass():
    grid = GridSpec(16, 64)
    with pytest.raises(TailMassError) as e:
        evolve(uniform_state(grid), KickPotential(5.0), ResonanceOrder(1, 3), 50)
    assert e.value.tail_mass > 1e-10
    assert e.value.trajectory is not None
    assert len(e.value.trajectory) >= 2
    assert e.value.trajectory.kicks()[0] == 0


def test_four_pi_growth_is_exactly_linear():
    # at T = 4π the map is a pure kick, so ⟨p⟩ grows by -∫|φ0|²V' every period
    potential = KickPotential(5.0)
    grid = GridSpec.for_kicks(potential.k, potential.a, 20)
    trajectory = evolve(named_state('tilted', grid), potential, ResonanceOrder(1, 1), 20)
    assert trajectory.p_mean()[0] == pytest.approx(0.2, abs=1e-12)
    assert np.allclose(np.diff(trajectory.p_mean()), -2, atol=1e-9)
    slope, residual = trajectory.slope()
    assert slope == pytest.approx(-2, abs=1e-9)
    assert residual <= 1e-9
