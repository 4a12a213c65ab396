"""
Тесты для ea_glass
Кластерные границы, фрустрация, калибровка и свободная энергия
"""

import itertools
import math

import numpy as np
import pytest
import scipy.linalg

from src.disorder import DistributionSpec, RealizationSeed
from src.ea_glass import (
    ClusterGeometry,
    ClusterInstance,
    LatticeInstance,
    SpinConfiguration,
    average_cluster_energy,
    chain_free_energy,
    cluster_decomposition_bound,
    cluster_gauge_transform,
    cluster_ground_state,
    finite_lattice_ground_state,
    free_energy_per_site,
    frustration_indicator,
    gauge_orbits,
    gauge_rotation_operator,
    gauge_transform,
    ideal_energy_per_site,
    lattice_energy_average,
    lower_bound_e,
    misfit,
    quantum_cluster_hamiltonian,
    quantum_ground_energy,
    random_lattice,
    self_averaging_variance,
    stability_constant,
)
from src.utils.exceptions import DomainError, SizeError, UnsupportedOperationError

PLAQUETTE = ClusterGeometry.PLAQUETTE
CUBE = ClusterGeometry.CUBE


class TestGeometry:
    """Тесты для канонических кластеров"""

    def test_sizes(self) -> None:
        assert (PLAQUETTE.n_sites, PLAQUETTE.n_bonds) == (4, 4)
        assert (CUBE.n_sites, CUBE.n_bonds) == (8, 12)

    def test_cube_bonds_join_neighbors(self) -> None:
        offsets = CUBE.offsets
        for i, j in CUBE.bonds:
            step = offsets[j] - offsets[i]
            assert step.sum() == 1 and np.all(step >= 0)

    def test_wrong_bond_count(self) -> None:
        with pytest.raises(DomainError):
            ClusterInstance(PLAQUETTE, [1.0, 1.0, 1.0])

    def test_spin_configuration_values(self) -> None:
        with pytest.raises(DomainError):
            SpinConfiguration([1, 0, -1])
        assert SpinConfiguration.from_index(0b101, 3) == SpinConfiguration([-1, 1, -1])


class TestClusterGroundState:
    """Тесты для основных состояний кластеров"""

    def test_unfrustrated_plaquette(self) -> None:
        state = cluster_ground_state(ClusterInstance(PLAQUETTE, [1, 1, 1, 1]))
        assert state.energy == -4
        assert len(state.minimizers) == 1
        assert state.minimizers[0].spins[0] == 1

    def test_frustrated_plaquette(self) -> None:
        state = cluster_ground_state(ClusterInstance(PLAQUETTE, [-1, 1, 1, 1]))
        assert state.energy == -2
        # одна нарушенная связь из четырех на выбор
        assert len(state.minimizers) == 4

    def test_ferromagnetic_cube(self) -> None:
        assert cluster_ground_state(ClusterInstance(CUBE, np.ones(12))).energy == -12

    def test_quantum_matches_classical_without_transverse_terms(self) -> None:
        rng = np.random.default_rng(3)
        for geometry in (PLAQUETTE, CUBE):
            cluster = ClusterInstance(geometry, rng.normal(size=geometry.n_bonds))
            assert quantum_ground_energy(cluster) == pytest.approx(
                cluster_ground_state(cluster).energy, abs=1e-10
            )

    def test_quantum_energy_is_norm_continuous(self) -> None:
        couplings = [-1.0, 1.0, 1.0, 1.0]
        base = quantum_ground_energy(ClusterInstance(PLAQUETTE, couplings))
        for alpha in (0.01, 0.1):
            state = cluster_ground_state(ClusterInstance(PLAQUETTE, couplings, (alpha, 0.0, 1.0)))
            assert state.minimizers is None
            assert abs(state.energy - base) <= alpha * np.sum(np.abs(couplings))

    def test_hamiltonian_is_hermitian(self) -> None:
        cluster = ClusterInstance(PLAQUETTE, [1, -1, 0.5, 2], (0.3, 0.2, 1.0))
        h = quantum_cluster_hamiltonian(cluster)
        assert h.shape == (16, 16)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-14)


class TestFrustrationAndGauge:
    """Тесты для фрустрации и калибровочной инвариантности"""

    def test_frustration_indicator(self) -> None:
        assert frustration_indicator([1, 1, 1, 1]) == 1
        assert frustration_indicator([-1, 1, 1, 1]) == -1
        assert frustration_indicator([-0.3, -2.0, 0.1, 5.0]) == 1

    def test_zero_coupling_undefined(self) -> None:
        with pytest.raises(DomainError):
            frustration_indicator([0, 1, 1, 1])

    def test_indicator_is_gauge_invariant(self) -> None:
        cluster = ClusterInstance(PLAQUETTE, [-1, 1, 1, 1])
        for site in range(4):
            flipped = cluster_gauge_transform(cluster, site)
            assert frustration_indicator(flipped.couplings) == -1
            assert cluster_ground_state(flipped).energy == cluster_ground_state(cluster).energy

    def test_quantum_spectrum_gauge_invariant(self) -> None:
        rng = np.random.default_rng(11)
        cluster = ClusterInstance(PLAQUETTE, rng.normal(size=4), (0.1, 0.0, 1.0))
        for site in range(4):
            flipped = cluster_gauge_transform(cluster, site)
            rotation = gauge_rotation_operator(4, site)
            np.testing.assert_allclose(
                rotation @ quantum_cluster_hamiltonian(cluster) @ rotation.conj().T,
                quantum_cluster_hamiltonian(flipped),
                atol=1e-12,
            )
            np.testing.assert_allclose(
                scipy.linalg.eigvalsh(quantum_cluster_hamiltonian(cluster)),
                scipy.linalg.eigvalsh(quantum_cluster_hamiltonian(flipped)),
                atol=1e-10,
            )

    def test_gauge_orbits(self) -> None:
        assert gauge_orbits(PLAQUETTE) == 2
        assert gauge_orbits(CUBE) == 32

    def test_lattice_gauge_is_involution(self, seed, bernoulli) -> None:
        lattice = random_lattice(2, 3, bernoulli, seed)
        energy = finite_lattice_ground_state(lattice).energy
        for site in range(lattice.n_sites):
            flipped = gauge_transform(lattice, site)
            assert finite_lattice_ground_state(flipped).energy == energy
            np.testing.assert_array_equal(gauge_transform(flipped, site).couplings, lattice.couplings)

    def test_gauge_on_doubled_bonds(self, seed, bernoulli) -> None:
        """L = 2: обе связи между парой соседей меняют знак"""
        lattice = random_lattice(2, 2, bernoulli, seed)
        flipped = gauge_transform(lattice, 0)
        changed = np.sum(flipped.couplings != lattice.couplings)
        assert changed == 4


class TestClusterBounds:
    """Тесты для средних по кластерам и нижних границ"""

    def test_plaquette_average(self, bernoulli) -> None:
        result = average_cluster_energy(PLAQUETTE, bernoulli)
        assert result.value == -3.0
        assert result.n_patterns == 16
        assert result.oracle_checksum == -48

    def test_cube_average(self, bernoulli) -> None:
        result = average_cluster_energy(CUBE, bernoulli)
        assert result.oracle_checksum == -36096
        assert result.value == pytest.approx(-8.8125, abs=1e-12)

    def test_exhaustive_is_deterministic(self, bernoulli) -> None:
        first = average_cluster_energy(CUBE, bernoulli)
        second = average_cluster_energy(CUBE, bernoulli)
        assert first.value == second.value
        assert first.oracle_checksum == second.oracle_checksum

    def test_point_mass(self) -> None:
        ferro = DistributionSpec.point_mass(1.0)
        assert average_cluster_energy(PLAQUETTE, ferro).value == -4
        assert average_cluster_energy(CUBE, ferro).value == -12
        assert lower_bound_e(2, ferro).bound == -2

    def test_bounds(self, bernoulli) -> None:
        assert lower_bound_e(2, bernoulli).bound == pytest.approx(-1.5)
        assert lower_bound_e(3, bernoulli).bound == pytest.approx(-2.203125)

    def test_monte_carlo_matches_exhaustive(self, seed, bernoulli) -> None:
        result = average_cluster_energy(PLAQUETTE, bernoulli, mode="mc", seed=seed, n_samples=4000)
        assert abs(result.value + 3.0) <= 3 * result.std_error + 1e-12

    def test_continuous_law_not_enumerable(self, uniform) -> None:
        with pytest.raises(UnsupportedOperationError):
            average_cluster_energy(PLAQUETTE, uniform)

    def test_unsupported_dimension(self, bernoulli) -> None:
        with pytest.raises(UnsupportedOperationError):
            lower_bound_e(4, bernoulli)

    def test_misfit(self) -> None:
        assert misfit(-1.5, ideal_energy_per_site(2)) == pytest.approx(0.25)
        assert misfit(-2.203125, ideal_energy_per_site(3)) == pytest.approx(0.265625)
        assert misfit(-2.0, -2.0) == 0.0
        with pytest.raises(DomainError):
            misfit(-1.0, 0.0)


class TestFiniteLattice:
    """Тесты для конечных решеток"""

    def test_unfrustrated_periodic_square(self) -> None:
        lattice = LatticeInstance(2, 2, True, np.ones((4, 2)))
        assert lattice.n_bonds == 8
        state = finite_lattice_ground_state(lattice)
        assert state.energy == -8
        assert state.per_site == -2

    def test_free_boundary_bond_count(self) -> None:
        lattice = LatticeInstance(2, 3, False, np.ones((9, 2)))
        assert lattice.n_bonds == 12
        assert lattice.couplings.sum() == 12

    def test_size_cap(self) -> None:
        with pytest.raises(SizeError):
            finite_lattice_ground_state(LatticeInstance(2, 5, True, np.ones((25, 2))))

    def test_cluster_bound_is_realization_wise(self, bernoulli) -> None:
        for index in range(5):
            for d, L in ((2, 4), (3, 2)):
                lattice = random_lattice(d, L, bernoulli, RealizationSeed(77, index))
                energy = finite_lattice_ground_state(lattice).energy
                assert energy >= cluster_decomposition_bound(lattice) - 1e-12

    def test_monte_carlo_average_respects_bound(self, seed, bernoulli) -> None:
        estimate = lattice_energy_average(2, 3, bernoulli, 500, seed, periodic=False)
        assert estimate.mean >= -1.5 - 3 * estimate.std_error

    def test_dimensions_ordered(self, seed, bernoulli) -> None:
        square = lattice_energy_average(2, 2, bernoulli, 300, seed)
        cube = lattice_energy_average(3, 2, bernoulli, 300, seed.child(1))
        slack = 3 * (square.std_error + cube.std_error)
        assert square.mean >= cube.mean - slack


class TestFreeEnergy:
    """Тесты для свободной энергии"""

    def test_single_bond(self) -> None:
        t = 0.7
        expected = -(t / 2) * math.log(4 * math.cosh(1 / t))
        assert chain_free_energy([1.0], t, periodic=False) == pytest.approx(expected, rel=1e-12)

    def test_high_temperature_limit(self) -> None:
        t = 1e6
        assert chain_free_energy([1.0, -1.0, 1.0], t) == pytest.approx(-t * math.log(2), rel=1e-9)

    def test_periodic_chain_matches_enumeration(self) -> None:
        couplings = np.array([0.3, -1.2, 0.8, 1.0, -0.4])
        t = 0.9
        z = 0.0
        for spins in itertools.product((-1, 1), repeat=5):
            s = np.array(spins)
            z += math.exp(-np.sum(couplings * s * np.roll(s, -1)) / t)
        assert chain_free_energy(couplings, t) == pytest.approx(-t * math.log(z) / 5, rel=1e-12)

    def test_frustrated_ring_low_temperature(self) -> None:
        """Одна неудовлетворенная связь: E_0 = −2, вырождение 8"""
        for t in (0.05, 1e-3):
            expected = -0.5 - t * math.log(8) / 4
            f = chain_free_energy([1.0, 1.0, 1.0, -1.0], t)
            assert math.isfinite(f)
            assert f == pytest.approx(expected, rel=1e-12)

    def test_unfrustrated_ring_low_temperature(self) -> None:
        for t in (0.05, 1e-3):
            expected = -1.0 - t * math.log(2) / 4
            assert chain_free_energy([1.0, 1.0, 1.0, 1.0], t) == pytest.approx(expected, rel=1e-12)

    def test_frustrated_ring_matches_enumeration(self) -> None:
        """Π|tanh| близко к 1, но разность еще различима"""
        couplings = np.array([1.0, -1.0, 1.0, 1.0])
        t = 0.3
        energies = [
            float(np.sum(couplings * np.array(s) * np.roll(np.array(s), -1)))
            for s in itertools.product((-1, 1), repeat=4)
        ]
        log_z = float(np.log(np.sum(np.exp(-(np.array(energies) - min(energies)) / t))))
        expected = -(t * log_z - min(energies)) / 4
        assert chain_free_energy(couplings, t) == pytest.approx(expected, rel=1e-12)

    def test_random_rings_bracket_ground_state(self) -> None:
        """e_0 − T·log 2 ≤ f ≤ e_0 для колец с законом Бернулли при T = 0.05"""
        rng = np.random.default_rng(7)
        t = 0.05
        for _ in range(10):
            couplings = rng.choice([-1.0, 1.0], size=8)
            ground = min(
                float(np.sum(couplings * np.array(s) * np.roll(np.array(s), -1)))
                for s in itertools.product((-1, 1), repeat=8)
            ) / 8
            f = chain_free_energy(couplings, t)
            assert math.isfinite(f)
            assert ground - t * math.log(2) <= f <= ground + 1e-12

    def test_lattice_free_energy_brackets_ground_state(self, seed, bernoulli) -> None:
        lattice = random_lattice(2, 3, bernoulli, seed)
        ground = finite_lattice_ground_state(lattice).per_site
        t = 0.05
        f = free_energy_per_site(lattice, t)
        assert ground - t * math.log(2) <= f <= ground

    def test_self_averaging(self, seed, bernoulli) -> None:
        report = self_averaging_variance((8, 16, 32, 64), bernoulli, 1.0, 200, seed)
        assert report.variance_decreasing

    def test_stability_bound(self, seed, bernoulli, uniform) -> None:
        for dist in (bernoulli, uniform):
            report = self_averaging_variance((32,), dist, 1.0, 100, seed)
            assert np.isfinite(report.means[0])
            assert report.means[0] >= -stability_constant(1, dist, 1.0)

    def test_stability_requires_bounded_law(self, gaussian) -> None:
        with pytest.raises(UnsupportedOperationError):
            stability_constant(2, gaussian, 1.0)
