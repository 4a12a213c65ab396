"""
Тесты для lattice_operators
Построители матриц, матрицы переноса, края подвижности и сумма Кронекера
"""

import math
from unittest.mock import patch

import numpy as np
import pytest

from config import Config
from src.disorder import DistributionSpec, RealizationSeed
from src.lattice_operators import (
    AlmostMathieuSpec,
    AndersonSpec,
    EnergyZone,
    KroneckerSumSpec,
    SparseJacobiSpec,
    almost_mathieu_scan,
    barrier_count,
    barrier_positions,
    build_almost_mathieu,
    build_anderson,
    build_sparse_jacobi,
    classify_energy,
    deterministic_barriers,
    eigenvector_decay_contrast,
    export_triplets,
    finite_volume_classify,
    kronecker_operator,
    kronecker_spectrum,
    lyapunov_1d,
    mobility_edges,
    read_triplets,
    transfer_product,
)
from src.lattice_operators.transfer import site_matrix
from src.spectral_measures import from_eigensystem, fs_transform
from src.utils.exceptions import DomainError, SizeError

GOLDEN = (math.sqrt(5) - 1) / 2


def jacobi(seed, v=1.0, n_max=200, phi=0.7, beta=2) -> SparseJacobiSpec:
    return SparseJacobiSpec(beta=beta, v=v, n_max=n_max, phi=phi, seed=seed)


class TestBarriers:
    """Тесты для положений барьеров"""

    def test_deterministic_positions(self) -> None:
        """β=2: a_1=1, a_2=5, a_3=13, a_4=29"""
        np.testing.assert_array_equal(deterministic_barriers(2, 30), [1, 5, 13, 29])

    def test_barrier_count_closed_form(self) -> None:
        assert barrier_count(2, 10_000) == 12 == math.floor(math.log2(10_003)) - 1

    def test_randomized_shift_bounded_by_index(self, seed) -> None:
        base = deterministic_barriers(2, 5000)
        shifted = barrier_positions(2, 5000, seed)
        assert shifted.size == base.size
        assert np.all(np.abs(shifted - base) <= np.arange(1, base.size + 1))

    def test_sparseness(self, seed) -> None:
        """#{a_j ≤ R} ≤ log_β R + 2"""
        positions = barrier_positions(3, 10_000, seed)
        for radius in (10, 100, 1000, 9999):
            assert np.count_nonzero(positions <= radius) <= math.log(radius, 3) + 2

    def test_truncation_too_small(self, seed) -> None:
        with pytest.raises(SizeError):
            build_sparse_jacobi(jacobi(seed, beta=5, n_max=4))


class TestBuilders:
    """Тесты для построителей матриц"""

    def test_sparse_jacobi_structure(self, seed) -> None:
        spec = jacobi(seed, v=0.5, n_max=100)
        op = build_sparse_jacobi(spec)
        assert op.is_tridiagonal
        assert op.is_hermitian()
        assert op.bandwidth() == 1
        np.testing.assert_array_equal(op.off_diagonal, np.ones(99))
        barriers = barrier_positions(2, 100, seed)
        expected = np.zeros(100)
        expected[barriers] = 0.5
        expected[0] += math.tan(0.7)
        np.testing.assert_array_equal(op.diagonal, expected)

    def test_zero_barrier_independent_of_seed(self) -> None:
        """v=0 дает свободную матрицу при любом зерне"""
        a = build_sparse_jacobi(jacobi(RealizationSeed(1, 0), v=0.0))
        b = build_sparse_jacobi(jacobi(RealizationSeed(2, 5), v=0.0))
        np.testing.assert_array_equal(a.to_dense(), b.to_dense())

    def test_dirichlet_phase_removes_first_site(self, seed) -> None:
        """φ = π/2 означает u_0 = 0: свободная цепочка на узлах 1..n−1"""
        op = build_sparse_jacobi(jacobi(seed, v=0.0, n_max=50, phi=math.pi / 2))
        assert op.dimension == 49
        assert op.coordinates[0, 0] == 1
        expected = np.sort(2 * np.cos(np.pi * np.arange(1, 50) / 50))
        np.testing.assert_allclose(op.eigenvalues(), expected, rtol=1e-10, atol=1e-12)

    def test_anderson_periodic_free_circulant(self, bernoulli, seed) -> None:
        op = build_anderson(AndersonSpec(1, 5, bernoulli, 0.0, seed, periodic=True))
        expected = np.sort(2 * np.cos(2 * np.pi * np.arange(5) / 5))
        np.testing.assert_allclose(op.eigenvalues(), expected, atol=1e-10)

    def test_anderson_two_dimensional_separable(self, bernoulli, seed) -> None:
        op = build_anderson(AndersonSpec(2, 4, bernoulli, 0.0, seed))
        one_d = 2 * np.cos(np.pi * np.arange(1, 5) / 5)
        expected = np.sort(np.add.outer(one_d, one_d).ravel())
        np.testing.assert_allclose(op.eigenvalues(), expected, atol=1e-10)
        assert op.is_hermitian()
        assert op.coordinates.shape == (16, 2)

    def test_anderson_spectrum_within_support(self, seed) -> None:
        """σ ⊂ [−2d, 2d] + v·supp dF"""
        op = build_anderson(AndersonSpec(1, 2000, DistributionSpec.uniform(1.0), 2.0, seed))
        values = op.eigenvalues()
        assert values.min() >= -4 - 1e-10
        assert values.max() <= 4 + 1e-10

    def test_anderson_size_guard(self, bernoulli, seed) -> None:
        with pytest.raises(SizeError):
            build_anderson(AndersonSpec(10, 10, bernoulli, 1.0, seed))

    def test_almost_mathieu_free_and_bounded(self) -> None:
        free = build_almost_mathieu(AlmostMathieuSpec(0.0, GOLDEN, 0.0, 40))
        np.testing.assert_array_equal(free.diagonal, np.zeros(40))
        op = build_almost_mathieu(AlmostMathieuSpec(2.0, GOLDEN, 0.3, 500))
        assert np.max(np.abs(op.diagonal)) <= 2.0
        values = op.eigenvalues()
        assert values.min() >= -4 - 1e-10 and values.max() <= 4 + 1e-10

    def test_dense_cap(self, bernoulli, seed) -> None:
        op = build_anderson(AndersonSpec(2, 8, bernoulli, 1.0, seed))
        with patch.object(Config, "DENSE_DIMENSION_CAP", 10):
            with pytest.raises(SizeError):
                op.eigensystem


class TestMobilityEdges:
    """Тесты для критерия краев подвижности"""

    def test_edges_beta_two(self) -> None:
        edges = mobility_edges(2, 1.0)
        assert edges.upper == pytest.approx(math.sqrt(3))
        assert edges.lower == pytest.approx(-math.sqrt(3))
        assert edges.critical_v == pytest.approx(2.0)

    def test_small_barrier_whole_band(self) -> None:
        assert mobility_edges(2, 1e-6).upper == pytest.approx(2.0, abs=1e-9)

    def test_critical_barrier_empty(self) -> None:
        assert mobility_edges(2, 2.0).is_empty

    def test_non_positive_barrier(self) -> None:
        with pytest.raises(DomainError):
            mobility_edges(2, 0.0)

    @pytest.mark.parametrize(
        "lam,zone",
        [(0.0, EnergyZone.SC_ZONE), (1.9, EnergyZone.PP_ZONE), (math.sqrt(3), EnergyZone.EDGE)],
    )
    def test_classify_energy(self, seed, lam, zone) -> None:
        spec = jacobi(seed)
        assert classify_energy(spec, lam) is zone
        assert classify_energy(spec, -lam) is zone

    def test_outside_band(self, seed) -> None:
        with pytest.raises(DomainError):
            classify_energy(jacobi(seed), 2.0)


class TestTransferMatrices:
    """Тесты для матриц переноса"""

    def test_free_zero_energy_period_four(self, seed) -> None:
        product = transfer_product(jacobi(seed, v=0.0), 0.0, (0, 4))
        np.testing.assert_array_equal(product.matrix, np.eye(2))

    def test_growth_outside_band(self, seed) -> None:
        """λ=3: log((3+√5)/2) ≈ 0.96242 на узел"""
        product = transfer_product(jacobi(seed, v=0.0, n_max=2000), 3.0)
        assert product.log_norm / 2000 == pytest.approx(math.log((3 + math.sqrt(5)) / 2), abs=1e-3)
        assert product.log_scale > 0

    def test_composition_law_exact(self, seed) -> None:
        spec = jacobi(seed, v=0.5, n_max=60)
        whole = transfer_product(spec, 0.5, (0, 40))
        head = transfer_product(spec, 0.5, (0, 17))
        tail = transfer_product(spec, 0.5, (17, 40))
        np.testing.assert_array_equal(whole.matrix, tail.matrix @ head.matrix)

    def test_matches_direct_multiplication(self, seed) -> None:
        spec = jacobi(seed, v=0.5, n_max=60)
        op = build_sparse_jacobi(spec)
        potential = op.diagonal.copy()
        potential[0] -= math.tan(spec.phi)
        oracle = np.eye(2)
        for value in potential:
            oracle = site_matrix(0.3, value) @ oracle
        product = transfer_product(spec, 0.3)
        np.testing.assert_allclose(product.matrix, oracle, rtol=1e-12, atol=1e-12)
        assert len(product.barrier_sites) == np.count_nonzero(potential)

    def test_window_outside_truncation(self, seed) -> None:
        with pytest.raises(DomainError):
            transfer_product(jacobi(seed, n_max=50), 0.0, (10, 60))

    def test_lyapunov_free_chain(self) -> None:
        value = lyapunov_1d(np.zeros(2000), [3.0])[0]
        assert value == pytest.approx(math.log((3 + math.sqrt(5)) / 2), abs=2e-3)


class TestClassifier:
    """Тесты для конечнообъемного классификатора"""

    def test_far_from_edge(self, seed) -> None:
        spec = jacobi(seed, n_max=4000)
        result = finite_volume_classify(spec, [0.0, 1.9], n_realizations=64)
        assert result.measured == (EnergyZone.SC_ZONE, EnergyZone.PP_ZONE)
        assert result.agreement.all()

    def test_rejects_energies_outside_band(self, seed) -> None:
        with pytest.raises(DomainError):
            finite_volume_classify(jacobi(seed), [2.5])

    def test_decay_contrast_reports_ipr(self, seed) -> None:
        spec = jacobi(seed, n_max=2000)
        op = build_sparse_jacobi(spec)
        report = eigenvector_decay_contrast(op, spec, 1.9)
        assert report["eigenvalue"] == pytest.approx(1.9, abs=0.02)
        assert 0 < report["ipr"] <= 1

    @pytest.mark.slow
    def test_grid_agrees_with_criterion(self, sparse_spec) -> None:
        """41 энергия, n = 10^4: согласие ≥ 90%, расхождения только у края"""
        result = finite_volume_classify(sparse_spec, n_realizations=256)
        assert result.energies.size == 41
        assert result.agreement_fraction >= 0.9
        disagreements = result.energies[~result.agreement]
        assert np.all(np.abs(disagreements**2 - 3) < 0.2)


class TestAlmostMathieu:
    """Тесты для перехода металл-изолятор"""

    @pytest.mark.integration
    def test_lyapunov_and_ipr_across_transition(self) -> None:
        low, high = almost_mathieu_scan([1.0, 4.0], n_max=2000)
        assert abs(low["median_lyapunov"]) < 0.05
        assert high["median_lyapunov"] == pytest.approx(math.log(2), abs=0.05)
        assert high["mean_ipr"] > 10 * low["mean_ipr"]


class TestKronecker:
    """Тесты для суммы Кронекера"""

    def _spec(self, theta: float, v: float = 1.0, phi: float = 0.7) -> KroneckerSumSpec:
        a = SparseJacobiSpec(2, v, 24, phi, RealizationSeed(11, 0))
        b = SparseJacobiSpec(2, v, 24, phi, RealizationSeed(11, 1))
        return KroneckerSumSpec(a, b, theta)

    def test_zero_theta_reduces_to_first_component(self) -> None:
        spec = self._spec(0.0)
        measure = kronecker_spectrum(spec)
        op_a = build_sparse_jacobi(spec.spec_a)
        first = from_eigensystem(*op_a.eigensystem, 0)
        t = np.linspace(0, 10, 21)
        np.testing.assert_allclose(fs_transform(measure, t), fs_transform(first, t), atol=1e-12)

    def test_free_components_support(self) -> None:
        measure = kronecker_spectrum(self._spec(1.0, v=0.0, phi=math.pi / 2))
        assert measure.positions.min() >= -4 and measure.positions.max() <= 4

    def test_fs_factorization_against_direct_evolution(self) -> None:
        spec = self._spec(0.6)
        op = kronecker_operator(spec)
        values, vectors = op.eigensystem
        t = np.linspace(0, 10, 41)
        direct = (np.abs(vectors[0, :]) ** 2 * np.exp(-1j * np.multiply.outer(t, values))).sum(axis=1)

        mu = from_eigensystem(*build_sparse_jacobi(spec.spec_a).eigensystem, 0)
        nu = from_eigensystem(*build_sparse_jacobi(spec.spec_b).eigensystem, 0)
        factorized = fs_transform(mu, t) * fs_transform(nu, 0.6 * t)
        np.testing.assert_allclose(fs_transform(kronecker_spectrum(spec), t), factorized, atol=1e-12)
        np.testing.assert_allclose(direct, factorized, atol=1e-10)

    def test_product_dimension_cap(self) -> None:
        with patch.object(Config, "KRONECKER_MAX_DIMENSION", 100):
            with pytest.raises(SizeError):
                kronecker_spectrum(self._spec(0.5))

    def test_theta_range(self) -> None:
        with pytest.raises(DomainError):
            self._spec(1.5)


class TestExport:
    """Тесты для экспорта операторов"""

    def test_triplets_preserve_matrix_and_header(self, seed, temp_output_dir) -> None:
        op = build_sparse_jacobi(jacobi(seed, v=0.5, n_max=30))
        path = export_triplets(op, f"{temp_output_dir}/jacobi.txt", {"note": "проверка"})
        header, matrix = read_triplets(path)
        assert header["beta"] == "2"
        assert header["master_seed"] == str(seed.master_seed)
        assert header["note"] == "проверка"
        np.testing.assert_array_equal(matrix.toarray(), op.to_dense())
