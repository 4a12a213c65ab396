"""
Тесты для quantum_dynamics
Эволюция, времена пребывания, моменты и транспорт с резольвентным усреднением
"""

import numpy as np
import pytest
import scipy.linalg
from scipy import special

from src.disorder import DistributionSpec, RealizationSeed
from src.lattice_operators import AndersonSpec, OperatorMatrix, build_anderson
from src.quantum_dynamics import (
    StateVector,
    TransportSeries,
    diffusion_constants,
    diffusion_exponents,
    evolve,
    moments,
    probability_profile,
    resolvent_transport,
    sojourn_time,
    transport_profile,
)
from src.utils.exceptions import DomainError, FitError


def free_chain(n: int) -> OperatorMatrix:
    spec = AndersonSpec(1, n, DistributionSpec.bernoulli(), 0.0, RealizationSeed(1, 0))
    return build_anderson(spec)


def disordered_chain(n: int, v: float) -> OperatorMatrix:
    spec = AndersonSpec(1, n, DistributionSpec.uniform(), v, RealizationSeed(2024, 0))
    return build_anderson(spec)


def random_hermitian(n: int, seed: int) -> OperatorMatrix:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return OperatorMatrix.from_dense((a + a.conj().T) / (2 * np.sqrt(n)))


class TestStateVector:
    """Тесты для состояний"""

    def test_unnormalized_rejected(self) -> None:
        with pytest.raises(DomainError):
            StateVector(np.array([1.0, 1.0]))

    def test_from_amplitudes_normalizes(self) -> None:
        psi = StateVector.from_amplitudes([3.0, 4.0])
        np.testing.assert_allclose(psi.probabilities, [0.36, 0.64])

    def test_delta(self) -> None:
        psi = StateVector.delta(5, 2)
        assert psi.norm == 1.0
        assert psi.amplitudes[2] == 1.0


class TestEvolution:
    """Тесты для e^{−itH}ψ"""

    def test_zero_time_is_identity(self) -> None:
        op = free_chain(10)
        psi = StateVector.delta(10, 3)
        assert evolve(op, psi, 0.0) is psi

    def test_eigenvector_acquires_phase(self) -> None:
        op = free_chain(12)
        values, vectors = op.eigensystem
        psi = StateVector(vectors[:, 4])
        evolved = evolve(op, psi, 3.7)
        np.testing.assert_allclose(
            evolved.amplitudes, np.exp(-3.7j * values[4]) * vectors[:, 4], atol=1e-10
        )

    def test_matches_matrix_exponential_and_bessel(self) -> None:
        """Свободная цепочка: (e^{−itΔ}δ_0)(n) = (−i)^n J_n(2t)"""
        op = free_chain(101)
        psi = StateVector.delta(101, 50)
        t = 7.0
        evolved = evolve(op, psi, t).amplitudes
        oracle = scipy.linalg.expm(-1j * t * op.to_dense()) @ psi.amplitudes
        np.testing.assert_allclose(evolved, oracle, atol=1e-8)
        n = np.arange(-20, 21)
        bessel = (-1j) ** np.abs(n) * special.jv(np.abs(n), 2 * t)
        np.testing.assert_allclose(evolved[50 + n], bessel, atol=1e-8)

    def test_probability_conserved(self) -> None:
        op = disordered_chain(200, 2.0)
        profile = probability_profile(op, StateVector.delta(200, 100), np.linspace(0, 50, 11))
        np.testing.assert_allclose(profile.sum(axis=1), 1.0, atol=1e-8)

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DomainError):
            evolve(free_chain(5), StateVector.delta(6, 0), 1.0)


class TestSojournTime:
    """Тесты для времен пребывания"""

    def test_stationary_state_grows_linearly(self) -> None:
        op = free_chain(20)
        _, vectors = op.eigensystem
        psi = StateVector(vectors[:, 7])
        weight = abs(vectors[3, 7]) ** 2
        result = sojourn_time(op, psi, [3], 100.0)
        assert result.value == pytest.approx(200.0 * weight, rel=1e-8)
        assert result.linear_growth

    def test_free_chain_end_site_converges(self) -> None:
        op = free_chain(2000)
        psi = StateVector.delta(2000, 0)
        result = sojourn_time(op, psi, [0], 200.0)
        assert not result.linear_growth
        assert result.growth_ratio < 1.1

    def test_separated_blocks_never_meet(self) -> None:
        block = free_chain(5).to_dense()
        dense = scipy.linalg.block_diag(block, block)
        op = OperatorMatrix.from_dense(dense)
        result = sojourn_time(op, StateVector.delta(10, 7), [0, 1, 2], 50.0)
        assert abs(result.value) < 1e-12

    def test_empty_region(self) -> None:
        with pytest.raises(DomainError):
            sojourn_time(free_chain(5), StateVector.delta(5, 0), [], 10.0)


class TestMoments:
    """Тесты для моментов и показателей диффузии"""

    def test_eigenvector_gives_constant_series(self) -> None:
        op = free_chain(30)
        _, vectors = op.eigensystem
        series = moments(op, StateVector(vectors[:, 10]), 2, np.linspace(0, 20, 41), origin=15)
        np.testing.assert_allclose(series.values, series.values[0], rtol=1e-9)

    def test_free_chain_is_ballistic(self) -> None:
        op = free_chain(1001)
        psi = StateVector.delta(1001, 500)
        series = moments(op, psi, 2, np.linspace(0, 200, 801))
        constants = diffusion_constants(series)
        assert constants["over_t_squared"][-1] == pytest.approx(2.0, abs=1e-3)
        assert constants["over_t"][-1] > 100
        report = diffusion_exponents(series)
        assert report.lower == pytest.approx(1.0, abs=0.05)
        assert report.upper == pytest.approx(1.0, abs=0.05)
        assert report.lower >= 0.9
        assert report.lower <= report.upper

    def test_first_moment_slope(self) -> None:
        op = free_chain(1001)
        series = moments(op, StateVector.delta(1001, 500), 1, np.linspace(0, 200, 801))
        assert diffusion_exponents(series).upper == pytest.approx(1.0, abs=0.05)

    @pytest.mark.integration
    def test_strong_disorder_is_localized(self) -> None:
        op = disordered_chain(2000, 10.0)
        times = np.concatenate(([0.0], np.logspace(-1, 3, 120)))
        series = moments(op, StateVector.delta(2000, 1000), 2, times)
        assert series.values.max() < 50
        assert diffusion_exponents(series).upper <= 0.1

    def test_synthetic_power_laws(self) -> None:
        t = np.logspace(0, 3, 60)
        ballistic = TransportSeries(t, t**2, "x2", time_averages=t**2, metadata={"m": 2})
        constant = TransportSeries(t, np.ones_like(t), "x2", time_averages=np.ones_like(t))
        report = diffusion_exponents(ballistic)
        assert (report.lower, report.upper) == (pytest.approx(1.0), pytest.approx(1.0))
        report = diffusion_exponents(constant, m=2)
        assert (report.lower, report.upper) == (pytest.approx(0.0), pytest.approx(0.0))

    def test_superballistic_series_is_clipped(self) -> None:
        t = np.logspace(0, 3, 60)
        series = TransportSeries(t, t**3, "x2", time_averages=t**3, metadata={"m": 2})
        report = diffusion_exponents(series)
        assert report.clipped
        assert report.upper == 1.0

    def test_short_series_is_fit_error(self) -> None:
        t = np.linspace(1, 10, 20)
        with pytest.raises(FitError):
            diffusion_exponents(TransportSeries(t, t, "x", time_averages=t))

    def test_series_must_increase(self) -> None:
        with pytest.raises(DomainError):
            TransportSeries(np.array([0.0, 2.0, 1.0]), np.zeros(3), "x")


class TestResolventTransport:
    """Тесты для тождества Планшереля"""

    def test_single_site(self) -> None:
        op = OperatorMatrix.from_dense([[0.3]])
        result = resolvent_transport(op, StateVector.delta(1, 0), 0.2)
        assert result.time_side[0] == pytest.approx(1.0, abs=1e-8)
        assert result.energy_side[0] == pytest.approx(1.0, abs=1e-8)

    def test_random_matrix_all_sites(self) -> None:
        op = random_hermitian(50, seed=7)
        psi = StateVector.delta(50, 0)
        result = resolvent_transport(op, psi, 0.1)
        assert result.difference < 1e-6
        np.testing.assert_allclose(result.time_side, result.closed_form, atol=1e-8)
        for side in (result.time_side, result.energy_side, result.closed_form):
            assert side.sum() == pytest.approx(1.0, abs=1e-8)

    def test_non_positive_eta(self) -> None:
        with pytest.raises(DomainError):
            resolvent_transport(free_chain(4), StateVector.delta(4, 0), 0.0)

    @pytest.mark.slow
    def test_identity_on_random_matrices(self) -> None:
        """20 случайных эрмитовых матриц размерности ≤ 200, η ∈ {0.05, 0.1, 0.5}"""
        rng = np.random.default_rng(13)
        for index in range(20):
            n = int(rng.integers(10, 201))
            op = random_hermitian(n, seed=100 + index)
            psi = StateVector.from_amplitudes(rng.normal(size=n) + 1j * rng.normal(size=n))
            site = int(rng.integers(0, n))
            for eta in (0.05, 0.1, 0.5):
                result = resolvent_transport(op, psi, eta, x=site)
                assert result.difference < 1e-6


class TestTransportProfile:
    """Тесты для моментов M̂_ψ(β, η)"""

    def test_eigenvector_has_zero_exponent(self) -> None:
        op = free_chain(40)
        _, vectors = op.eigensystem
        profile = transport_profile(op, StateVector(vectors[:, 5]), [0.05, 0.1, 0.5], 1.0, origin=20)
        assert profile.fitted_r == 0.0

    @pytest.mark.integration
    def test_free_chain_ballistic_exponent(self) -> None:
        op = free_chain(2001)
        psi = StateVector.delta(2001, 1000)
        profile = transport_profile(op, psi, np.logspace(-2, -1, 6), 1.0)
        assert profile.fitted_r == pytest.approx(1.0, abs=0.1)
        assert np.all(profile.inner_mass <= 1.0 + 1e-10)

    @pytest.mark.slow
    def test_localized_chain_exponent(self) -> None:
        op = disordered_chain(1000, 10.0)
        profile = transport_profile(op, StateVector.delta(1000, 500), np.logspace(-2, -1, 6), 1.0)
        assert profile.fitted_r <= 0.1
