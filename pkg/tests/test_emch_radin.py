"""
Тесты для emch_radin
Кривая возврата к равновесию, огибающая и конечный объем
"""

import logging
import math

import numpy as np
import pytest
import scipy.linalg

from src.emch_radin import (
    DecayCurve,
    DecayKind,
    EmchRadinSpec,
    decay_curve,
    decay_envelope_classify,
    delta_coefficient,
    exact_decay,
    finite_volume_magnetization,
    halving_oracle,
    mc_decay,
    neighborhood_contained,
    curves_agree,
    nonrandom_profile_decay,
    reference_forms,
    upper_envelope,
)
from src.utils.exceptions import DomainError, SizeError, UnsupportedOperationError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


def nearest(d, law, beta=1.0, gamma=1.0):
    return EmchRadinSpec.nearest_neighbor(d, beta, law, gamma)


class TestSpec:
    """Тесты для EmchRadinSpec"""

    def test_nearest_neighbor_coordination(self, bernoulli) -> None:
        for d in (1, 2, 3):
            spec = nearest(d, bernoulli, beta=0.3)
            assert spec.coordination == 2 * d
            assert np.all(spec.epsilons == 0.3)

    def test_self_coupling_rejected(self) -> None:
        with pytest.raises(DomainError):
            EmchRadinSpec(1, 1.0, {(0,): 0.5, (1,): 1.0})

    def test_negative_epsilon_rejected(self) -> None:
        with pytest.raises(DomainError):
            EmchRadinSpec(1, 1.0, {(1,): -0.5})

    def test_offset_dimension_checked(self) -> None:
        with pytest.raises(DomainError):
            EmchRadinSpec(2, 1.0, {(1,): 0.5})

    def test_stability_flags(self, uniform, gaussian) -> None:
        bounded = nearest(2, uniform).stability()
        assert bounded == {"profile_class": "l1", "first_kind": True, "second_kind": True}
        unbounded = nearest(2, gaussian).stability()
        assert unbounded["first_kind"] is False
        assert unbounded["second_kind"] is False
        assert EmchRadinSpec.halving_chain().stability()["second_kind"] is True


class TestDelta:
    """Тесты для δ начального состояния"""

    def test_trace_ratio_oracle(self) -> None:
        for gamma in (0.3, 1.0, 2.5):
            weight = scipy.linalg.expm(-gamma * SIGMA_X)
            oracle = np.trace(SIGMA_X @ weight) / np.trace(weight)
            assert delta_coefficient(gamma) == pytest.approx(oracle, abs=1e-14)

    def test_known_value(self) -> None:
        assert delta_coefficient(1.0) == pytest.approx(-0.76159, abs=1e-5)

    def test_projector_limit(self) -> None:
        assert delta_coefficient(50.0) == pytest.approx(-1.0)

    def test_degenerate_gamma_warns(self, caplog) -> None:
        with caplog.at_level(logging.WARNING):
            assert delta_coefficient(0.0) == 0.0
        assert "вырождено" in caplog.text


class TestExactDecay:
    """Тесты для точной кривой g(t)"""

    def test_closed_forms(self, bernoulli, uniform, gaussian) -> None:
        t = np.linspace(0.0, 4.0, 41)
        np.testing.assert_allclose(exact_decay(nearest(2, bernoulli, 0.7), t), np.cos(1.4 * t) ** 4, atol=1e-14)
        np.testing.assert_allclose(
            exact_decay(nearest(2, uniform, 0.7), t), np.sinc(1.4 * t / np.pi) ** 4, atol=1e-14
        )
        np.testing.assert_allclose(
            exact_decay(nearest(1, gaussian, 0.7), t), np.exp(-2 * 0.49 * t**2), atol=1e-14
        )

    def test_uniform_reference_value(self, uniform) -> None:
        value = exact_decay(nearest(2, uniform), 1.0)
        assert value == pytest.approx((math.sin(2.0) / 2.0) ** 4, rel=1e-12)
        assert value == pytest.approx(0.04273, abs=1e-4)

    def test_starts_at_one_and_bounded(self, bernoulli, uniform, gaussian) -> None:
        t = np.linspace(0.0, 30.0, 3001)
        for law in (bernoulli, uniform, gaussian):
            values = exact_decay(nearest(3, law, 0.4), t)
            assert values[0] == 1.0
            assert np.all(np.abs(values) <= 1.0)

    def test_halving_chain_oracle(self) -> None:
        t = np.linspace(-40.0, 40.0, 801)
        values = exact_decay(EmchRadinSpec.halving_chain(), t)
        np.testing.assert_allclose(values, halving_oracle(t), atol=1e-12)
        np.testing.assert_allclose(values, values[::-1], atol=1e-12)

    def test_uncertified_tail(self) -> None:
        with pytest.raises(SizeError):
            exact_decay(EmchRadinSpec.halving_chain(cutoff=5), 100.0)

    def test_curve_carries_delta_and_stability(self, uniform) -> None:
        curve = decay_curve(nearest(2, uniform, gamma=0.5), np.linspace(0, 2, 5))
        assert curve.delta == pytest.approx(-math.tanh(0.5))
        np.testing.assert_allclose(curve.f, curve.delta * curve.values)
        assert curve.metadata["second_kind"] is True
        assert curve.metadata["law"] == "uniform"


class TestDecayCurve:
    """Тесты для инвариантов DecayCurve"""

    def test_rejects_values_above_one(self) -> None:
        with pytest.raises(DomainError):
            DecayCurve(np.array([0.0, 1.0]), np.array([1.0, 1.5]), delta=-0.5)

    def test_rejects_wrong_value_at_zero(self) -> None:
        with pytest.raises(DomainError):
            DecayCurve(np.array([0.0, 1.0]), np.array([0.9, 0.5]), delta=-0.5)


class TestMonteCarlo:
    """Тесты для MC кривой против замкнутых форм"""

    def test_bernoulli_is_exact(self, bernoulli, seed) -> None:
        spec = nearest(2, bernoulli)
        t = np.linspace(0.0, 5.0, 50)
        curve = mc_decay(spec, t, 1000, seed, n_workers=1)
        np.testing.assert_allclose(curve.values, np.cos(2 * t) ** 4, atol=1e-12)

    def test_uniform_reference_point(self, uniform, seed) -> None:
        curve = mc_decay(nearest(2, uniform), np.array([1.0]), 4000, seed, n_workers=1)
        target = (math.sin(2.0) / 2.0) ** 4
        assert abs(curve.values[0] - target) <= 4 * curve.std_error[0]

    @pytest.mark.parametrize("d", [1, 2])
    def test_grid_agreement(self, uniform, gaussian, seed, d) -> None:
        t = np.linspace(0.0, 3.0, 50)
        for law in (uniform, gaussian):
            spec = nearest(d, law)
            curve = mc_decay(spec, t, 4000, seed, n_workers=1)
            deviation = np.abs(curve.values - exact_decay(spec, t))
            assert np.all(deviation <= 4 * curve.std_error + 1e-12)
            assert curve.values[0] == 1.0

    def test_too_few_samples(self, uniform, seed) -> None:
        with pytest.raises(DomainError):
            mc_decay(nearest(1, uniform), np.array([1.0]), 100, seed)

    def test_reproducible(self, gaussian, seed) -> None:
        spec = nearest(1, gaussian)
        t = np.array([0.5, 1.0])
        first = mc_decay(spec, t, 1000, seed, n_workers=1)
        second = mc_decay(spec, t, 1000, seed, n_workers=1)
        np.testing.assert_array_equal(first.values, second.values)

    def test_agreement_fraction(self, uniform, seed) -> None:
        spec = nearest(2, uniform)
        t = np.linspace(0.0, 2.0, 21)
        exact = decay_curve(spec, t)
        mc = mc_decay(spec, t, 2000, seed, n_workers=1)
        assert curves_agree(exact, mc, n_sigma=5.0) == 1.0
        with pytest.raises(DomainError):
            curves_agree(exact, exact)


class TestEnvelope:
    """Тесты для классификации огибающей"""

    def test_bernoulli_almost_periodic(self, bernoulli) -> None:
        curve = decay_curve(nearest(2, bernoulli), np.linspace(0.0, 100.0, 20001))
        verdict = decay_envelope_classify(curve)
        assert verdict.kind is DecayKind.ALMOST_PERIODIC
        assert verdict.recurrence > 0.99

    def test_uniform_power_law(self, uniform) -> None:
        curve = decay_curve(nearest(2, uniform), np.linspace(0.0, 200.0, 80001))
        verdict = decay_envelope_classify(curve)
        assert verdict.kind is DecayKind.POWER_LAW
        assert verdict.exponent == pytest.approx(-4.0, rel=0.1)
        assert verdict.power_r2 > verdict.gaussian_r2

    def test_gaussian_like(self, gaussian) -> None:
        curve = decay_curve(nearest(1, gaussian), np.linspace(0.0, 20.0, 4001))
        verdict = decay_envelope_classify(curve)
        assert verdict.kind is DecayKind.GAUSSIAN_LIKE
        assert verdict.gaussian_rate == pytest.approx(2.0, rel=1e-6)

    def test_exponential_is_inconclusive(self) -> None:
        t = np.linspace(0.0, 600.0, 60001)
        verdict = decay_envelope_classify(DecayCurve(t, np.exp(-t), delta=-0.5))
        assert verdict.kind is DecayKind.INCONCLUSIVE
        assert verdict.power_r2 is not None and verdict.gaussian_r2 is not None

    def test_upper_envelope_is_non_increasing(self) -> None:
        envelope = upper_envelope([1.0, -0.2, 0.5, 0.1, -0.3, 0.0])
        np.testing.assert_array_equal(envelope, [1.0, 0.5, 0.5, 0.3, 0.3, 0.0])

    def test_needs_two_decades(self, uniform) -> None:
        curve = decay_curve(nearest(1, uniform), np.linspace(1.0, 10.0, 50))
        with pytest.raises(DomainError):
            decay_envelope_classify(curve)


class TestReferenceForms:
    """Тесты для справочных замкнутых форм"""

    def test_uniform_forms_differ_by_beta(self, uniform) -> None:
        t = np.linspace(0.0, 3.0, 31)
        forms = reference_forms(nearest(2, uniform, beta=0.5), t)
        np.testing.assert_allclose(forms["reference"], forms["derived"] * 0.5**4, atol=1e-15)

    def test_uniform_forms_agree_at_unit_beta(self, uniform) -> None:
        forms = reference_forms(nearest(2, uniform), np.linspace(0.0, 3.0, 31))
        assert forms["max_difference"] < 1e-14

    def test_gaussian_forms(self, gaussian) -> None:
        t = np.linspace(0.0, 2.0, 21)
        forms = reference_forms(nearest(1, gaussian), t)
        np.testing.assert_allclose(forms["derived"], np.exp(-2 * t**2), atol=1e-15)
        np.testing.assert_allclose(forms["reference"], np.exp(-4 * t**2), atol=1e-15)

    def test_not_defined_for_long_range(self) -> None:
        with pytest.raises(UnsupportedOperationError):
            reference_forms(EmchRadinSpec.halving_chain(), 1.0)


class TestNonrandomProfile:
    """Тесты для цепочки с ε(|n|) = 2^{−|n|−1}"""

    def test_matches_product_formula(self) -> None:
        curve = nonrandom_profile_decay(np.linspace(0.0, 200.0, 80001))
        assert curve.values[0] == 1.0
        assert curve.metadata["oracle_deviation"] < 1e-12

    def test_algebraic_envelope(self) -> None:
        curve = nonrandom_profile_decay(np.linspace(0.0, 200.0, 80001))
        assert curve.metadata["envelope"] == DecayKind.POWER_LAW.value
        assert curve.metadata["exponent"] == pytest.approx(-2.0, rel=0.1)


class TestFiniteVolume:
    """Тесты для ⟨σ^x_{i0}⟩ в конечном объеме"""

    def test_matches_infinite_volume(self, bernoulli, seed) -> None:
        spec = nearest(2, bernoulli, beta=0.7)
        t = np.array([0.0, 0.3, 1.1, 2.5])
        values = finite_volume_magnetization(spec, 3, t, seed)
        np.testing.assert_allclose(values, delta_coefficient(1.0) * exact_decay(spec, t), atol=1e-14)

    def test_initial_value_is_delta(self, uniform, seed) -> None:
        spec = nearest(2, uniform, gamma=0.4)
        assert finite_volume_magnetization(spec, 3, 0.0, seed) == pytest.approx(-math.tanh(0.4))

    def test_dense_oracle_chain(self, bernoulli, seed) -> None:
        spec = nearest(1, bernoulli, beta=0.6, gamma=0.8)
        t = np.linspace(0.2, 3.0, 5)
        product = finite_volume_magnetization(spec, 8, t, seed)
        dense = finite_volume_magnetization(spec, 8, t, seed, method="dense")
        np.testing.assert_allclose(dense, product, atol=1e-10)

    def test_dense_oracle_random_square(self, uniform, seed) -> None:
        spec = nearest(2, uniform, beta=0.9)
        t = np.linspace(0.1, 4.0, 5)
        product = finite_volume_magnetization(spec, 3, t, seed)
        dense = finite_volume_magnetization(spec, 3, t, seed, method="dense")
        np.testing.assert_allclose(dense, product, atol=1e-10)

    def test_dense_oracle_long_range(self, seed) -> None:
        spec = EmchRadinSpec.halving_chain(cutoff=10, gamma=1.3)
        t = np.linspace(0.5, 6.0, 5)
        product = finite_volume_magnetization(spec, 8, t, seed, site=(2,))
        dense = finite_volume_magnetization(spec, 8, t, seed, site=(2,), method="dense")
        np.testing.assert_allclose(dense, product, atol=1e-10)

    def test_nested_volumes_agree_exactly(self, uniform, seed) -> None:
        spec = nearest(2, uniform)
        t = np.linspace(0.0, 5.0, 11)
        inner = finite_volume_magnetization(spec, 3, t, seed)
        outer = finite_volume_magnetization(spec, 5, t, seed)
        np.testing.assert_array_equal(inner, outer)

    def test_neighborhood_containment(self, uniform) -> None:
        spec = nearest(2, uniform)
        assert neighborhood_contained(spec, 3)
        assert not neighborhood_contained(spec, 2)

    def test_site_outside_volume(self, uniform, seed) -> None:
        with pytest.raises(DomainError):
            finite_volume_magnetization(nearest(2, uniform), 3, 1.0, seed, site=(3, 0))

    def test_dense_size_limit(self, uniform, seed) -> None:
        with pytest.raises(SizeError):
            finite_volume_magnetization(nearest(2, uniform), 4, 1.0, seed, method="dense")

    def test_unknown_method(self, uniform, seed) -> None:
        with pytest.raises(DomainError):
            finite_volume_magnetization(nearest(1, uniform), 3, 1.0, seed, method="sparse")
