"""
Каталог экспериментов: имя -> схема параметров и обработчик
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple, Type

import numpy as np

from src.bethe import (
    BetheModelSpec,
    extended_states_criteria,
    free_root_green,
    root_green,
    tree_transport,
)
from src.cli.artifacts import ExperimentResult
from src.cli.schemas import (
    AlmostMathieuParams,
    AndersonMomentsParams,
    AndersonParams,
    BetheCriteriaParams,
    BetheGreenParams,
    BetheTransportParams,
    CantorParams,
    CesaroParams,
    EaBoundParams,
    EaFreeEnergyParams,
    EaLatticeParams,
    EmchDecayParams,
    ExperimentParams,
    JacobiSpectrumParams,
    KroneckerParams,
    MobilityEdgesParams,
    SojournParams,
    TransportParams,
)
from src.core.serialization import to_jsonable
from src.disorder import RealizationSeed
from src.ea_glass import (
    cluster_decomposition_bound,
    finite_lattice_ground_state,
    lattice_energy_average,
    lower_bound_e,
    random_lattice,
    self_averaging_variance,
    stability_constant,
)
from src.emch_radin import (
    EmchRadinSpec,
    curves_agree,
    decay_curve,
    decay_envelope_classify,
    mc_decay,
    reference_forms,
    upper_envelope,
)
from src.lattice_operators import (
    AndersonSpec,
    KroneckerSumSpec,
    SparseJacobiSpec,
    almost_mathieu_scan,
    build_anderson,
    build_sparse_jacobi,
    classify_energy,
    finite_volume_classify,
    kronecker_spectrum,
    mobility_edges,
    zone_criterion,
)
from src.quantum_dynamics import (
    StateVector,
    diffusion_exponents,
    distances,
    moments,
    sojourn_time,
    transport_profile,
)
from src.spectral_measures import (
    cantor_measure,
    cesaro_decay,
    fs_transform,
    point_mass,
    rajchman_test,
    uniform_density,
)
from src.utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

Handler = Callable[[ExperimentParams, RealizationSeed, int], ExperimentResult]


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    topic: str
    schema: Type[ExperimentParams]
    handler: Handler


def _interior_energies(count: int) -> np.ndarray:
    return np.linspace(-2.0, 2.0, count + 2)[1:-1]


def run_mobility_edges(
    p: MobilityEdgesParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    edges = mobility_edges(p.beta, p.v)
    spec = SparseJacobiSpec(p.beta, p.v, 2, 0.7, seed)
    energies = _interior_energies(p.n_energies)
    return ExperimentResult(
        report={**to_jsonable(edges), "empty": edges.is_empty},
        columns={
            "lambda": energies,
            "criterion": [zone_criterion(p.beta, p.v, lam) for lam in energies],
            "zone": [classify_energy(spec, float(lam)).value for lam in energies],
        },
        summary=f"λ± = {edges.lower}, {edges.upper}",
    )


def run_jacobi_spectrum(
    p: JacobiSpectrumParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    spec = SparseJacobiSpec(p.beta, p.v, p.n_max, p.phi, seed)
    eigenvalues = build_sparse_jacobi(spec).eigenvalues()
    zones = finite_volume_classify(spec, _interior_energies(p.n_energies), p.n_realizations)
    return ExperimentResult(
        report={
            "agreement_fraction": zones.agreement_fraction,
            "threshold": zones.threshold,
            "barriers_per_realization": zones.barriers_per_realization,
            "n_eigenvalues": int(eigenvalues.size),
            "spectrum_range": [float(eigenvalues[0]), float(eigenvalues[-1])],
        },
        columns={
            "energy": zones.energies,
            "mean_log_growth": zones.mean_log_growth,
            "std_error": zones.std_error,
            "measured": [zone.value for zone in zones.measured],
            "predicted": [zone.value for zone in zones.predicted],
        },
        summary=f"согласие зон {zones.agreement_fraction:.1%}",
    )


def run_kronecker(p: KroneckerParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    spec = KroneckerSumSpec(
        SparseJacobiSpec(p.beta, p.v, p.n_a, p.phi, seed.child(0)),
        SparseJacobiSpec(p.beta, p.v, p.n_b, p.phi, seed.child(1)),
        p.theta,
    )
    measure = kronecker_spectrum(spec)
    return ExperimentResult(
        report={"n_atoms": measure.n_atoms, "total_mass": measure.total_mass, "theta": p.theta},
        columns={"position": measure.positions, "weight": measure.weights},
        summary=f"{measure.n_atoms} атомов",
    )


def run_cantor(p: CantorParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    measure = cantor_measure(p.depth)
    times = np.linspace(0.0, p.t_max, p.n_times)
    transform = fs_transform(measure, times)
    report = rajchman_test(measure, times[1:], p.n_windows)
    return ExperimentResult(
        report={"n_atoms": measure.n_atoms, "rajchman": to_jsonable(report)},
        columns={"t": times, "re": np.real(transform), "im": np.imag(transform)},
        summary=f"вердикт {report.verdict}",
    )


def run_cesaro(p: CesaroParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    if p.measure == "cantor":
        measure = cantor_measure(p.depth)
    elif p.measure == "uniform":
        measure = uniform_density(p.n_atoms)
    else:
        measure = point_mass()
    horizons = np.geomspace(p.t_min, p.t_max, p.n_times)
    fit = cesaro_decay(measure, horizons)
    return ExperimentResult(
        report={
            "measure": p.measure,
            "alpha": fit.alpha,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
        },
        columns={"T": fit.times, "average": fit.averages},
        summary=f"α̂ = {fit.alpha:.4f}",
    )


def _anderson_setup(p: AndersonParams, seed: RealizationSeed):
    op = build_anderson(AndersonSpec(p.dim, p.box_side, p.law(), p.v, seed))
    center = op.site_index((p.box_side // 2,) * p.dim)
    return op, center, StateVector.delta(op.dimension, center)


def run_anderson_moments(
    p: AndersonMomentsParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    op, center, psi = _anderson_setup(p, seed)
    series = moments(op, psi, p.m, np.linspace(0.0, p.t_max, p.n_times), origin=center)
    exponents = diffusion_exponents(series, p.m)
    return ExperimentResult(
        report={"exponents": to_jsonable(exponents), "origin": center},
        columns=series.to_columns(),
        summary=f"β± = [{exponents.lower:.3f}, {exponents.upper:.3f}]",
    )


def run_sojourn(p: SojournParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    op, center, psi = _anderson_setup(p, seed)
    region = np.flatnonzero(distances(op, center) <= p.radius)
    result = sojourn_time(op, psi, region, p.t_max)
    return ExperimentResult(
        report={**to_jsonable(result), "region_size": int(region.size)},
        summary=f"J = {result.value:.6g}",
    )


def run_transport(p: TransportParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    op, center, psi = _anderson_setup(p, seed)
    etas = np.geomspace(p.eta_min, p.eta_max, p.n_etas)
    profile = transport_profile(op, psi, etas, p.beta_exp, origin=center, b=p.b)
    return ExperimentResult(
        report={"fitted_r": profile.fitted_r, "beta_exp": profile.beta_exp},
        columns={
            "eta": profile.etas,
            "moment": profile.moments,
            "inner_mass": profile.inner_mass,
            "ballistic_margin": profile.ballistic_margin,
        },
        summary=f"r = {profile.fitted_r:.3f}",
    )


def _bethe_spec(p) -> BetheModelSpec:
    return BetheModelSpec(p.K, p.lam, p.law())


def run_bethe_green(
    p: BetheGreenParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    zeta = complex(p.energy, p.eta)
    stats = root_green(_bethe_spec(p), zeta, p.pool_size, p.generations, seed, p.root_degree)
    return ExperimentResult(
        report={
            "zeta": zeta,
            "root_degree": stats.root_degree,
            "generations": stats.generations,
            "mean": stats.mean,
            "density": stats.density,
            "mean_density": stats.mean_density,
            "im_positive_fraction": stats.im_positive_fraction,
            "threshold": stats.threshold,
            "free_tree": free_root_green(p.K, zeta, p.root_degree),
        },
        columns={"re": np.real(stats.samples), "im": np.imag(stats.samples)},
        summary=f"плотность {stats.density:.5f}",
    )


def run_bethe_criteria(
    p: BetheCriteriaParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    report = extended_states_criteria(
        _bethe_spec(p), p.energy, p.etas, p.pool_size, p.generations, seed
    )
    return ExperimentResult(
        report=report.to_dict(), summary=f"a.c. область: {report.in_ac_region}"
    )


def run_bethe_transport(
    p: BetheTransportParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    result = tree_transport(
        _bethe_spec(p),
        p.eta,
        radius_cap=p.radius_cap,
        energy=p.energy,
        n_energies=p.n_energies,
        pool_size=p.pool_size,
        n_paths=p.n_paths,
        generations=p.generations,
        seed=seed,
    )
    return ExperimentResult(
        report={
            "eta": result.eta,
            "energy": result.energy,
            "total_mass": result.total_mass,
            "slope_bound": result.slope_bound,
            "b_values": result.b_values,
            "inner_mass": result.inner_mass,
        },
        columns={
            "radius": result.radii,
            "sphere_mass": result.sphere_mass,
            "normalized_profile": result.normalized_profile,
        },
        summary=f"полная масса {result.total_mass:.6f}",
    )


def run_ea_bound(p: EaBoundParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    report = lower_bound_e(p.d, p.law(), p.mode, seed, p.n_samples, n_workers)
    return ExperimentResult(report=report.to_dict(), summary=f"e ≥ {report.bound}")


def run_ea_lattice(p: EaLatticeParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    estimate = lattice_energy_average(p.d, p.L, p.law(), p.n_samples, seed, p.periodic, n_workers)
    instance = random_lattice(p.d, p.L, p.law(), seed, p.periodic)
    ground = finite_lattice_ground_state(instance)
    return ExperimentResult(
        report={
            "mean_per_site": estimate.mean,
            "std_error": estimate.std_error,
            "n_samples": estimate.n_samples,
            "sample_ground_energy": ground.energy,
            "sample_cluster_bound": cluster_decomposition_bound(instance) if p.periodic else None,
            "sample_minimizer": ground.minimizer.spins,
        },
        summary=f"Av(E)/|Λ| = {estimate.mean:.5f}",
    )


def run_ea_free_energy(
    p: EaFreeEnergyParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    law = p.law()
    stability = stability_constant(1, law, p.temperature) if law.is_bounded else None
    report = self_averaging_variance(p.sizes, law, p.temperature, p.n_realizations, seed, n_workers)
    return ExperimentResult(
        report={
            "variance_decreasing": report.variance_decreasing,
            "stability_constant": stability,
            "temperature": report.temperature,
        },
        columns={"n": report.sizes, "mean": report.means, "variance": report.variances},
        summary=f"дисперсия убывает: {report.variance_decreasing}",
    )


def run_emch_decay(p: EmchDecayParams, seed: RealizationSeed, n_workers: int) -> ExperimentResult:
    spec = EmchRadinSpec.nearest_neighbor(p.d, p.beta, p.law(), p.gamma)
    times = np.linspace(0.0, p.t_max, p.n_times)
    exact = decay_curve(spec, times)
    mc = mc_decay(spec, times, p.samples, seed, n_workers)
    verdict = decay_envelope_classify(exact)
    forms = reference_forms(spec, times)
    return ExperimentResult(
        report={
            "verdict": to_jsonable(verdict),
            "delta": exact.delta,
            "stability": exact.metadata,
            "mc_agreement_3sigma": curves_agree(exact, mc),
            "reference_max_difference": forms["max_difference"],
        },
        columns={
            "t": times,
            "g_exact": exact.values,
            "g_mc": mc.values,
            "stderr": mc.std_error,
            "envelope": upper_envelope(exact.values),
            "g_reference": forms["reference"],
        },
        summary=f"огибающая {verdict.kind.value}",
    )


def run_almost_mathieu(
    p: AlmostMathieuParams, seed: RealizationSeed, n_workers: int
) -> ExperimentResult:
    rows = almost_mathieu_scan(p.lambdas, p.n_max, p.omega, p.theta, p.n_energies)
    columns = {key: [row[key] for row in rows] for key in rows[0]}
    return ExperimentResult(
        report={"n_lambdas": len(rows), "omega": p.omega},
        columns=columns,
        summary=f"{len(rows)} значений λ",
    )


_EXPERIMENTS: Tuple[Experiment, ...] = (
    Experiment(
        "mobility-edges",
        "Края подвижности λ± разреженной модели Якоби",
        "sparse Jacobi: zone criterion",
        MobilityEdgesParams,
        run_mobility_edges,
    ),
    Experiment(
        "jacobi-spectrum",
        "Спектр и классификация зон по росту решений",
        "sparse Jacobi: transfer matrices",
        JacobiSpectrumParams,
        run_jacobi_spectrum,
    ),
    Experiment(
        "kronecker",
        "Спектральная мера суммы Кронекера",
        "sparse Jacobi: tensor sums",
        KroneckerParams,
        run_kronecker,
    ),
    Experiment(
        "cantor",
        "Фурье-Стилтьес канторовой меры и тест Райхмана",
        "spectral measures: Rajchman",
        CantorParams,
        run_cantor,
    ),
    Experiment(
        "cesaro",
        "Убывание средних по Чезаро ⟨|μ̂|²⟩_T",
        "spectral measures: Hausdorff dimension",
        CesaroParams,
        run_cesaro,
    ),
    Experiment(
        "anderson-moments",
        "Моменты ⟨|X|^m⟩ и показатели диффузии",
        "quantum dynamics: moments",
        AndersonMomentsParams,
        run_anderson_moments,
    ),
    Experiment(
        "sojourn",
        "Время пребывания в области",
        "quantum dynamics: RAGE",
        SojournParams,
        run_sojourn,
    ),
    Experiment(
        "transport",
        "Транспорт через резольвенту и показатель r",
        "quantum dynamics: resolvent",
        TransportParams,
        run_transport,
    ),
    Experiment(
        "bethe-green",
        "Распределение G(0,0;ζ) на дереве Бете",
        "Bethe lattice: population dynamics",
        BetheGreenParams,
        run_bethe_green,
    ),
    Experiment(
        "bethe-criteria",
        "Критерии протяженных состояний L, φ(1) и log K",
        "Bethe lattice: extended states",
        BetheCriteriaParams,
        run_bethe_criteria,
    ),
    Experiment(
        "bethe-transport",
        "Профиль по сферам и баллистическая граница",
        "Bethe lattice: transport",
        BetheTransportParams,
        run_bethe_transport,
    ),
    Experiment(
        "ea-bound",
        "Кластерная нижняя граница энергии основного состояния",
        "Edwards-Anderson: cluster bound",
        EaBoundParams,
        run_ea_bound,
    ),
    Experiment(
        "ea-lattice",
        "Основные состояния конечных решеток перебором",
        "Edwards-Anderson: finite lattices",
        EaLatticeParams,
        run_ea_lattice,
    ),
    Experiment(
        "ea-free-energy",
        "Самоусреднение свободной энергии цепочки",
        "Edwards-Anderson: self-averaging",
        EaFreeEnergyParams,
        run_ea_free_energy,
    ),
    Experiment(
        "emch-decay",
        "Возврат к равновесию g(t): точно, MC и огибающая",
        "Emch-Radin: return to equilibrium",
        EmchDecayParams,
        run_emch_decay,
    ),
    Experiment(
        "almost-mathieu",
        "Переход почти-Матье: IPR и показатель Ляпунова",
        "almost Mathieu: metal-insulator",
        AlmostMathieuParams,
        run_almost_mathieu,
    ),
)

EXPERIMENTS: Dict[str, Experiment] = {experiment.name: experiment for experiment in _EXPERIMENTS}


def list_experiments() -> List[Tuple[str, str, str]]:
    """(имя, описание, тема) в постоянном порядке"""
    return [(e.name, e.description, e.topic) for e in _EXPERIMENTS]


def get_experiment(name: str) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise ConfigurationError(
            f"Неизвестный эксперимент {name!r}",
            details={"known": list(EXPERIMENTS)},
            experiment=name,
        )
