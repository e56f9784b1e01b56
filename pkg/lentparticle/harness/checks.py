"""Identity checks.

Statistical checks compare Monte Carlo estimates by z-score; pathwise checks
compare two exact computations configuration by configuration. Every check
draws its configurations from its own :class:`PathStreams`, evaluates them
through a picklable per-path task and reduces the rows in path order.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from lentparticle.bottom.functions import ScalarTestFunction, breakpoints
from lentparticle.bottom.measure import JumpMeasureSpec, sample_jump
from lentparticle.bottom.structure import gamma_bottom, generator_a
from lentparticle.core.errors import CapabilityError, DomainError, PreconditionError
from lentparticle.core.parallel import map_paths
from lentparticle.core.streams import PathStreams
from lentparticle.functionals.families import (
    A0Operator,
    DeterministicIntegralFunctional,
    ExponentialFunctional,
    LinearFunctional,
    StochasticIntegralFunctional,
)
from lentparticle.harness.estimators import (
    Estimate,
    estimate,
    exact,
    pathwise_report,
    relative_differences,
    statistical_report,
    z_score,
)
from lentparticle.harness.kernels import MarkKernel, ParticleKernel
from lentparticle.harness.schemas import CheckKind, EstimateReport, Verdict
from lentparticle.lent.gamma import MarkLaw, gamma_up, mark_weights
from lentparticle.lent.oracles import gamma_eq13_oracle, gamma_fd_oracle
from lentparticle.lent.particle import add_particle
from lentparticle.poisson.path import (
    Configuration,
    attach_marks,
    resample_marks,
    sample_configuration,
)

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-12
EQ13_TOLERANCE_CENTERED = 1e-10
EQ13_TOLERANCE_DRIFT = 1e-6

EQ9_NOTE = (
    "Tested with N(γ[f,g]) next to e^{iÑ(f)−iÑ(g)}; the pointwise γ[f,g] in that place "
    "contradicts Γ[Ñ(f)] = N(γ[f]) for F = G."
)


def require_interior(h: ScalarTestFunction, spec: JumpMeasureSpec) -> None:
    """
    Check that h is constant off a closed interval inside one support interval.

    Raises:
        PreconditionError: If the generator's integration by parts is not justified for h
    """
    support = h.interior_support
    if support is None:
        raise PreconditionError(f"'{h.name}' is not compactly supported inside {spec.support}")
    lo, hi = support
    if lo >= hi:
        return
    if not any(piece.lo < lo and hi < piece.hi for piece in spec.pieces):
        raise PreconditionError(
            f"Support [{lo}, {hi}] of '{h.name}' is not interior to {spec.support}"
        )


@dataclass(frozen=True)
class _PathTask:
    spec: JumpMeasureSpec
    horizon: float
    streams: PathStreams

    def configuration(self, path_index: int) -> Configuration:
        return sample_configuration(self.spec, self.horizon, self.streams.path(path_index))


def _log_start(name: str, n: int) -> None:
    logger.info(f"Running check {name}", extra={"check": name, "n_samples": n})


# Isometry


@dataclass(frozen=True)
class _IsometryTask(_PathTask):
    functional: LinearFunctional

    def __call__(self, path_index: int) -> float:
        return self.functional.evaluate(self.configuration(path_index)) ** 2


def check_isometry(
    f: ScalarTestFunction,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    z_max: float = 4.0,
    jobs: int = 1,
) -> EstimateReport:
    """𝔼[Ñ(f)²] against T∫f² dσ."""
    _log_start("isometry", n)
    task = _IsometryTask(spec, horizon, streams, LinearFunctional(f, spec, horizon))
    samples = map_paths(task, n, jobs)
    rhs = horizon * spec.integrate(lambda x: f.value(x) ** 2, breakpoints(f))
    return statistical_report("isometry", estimate(samples), exact(rhs), z_max)


# Integration by parts on the bottom space, lifted upstairs


@dataclass(frozen=True)
class _Eq1Task(_PathTask):
    f: ScalarTestFunction
    h: ScalarTestFunction
    compensator_f: float
    compensator_a: float

    def __call__(self, path_index: int) -> complex:
        x = self.configuration(path_index).sizes
        n_tilde_f = float(np.sum(self.f.value(x))) - self.compensator_f
        n_tilde_a = float(np.sum(generator_a(self.h, x, self.spec))) - self.compensator_a
        n_gamma = float(np.sum(gamma_bottom(self.f, self.h, x)))
        return complex(np.exp(1j * n_tilde_f) * (n_tilde_a + 0.5j * n_gamma))


def check_eq1(
    f: ScalarTestFunction,
    h: ScalarTestFunction,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    z_max: float = 4.0,
    jobs: int = 1,
) -> EstimateReport:
    """
    𝔼[e^{iÑ(f)} (Ñ(a[h]) + (i/2) N(γ[f, h]))] = 0.

    Raises:
        CapabilityError: If h has no second derivative
        PreconditionError: If h is not compactly supported in the interior
    """
    if not h.has_deriv2:
        raise CapabilityError(f"The generator needs a second derivative of '{h.name}'")
    require_interior(h, spec)
    _log_start("eq1", n)
    task = _Eq1Task(
        spec,
        horizon,
        streams,
        f,
        h,
        compensator_f=horizon * spec.integrate(f.value, breakpoints(f)),
        compensator_a=horizon * spec.integrate(lambda x: generator_a(h, x, spec), breakpoints(h)),
    )
    samples = map_paths(task, n, jobs, dtype=complex)
    return statistical_report("eq1", estimate(samples), exact(0.0), z_max)


# Marked sums ∫F d(N⊙ρ) with mark resampling per configuration


@dataclass(frozen=True)
class _MarkedSumTask(_PathTask):
    kernel: MarkKernel
    n_marks: int

    def __call__(self, path_index: int) -> tuple[float, float, float]:
        config = self.configuration(path_index)
        marks = resample_marks(config, self.streams.marks(path_index), self.n_marks)
        sums = self.kernel.values(config, marks).sum(axis=1)
        lhs = estimate(sums**2)

        weights = self.kernel.atom_weights(config)
        mean_mark, mean_square = self.kernel.mark_moments()
        per_atom = weights * mean_mark
        rhs = per_atom.sum() ** 2 - np.sum(per_atom**2) + np.sum(weights**2) * mean_square
        return lhs.mean.real, lhs.stderr_real, float(rhs)


def _worst_config_report(
    name: str, rows: np.ndarray, n_marks: int, z_max: float, notes: str = ""
) -> EstimateReport:
    """Report the configuration with the largest z among (lhs, stderr, rhs) rows."""
    z_values = np.array(
        [z_score(Estimate(complex(lhs), se, 0.0, n_marks), exact(rhs))[0] for lhs, se, rhs in rows]
    )
    worst = int(np.argmax(np.where(np.isnan(z_values), np.inf, z_values)))
    lhs, se, rhs = rows[worst]
    return statistical_report(
        name,
        Estimate(complex(lhs), float(se), 0.0, n_marks),
        exact(rhs),
        z_max,
        notes=notes,
        details={"configs": float(len(rows)), "worst_config": float(worst)},
    )


def check_lemma1(
    kernel: MarkKernel,
    spec: JumpMeasureSpec,
    horizon: float,
    n_paths: int,
    n_marks: int,
    streams: PathStreams,
    z_max: float = 4.0,
    jobs: int = 1,
) -> EstimateReport:
    """
    Ê(∫F d(N⊙ρ))² = ∫F² dN dρ on each configuration, for a ρ-centered kernel.

    Raises:
        PreconditionError: If the kernel is not ρ-centered
    """
    kernel.require_centered()
    _log_start("lemma1", n_paths * n_marks)
    rows = map_paths(_MarkedSumTask(spec, horizon, streams, kernel, n_marks), n_paths, jobs)
    return _worst_config_report("lemma1", rows, n_marks, z_max)


def check_second_moment_identity(
    kernel: MarkKernel,
    spec: JumpMeasureSpec,
    horizon: float,
    n_paths: int,
    n_marks: int,
    streams: PathStreams,
    z_max: float = 4.0,
    jobs: int = 1,
) -> EstimateReport:
    """Ê(∫F d(N⊙ρ))² = (∫F dρ dN)² − ∫(∫F dρ)² dN + ∫F² dρ dN for any kernel."""
    _log_start("second_moment", n_paths * n_marks)
    rows = map_paths(_MarkedSumTask(spec, horizon, streams, kernel, n_marks), n_paths, jobs)
    return _worst_config_report("second_moment", rows, n_marks, z_max)


# Creation operator


@dataclass(frozen=True)
class _Eq6Task(_PathTask):
    kernel: ParticleKernel
    n_inner: int

    def __call__(self, path_index: int) -> tuple[float, float]:
        config = self.configuration(path_index)
        rhs = self.kernel.sum_over_atoms(config)
        aux = self.streams.auxiliary(path_index)
        alphas = aux.uniform(0.0, self.horizon, self.n_inner)
        sizes = sample_jump(self.spec, aux.random(self.n_inner))
        lent_values = [
            float(self.kernel(add_particle(config, alpha, x), x)) for alpha, x in zip(alphas, sizes)
        ]
        lhs = self.spec.total_mass * self.horizon * float(np.mean(lent_values))
        return lhs, rhs


def check_eq6(
    kernel: ParticleKernel,
    spec: JumpMeasureSpec,
    horizon: float,
    n_paths: int,
    n_inner: int,
    streams: PathStreams,
    z_max: float = 4.0,
    jobs: int = 1,
) -> EstimateReport:
    """𝔼∫ε⁺H dν = 𝔼∫H dN, lending ``n_inner`` particles per path."""
    _log_start("eq6", n_paths)
    rows = map_paths(_Eq6Task(spec, horizon, streams, kernel, n_inner), n_paths, jobs)
    lhs, rhs = rows[:, 0], rows[:, 1]
    return statistical_report(
        "eq6",
        estimate(lhs),
        estimate(rhs),
        z_max,
        difference=estimate(lhs - rhs),
        details={"n_inner": float(n_inner)},
    )


@dataclass(frozen=True)
class _Eq7Task(_PathTask):
    kernel: MarkKernel

    def __call__(self, path_index: int) -> tuple[float, float, float]:
        config = self.configuration(path_index)
        marks = attach_marks(config, self.streams.marks(path_index)).values
        rhs = float(np.sum(self.kernel.values(config, marks)))
        lhs = 0.0
        mismatches = 0
        for i, atom in enumerate(config.atoms):
            if add_particle(config, atom.time, atom.size) is not config:
                mismatches += 1
            # ε⁺ at a charged point: ω rebuilt by lending the atom back to ω − δ_i.
            lent = add_particle(config.without_atom(i), atom.time, atom.size)
            lhs += float(self.kernel.atom_weights(lent)[i] * self.kernel.mark_factor(marks[i]))
        return lhs, rhs, float(mismatches)


def check_eq7(
    kernel: MarkKernel,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    jobs: int = 1,
) -> EstimateReport:
    """
    ∫ε⁺F d(N⊙ρ) = ∫F d(N⊙ρ): lending at a charged point changes nothing.

    Each atom is taken out of ω and lent back at its own time and size; the
    kernel is evaluated on the rebuilt configuration, so a path factor that
    depends on time order sees every atom land in the right slot. Lending
    directly to ω at a charged time must also return ω itself; any atom where
    it does not fails the check.
    """
    _log_start("eq7", n)
    rows = map_paths(_Eq7Task(spec, horizon, streams, kernel), n, jobs).reshape(-1, 3)
    mismatches = float(np.sum(rows[:, 2]))
    report = pathwise_report(
        "eq7",
        rows[:, 0],
        rows[:, 1],
        EXACT_TOLERANCE,
        details={"charged_lend_mismatches": mismatches},
    )
    if mismatches:
        logger.warning(f"eq7: lending at {mismatches:.0f} charged atoms did not return ω")
        return report.model_copy(update={"verdict": Verdict.FAIL})
    return report


# Gradient ♯ through mark resampling


@dataclass(frozen=True)
class _Eq9Task(_PathTask):
    F: ExponentialFunctional
    G: ExponentialFunctional
    n_marks: int
    mark_laws: tuple[MarkLaw, ...]

    def __call__(self, path_index: int) -> tuple[float, ...]:
        config = self.configuration(path_index)
        x = config.sizes
        f_result = self.F.gradient(config)
        g_result = self.G.gradient(config)
        f_coeffs = x * f_result.deriv
        g_coeffs = x * g_result.deriv
        gamma = float(np.sum(np.abs(f_coeffs) ** 2))
        n_gamma_fg = float(np.sum(gamma_bottom(self.F.f, self.G.f, x)))
        rhs9 = complex(f_result.value * np.conjugate(g_result.value) * n_gamma_fg)

        z9 = float("nan")
        lhs9 = Estimate(0j, float("nan"), float("nan"), 0)
        z12 = []
        for round_index, law in enumerate(self.mark_laws):
            stream = self.streams.marks(path_index, round_index)
            marks = resample_marks(config, stream, self.n_marks)
            weights = mark_weights(marks, law)
            f_sharp = weights @ f_coeffs
            if round_index == 0:
                lhs9 = estimate(f_sharp * np.conjugate(weights @ g_coeffs))
                z9 = z_score(lhs9, exact(rhs9))[0]
            z12.append(z_score(estimate(np.abs(f_sharp) ** 2), exact(gamma))[0])

        try:
            fd_gap = float(relative_differences(gamma, gamma_fd_oracle(self.F, config)))
        except DomainError:
            logger.debug(
                f"Skipping finite differences on path {path_index}",
                extra={"path_id": path_index},
            )
            fd_gap = 0.0
        return (
            z9,
            lhs9.mean.real,
            lhs9.mean.imag,
            rhs9.real,
            rhs9.imag,
            lhs9.stderr,
            *z12,
            fd_gap,
        )


def check_eq9_eq12(
    f: ScalarTestFunction,
    g: ScalarTestFunction,
    spec: JumpMeasureSpec,
    horizon: float,
    n_paths: int,
    n_marks: int,
    streams: PathStreams,
    mark_laws: Sequence[MarkLaw] = (MarkLaw.UNIFORM_ETA, MarkLaw.GAUSSIAN),
    z_max: float = 4.0,
    jobs: int = 1,
) -> EstimateReport:
    """
    Per configuration, Ê[F♯Ḡ♯] against e^{iÑ(f)−iÑ(g)} N(γ[f, g]) and Ê|F♯|² against Γ[F].

    F = e^{iÑ(f)} and G = e^{iÑ(g)}. The cross moment uses the first mark law;
    the squared modulus is checked under every law. The verdict takes the
    largest z over configurations and both identities; the reported sides
    are the cross moment of the worst configuration.
    """
    laws = tuple(MarkLaw(law) for law in mark_laws)
    _log_start("eq9_eq12", n_paths * n_marks)
    task = _Eq9Task(
        spec,
        horizon,
        streams,
        ExponentialFunctional(f, spec, horizon),
        ExponentialFunctional(g, spec, horizon),
        n_marks,
        laws,
    )
    rows = map_paths(task, n_paths, jobs)
    z9 = rows[:, 0]
    z12 = rows[:, 6 : 6 + len(laws)]
    combined = np.fmax(np.where(np.isnan(z9), np.inf, z9), np.max(z12, axis=1, initial=0.0))
    combined = np.where(np.any(np.isnan(z12), axis=1), np.inf, combined)
    worst = int(np.argmax(combined))
    z = float(combined[worst])
    row = rows[worst]

    details = {
        "configs": float(n_paths),
        "worst_config": float(worst),
        "eq9_max_z": float(np.max(z9)),
        "fd_max_rel_gap": float(np.max(rows[:, -1])),
    }
    for k, law in enumerate(laws):
        details[f"eq12_max_z_{law.value}"] = float(np.max(z12[:, k]))

    return EstimateReport(
        name="eq9_eq12",
        kind=CheckKind.STATISTICAL,
        lhs_real=row[1],
        lhs_imag=row[2],
        rhs_real=row[3],
        rhs_imag=row[4],
        stderr=row[5],
        n_samples=n_marks,
        z_score=z if np.isfinite(z) else float("nan"),
        z_max=z_max,
        verdict=Verdict.PASS if z <= z_max else Verdict.FAIL,
        notes=EQ9_NOTE,
        details=details,
    )


# Generator on the exponential pre-domain


@dataclass(frozen=True)
class _Eq10Task(_PathTask):
    operator: A0Operator
    F: LinearFunctional
    G: LinearFunctional

    def __call__(self, path_index: int) -> tuple[complex, complex]:
        config = self.configuration(path_index)
        n_tilde_f = self.F.evaluate(config)
        n_tilde_g = self.G.evaluate(config)
        lhs = self.operator(config) * np.exp(-1j * n_tilde_g)
        n_gamma_fg = float(np.sum(gamma_bottom(self.F.f, self.G.f, config.sizes)))
        rhs = -0.5 * np.exp(1j * (n_tilde_f - n_tilde_g)) * n_gamma_fg
        return complex(lhs), complex(rhs)


def check_eq10(
    f: ScalarTestFunction,
    g: ScalarTestFunction,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    z_max: float = 4.0,
    jobs: int = 1,
) -> EstimateReport:
    """
    𝔼[A₀[F] Ḡ] = −½ 𝔼[Φ′(Ñf) Ψ̄′(Ñg) N(γ[f, g])] for F = e^{iÑ(f)}, G = e^{iÑ(g)}.

    Raises:
        CapabilityError: If f has no second derivative
        PreconditionError: If f or g is not compactly supported in the interior
    """
    require_interior(f, spec)
    require_interior(g, spec)
    _log_start("eq10", n)
    task = _Eq10Task(
        spec,
        horizon,
        streams,
        A0Operator(((1.0 + 0j, f),), spec, horizon),
        LinearFunctional(f, spec, horizon),
        LinearFunctional(g, spec, horizon),
    )
    rows = map_paths(task, n, jobs, dtype=complex)
    lhs, rhs = rows[:, 0], rows[:, 1]
    return statistical_report(
        "eq10", estimate(lhs), estimate(rhs), z_max, difference=estimate(lhs - rhs)
    )


# Pathwise agreements


@dataclass(frozen=True)
class _Eq11Task(_PathTask):
    functionals: tuple[LinearFunctional, ...]

    def __call__(self, path_index: int) -> tuple[float, ...]:
        config = self.configuration(path_index)
        engine = [gamma_up(F, config) for F in self.functionals]
        direct = [float(np.sum(gamma_bottom(F.f, F.f, config.sizes))) for F in self.functionals]
        return (*engine, *direct)


def check_eq11(
    fs: Sequence[ScalarTestFunction],
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    jobs: int = 1,
) -> EstimateReport:
    """Γ[Ñ(f)] = N(γ[f]) on every configuration, for every f."""
    _log_start("eq11", n)
    functionals = tuple(LinearFunctional(f, spec, horizon) for f in fs)
    rows = map_paths(_Eq11Task(spec, horizon, streams, functionals), n, jobs)
    k = len(functionals)
    return pathwise_report(
        "eq11",
        rows[:, :k].ravel(),
        rows[:, k:].ravel(),
        EXACT_TOLERANCE,
        details={"functions": float(k)},
    )


@dataclass(frozen=True)
class _Eq13Task(_PathTask):
    functional: StochasticIntegralFunctional

    def __call__(self, path_index: int) -> tuple[float, float]:
        config = self.configuration(path_index)
        return gamma_up(self.functional, config), gamma_eq13_oracle(self.functional.phi, config)


def eq13_tolerance(spec: JumpMeasureSpec) -> float:
    """1e−10 for centered jumps (no drift quadrature), 1e−6 otherwise."""
    return EQ13_TOLERANCE_CENTERED if spec.m1 == 0.0 else EQ13_TOLERANCE_DRIFT


def check_eq13(
    phi: ScalarTestFunction,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    jobs: int = 1,
) -> EstimateReport:
    """Γ[V] from the lent particle engine against the closed form, V = ∫φ(Y_−)dY."""
    name = f"eq13[{phi.name}]"
    _log_start(name, n)
    task = _Eq13Task(spec, horizon, streams, StochasticIntegralFunctional(phi, spec, horizon))
    rows = map_paths(task, n, jobs)
    return pathwise_report(name, rows[:, 0], rows[:, 1], eq13_tolerance(spec))


@dataclass(frozen=True)
class _WienerTask(_PathTask):
    functional: DeterministicIntegralFunctional

    def __call__(self, path_index: int) -> tuple[float, float]:
        config = self.configuration(path_index)
        direct = float(np.sum(self.functional.h.value(config.times) ** 2 * config.sizes**2))
        return gamma_up(self.functional, config), direct


def check_wiener_integral(
    h: ScalarTestFunction,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    jobs: int = 1,
) -> EstimateReport:
    """Γ[∫h(s)dY_s] = Σ h(αᵢ)² xᵢ² on every configuration."""
    _log_start("wiener_integral", n)
    task = _WienerTask(spec, horizon, streams, DeterministicIntegralFunctional(h, spec, horizon))
    rows = map_paths(task, n, jobs)
    return pathwise_report("wiener_integral", rows[:, 0], rows[:, 1], EXACT_TOLERANCE)
