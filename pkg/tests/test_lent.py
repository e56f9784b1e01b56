"""Tests for the lent particle engine: ε⁺, Γ, ♯ and the reference oracles."""

import numpy as np
import pytest

from lentparticle.bottom import functions
from lentparticle.bottom.structure import gamma_bottom
from lentparticle.core.errors import AlignmentError, CollisionError, DomainError
from lentparticle.functionals import (
    composed_functional,
    exponential_functional,
    linear_functional,
    stochastic_integral_functional,
)
from lentparticle.functionals.catalog import resolve_function
from lentparticle.functionals.families import ConstantFunctional
from lentparticle.lent import (
    MarkLaw,
    add_particle,
    gamma_eq13_oracle,
    gamma_fd_oracle,
    gamma_up,
    lent_derivative,
    mark_weights,
    sharp_realization,
    sharp_samples,
    value_and_gamma,
)
from lentparticle.poisson.path import Configuration, MarkSet, resample_marks, sample_configuration


def _jumpy_configs(spec, streams, count):
    configs = []
    i = 0
    while len(configs) < count:
        config = sample_configuration(spec, 1.0, streams.path(i))
        if len(config):
            configs.append(config)
        i += 1
    return configs


class TestAddParticle:
    """Tests for the creation operator ε⁺."""

    def test_add_to_empty(self, empty):
        """Test lending to the empty configuration."""
        lent = add_particle(empty, 0.4, 0.5)
        assert len(lent) == 1
        assert lent.atoms[0].time == 0.4
        assert len(empty) == 0

    def test_ordered_insert(self, cfg1):
        """Test the new atom lands in time order."""
        lent = add_particle(cfg1, 0.5, 0.2)
        np.testing.assert_array_equal(lent.times, [0.3, 0.5, 0.7])
        np.testing.assert_array_equal(lent.sizes, [0.5, 0.2, -0.3])
        assert len(cfg1) == 2

    def test_collision_is_identity(self, cfg1):
        """Test ε⁺ is the identity at a charged time."""
        assert add_particle(cfg1, 0.3, 0.9) is cfg1

    def test_size_outside_support(self, cfg1):
        """Test x must lie in the support."""
        with pytest.raises(DomainError, match="outside support"):
            add_particle(cfg1, 0.5, 0.0)

    def test_time_outside_horizon(self, cfg1):
        """Test α must lie in [0, T]."""
        with pytest.raises(DomainError, match="outside"):
            add_particle(cfg1, 1.2, 0.5)


class TestLentDerivative:
    """Tests for the derivative at a lent particle."""

    def test_linear_functional(self, cfg1, stable, square):
        """Test d/dx Ñ(f)(ε⁺ω) = f′(x)."""
        F = linear_functional(square, stable, 1.0)
        assert lent_derivative(F, cfg1, 0.5, 0.4) == pytest.approx(0.8)

    def test_stochastic_integral(self, cfg1, stable, identity):
        """Test d/dx V(ε⁺ω) = Y_{0.5−} + x₂ for any x."""
        V = stochastic_integral_functional(identity, stable, 1.0)
        for x in (0.2, 0.6, -0.5):
            assert lent_derivative(V, cfg1, 0.5, x) == pytest.approx(0.2)

    def test_constant_functional(self, cfg1):
        """Test constants have no derivative."""
        assert lent_derivative(ConstantFunctional(3.0), cfg1, 0.5, 0.4) == 0.0

    def test_collision(self, cfg1, stable, identity):
        """Test lending at a charged time is refused."""
        F = linear_functional(identity, stable, 1.0)
        with pytest.raises(CollisionError, match="already charged"):
            lent_derivative(F, cfg1, 0.7, 0.4)


class TestGammaUp:
    """Tests for Γ upstairs."""

    def test_linear_functional(self, cfg1, stable, identity):
        """Test Γ[Ñ(x)] = 0.5² + 0.3²."""
        F = linear_functional(identity, stable, 1.0)
        assert gamma_up(F, cfg1) == pytest.approx(0.34, rel=1e-12)

    def test_stochastic_integral_hand_value(self, cfg1, stable, identity):
        """Test Γ[V] = 0.045 for φ(y) = y on CFG1."""
        V = stochastic_integral_functional(identity, stable, 1.0)
        assert gamma_up(V, cfg1) == pytest.approx(0.045, abs=1e-12)

    def test_empty_configuration(self, empty, stable, sigmoid):
        """Test Γ vanishes without atoms."""
        for F in (
            linear_functional(sigmoid, stable, 1.0),
            exponential_functional(sigmoid, stable, 1.0),
            stochastic_integral_functional(sigmoid, stable, 1.0),
        ):
            assert gamma_up(F, empty) == 0.0

    def test_value_and_gamma(self, cfg1, stable, identity):
        """Test the single-pass value agrees with evaluate."""
        V = stochastic_integral_functional(identity, stable, 1.0)
        value, gamma = value_and_gamma(V, cfg1)
        assert value == V.evaluate(cfg1)
        assert gamma == gamma_up(V, cfg1)

    def test_exponential_is_hermitian(self, cfg1, stable, sigmoid):
        """Test |e^{iÑ(f)}| = 1 gives Γ[e^{iÑ(f)}] = Γ[Ñ(f)]."""
        F = exponential_functional(sigmoid, stable, 1.0)
        G = linear_functional(sigmoid, stable, 1.0)
        assert gamma_up(F, cfg1) == pytest.approx(gamma_up(G, cfg1), rel=1e-12)

    def test_linear_matches_bottom_gamma(self, stable, streams, identity, square, sigmoid):
        """Test Γ[Ñ(f)] = N(γ[f]) configuration by configuration."""
        fs = [identity, square, sigmoid, functions.affine(0.5, 2.0), functions.bump(0.5, 0.3)]
        linears = [(f, linear_functional(f, stable, 1.0)) for f in fs]
        for config in _jumpy_configs(stable, streams, 200):
            for f, F in linears:
                direct = float(np.sum(gamma_bottom(f, f, config.sizes)))
                engine = gamma_up(F, config)
                assert engine == pytest.approx(direct, rel=1e-12, abs=1e-15)

    def test_shift_invariance(self, cfg1, stable, sigmoid):
        """Test Γ[F + c] = Γ[F]."""
        F = stochastic_integral_functional(sigmoid, stable, 1.0)
        shifted = composed_functional(functions.affine(3.0, 1.0), F)
        assert gamma_up(shifted, cfg1) == gamma_up(F, cfg1)

    def test_chain_rule(self, cfg1, stable, sigmoid):
        """Test Γ[Φ∘F] = Φ′(F)² Γ[F]."""
        F = stochastic_integral_functional(sigmoid, stable, 1.0)
        outer = functions.sigmoid(scale=2.0)
        expected = float(outer.deriv1(F.evaluate(cfg1))) ** 2 * gamma_up(F, cfg1)
        assert gamma_up(composed_functional(outer, F), cfg1) == pytest.approx(expected, rel=1e-10)

    def test_time_blind(self, cfg1, stable, sigmoid):
        """Test Γ[Ñ(f)] ignores where the jumps happen."""
        F = linear_functional(sigmoid, stable, 1.0)
        moved = Configuration.from_arrays(stable, 1.0, [0.1, 0.9], cfg1.sizes)
        assert gamma_up(F, moved) == gamma_up(F, cfg1)

    def test_locality(self, cfg1, stable, streams, sigmoid):
        """Test F and G equal near ω have Γ[F](ω) = Γ[G](ω), while Γ tells them apart elsewhere."""
        extra = functions.bump(center=0.8, width=0.1)
        c = stable.integrate(extra.value, functions.breakpoints(extra))
        F = linear_functional(sigmoid, stable, 1.0)
        # G = F + Σ extra(xᵢ), which is F on every ω without a size in (0.7, 0.9).
        G = composed_functional(
            functions.affine(c, 1.0),
            linear_functional(functions.linear_combination(sigmoid, extra), stable, 1.0),
        )
        configs = [cfg1] + [
            config
            for config in _jumpy_configs(stable, streams, 60)
            if not np.any((config.sizes > 0.7) & (config.sizes < 0.9))
        ]
        assert len(configs) > 10
        for config in configs:
            assert G.evaluate(config) == pytest.approx(F.evaluate(config), abs=1e-9)
            assert gamma_up(G, config) == pytest.approx(gamma_up(F, config), rel=1e-14)
        inside = Configuration.from_arrays(stable, 1.0, [0.3, 0.7], [0.75, -0.3])
        assert gamma_up(G, inside) != pytest.approx(gamma_up(F, inside), rel=1e-3)


class TestSharp:
    """Tests for realisations of F♯."""

    def test_hand_value(self, cfg1, stable, identity):
        """Test marks (1, 0.5) on CFG1 give 0.5·√3."""
        F = linear_functional(identity, stable, 1.0)
        sharp = sharp_realization(F, cfg1, MarkSet((1.0, 0.5)))
        assert sharp == pytest.approx(0.8660254, abs=1e-7)

    def test_central_marks(self, cfg1, stable, sigmoid):
        """Test η(1/2) = 0 kills the gradient."""
        F = stochastic_integral_functional(sigmoid, stable, 1.0)
        assert sharp_realization(F, cfg1, MarkSet((0.5, 0.5))) == 0.0

    def test_misaligned_marks(self, cfg1, stable, identity):
        """Test marks must match atoms one to one."""
        F = linear_functional(identity, stable, 1.0)
        with pytest.raises(AlignmentError):
            sharp_realization(F, cfg1, MarkSet((0.1, 0.2, 0.3)))
        with pytest.raises(AlignmentError):
            sharp_samples(F, cfg1, np.zeros((4, 3)))

    def test_gaussian_weights(self):
        """Test the gaussian law maps marks through the normal quantile."""
        w = mark_weights(np.array([0.5, 0.975, 0.0, 1.0]), MarkLaw.GAUSSIAN)
        assert w[0] == 0.0
        assert w[1] == pytest.approx(1.959964, abs=1e-6)
        assert np.all(np.isfinite(w))

    @pytest.mark.parametrize("law", [MarkLaw.UNIFORM_ETA, MarkLaw.GAUSSIAN])
    def test_mark_average_of_square_is_gamma(self, law, cfg1, stable, identity):
        """Test Ê(F♯)² = Γ[F] over 10⁵ mark draws."""
        F = linear_functional(identity, stable, 1.0)
        marks = resample_marks(cfg1, np.random.default_rng(12), 100_000)
        samples = sharp_samples(F, cfg1, marks, law) ** 2
        se = samples.std(ddof=1) / np.sqrt(samples.size)
        assert abs(samples.mean() - gamma_up(F, cfg1)) < 4.0 * se

    def test_mark_average_is_zero(self, cfg1, stable, sigmoid):
        """Test Ê F♯ = 0."""
        F = stochastic_integral_functional(sigmoid, stable, 1.0)
        marks = resample_marks(cfg1, np.random.default_rng(13), 100_000)
        samples = sharp_samples(F, cfg1, marks)
        se = samples.std(ddof=1) / np.sqrt(samples.size)
        assert abs(samples.mean()) < 4.0 * se

    def test_samples_match_realizations(self, cfg1, stable, sigmoid):
        """Test the batched and single-draw paths agree."""
        F = exponential_functional(sigmoid, stable, 1.0)
        marks = resample_marks(cfg1, np.random.default_rng(14), 5)
        batch = sharp_samples(F, cfg1, marks)
        for row, value in zip(marks, batch):
            assert sharp_realization(F, cfg1, MarkSet(tuple(row))) == pytest.approx(value)


class TestOracles:
    """Tests for the closed-form and finite-difference references."""

    def test_closed_form_hand_value(self, cfg1, identity):
        """Test the closed form gives 0.045 on CFG1."""
        assert gamma_eq13_oracle(identity, cfg1) == pytest.approx(0.045, abs=1e-12)

    def test_closed_form_constant_integrand(self, cfg1):
        """Test φ ≡ c gives c²[Y, Y]_T."""
        assert gamma_eq13_oracle(functions.constant(2.0), cfg1) == pytest.approx(4.0 * 0.34)

    def test_closed_form_empty(self, empty, identity):
        """Test the closed form vanishes without atoms."""
        assert gamma_eq13_oracle(identity, empty) == 0.0

    @pytest.mark.parametrize("name", ["identity", "affine", "bump", "sigmoid"])
    def test_engine_matches_closed_form_symmetric(self, name, stable, streams):
        """Test Γ[V] against the closed form, m1 = 0."""
        phi = resolve_function(name)
        V = stochastic_integral_functional(phi, stable, 1.0)
        for config in _jumpy_configs(stable, streams, 200):
            oracle = gamma_eq13_oracle(phi, config)
            assert gamma_up(V, config) == pytest.approx(oracle, rel=1e-10, abs=1e-10)

    def test_engine_matches_closed_form_with_drift(self, uniform, streams, interior_bump):
        """Test Γ[V] against the closed form, m1 > 0."""
        V = stochastic_integral_functional(interior_bump, uniform, 1.0)
        for config in _jumpy_configs(uniform, streams, 200):
            oracle = gamma_eq13_oracle(interior_bump, config)
            assert gamma_up(V, config) == pytest.approx(oracle, rel=1e-6, abs=1e-6)

    def test_finite_differences_linear(self, cfg1, stable, identity):
        """Test finite differences are exact for linear F."""
        F = linear_functional(identity, stable, 1.0)
        assert gamma_fd_oracle(F, cfg1) == pytest.approx(0.34, abs=1e-8)

    def test_finite_differences_empty(self, empty, stable, sigmoid):
        """Test the oracle vanishes without atoms."""
        assert gamma_fd_oracle(linear_functional(sigmoid, stable, 1.0), empty) == 0.0

    @pytest.mark.parametrize("family", ["linear", "exponential", "stochastic"])
    def test_finite_differences_match_engine(self, family, stable, streams, sigmoid):
        """Test Γ from finite differences on 20 random configurations."""
        builders = {
            "linear": linear_functional,
            "exponential": exponential_functional,
            "stochastic": stochastic_integral_functional,
        }
        F = builders[family](sigmoid, stable, 1.0)
        for config in _jumpy_configs(stable, streams, 20):
            assert gamma_fd_oracle(F, config) == pytest.approx(gamma_up(F, config), rel=1e-6)

    def test_step_must_be_positive(self, cfg1, stable, identity):
        """Test h ≤ 0 is refused."""
        with pytest.raises(DomainError, match="must be positive"):
            gamma_fd_oracle(linear_functional(identity, stable, 1.0), cfg1, h=0.0)

    def test_step_leaving_support(self, stable, identity):
        """Test a step that leaves the support even after shrinking."""
        config = Configuration.from_arrays(stable, 1.0, [0.5], [0.1])
        with pytest.raises(DomainError, match="leaves the support"):
            gamma_fd_oracle(linear_functional(identity, stable, 1.0), config)
