"""Tests for dual numbers, functional families, A₀ and the catalog."""

import numpy as np
import pytest
from scipy import integrate

from lentparticle.bottom import functions
from lentparticle.bottom.functions import ScalarTestFunction
from lentparticle.bottom.structure import generator_a
from lentparticle.config import FunctionalSettings
from lentparticle.core.errors import CapabilityError, ConfigurationError, DomainError
from lentparticle.functionals import (
    PerturbedValue,
    apply_A0,
    composed_functional,
    deterministic_integral_functional,
    exponential_functional,
    exponential_sum_functional,
    linear_functional,
    stochastic_integral_functional,
)
from lentparticle.functionals.catalog import CATALOG, FunctionalFactory, resolve_function
from lentparticle.functionals.families import (
    ExponentialFunctional,
    LinearFunctional,
    StochasticIntegralFunctional,
)
from lentparticle.poisson.path import Configuration, path_value, sample_configuration


def _random_configs(spec, streams, count=20):
    configs = []
    i = 0
    while len(configs) < count:
        config = sample_configuration(spec, 1.0, streams.path(i))
        if len(config):
            configs.append(config)
        i += 1
    return configs


class TestPerturbedValue:
    """Tests for dual arithmetic."""

    def test_product_rule(self):
        """Test (uv)′ = u′v + uv′."""
        u = PerturbedValue(2.0, 1.0)
        v = PerturbedValue(3.0, 4.0)
        w = u * v
        assert w.value == 6.0
        assert w.deriv == 11.0

    def test_quotient_and_power(self):
        """Test division and powers."""
        u = PerturbedValue(2.0, 1.0)
        q = 1.0 / u
        assert q.value == 0.5
        assert q.deriv == pytest.approx(-0.25)
        p = u**3
        assert p.value == 8.0
        assert p.deriv == pytest.approx(12.0)

    def test_numpy_scalar_on_the_left(self):
        """Test numpy scalars defer to the dual operators."""
        w = np.float64(2.0) * PerturbedValue(1.5, 1.0)
        assert isinstance(w, PerturbedValue)
        assert w.deriv == 2.0

    def test_vector_derivative(self):
        """Test derivative vectors broadcast through arithmetic."""
        u = PerturbedValue(1.0, np.array([1.0, 0.0]))
        v = PerturbedValue(2.0, np.array([0.0, 1.0]))
        np.testing.assert_array_equal((u * v).deriv, [2.0, 1.0])

    def test_division_by_zero(self):
        """Test dividing by a zero value."""
        with pytest.raises(ZeroDivisionError):
            PerturbedValue(1.0, 0.0) / PerturbedValue(0.0, 1.0)


class TestLinearFunctional:
    """Tests for Ñ(f)."""

    def test_value_on_cfg1(self, cfg1, stable, identity):
        """Test Ñ(x) = 0.5 − 0.3 under a symmetric measure."""
        assert linear_functional(identity, stable, 1.0).evaluate(cfg1) == pytest.approx(0.2)

    def test_empty_configuration(self, empty, stable, square):
        """Test Ñ(f) = −T∫f dσ without atoms."""
        assert linear_functional(square, stable, 1.0).evaluate(empty) == pytest.approx(-0.5)

    def test_dual_derivative(self, cfg1, stable, square):
        """Test d/dx₁ Ñ(x²) = 2·0.5."""
        result = linear_functional(square, stable, 1.0).evaluate_dual(cfg1, 0)
        assert result.deriv == pytest.approx(1.0)

    def test_dual_value_matches_plain(self, cfg1, stable, sigmoid):
        """Test the dual value is exactly the plain value."""
        F = linear_functional(sigmoid, stable, 1.0)
        assert F.evaluate_dual(cfg1, 1).value == F.evaluate(cfg1)

    def test_atom_index_out_of_range(self, cfg1, stable, identity):
        """Test a non-existent atom index."""
        with pytest.raises(DomainError, match="Atom index 2"):
            linear_functional(identity, stable, 1.0).evaluate_dual(cfg1, 2)


class TestExponentialFunctional:
    """Tests for e^{iÑ(f)} and its sums."""

    def test_zero_function_is_one(self, cfg1, stable):
        """Test f = 0 gives the constant 1."""
        value = exponential_functional(functions.constant(0.0), stable, 1.0).evaluate(cfg1)
        assert value == pytest.approx(1.0 + 0j)

    def test_unit_modulus(self, stable, streams, sigmoid):
        """Test |e^{iÑ(f)}| = 1 on random configurations."""
        F = exponential_functional(sigmoid, stable, 1.0)
        for i in range(1000):
            config = sample_configuration(stable, 1.0, streams.path(i))
            assert abs(F.evaluate(config)) == pytest.approx(1.0, abs=1e-12)

    def test_chain_rule(self, cfg1, stable, sigmoid):
        """Test d/dxᵢ e^{iÑ(f)} = i f′(xᵢ) e^{iÑ(f)}."""
        F = exponential_functional(sigmoid, stable, 1.0)
        for i, x in enumerate(cfg1.sizes):
            result = F.evaluate_dual(cfg1, i)
            expected = 1j * float(sigmoid.deriv1(x)) * result.value
            assert result.deriv == pytest.approx(expected, rel=1e-15, abs=1e-15)

    def test_sum_of_exponentials(self, cfg1, stable, identity, sigmoid):
        """Test Σλ_p e^{iÑ(f_p)} is the weighted sum of its terms."""
        F = exponential_sum_functional([(2.0, identity), (-1j, sigmoid)], stable, 1.0)
        first = exponential_functional(identity, stable, 1.0).evaluate(cfg1)
        second = exponential_functional(sigmoid, stable, 1.0).evaluate(cfg1)
        assert F.evaluate(cfg1) == pytest.approx(2.0 * first - 1j * second)
        assert F.complex_valued


class TestStochasticIntegral:
    """Tests for V = ∫φ(Y₋)dY."""

    def test_constant_integrand_telescopes(self, cfg1, stable):
        """Test φ ≡ 1 gives Y_T."""
        V = stochastic_integral_functional(functions.constant(1.0), stable, 1.0)
        assert V.evaluate(cfg1) == pytest.approx(0.2)

    def test_identity_integrand(self, cfg1, stable, identity):
        """Test φ(y) = y gives x₁x₂ = (Y_T² − [Y, Y]_T)/2."""
        V = stochastic_integral_functional(identity, stable, 1.0)
        assert V.evaluate(cfg1) == pytest.approx(-0.15)
        assert V.evaluate(cfg1) == pytest.approx((0.2**2 - 0.34) / 2)

    def test_ito_identity_with_drift(self, uniform, streams, identity):
        """Test ∫Y₋dY = (Y_T² − [Y, Y]_T)/2 when m1 > 0."""
        V = stochastic_integral_functional(identity, uniform, 1.0)
        for config in _random_configs(uniform, streams, count=10):
            y_t = path_value(config, 1.0)
            expected = 0.5 * (y_t**2 - float(np.sum(config.sizes**2)))
            assert V.evaluate(config) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_drift_quadrature(self, uniform, sigmoid):
        """Test the drift term against adaptive quadrature of the path."""
        config = Configuration.from_arrays(uniform, 1.0, [0.2, 0.5, 0.9], [0.4, 0.8, 0.15])
        V = stochastic_integral_functional(sigmoid, uniform, 1.0)
        jumps = sum(
            float(sigmoid.value(path_value(config, t) - x)) * x
            for t, x in zip(config.times, config.sizes)
        )
        drift, _ = integrate.quad(
            lambda s: float(sigmoid.value(path_value(config, s))),
            0.0,
            1.0,
            points=list(config.times),
            epsabs=1e-13,
            epsrel=1e-13,
            limit=200,
        )
        assert V.evaluate(config) == pytest.approx(jumps - uniform.m1 * drift, rel=1e-9)

    def test_reads_first_moment(self, stable, identity):
        """Test the functional declares its dependence on m1."""
        assert stochastic_integral_functional(identity, stable, 1.0).moments == ("m1",)


class TestOtherFunctionals:
    """Tests for deterministic integrals and compositions."""

    def test_deterministic_integral(self, cfg1, stable, identity):
        """Test ∫s dY_s = Σαᵢxᵢ under a symmetric measure."""
        F = deterministic_integral_functional(identity, stable, 1.0)
        assert F.evaluate(cfg1) == pytest.approx(0.3 * 0.5 - 0.7 * 0.3)

    def test_composition(self, cfg1, stable, identity, sigmoid):
        """Test Φ∘F evaluates Φ at F."""
        inner = linear_functional(identity, stable, 1.0)
        F = composed_functional(sigmoid, inner)
        assert F.evaluate(cfg1) == pytest.approx(float(sigmoid.value(0.2)))


class TestDualAgainstFiniteDifferences:
    """Dual derivatives against central differences on random configurations."""

    @pytest.mark.parametrize("family", ["linear", "exponential", "stochastic", "deterministic"])
    def test_every_atom(self, family, stable, streams, sigmoid):
        """Test every atom of 20 random configurations."""
        builders = {
            "linear": linear_functional,
            "exponential": exponential_functional,
            "stochastic": stochastic_integral_functional,
            "deterministic": deterministic_integral_functional,
        }
        F = builders[family](sigmoid, stable, 1.0)
        h = 1e-5
        for config in _random_configs(stable, streams):
            for i, x in enumerate(config.sizes):
                step = h if stable.contains(x + h) and stable.contains(x - h) else h / 10
                fd = (
                    F.evaluate(config.with_size(i, x + step))
                    - F.evaluate(config.with_size(i, x - step))
                ) / (2 * step)
                assert F.evaluate_dual(config, i).deriv == pytest.approx(fd, rel=1e-6, abs=1e-8)

    def test_resizing_keeps_times(self, cfg1, stable, sigmoid):
        """Test resizing an atom leaves the atom count and times seen by F unchanged."""
        F = stochastic_integral_functional(sigmoid, stable, 1.0)
        resized = cfg1.with_size(1, -0.4)
        assert len(resized) == len(cfg1)
        np.testing.assert_array_equal(resized.times, cfg1.times)
        assert F.evaluate(resized) != F.evaluate(cfg1)


class TestA0:
    """Tests for the generator on the exponential pre-domain."""

    def test_constant_function(self, cfg1, stable):
        """Test A₀[e^{iÑ(c)}] = 0."""
        assert apply_A0([(1.0, functions.constant(0.7))], cfg1, stable, 1.0) == pytest.approx(0j)

    def test_empty_configuration(self, uniform, sigmoid):
        """Test the N-sums vanish without atoms."""
        empty = Configuration.from_arrays(uniform, 1.0, [], [])
        terms = [(1.5, sigmoid), (-0.5j, functions.identity())]
        expected = sum(
            c
            * np.exp(-1j * uniform.integrate(f.value))
            * (1j * -uniform.integrate(lambda x, f=f: generator_a(f, x, uniform)))
            for c, f in terms
        )
        assert apply_A0(terms, empty, uniform, 1.0) == pytest.approx(complex(expected))

    def test_missing_second_derivative(self, cfg1, stable):
        """Test A₀ refuses first-order test functions."""
        fn = ScalarTestFunction("first-order", value=np.sin, deriv1=np.cos)
        with pytest.raises(CapabilityError, match="second derivative"):
            apply_A0([(1.0, fn)], cfg1, stable, 1.0)


class TestCatalog:
    """Tests for named functions and the functional factory."""

    def test_known_names(self):
        """Test every catalog entry builds."""
        for name in CATALOG:
            assert isinstance(resolve_function(name), ScalarTestFunction)

    def test_unknown_name(self):
        """Test an unknown name lists the alternatives."""
        with pytest.raises(ConfigurationError, match="Unknown function 'nope'"):
            resolve_function("nope")

    def test_coefficients_take_precedence(self):
        """Test coefficient lists override the name."""
        fn = resolve_function("identity", [1.0, 0.0, 2.0])
        assert fn.value(2.0) == pytest.approx(9.0)

    def test_shifted_sigmoid_lower_bound(self):
        """Test the shifted sigmoid stays above 1/2."""
        fn = resolve_function("shifted-sigmoid")
        assert np.all(fn.value(np.linspace(-50.0, 50.0, 1001)) >= 0.5)

    @pytest.mark.parametrize(
        "family, cls",
        [
            ("linear", LinearFunctional),
            ("exponential", ExponentialFunctional),
            ("stochastic_integral", StochasticIntegralFunctional),
        ],
    )
    def test_factory(self, family, cls, stable):
        """Test the factory follows the family setting."""
        F = FunctionalFactory.create(FunctionalSettings(family=family), stable, 1.0)
        assert isinstance(F, cls)
        assert F.complex_valued == (family == "exponential")
