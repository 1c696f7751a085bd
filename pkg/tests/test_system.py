import math

import numpy as np
import pytest

from oscillent import (Coherent, DomainError, NumberState, OscillatorSystem,
                       Superposition, UnboundGaussian, purity_coherent,
                       purity_number)


class TestFromPhysical:
    def test_equal_masses_equal_frequencies(self):
        sys = OscillatorSystem.from_physical(1, 1, 1, 1, 1)
        assert sys.mu1 == 0.5
        assert sys.mu2 == 0.5
        assert sys.g == 1.0
        assert sys.Gamma == pytest.approx(math.sqrt(2), abs=1e-15)
        assert sys.gamma == pytest.approx(math.sqrt(0.5), abs=1e-15)

    def test_ratio_arithmetic(self):
        sys = OscillatorSystem.from_physical(1, 3, 10, 1, 1)
        assert sys.mu1 == pytest.approx(0.25, abs=1e-15)
        assert sys.mu2 == pytest.approx(0.75, abs=1e-15)
        assert sys.g == pytest.approx(10.0, abs=1e-14)

    def test_scale_relation(self):
        # gamma = sqrt(mu*omega/hbar) and Gamma = sqrt(M*Omega/hbar) computed
        # independently here
        sys = OscillatorSystem.from_physical(2, 2, 4, 1, 1)
        mu = 2 * 2 / 4
        assert sys.gamma == pytest.approx(math.sqrt(mu * 4 / 1), rel=1e-15)
        assert sys.Gamma == pytest.approx(math.sqrt(4 * 1 / 1), rel=1e-15)
        assert sys.gamma ** 2 / sys.Gamma ** 2 == pytest.approx(
            sys.mu1 * sys.mu2 * sys.g, rel=1e-12)

    def test_untrapped_needs_gamma(self):
        with pytest.raises(DomainError):
            OscillatorSystem.from_physical(1, 1, 1, 0, 1)
        sys = OscillatorSystem.from_physical(1, 1, 1, 0, 1, Gamma=2.0)
        assert not sys.is_trapped
        assert sys.Gamma == 2.0

    def test_trapped_rejects_explicit_gamma(self):
        with pytest.raises(DomainError):
            OscillatorSystem.from_physical(1, 1, 1, 1, 1, Gamma=2.0)

    @pytest.mark.parametrize("bad", [
        dict(m1=0, m2=1, omega=1, OmegaTrap=1),
        dict(m1=1, m2=-2, omega=1, OmegaTrap=1),
        dict(m1=1, m2=1, omega=0, OmegaTrap=1),
        dict(m1=1, m2=1, omega=1, OmegaTrap=-1),
        dict(m1=1, m2=1, omega=1, OmegaTrap=1, hbar=0),
    ])
    def test_domain_errors(self, bad):
        with pytest.raises(DomainError):
            OscillatorSystem.from_physical(**bad)


class TestFromDimensionless:
    @pytest.mark.parametrize("g,mu1,gamma", [
        (1.0, 0.5, 0.5),
        (4.0, 0.5, 1.0),
        (10.0, 0.25, math.sqrt(1.875)),
    ])
    def test_gamma_values(self, g, mu1, gamma):
        sys = OscillatorSystem.from_dimensionless(g, mu1)
        assert sys.gamma == pytest.approx(gamma, rel=1e-15)
        assert sys.Gamma == 1.0
        assert sys.hbar == 1.0
        assert sys.M_total == 1.0

    @pytest.mark.parametrize("g,mu1", [(0.0, 0.5), (-1.0, 0.5), (1.0, 0.0),
                                       (1.0, 1.0), (1.0, 1.5)])
    def test_domain_errors(self, g, mu1):
        with pytest.raises(DomainError):
            OscillatorSystem.from_dimensionless(g, mu1)


class TestFromUntrapped:
    def test_c_parameterization(self):
        assert OscillatorSystem.from_untrapped(0.5, c=1.0).gamma == pytest.approx(1.0)
        assert OscillatorSystem.from_untrapped(0.5, c=3.0).gamma == pytest.approx(1 / 3)

    def test_balanced_scale_is_separable_at_start(self):
        # gamma = Gamma*sqrt(mu1*mu2) makes the purity exactly 1
        mu1 = 0.3
        sys = OscillatorSystem.from_untrapped(mu1, gamma=math.sqrt(mu1 * (1 - mu1)))
        assert purity_coherent(sys) == pytest.approx(1.0, abs=1e-12)

    def test_exactly_one_scale_argument(self):
        with pytest.raises(DomainError):
            OscillatorSystem.from_untrapped(0.5)
        with pytest.raises(DomainError):
            OscillatorSystem.from_untrapped(0.5, c=1.0, gamma=1.0)

    def test_g_undefined(self):
        sys = OscillatorSystem.from_untrapped(0.5, c=2.0)
        with pytest.raises(DomainError):
            sys.g


class TestInvariants:
    @pytest.mark.parametrize("mu1", [0.1, 0.25, 1 / 3, 0.5, 0.77, 0.9])
    def test_mass_fractions_sum_exactly(self, mu1):
        sys = OscillatorSystem.from_dimensionless(2.0, mu1)
        assert sys.mu1 + sys.mu2 == 1.0

    def test_scale_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            sys = OscillatorSystem.from_physical(
                rng.uniform(0.2, 5), rng.uniform(0.2, 5),
                rng.uniform(0.2, 20), rng.uniform(0.2, 20), rng.uniform(0.2, 5))
            lhs = sys.gamma ** 2
            rhs = sys.mu1 * sys.mu2 * sys.g * sys.Gamma ** 2
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_gauge_independence(self):
        # rebuilding from the derived (g, mu1) leaves purities unchanged
        rng = np.random.default_rng(5)
        for _ in range(10):
            sys = OscillatorSystem.from_physical(
                rng.uniform(0.2, 5), rng.uniform(0.2, 5),
                rng.uniform(0.2, 20), rng.uniform(0.2, 20), rng.uniform(0.2, 5))
            rebuilt = OscillatorSystem.from_dimensionless(sys.g, sys.mu1)
            assert purity_coherent(sys) == pytest.approx(
                purity_coherent(rebuilt), abs=1e-12)
            assert purity_number(sys, 1, 1) == pytest.approx(
                purity_number(rebuilt, 1, 1), abs=1e-12)

    def test_hbar_rescaling(self):
        base = OscillatorSystem.from_physical(1.3, 2.1, 7.0, 2.0, hbar=1.0)
        ref = purity_number(base, 1, 1)
        for lam in (0.1, 10.0):
            sys = OscillatorSystem.from_physical(1.3, 2.1, 7.0, 2.0, hbar=lam)
            assert purity_number(sys, 1, 1) == pytest.approx(ref, abs=1e-12)

    def test_frozen(self):
        sys = OscillatorSystem.from_dimensionless(1.0, 0.5)
        with pytest.raises(Exception):
            sys.m1 = 2.0


class TestStateSpecs:
    def test_number_state_validation(self):
        with pytest.raises(DomainError):
            NumberState(-1, 0)
        with pytest.raises(DomainError):
            NumberState(0, -2)

    def test_superposition_normalization(self):
        Superposition(((0, 1, 0.6), (1, 0, 0.8)))
        with pytest.raises(DomainError):
            Superposition(((0, 1, 0.6), (1, 0, 0.9)))

    def test_superposition_duplicates_rejected(self):
        with pytest.raises(DomainError):
            Superposition(((0, 1, 0.6), (0, 1, 0.8)))

    def test_two_mode_mix_is_normalized(self):
        st = Superposition.two_mode_mix(0.71)
        assert sum(abs(c) ** 2 for (_, _, c) in st.terms) == pytest.approx(1.0, abs=1e-15)

    def test_unbound_validation(self):
        UnboundGaussian(0, -3.0)
        with pytest.raises(DomainError):
            UnboundGaussian(-1, 0.0)
        with pytest.raises(DomainError):
            UnboundGaussian(0, float("nan"))

    def test_coherent_coerces_complex(self):
        st = Coherent(1.0, 2)
        assert st.alpha == 1 + 0j and st.beta == 2 + 0j
