import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonstats.correlations import (
    CorrelationSummary,
    MixtureComponent,
    effective_g2,
    g2,
    mean_photon_number,
    mixture_g2,
    mixture_g2_max,
    mixture_g2_slope,
    second_factorial_moment,
    smpp_exact,
    summarize,
)
from photonstats.errors import DomainError, NumericUnderflowError
from photonstats.fockspace import (
    PhotonNumberDistribution,
    add_vacuum,
    from_probs,
    make_coherent,
    make_fock,
    make_thermal,
    make_two_component,
    mix,
)

from conftest import random_distribution


def distribution_with(g, n_mean):
    """A state with prescribed g2 and mean, built as |0>,|1>,|k> with the
    smallest workable k. Used to test (g, n) mixture formulas end to end."""
    f2 = g * n_mean**2  # target sum n(n-1) q_n
    k = 2
    while True:
        qk = f2 / (k * (k - 1))
        q1 = n_mean - k * qk
        if q1 >= 0 and q1 + qk <= 1:
            return from_probs(np.r_[1 - q1 - qk, q1, np.zeros(k - 2), qk])
        k += 1
        if k > 200:
            raise ValueError("no |0>,|1>,|k> realization")


class TestMoments:
    def test_mean(self):
        assert mean_photon_number(make_fock(1)) == 1
        assert mean_photon_number(make_coherent(0.5)) == pytest.approx(0.5, abs=1e-12)
        assert mean_photon_number(make_two_component(0.9, 0.05)) == pytest.approx(1.0, abs=1e-15)

    def test_second_factorial_moment(self):
        assert second_factorial_moment(make_fock(1)) == 0
        assert second_factorial_moment(make_fock(2)) == 2
        for m in (0.1, 1.0, 3.0):
            assert second_factorial_moment(make_thermal(m)) == pytest.approx(2 * m * m, rel=1e-10)


class TestG2:
    @pytest.mark.parametrize("n", range(1, 65))
    def test_fock_law(self, n):
        assert abs(g2(make_fock(n)) - (1 - 1 / n)) <= 1e-14

    def test_vacuum_convention(self):
        assert g2(make_fock(0)) == 1.0

    @given(st.floats(1e-6, 1.0), st.floats(0.0, 1.0))
    @settings(max_examples=300)
    def test_two_component_formula(self, p, q):
        if p + q > 1:
            return
        expected = 2 * q / (p + 2 * q) ** 2
        assert g2(make_two_component(p, q)) == pytest.approx(expected, rel=1e-12, abs=1e-300)

    def test_underflow(self):
        d = PhotonNumberDistribution([1 - 1e-310, 1e-310], tail_mass_bound=0.0)
        with pytest.raises(NumericUnderflowError):
            g2(d)

    def test_vacuum_rescaling(self, rng):
        for _ in range(300):
            d = random_distribution(rng)
            x = float(rng.uniform(0, 0.999))
            dx = add_vacuum(d, x)
            assert g2(dx) == pytest.approx(g2(d) / (1 - x), rel=1e-10)
            assert effective_g2(g2(dx), dx.vacuum) == pytest.approx(
                effective_g2(g2(d), d.vacuum), rel=1e-10, abs=1e-10
            )


class TestEffective:
    def test_examples(self):
        assert effective_g2(0.35, 0.9) == pytest.approx(0.035, rel=1e-12)
        assert effective_g2(0.4, 0.0) == 0.4
        assert effective_g2(0.08, 0.58) == pytest.approx(0.0336, rel=1e-12)
        assert round(effective_g2(0.08, 0.58), 3) == 0.034

    def test_domain(self):
        with pytest.raises(DomainError):
            effective_g2(-1, 0.5)
        with pytest.raises(DomainError):
            effective_g2(1, 1.5)


class TestSmpp:
    @pytest.mark.parametrize("m", [0.01, 0.1, 0.5, 2.0])
    def test_coherent(self, m):
        assert smpp_exact(make_coherent(m)) == pytest.approx(m / (math.exp(m) - 1 - m), rel=1e-9)

    @pytest.mark.parametrize("m", [0.01, 0.1, 0.5, 2.0])
    def test_thermal(self, m):
        assert smpp_exact(make_thermal(m)) == pytest.approx(1 / m, rel=1e-9)

    def test_markers(self):
        assert smpp_exact(make_fock(1)) == math.inf
        assert math.isnan(smpp_exact(make_fock(0)))
        assert smpp_exact(make_fock(3)) == 0.0


class TestMixture:
    def test_endpoints(self):
        c1, c2 = MixtureComponent(0.3, 1.2), MixtureComponent(1.7, 0.4)
        assert mixture_g2(c1, c2, 1.0) == pytest.approx(0.3)
        assert mixture_g2(c1, c2, 0.0) == pytest.approx(1.7)

    def test_coherent_pair_peak(self):
        c1, c2 = MixtureComponent(1, 1), MixtureComponent(1, 100)
        assert mixture_g2(c1, c2, 100 / 101) == pytest.approx(25.5025, abs=1e-12)

    def test_both_means_zero(self):
        with pytest.raises(DomainError):
            mixture_g2(MixtureComponent(1, 0), MixtureComponent(1, 0), 0.5)

    def test_zero_mean_component(self):
        # a zero-mean component only dilutes: g2 -> g2 / (1 - s)
        c1, c2 = MixtureComponent(1.0, 0.0), MixtureComponent(0.2, 1.0)
        assert mixture_g2(c1, c2, 0.5) == pytest.approx(0.2 / 0.5)

    def test_matches_explicit_mixture(self, rng):
        for _ in range(200):
            g1, g2_ = rng.uniform(0.05, 3, size=2)
            n1, n2 = rng.uniform(0.05, 1.0, size=2)
            s = float(rng.uniform())
            d1, d2 = distribution_with(g1, n1), distribution_with(g2_, n2)
            assert g2(d1) == pytest.approx(g1, rel=1e-12)
            d = mix([(d1, s), (d2, 1 - s)])
            c1, c2 = MixtureComponent(g1, n1), MixtureComponent(g2_, n2)
            assert abs(g2(d) - mixture_g2(c1, c2, s)) <= 1e-10

    def test_slope_constant_case(self):
        for s in np.linspace(0, 1, 11):
            assert mixture_g2_slope(1.0, 1.0, s) == 0.0

    def test_slope_at_zero(self):
        for r, t in [(2.0, 0.5), (0.3, 0.9), (5.0, 0.0)]:
            assert mixture_g2_slope(r, t, 0.0) == pytest.approx((t * (1 - r) ** 2 - t + 1) / r**2)
        assert mixture_g2_slope(2.0, 0.5, 0.0) == pytest.approx(0.25)

    def test_slope_matches_finite_difference(self):
        r, t, g1 = 2.0, 0.5, 1.3
        c1, c2 = MixtureComponent(g1, 1.0), MixtureComponent(t * g1, r)
        h = 1e-6
        for s in (0.1, 0.4, 0.77):
            fd = (mixture_g2(c1, c2, s + h) - mixture_g2(c1, c2, s - h)) / (2 * h * g1)
            assert fd == pytest.approx(mixture_g2_slope(r, t, s), rel=1e-6)

    def test_slope_domain(self):
        with pytest.raises(DomainError):
            mixture_g2_slope(0.0, 0.5, 0.5)

    def test_max(self):
        assert mixture_g2_max(1.0) == (0.5, 1.0)
        s_star, gmax = mixture_g2_max(100.0)
        assert s_star == pytest.approx(100 / 101)
        assert gmax == pytest.approx(101**2 / 400, rel=1e-15)
        assert mixture_g2_max(1e6)[1] / (1e6 / 4) == pytest.approx(1.0, rel=1e-5)

    def test_max_is_maximum(self):
        c1, c2 = MixtureComponent(2.0, 1.0), MixtureComponent(2.0, 7.0)
        s_star, gmax = mixture_g2_max(7.0, g1=2.0)
        grid = np.linspace(0, 1, 20001)
        values = [mixture_g2(c1, c2, s) for s in grid]
        assert max(values) <= gmax + 1e-12
        assert mixture_g2(c1, c2, s_star) == pytest.approx(gmax, rel=1e-14)


class TestSummary:
    def test_single_photon(self):
        s = summarize(make_fock(1))
        assert s == CorrelationSummary(1.0, 0.0, 0.0, 0.0, math.inf, False)

    def test_diluted_single_photon(self):
        s = summarize(add_vacuum(make_fock(1), 0.9))
        assert s.mean_n == pytest.approx(0.1)
        assert s.g2 == 0 and s.g2_eff == 0
        assert s.vacuum_x == pytest.approx(0.9)

    def test_thermal(self):
        s = summarize(make_thermal(0.1))
        assert s.g2 == pytest.approx(2.0, rel=1e-10)
        assert s.vacuum_x == pytest.approx(1 / 1.1, rel=1e-14)
        assert s.g2_eff == pytest.approx(2 * (1 - 1 / 1.1), rel=1e-10)
        assert s.g2_eff == pytest.approx(0.181818181818, rel=1e-9)

    def test_vacuum_flagged(self):
        s = summarize(make_fock(0))
        assert s.g2 == 1.0 and s.g2_is_convention

    def test_field_invariant(self, rng):
        for _ in range(100):
            s = summarize(random_distribution(rng))
            assert abs(s.g2_eff - (1 - s.vacuum_x) * s.g2) <= 1e-12
