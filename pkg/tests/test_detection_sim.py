import io
import math

import numpy as np
import pytest
from scipy import stats

from photonstats import detection_sim as sim
from photonstats.correlations import effective_g2, g2
from photonstats.errors import CapacityError, DomainError, EstimationError, MalformedInputError
from photonstats.fockspace import (
    PhotonNumberDistribution,
    add_vacuum,
    make_coherent,
    make_fock,
    make_two_component,
)


def cfg(shots, seed=1, **kw):
    return sim.SimulationConfig(shots=shots, seed=seed, **kw)


def within(est, target, k=3.0):
    return abs(est.value - target) <= k * est.std_error


class TestConfig:
    @pytest.mark.parametrize(
        "kw", [dict(shots=0), dict(efficiency=0.0), dict(efficiency=1.2), dict(bootstrap_resamples=1), dict(workers=0)]
    )
    def test_invalid(self, kw):
        base = dict(shots=10, seed=0)
        base.update(kw)
        with pytest.raises(DomainError):
            sim.SimulationConfig(**base)

    def test_echo_omits_workers(self):
        assert "workers" not in cfg(10, workers=3).echo()


class TestSample:
    def test_vacuum(self):
        s = sim.sample(make_fock(0), cfg(1000))
        assert not s.counts.any()
        assert s.histogram.tolist() == [1000]

    def test_single_photon(self):
        s = sim.sample(make_fock(1), cfg(1000))
        assert np.all(s.counts == 1)

    def test_fock_under_loss_is_binomial(self):
        s = sim.sample(make_fock(4), cfg(200_000, efficiency=0.3))
        assert s.totals.mean() == pytest.approx(1.2, abs=0.01)
        assert s.totals.var() == pytest.approx(4 * 0.3 * 0.7, abs=0.02)

    def test_coherent_histogram_matches_poisson(self):
        d = make_coherent(1.0)
        s = sim.sample(d, cfg(1_000_000, seed=2019))
        hist = s.histogram
        expected = stats.poisson.pmf(np.arange(hist.size), 1.0) * s.shots
        # pool the sparse tail into the last bin
        k = int(np.argmax(expected < 5))
        obs = np.append(hist[:k], hist[k:].sum())
        exp = np.append(expected[:k], s.shots - expected[:k].sum())
        assert stats.chisquare(obs, exp).pvalue > 0.001

    def test_histogram_sums_to_shots(self):
        s = sim.sample(make_coherent(3.0), cfg(5000, split=True))
        assert s.histogram.sum() == s.shots == 5000
        assert s.counts.shape == (5000, 2)

    def test_deterministic(self):
        d = add_vacuum(make_two_component(0.7, 0.2), 0.3)
        c = cfg(300_000, seed=42, efficiency=0.8, split=True)
        assert np.array_equal(sim.sample(d, c).counts, sim.sample(d, c).counts)

    def test_read_only(self):
        s = sim.sample(make_coherent(1.0), cfg(10))
        with pytest.raises(ValueError):
            s.counts[0] = 5

    def test_capacity(self):
        class Huge:
            cutoff = 10**6
        with pytest.raises(CapacityError):
            sim.sample(Huge(), cfg(10))

    def test_tail_mass_lands_on_cutoff(self):
        d = PhotonNumberDistribution(np.array([0.5, 0.5 - 1e-3]), tail_mass_bound=1e-3)
        s = sim.sample(d, cfg(1000))
        assert s.counts.max() <= 1


class TestEstimators:
    def test_all_ones(self):
        r = sim.estimate_g2(sim.sample(make_fock(1), cfg(1000)))
        assert r.value == 0.0 and r.std_error == 0.0 and r.shots_used == 1000

    def test_all_zero(self):
        with pytest.raises(EstimationError):
            sim.estimate_g2(sim.sample(make_fock(0), cfg(100)))

    def test_plugin_formula(self):
        s = sim.SampleSet(np.array([0, 1, 2, 3, 1]), cfg(5))
        n = s.counts.astype(float)
        assert sim.estimate_g2(s).value == pytest.approx((n * (n - 1)).mean() / n.mean() ** 2)

    def test_coincidence_formula(self):
        c = np.array([[1, 0], [1, 1], [0, 2], [2, 1]])
        s = sim.SampleSet(c, cfg(4, split=True))
        a, b = c[:, 0].astype(float), c[:, 1].astype(float)
        assert sim.estimate_g2(s).value == pytest.approx((a * b).mean() / (a.mean() * b.mean()))

    def test_one_arm_dark(self):
        s = sim.SampleSet(np.array([[1, 0], [2, 0]]), cfg(2, split=True))
        with pytest.raises(EstimationError):
            sim.estimate_g2(s)

    def test_coherent(self):
        r = sim.estimate_g2(sim.sample(make_coherent(1.0), cfg(1_000_000, seed=3)))
        assert within(r, 1.0)
        assert 0 < r.std_error < 0.01

    def test_two_component(self):
        r = sim.estimate_g2(sim.sample(make_two_component(0.9, 0.05), cfg(1_000_000, seed=4)))
        assert within(r, 0.1)

    def test_vacuum_fraction(self):
        assert sim.estimate_vacuum(sim.sample(make_fock(1), cfg(1000))).value == 0.0
        r = sim.estimate_vacuum(sim.sample(add_vacuum(make_fock(1), 0.9), cfg(1_000_000, seed=5)))
        assert within(r, 0.9)
        assert r.std_error == pytest.approx(math.sqrt(0.09 / 1e6), rel=1e-2)
        r = sim.estimate_vacuum(sim.sample(make_coherent(1.0), cfg(1_000_000, seed=6)))
        assert within(r, math.exp(-1))

    def test_bootstrap_is_seeded(self):
        s = sim.sample(make_coherent(1.0), cfg(20_000, seed=8))
        assert sim.estimate_g2(s) == sim.estimate_g2(s)

    def test_bootstrap_matches_shot_resampling(self):
        # multinomial over the outcome table against literal resampling of shots
        s = sim.sample(make_coherent(1.0), cfg(20_000, seed=10, bootstrap_resamples=400))
        rng = np.random.default_rng(0)
        n = s.counts.astype(float)
        boot = []
        for _ in range(400):
            r = n[rng.integers(0, n.size, n.size)]
            boot.append((r * (r - 1)).mean() / r.mean() ** 2)
        assert sim.estimate_g2(s).std_error == pytest.approx(np.std(boot, ddof=1), rel=0.15)

    def test_bootstrap_scaling(self):
        d = make_coherent(1.0)
        scaled = [
            sim.estimate_g2(sim.sample(d, cfg(m, seed=11))).std_error * math.sqrt(m)
            for m in (10_000, 100_000, 1_000_000)
        ]
        for a in scaled:
            for b in scaled:
                assert a / b == pytest.approx(1.0, abs=0.2)


class TestLossAndSplit:
    @pytest.mark.parametrize("dist", [make_coherent(1.0), make_two_component(0.6, 0.3)], ids=["coherent", "two"])
    def test_loss_invariance_of_g2(self, dist):
        results = {eta: sim.sample(dist, cfg(400_000, seed=12, efficiency=eta)) for eta in (1.0, 0.5, 0.2)}
        g = {eta: sim.estimate_g2(s) for eta, s in results.items()}
        x = {eta: sim.estimate_vacuum(s).value for eta, s in results.items()}
        for eta in (0.5, 0.2):
            assert abs(g[eta].value - g[1.0].value) <= 3 * math.hypot(g[eta].std_error, g[1.0].std_error)
        # the vacuum weight, and with it the effective g2, is not loss invariant
        assert x[1.0] < x[0.5] < x[0.2]

    def test_split_consistency(self):
        s = sim.sample(make_coherent(1.0), cfg(400_000, seed=13, split=True))
        coinc, plug = sim.estimate_g2(s), sim.estimate_g2_plugin(s)
        assert abs(coinc.value - plug.value) <= 3 * math.hypot(coinc.std_error, plug.std_error)
        assert within(coinc, 1.0) and within(plug, 1.0)

    def test_split_fock2(self):
        # one coincidence in half the shots: <ab>=1/2, <a>=<b>=1
        r = sim.estimate_g2(sim.sample(make_fock(2), cfg(200_000, seed=14, split=True)))
        assert within(r, 0.5)


class TestPostSelection:
    def test_no_zeros_unchanged(self):
        s = sim.sample(make_fock(1), cfg(100))
        p = sim.post_select(s)
        assert np.array_equal(p.counts, s.counts) and p.shots == 100

    def test_surviving_fraction(self):
        s = sim.sample(add_vacuum(make_fock(2), 0.7), cfg(200_000, seed=15))
        p = sim.post_select(s)
        assert p.shots / s.shots == pytest.approx(0.3, abs=0.005)
        assert p.shots_total == s.shots
        assert np.all(np.diff(p.shot_index) > 0)

    def test_vacuum_plus_fock2(self):
        s = sim.sample(add_vacuum(make_fock(2), 0.6), cfg(100_000, seed=16))
        assert sim.estimate_g2(sim.post_select(s)).value == pytest.approx(0.5, abs=1e-15)

    def test_pure_vacuum(self):
        with pytest.raises(EstimationError):
            sim.post_select(sim.sample(make_fock(0), cfg(100)))

    def test_direct_equals_scaled_on_same_shots(self):
        s = sim.sample(add_vacuum(make_coherent(0.4), 0.5), cfg(100_000, seed=17))
        raw, x = sim.estimate_g2(s), sim.estimate_vacuum(s)
        direct = sim.estimate_g2(sim.post_select(s))
        scaled = sim.scaled_effective_g2(s, raw, x)
        assert direct.value == pytest.approx(scaled.value, rel=1e-12)


class TestMeasureEffective:
    def test_vacuum_plus_single(self):
        m = sim.measure_effective_g2(add_vacuum(make_fock(1), 0.5), cfg(10_000))
        assert m.g2_eff_direct.value == 0.0 and m.g2_eff_scaled.value == 0.0

    def test_vacuum_plus_two(self):
        m = sim.measure_effective_g2(add_vacuum(make_fock(2), 0.5), cfg(100_000, seed=18))
        assert within(m.g2_raw, 1.0)
        assert m.g2_eff_direct.value == pytest.approx(0.5)
        # every resample gives exactly 1/2 here, so there is no spread to test against
        assert m.g2_eff_scaled.value == pytest.approx(0.5) and m.g2_eff_scaled.std_error < 1e-12

    def test_two_component_with_extra_vacuum(self):
        d = add_vacuum(make_two_component(0.9, 0.05), 0.8)
        # adding vacuum 0.8 to a state that already has x = 0.05 gives x = 0.81
        target = effective_g2(g2(d), d.vacuum)
        assert g2(d) == pytest.approx(0.5) and d.vacuum == pytest.approx(0.81)
        assert target == pytest.approx(0.095)
        m = sim.measure_effective_g2(d, cfg(1_000_000, seed=1))
        assert within(m.g2_raw, 0.5)
        diff = abs(m.g2_eff_direct.value - m.g2_eff_scaled.value)
        assert diff <= 3 * m.combined_std_error
        assert within(m.g2_eff_direct, target) and within(m.g2_eff_scaled, target)


class TestRecordFile:
    @pytest.mark.parametrize("split", [False, True])
    def test_round_trip(self, tmp_path, split):
        s = sim.sample(make_coherent(1.5), cfg(2000, seed=19, split=split, efficiency=0.9))
        path = tmp_path / "rec.csv"
        sim.write_samples(s, path)
        back = sim.read_samples(path)
        assert np.array_equal(back.counts, s.counts)
        assert back.config == s.config
        assert sim.estimate_g2(back) == sim.estimate_g2(s)

    def test_post_selected_round_trip(self):
        s = sim.post_select(sim.sample(add_vacuum(make_fock(1), 0.5), cfg(500, seed=20)))
        buf = io.StringIO()
        sim.write_samples(s, buf)
        buf.seek(0)
        back = sim.read_samples(buf)
        assert np.array_equal(back.shot_index, s.shot_index)
        assert back.shots_total == 500

    def test_header_format(self):
        buf = io.StringIO()
        sim.write_samples(sim.sample(make_fock(1), cfg(2, seed=3)), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0].startswith("# {") and lines[1] == "shot,count" and lines[2] == "0,1"

    @pytest.mark.parametrize(
        "text,row",
        [
            ("shot,count\n0,1\n", None),
            ('# {"shots": 2, "seed": 1, "efficiency": 1.0, "split": false, "bootstrap_resamples": 10}\nshot,n\n', None),
            ('# {"shots": 2, "seed": 1, "efficiency": 1.0, "split": false, "bootstrap_resamples": 10}\nshot,count\n0,1\n1,x\n', 2),
            ('# {"shots": 2, "seed": 1, "efficiency": 1.0, "split": false, "bootstrap_resamples": 10}\nshot,count\n0,1,2\n', 1),
            ("# {not json}\nshot,count\n", None),
        ],
    )
    def test_malformed(self, text, row):
        with pytest.raises(MalformedInputError) as err:
            sim.read_samples(io.StringIO(text))
        assert err.value.row == row
