import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from rvfl_gmra.domain import CompactDomain
from rvfl_gmra.sampler import NodeSamples, ParamConfig, bias_from, derive_L, sample_nodes


class TestDeriveL:
    def test_examples(self):
        assert derive_L(2, 1.0, math.pi) == 4
        assert derive_L(1, 1.0, math.pi) == 2
        assert derive_L(3, 1.0, 1e-9) == 0

    def test_config_derives_from_domain(self):
        K = CompactDomain.box([[-1, 1]])
        cfg = ParamConfig(1.0, math.pi, 10, 1)
        assert cfg.L(K) == 2
        assert cfg.u_half_width(K) == pytest.approx(2.5 * math.pi)
        # K(Omega) volume: (2 pi) * 5 pi * 2
        assert cfg.param_volume(K) == pytest.approx(20 * math.pi**2)

    def test_omega_u_range(self):
        K = CompactDomain.box([[-1, 1]])
        cfg = ParamConfig(1.0, 3.0, 10, 1, u_range="omega")
        assert cfg.u_half_width(K) == 3.0
        assert cfg.param_volume(K) == pytest.approx(6 * 6 * 2)


class TestParamConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(alpha=0.0, omega=1.0, n_nodes=1, dim=1),
            dict(alpha=-1.0, omega=1.0, n_nodes=1, dim=1),
            dict(alpha=1.0, omega=0.0, n_nodes=1, dim=1),
            dict(alpha=1.0, omega=math.inf, n_nodes=1, dim=1),
            dict(alpha=1.0, omega=1.0, n_nodes=0, dim=1),
            dict(alpha=1.0, omega=1.0, n_nodes=1, dim=0),
            dict(alpha=1.0, omega=1.0, n_nodes=1, dim=1, u_range="half"),
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            ParamConfig(**kw)


class TestBias:
    def test_hand_example(self):
        assert bias_from([1.0, 2.0], [0.5, -1.0], 0.25, 2.0) == 1.0


class TestSampleNodes:
    K = CompactDomain.box([[-1, 1], [0, 2]])
    cfg = ParamConfig(2.0, 3.0, 400, 2)

    def test_ranges(self):
        s = sample_nodes(self.cfg, self.K, 0)
        assert len(s) == 400
        assert np.all(np.abs(s.w) <= 6.0)
        assert np.all(self.K.contains(s.y))
        assert np.all(np.abs(s.u) <= self.cfg.u_half_width(self.K))

    def test_bias_exact(self):
        s = sample_nodes(self.cfg, self.K, 1)
        np.testing.assert_array_equal(s.b, bias_from(s.w, s.y, s.u, self.cfg.alpha))
        np.testing.assert_array_equal(s.b, -np.sum(s.w * s.y, axis=1) - 2.0 * s.u)

    def test_determinism(self):
        a, b = sample_nodes(self.cfg, self.K, 5), sample_nodes(self.cfg, self.K, 5)
        for f in ("w", "y", "u", "b"):
            np.testing.assert_array_equal(getattr(a, f), getattr(b, f))
        c = sample_nodes(self.cfg, self.K, 6)
        assert not np.array_equal(a.w, c.w)

    @settings(max_examples=25, deadline=None)
    @given(cuts=st.lists(st.integers(0, 400), max_size=6))
    def test_partition_invariance(self, cuts):
        serial = sample_nodes(self.cfg, self.K, 9)
        edges = sorted({0, 400, *cuts})
        parts = NodeSamples.concat([sample_nodes(self.cfg, self.K, 9, a, b) for a, b in zip(edges[:-1], edges[1:])])
        for f in ("w", "y", "u", "b"):
            np.testing.assert_array_equal(getattr(parts, f), getattr(serial, f))

    def test_single_node_access(self):
        s = sample_nodes(self.cfg, self.K, 0)
        node = s[3]
        assert node.b == pytest.approx(-(node.w @ node.y) - 2.0 * node.u, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            sample_nodes(ParamConfig(1.0, 1.0, 5, 3), self.K, 0)

    def test_marginals_uniform(self):
        cfg = ParamConfig(1.5, 2.0, 50_000, 1)
        K = CompactDomain.box([[0, 1]])
        s = sample_nodes(cfg, K, 2)
        h = cfg.u_half_width(K)
        for vals, lo, hi in ((s.w[:, 0], -3.0, 3.0), (s.u, -h, h), (s.y[:, 0], 0.0, 1.0)):
            counts, _ = np.histogram(vals, bins=20, range=(lo, hi))
            assert stats.chisquare(counts).pvalue > 0.01

    def test_ball_domain(self):
        K = CompactDomain.ball([0, 0], 1.0)
        s = sample_nodes(ParamConfig(1.0, 1.0, 500, 2), K, 0)
        assert np.all(np.linalg.norm(s.y, axis=1) <= 1.0)

    def test_omega_range(self):
        cfg = ParamConfig(1.0, 1.5, 2000, 2, u_range="omega")
        s = sample_nodes(cfg, self.K, 0)
        assert np.all(np.abs(s.u) <= 1.5)
        assert np.abs(s.u).max() > 1.4
