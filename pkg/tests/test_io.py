import json

import numpy as np
import pytest

from rvfl_gmra import io
from rvfl_gmra.activation import get_activation
from rvfl_gmra.domain import CompactDomain
from rvfl_gmra.domain import test_function_exp_sum as exp_sum
from rvfl_gmra.gmra import gmra_build
from rvfl_gmra.manifold import predict, train_manifold
from rvfl_gmra.rvfl import RVFLNetwork
from rvfl_gmra.sampler import ParamConfig


@pytest.fixture
def net():
    rng = np.random.default_rng(5)
    return RVFLNetwork(rng.normal(size=(7, 3)), rng.normal(size=7), rng.normal(size=7) / 3, get_activation("sech"))


class TestNetwork:
    def test_round_trip_bitwise(self, net, tmp_path):
        io.save(net, tmp_path / "n.json", alpha=2.0, seed=3)
        back = io.load(tmp_path / "n.json")
        for a, b in [(net.weights, back.weights), (net.biases, back.biases), (net.coef, back.coef)]:
            np.testing.assert_array_equal(a, b)
        assert back.activation.name == "sech" and not back.activation.normalized
        x = np.random.default_rng(0).normal(size=(20, 3))
        np.testing.assert_array_equal(net(x), back(x))

    def test_metadata_kept(self, net, tmp_path):
        io.save(net, tmp_path / "n.json", alpha=2.0, seed=3)
        d = json.loads((tmp_path / "n.json").read_text())
        assert d["alpha"] == 2.0 and d["seed"] == 3 and d["format"] == "rvfl-network"

    def test_normalized_activation(self, tmp_path):
        n = RVFLNetwork(np.ones((1, 1)), np.zeros(1), np.ones(1), get_activation("sech", normalized=True))
        io.save(n, tmp_path / "n.json")
        assert io.load(tmp_path / "n.json").activation.normalized

    def test_wrong_version(self, net):
        d = io.network_to_dict(net)
        d["version"] = 99
        with pytest.raises(io.FormatError, match="version"):
            io.network_from_dict(d)

    def test_wrong_format(self, net):
        with pytest.raises(io.FormatError):
            io.tree_from_dict(io.network_to_dict(net))

    def test_unknown_document(self, tmp_path):
        (tmp_path / "x.json").write_text(json.dumps({"format": "pickle"}))
        with pytest.raises(io.FormatError):
            io.load(tmp_path / "x.json")

    def test_unsupported_object(self, tmp_path):
        with pytest.raises(TypeError):
            io.save(CompactDomain.box([[0, 1]]), tmp_path / "d.json")


@pytest.fixture(scope="module")
def tree(plane_cloud):
    return gmra_build(plane_cloud, 2, 4, seed=0)


class TestTreeAndModel:
    def test_tree_round_trip(self, tree, tmp_path):
        io.save(tree, tmp_path / "t.json")
        back = io.load(tmp_path / "t.json")
        assert back.depth == tree.depth
        for la, lb in zip(tree.levels, back.levels):
            for a, b in zip(la, lb):
                np.testing.assert_array_equal(a.center, b.center)
                np.testing.assert_array_equal(a.basis, b.basis)
                np.testing.assert_array_equal(a.members, b.members)
                assert (a.parent, a.children, a.inherited) == (b.parent, b.children, b.inherited)

    def test_manifold_round_trip(self, tree, plane_cloud, tmp_path):
        m = train_manifold(exp_sum, tree, 2, ParamConfig(2.0, 5.0, 16, 2), "lsq", seed=1)
        io.save(m, tmp_path / "m.json", mode="lsq")
        back = io.load(tmp_path / "m.json")
        np.testing.assert_array_equal(predict(m, plane_cloud), predict(back, plane_cloud))
