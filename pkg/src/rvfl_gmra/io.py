"""Versioned JSON serialization for networks, GMRA trees and manifold models.

Floats are written with Python's shortest round-trip repr, so a load
reproduces every stored value bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .activation import get_activation
from .domain import CompactDomain
from .gmra import Cell, GMRATree
from .manifold import ChartModel, ManifoldModel
from .rvfl import RVFLNetwork

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def _check(d: dict, kind: str) -> None:
    if d.get("format") != kind:
        raise FormatError(f"expected a {kind!r} document, found {d.get('format')!r}")
    if d.get("version") != FORMAT_VERSION:
        raise FormatError(f"unsupported {kind} version {d.get('version')!r}")


def network_to_dict(net: RVFLNetwork, **meta) -> dict:
    a = net.activation
    return {
        "format": "rvfl-network",
        "version": FORMAT_VERSION,
        "dim": net.dim,
        "activation": {"name": a.name, "normalized": a.normalized},
        **meta,
        "nodes": [
            {"w": w.tolist(), "b": float(b), "v": float(v)}
            for w, b, v in zip(net.weights, net.biases, net.coef)
        ],
    }


def network_from_dict(d: dict) -> RVFLNetwork:
    _check(d, "rvfl-network")
    act = get_activation(d["activation"]["name"], normalized=d["activation"]["normalized"])
    nodes = d["nodes"]
    dim = int(d["dim"])
    w = np.array([n["w"] for n in nodes], dtype=float).reshape(len(nodes), dim)
    b = np.array([n["b"] for n in nodes], dtype=float)
    v = np.array([n["v"] for n in nodes], dtype=float)
    return RVFLNetwork(w, b, v, act)


def tree_to_dict(tree: GMRATree) -> dict:
    return {
        "format": "gmra-tree",
        "version": FORMAT_VERSION,
        "intrinsic_dim": tree.intrinsic_dim,
        "ambient_dim": tree.ambient_dim,
        "levels": [
            [
                {
                    "center": c.center.tolist(),
                    "basis_columns": c.basis.T.tolist(),
                    "children": list(c.children),
                    "parent": c.parent,
                    "members": c.members.tolist(),
                    "inherited": c.inherited,
                }
                for c in cells
            ]
            for cells in tree.levels
        ],
    }


def tree_from_dict(d: dict, points=None) -> GMRATree:
    _check(d, "gmra-tree")
    levels = [
        [
            Cell(
                np.array(c["center"], dtype=float),
                np.ascontiguousarray(np.array(c["basis_columns"], dtype=float).T),
                np.array(c["members"], dtype=np.int64),
                c["parent"],
                list(c["children"]),
                c["inherited"],
            )
            for c in cells
        ]
        for cells in d["levels"]
    ]
    pts = None if points is None else np.asarray(points, dtype=float)
    return GMRATree(levels, int(d["intrinsic_dim"]), int(d["ambient_dim"]), pts)


def manifold_to_dict(model: ManifoldModel, **meta) -> dict:
    charts = []
    for ch in model.charts:
        charts.append(
            {
                "j": ch.j,
                "k": ch.k,
                "domain": ch.domain.to_dict(),
                "constant": ch.constant,
                "net": None if ch.net is None else network_to_dict(ch.net),
            }
        )
    return {
        "format": "manifold-model",
        "version": FORMAT_VERSION,
        "level": model.level,
        **meta,
        "tree": tree_to_dict(model.tree),
        "charts": charts,
    }


def manifold_from_dict(d: dict) -> ManifoldModel:
    _check(d, "manifold-model")
    tree = tree_from_dict(d["tree"])
    charts = [
        ChartModel(
            c["j"],
            c["k"],
            CompactDomain.from_dict(c["domain"]),
            None if c["net"] is None else network_from_dict(c["net"]),
            c["constant"],
        )
        for c in d["charts"]
    ]
    return ManifoldModel(tree, int(d["level"]), charts)


_LOADERS = {
    "rvfl-network": network_from_dict,
    "gmra-tree": tree_from_dict,
    "manifold-model": manifold_from_dict,
}


def save(obj, path, **meta) -> None:
    if isinstance(obj, RVFLNetwork):
        d = network_to_dict(obj, **meta)
    elif isinstance(obj, GMRATree):
        d = tree_to_dict(obj)
    elif isinstance(obj, ManifoldModel):
        d = manifold_to_dict(obj, **meta)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    Path(path).write_text(json.dumps(d))


def load(path):
    d = json.loads(Path(path).read_text())
    try:
        loader = _LOADERS[d.get("format")]
    except KeyError:
        raise FormatError(f"unknown document format {d.get('format')!r}") from None
    return loader(d)
