"""Function approximation on a manifold through GMRA charts.

For each cell at level ``j`` the target is pulled back to chart coordinates
``z = V^T x`` and a d-dimensional RVFL network is fitted there.  Prediction
dispatches a point to its nearest centre and evaluates that chart's network.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .activation import Activation, normalize_to_unit_integral
from .domain import CompactDomain, sample_uniform
from .gmra import GMRATree, nearest_center
from .rvfl import IllConditionedWarning, RVFLNetwork, analytic_weights, lsq_train
from .sampler import ParamConfig, sample_nodes

MODES = ("lsq", "analytic")
INFLATION = 0.10
_MIN_HALF_WIDTH = 1e-6


def chart_function(f: Callable, tree: GMRATree, j: int, k: int) -> Callable:
    """z -> f(c - V V^T c + V z), the target read in the cell's coordinates."""
    cell = tree.cells(j)[k]
    V = cell.basis
    offset = cell.center - V @ (V.T @ cell.center)

    def fhat(z):
        z = np.asarray(z, dtype=float)
        return f(offset + z @ V.T)

    return fhat


@dataclass(frozen=True, eq=False)
class ChartModel:
    j: int
    k: int
    domain: CompactDomain
    net: RVFLNetwork | None
    constant: float | None = None

    @property
    def fallback(self) -> bool:
        return self.net is None

    def __call__(self, z) -> np.ndarray:
        z = np.atleast_2d(z)
        if self.net is None:
            return np.full(z.shape[0], self.constant)
        return self.net(z)


@dataclass(frozen=True, eq=False)
class ManifoldModel:
    tree: GMRATree
    level: int
    charts: list[ChartModel]

    def __post_init__(self):
        if len(self.charts) != len(self.tree.cells(self.level)):
            raise ValueError("need exactly one chart per cell of the level")

    def __call__(self, x):
        return predict(self, x)


def chart_domain(z: np.ndarray, inflation: float = INFLATION) -> CompactDomain:
    """Bounding box of chart coordinates, each half-width grown by ``inflation``."""
    lo, hi = z.min(axis=0), z.max(axis=0)
    mid = 0.5 * (lo + hi)
    half = np.maximum(0.5 * (hi - lo) * (1.0 + inflation), _MIN_HALF_WIDTH)
    return CompactDomain.box(np.column_stack([mid - half, mid + half]))


def _train_chart(f, tree, j, k, cfg, mode, seed, activation, ridge, points, train_points="chart", n_train=100) -> ChartModel:
    cell = tree.cells(j)[k]
    mem = cell.members
    if mem.size == 0:
        warnings.warn(f"cell ({j},{k}) has no training members; using the constant f(c)", stacklevel=3)
        c = float(np.asarray(f(cell.center[None]), dtype=float).reshape(-1)[0])
        z0 = (cell.center @ cell.basis)[None]
        return ChartModel(j, k, chart_domain(z0), None, c)
    x = points[mem]
    z = x @ cell.basis
    dom = chart_domain(z)
    nodes = sample_nodes(cfg, dom, seed, stream=("chart", j, k))
    fhat = chart_function(f, tree, j, k)
    if mode == "analytic":
        net = analytic_weights(fhat, cfg, dom, nodes, activation)
    else:
        if train_points == "chart":
            z = sample_uniform(dom, n_train, seed, stream=("chart-train", j, k))
            labels = np.asarray(fhat(z), dtype=float)
        else:
            px = cell.center + (x - cell.center) @ cell.basis @ cell.basis.T
            labels = np.asarray(f(px), dtype=float)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IllConditionedWarning)
            net = lsq_train(z, labels, nodes.w, nodes.b, activation, ridge)
    return ChartModel(j, k, dom, net)


def train_manifold(
    f: Callable,
    tree: GMRATree,
    j: int,
    per_chart_cfg: ParamConfig,
    mode: str = "lsq",
    seed: int = 0,
    activation: Activation | None = None,
    ridge: float = 0.0,
    points=None,
    threads: int = 1,
    train_points: str = "chart",
    n_train: int = 100,
) -> ManifoldModel:
    """Fit one d-dimensional RVFL network per level-j cell.

    ``lsq`` fits the chart function on ``n_train`` uniform points of the
    chart box (``train_points="chart"``) or on ``(V^T x, f(P x))`` over the
    cell's members (``train_points="members"``);
    ``analytic`` uses the closed-form weights on the chart's bounding box and
    needs a unit-integral activation (sech is normalized by default).
    Each chart draws its parameters from its own substream, so the result
    does not depend on ``threads``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if train_points not in ("chart", "members"):
        raise ValueError("train_points must be 'chart' or 'members'")
    if per_chart_cfg.dim != tree.intrinsic_dim:
        raise ValueError(
            f"chart networks live in R^{tree.intrinsic_dim}, config has dim={per_chart_cfg.dim}"
        )
    from .activation import get_activation

    if activation is None:
        activation = get_activation("sech", normalized=(mode == "analytic"))
    elif mode == "analytic" and not activation.normalized:
        activation = normalize_to_unit_integral(activation)
    pts = tree.points if points is None else np.asarray(points, dtype=float)
    if pts is None:
        raise ValueError("training points are required")
    ks = range(len(tree.cells(j)))

    def job(k):
        return _train_chart(f, tree, j, k, per_chart_cfg, mode, seed, activation, ridge, pts, train_points, n_train)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            charts = list(ex.map(job, ks))
    else:
        charts = [job(k) for k in ks]
    return ManifoldModel(tree, j, charts)


def predict(model: ManifoldModel, x):
    """Nearest-centre dispatch followed by the chart network at ``V^T x``."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    ks = np.atleast_1d(nearest_center(model.tree, model.level, pts))
    out = np.empty(pts.shape[0])
    cells = model.tree.cells(model.level)
    for k in np.unique(ks):
        sel = ks == k
        out[sel] = model.charts[k](pts[sel] @ cells[k].basis)
    return float(out[0]) if single else out


def relative_error_suite(model: ManifoldModel, f: Callable, test_points) -> tuple[float, np.ndarray]:
    """Mean and per-point |f(x) - y|/|f(x)| (absolute error where f(x) = 0)."""
    x = np.atleast_2d(np.asarray(test_points, dtype=float))
    truth = np.asarray(f(x), dtype=float)
    err = np.abs(truth - predict(model, x))
    denom = np.where(truth != 0.0, np.abs(truth), 1.0)
    rel = err / denom
    return float(rel.mean()), rel
