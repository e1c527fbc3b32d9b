"""Empirical geometric multi-resolution analysis of a point cloud.

The tree is a seeded 2-means recursion.  Every cell carries the mean of its
members and the top-``d`` principal directions, defining the affine projector
``P x = c + V V^T (x - c)``.  Cells too small to split are carried unchanged
to the next level, so each level partitions the full point set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import uniform_rows

_LLOYD_ITERS = 100


@dataclass(eq=False)
class Cell:
    center: np.ndarray
    basis: np.ndarray
    members: np.ndarray
    parent: int = -1
    children: list[int] = field(default_factory=list)
    inherited: bool = False


@dataclass(eq=False)
class GMRATree:
    levels: list[list[Cell]]
    intrinsic_dim: int
    ambient_dim: int
    points: np.ndarray | None = field(default=None, repr=False)
    _centers: dict = field(default_factory=dict, repr=False)

    @property
    def depth(self) -> int:
        """Index of the finest level."""
        return len(self.levels) - 1

    def cells(self, j: int) -> list[Cell]:
        if not 0 <= j <= self.depth:
            raise IndexError(f"level {j} outside 0..{self.depth}")
        return self.levels[j]

    def centers(self, j: int) -> np.ndarray:
        if j not in self._centers:
            self._centers[j] = np.array([c.center for c in self.cells(j)])
        return self._centers[j]


def _min_split(d: int) -> int:
    return max(2 * d + 2, 10)


def _pca(x: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    c = x.mean(axis=0)
    y = x - c
    cov = y.T @ y / x.shape[0]
    evals, evecs = np.linalg.eigh(cov)
    V = evecs[:, ::-1][:, :d]
    # sign convention: largest-magnitude entry of each column positive
    idx = np.argmax(np.abs(V), axis=0)
    V = V * np.where(V[idx, np.arange(d)] < 0, -1.0, 1.0)
    return c, np.ascontiguousarray(V)


def _two_means(x: np.ndarray, seed: int, j: int, k: int) -> np.ndarray:
    """Boolean mask of the second cluster from seeded k-means++ plus Lloyd."""
    u = uniform_rows(seed, ("gmra-split", j, k), 0, 1, 2)[0]
    m = x.shape[0]
    c0 = x[min(int(u[0] * m), m - 1)]
    d2 = np.sum((x - c0) ** 2, axis=1)
    tot = d2.sum()
    if tot == 0.0:
        return np.zeros(m, dtype=bool)
    c1 = x[min(int(np.searchsorted(np.cumsum(d2), u[1] * tot, side="right")), m - 1)]
    cent = np.stack([c0, c1])
    lab = None
    for _ in range(_LLOYD_ITERS):
        dist = np.sum((x[:, None, :] - cent[None]) ** 2, axis=2)
        new = dist[:, 1] < dist[:, 0]
        if lab is not None and np.array_equal(new, lab):
            break
        lab = new
        if lab.all() or not lab.any():
            break
        cent = np.stack([x[~lab].mean(axis=0), x[lab].mean(axis=0)])
    return lab


def gmra_build(points, d: int, j_max: int, seed: int = 0) -> GMRATree:
    """Build levels ``0..j_max`` (fewer if no cell can be split any more)."""
    x = np.asarray(points, dtype=float)
    if x.ndim != 2:
        raise ValueError("points must be a 2-D array")
    m, N = x.shape
    if not 1 <= d < N:
        raise ValueError(f"need 1 <= d < ambient dimension {N}, got d={d}")
    if m < d + 1:
        raise ValueError(f"need at least d+1={d + 1} points, got {m}")
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    c, V = _pca(x, d)
    levels = [[Cell(c, V, np.arange(m))]]
    for j in range(j_max):
        nxt: list[Cell] = []
        split_any = False
        for k, cell in enumerate(levels[j]):
            mem = cell.members
            lab = _two_means(x[mem], seed, j, k) if mem.size >= _min_split(d) else None
            if lab is None or lab.all() or not lab.any():
                cell.children = [len(nxt)]
                nxt.append(Cell(cell.center, cell.basis, mem, k, inherited=True))
                continue
            split_any = True
            for part in (mem[~lab], mem[lab]):
                cell.children.append(len(nxt))
                if part.size >= d + 1:
                    pc, pV = _pca(x[part], d)
                    nxt.append(Cell(pc, pV, part, k))
                else:
                    nxt.append(Cell(cell.center, cell.basis, part, k, inherited=True))
        if not split_any:
            for cell in levels[j]:
                cell.children = []
            break
        levels.append(nxt)
    return GMRATree(levels, d, N, x)


def nearest_center(tree: GMRATree, j: int, x) -> np.ndarray | int:
    """Index of the closest level-j centre; ties go to the lowest index."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    C = tree.centers(j)
    out = np.empty(pts.shape[0], dtype=np.int64)
    step = max(1, (1 << 22) // (C.shape[0] * C.shape[1]))
    for lo in range(0, pts.shape[0], step):
        d2 = np.sum((pts[lo : lo + step, None, :] - C[None]) ** 2, axis=2)
        out[lo : lo + step] = np.argmin(d2, axis=1)
    return int(out[0]) if single else out


def project(tree: GMRATree, j: int, k: int, x) -> tuple[np.ndarray, np.ndarray]:
    """Affine projection ``P x`` and chart coordinates ``z = V^T x``."""
    cell = tree.cells(j)[k]
    x = np.asarray(x, dtype=float)
    z = x @ cell.basis
    px = cell.center + (x - cell.center) @ cell.basis @ cell.basis.T
    return px, z


def residuals(tree: GMRATree, j: int, x) -> np.ndarray:
    """||x - P_{j,k'} x|| with k' the nearest centre at level j."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    ks = nearest_center(tree, j, x)
    out = np.empty(x.shape[0])
    for k in np.unique(ks):
        sel = ks == k
        px, _ = project(tree, j, int(k), x[sel])
        out[sel] = np.linalg.norm(x[sel] - px, axis=1)
    return out


def accuracy_profile(tree: GMRATree, test_points) -> list[tuple[int, float, float]]:
    """Rows ``(j, max residual, mean residual)`` for every level."""
    rows = []
    for j in range(tree.depth + 1):
        r = residuals(tree, j, test_points)
        rows.append((j, float(r.max()), float(r.mean())))
    return rows


def cell_residual_profile(tree: GMRATree) -> list[tuple[int, float, float]]:
    """Rows ``(j, max, mean)`` of member residuals under each member's own cell projector."""
    if tree.points is None:
        raise ValueError("tree was built without keeping its points")
    rows = []
    for j, cells in enumerate(tree.levels):
        res = np.empty(tree.points.shape[0])
        for cell in cells:
            y = tree.points[cell.members] - cell.center
            res[cell.members] = np.linalg.norm(y - y @ cell.basis @ cell.basis.T, axis=1)
        rows.append((j, float(res.max()), float(res.mean())))
    return rows


def full_depth(tree: GMRATree) -> int:
    """Deepest level at which every cell has been split (``2**j`` cells)."""
    return max(j for j, cells in enumerate(tree.levels) if len(cells) == 2**j)
