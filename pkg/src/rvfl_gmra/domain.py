"""Compact domains, the embedded sphere testbed and its target function."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, ndtri

from .rng import open_uniform, uniform_rows

DEFAULT_EMBEDDING_SEED = 20_000


@dataclass(frozen=True, eq=False)
class CompactDomain:
    """An axis-aligned box or a Euclidean ball in R^N.

    Build instances with :meth:`box` or :meth:`ball`.
    """

    kind: str
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    center: np.ndarray | None = field(default=None, repr=False)
    ball_radius: float = 0.0

    @classmethod
    def box(cls, bounds) -> "CompactDomain":
        b = np.atleast_2d(np.asarray(bounds, dtype=float))
        if b.ndim != 2 or b.shape[1] != 2:
            raise ValueError("box bounds must be a sequence of (low, high) pairs")
        if not np.all(b[:, 1] > b[:, 0]):
            raise ValueError("every box interval needs low < high")
        lo, hi = b[:, 0].copy(), b[:, 1].copy()
        lo.flags.writeable = hi.flags.writeable = False
        return cls("box", lo, hi)

    @classmethod
    def ball(cls, center, radius: float) -> "CompactDomain":
        c = np.atleast_1d(np.asarray(center, dtype=float)).copy()
        if radius <= 0:
            raise ValueError("ball radius must be positive")
        c.flags.writeable = False
        lo, hi = c - radius, c + radius
        lo.flags.writeable = hi.flags.writeable = False
        return cls("ball", lo, hi, c, float(radius))

    @property
    def dim(self) -> int:
        return int(self.lower.shape[0])

    @property
    def volume(self) -> float:
        if self.kind == "box":
            return float(np.prod(self.upper - self.lower))
        n = self.dim
        return float(
            math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1) + n * math.log(self.ball_radius))
        )

    @property
    def radius(self) -> float:
        """sup of the Euclidean norm over the domain."""
        if self.kind == "box":
            far = np.maximum(np.abs(self.lower), np.abs(self.upper))
            return float(np.linalg.norm(far))
        return float(np.linalg.norm(self.center) + self.ball_radius)

    @property
    def sides(self) -> np.ndarray:
        """Side lengths of the bounding box."""
        return self.upper - self.lower

    @property
    def n_uniforms(self) -> int:
        """Uniform draws consumed per sample."""
        return self.dim if self.kind == "box" else self.dim + 1

    def from_uniforms(self, u: np.ndarray) -> np.ndarray:
        """Map rows of ``n_uniforms`` U[0,1) draws to uniform points of the domain."""
        u = np.asarray(u, dtype=float)
        if self.kind == "box":
            return self.lower + (self.upper - self.lower) * u
        n = self.dim
        g = ndtri(open_uniform(u[:, :n]))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = self.ball_radius * u[:, n] ** (1.0 / n)
        return self.center + g * r[:, None]

    def contains(self, x, tol: float = 0.0) -> np.ndarray:
        x = np.atleast_2d(x)
        if self.kind == "box":
            return np.all((x >= self.lower - tol) & (x <= self.upper + tol), axis=1)
        return np.linalg.norm(x - self.center, axis=1) <= self.ball_radius + tol

    def to_dict(self) -> dict:
        if self.kind == "box":
            return {"kind": "box", "bounds": np.column_stack([self.lower, self.upper]).tolist()}
        return {"kind": "ball", "center": self.center.tolist(), "radius": self.ball_radius}

    @classmethod
    def from_dict(cls, d: dict) -> "CompactDomain":
        if d["kind"] == "box":
            return cls.box(d["bounds"])
        if d["kind"] == "ball":
            return cls.ball(d["center"], d["radius"])
        raise ValueError(f"unknown domain kind {d['kind']!r}")


def sample_uniform(domain: CompactDomain, count: int, seed: int, stream=("uniform",)) -> np.ndarray:
    """``count`` i.i.d. uniform points of ``domain``, shape ``(count, dim)``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    u = uniform_rows(seed, tuple(stream), 0, count, domain.n_uniforms)
    return domain.from_uniforms(u)


def covering_number_bound(domain: CompactDomain, delta: float) -> int:
    """Upper bound on the delta-covering number from an axis grid.

    Each axis is cut into ``ceil(side * sqrt(N) / (2 delta))`` pieces; the cell
    half-diagonals are then at most ``delta``.  Once ``delta`` reaches the
    domain radius a single ball at the origin suffices.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta >= domain.radius:
        return 1
    counts = _grid_counts(domain, delta)
    return max(1, int(np.prod(counts)))


def _grid_counts(domain: CompactDomain, delta: float) -> np.ndarray:
    n = domain.dim
    c = np.ceil(domain.sides * math.sqrt(n) / (2.0 * delta)).astype(np.int64)
    return np.maximum(c, 1)


def covering_grid(domain: CompactDomain, delta: float) -> np.ndarray:
    """Centres of the grid counted by :func:`covering_number_bound`, inside the domain.

    Ball centres falling outside are pulled back onto the ball; the metric
    projection onto a convex set cannot increase distances to its points, so
    the result is still a delta-net.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta >= domain.radius:
        return np.zeros((1, domain.dim))
    counts = _grid_counts(domain, delta)
    axes = [
        lo + (np.arange(m) + 0.5) * (hi - lo) / m
        for lo, hi, m in zip(domain.lower, domain.upper, counts)
    ]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, domain.dim)
    if domain.kind == "ball":
        off = grid - domain.center
        nrm = np.linalg.norm(off, axis=1, keepdims=True)
        scale = np.minimum(1.0, domain.ball_radius / np.maximum(nrm, 1e-300))
        grid = domain.center + off * scale
    return grid


@dataclass(frozen=True, eq=False)
class EmbeddedSphere:
    """The unit 2-sphere placed in R^N by a column-orthonormal N x 3 matrix."""

    ambient_dim: int = 20
    seed: int = DEFAULT_EMBEDDING_SEED
    intrinsic_dim: int = 2
    embedding: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.ambient_dim < 3:
            raise ValueError("ambient dimension must be at least 3")
        g = ndtri(open_uniform(uniform_rows(self.seed, ("embedding",), 0, self.ambient_dim, 3)))
        q, r = np.linalg.qr(g)
        # sign convention makes Q unique
        q = q * np.where(np.diag(r) < 0, -1.0, 1.0)
        q.flags.writeable = False
        object.__setattr__(self, "embedding", q)

    def sample(self, count: int, seed: int, stream=("sphere",)) -> np.ndarray:
        if count < 1:
            raise ValueError("count must be at least 1")
        g = ndtri(open_uniform(uniform_rows(seed, tuple(stream), 0, count, 3)))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return g @ self.embedding.T


def sample_sphere(s: EmbeddedSphere, count: int, seed: int) -> np.ndarray:
    return s.sample(count, seed)


def test_function_exp_sum(x) -> np.ndarray:
    """exp of the coordinate sum; accepts a point or an array of points."""
    x = np.asarray(x, dtype=float)
    return np.exp(np.sum(x, axis=-1))


# keep pytest from collecting the target function as a test
test_function_exp_sum.__test__ = False
