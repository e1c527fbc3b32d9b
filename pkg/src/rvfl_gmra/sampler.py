"""Random hidden-layer parameters for RVFL networks.

Weights are uniform on ``[-alpha*Omega, alpha*Omega]^dim``, anchor points are
uniform on the domain, phases ``u`` are uniform on the truncation window and
biases follow ``b = -<w, y> - alpha*u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .activation import truncation_half_width
from .domain import CompactDomain
from .rng import uniform_rows

U_RANGES = ("full", "omega")


def derive_L(dim: int, radius: float, omega: float) -> int:
    """Truncation index ceil((2 dim / pi) * radius * omega - 1/2), floored at 0."""
    if dim < 1:
        raise ValueError("dim must be positive")
    if radius < 0 or omega < 0:
        raise ValueError("radius and omega must be nonnegative")
    return max(0, math.ceil((2.0 * dim / math.pi) * radius * omega - 0.5))


@dataclass(frozen=True)
class ParamConfig:
    alpha: float
    omega: float
    n_nodes: int
    dim: int
    u_range: str = "full"

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be at least 1")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.u_range not in U_RANGES:
            raise ValueError(f"u_range must be one of {U_RANGES}")

    def L(self, domain: CompactDomain) -> int:
        return derive_L(self.dim, domain.radius, self.omega)

    def u_half_width(self, domain: CompactDomain) -> float:
        """Half-width of the phase interval actually sampled."""
        if self.u_range == "omega":
            return float(self.omega)
        return truncation_half_width(self.L(domain))

    def param_volume(self, domain: CompactDomain) -> float:
        """Volume of K x [-Omega, Omega]^dim x (phase interval)."""
        return (2.0 * self.omega) ** self.dim * 2.0 * self.u_half_width(domain) * domain.volume


@dataclass(frozen=True)
class NodeSample:
    w: np.ndarray
    y: np.ndarray
    u: float
    b: float


@dataclass(frozen=True, eq=False)
class NodeSamples:
    """Struct-of-arrays batch: ``w, y`` are ``(n, dim)``, ``u, b`` are ``(n,)``."""

    w: np.ndarray
    y: np.ndarray
    u: np.ndarray
    b: np.ndarray
    alpha: float
    start: int = 0

    def __len__(self) -> int:
        return int(self.u.shape[0])

    def __getitem__(self, k: int) -> NodeSample:
        return NodeSample(self.w[k], self.y[k], float(self.u[k]), float(self.b[k]))

    @classmethod
    def concat(cls, parts: list["NodeSamples"]) -> "NodeSamples":
        return cls(
            np.concatenate([p.w for p in parts]),
            np.concatenate([p.y for p in parts]),
            np.concatenate([p.u for p in parts]),
            np.concatenate([p.b for p in parts]),
            parts[0].alpha,
            parts[0].start,
        )


def bias_from(w, y, u, alpha: float):
    """b = -<w, y> - alpha*u, row-wise."""
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    return -np.sum(w * y, axis=-1) - alpha * np.asarray(u, dtype=float)


def sample_nodes(
    cfg: ParamConfig,
    K: CompactDomain,
    seed: int,
    start: int = 0,
    stop: int | None = None,
    stream: tuple = (),
) -> NodeSamples:
    """Nodes ``start..stop-1`` of the parameter stream for ``(seed, stream)``.

    Node ``k`` is a deterministic function of ``(seed, stream, k)`` alone, so
    any partition of the index range reproduces the serial draw exactly.
    """
    if K.dim != cfg.dim:
        raise ValueError(f"domain dimension {K.dim} does not match config dimension {cfg.dim}")
    stop = cfg.n_nodes if stop is None else stop
    if not 0 <= start <= stop:
        raise ValueError("need 0 <= start <= stop")
    d = cfg.dim
    width = d + K.n_uniforms + 1
    raw = uniform_rows(seed, ("nodes",) + tuple(stream), start, stop, width)
    span = cfg.alpha * cfg.omega
    w = span * (2.0 * raw[:, :d] - 1.0)
    y = K.from_uniforms(raw[:, d : d + K.n_uniforms])
    h = cfg.u_half_width(K)
    u = h * (2.0 * raw[:, -1] - 1.0)
    b = bias_from(w, y, u, cfg.alpha)
    return NodeSamples(w, y, u, b, cfg.alpha, start)
