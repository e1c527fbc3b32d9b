"""RVFL networks: analytic output weights, least-squares fits and error measures."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .activation import DERIVATIVE_INTEGRABLE, INTEGRABLE, Activation, trunc_cos, trunc_sin
from .domain import CompactDomain, covering_grid, covering_number_bound, sample_uniform
from .sampler import NodeSamples, ParamConfig, sample_nodes

REGIMES = ("integrable", "derivative")
_CHUNK = 1 << 21


class IllConditionedWarning(UserWarning):
    """Hidden-feature matrix is rank deficient; a minimum-norm solution was returned."""


@dataclass(frozen=True, eq=False)
class RVFLNetwork:
    """f(x) = sum_k coef[k] * rho(<weights[k], x> + biases[k])."""

    weights: np.ndarray
    biases: np.ndarray
    coef: np.ndarray
    activation: Activation

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.weights, dtype=float))
        b = np.asarray(self.biases, dtype=float).reshape(-1)
        v = np.asarray(self.coef, dtype=float).reshape(-1)
        if not (w.shape[0] == b.shape[0] == v.shape[0]):
            raise ValueError("weights, biases and coef must have one entry per node")
        for a in (w, b, v):
            a.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)
        object.__setattr__(self, "coef", v)

    @property
    def dim(self) -> int:
        return int(self.weights.shape[1])

    @property
    def n_nodes(self) -> int:
        return int(self.coef.shape[0])

    def hidden(self, x) -> np.ndarray:
        """Hidden-layer outputs, shape ``(m, n_nodes)``."""
        x = _as_points(x, self.dim)
        return self.activation(x @ self.weights.T + self.biases)

    def __call__(self, x):
        """Evaluate at one point (returns a float) or at a batch (returns an array)."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 0 or (x.ndim == 1 and self.dim > 1)
        pts = _as_points(x, self.dim)
        out = np.empty(pts.shape[0])
        step = max(1, _CHUNK // max(self.n_nodes, 1))
        for lo in range(0, pts.shape[0], step):
            h = self.hidden(pts[lo : lo + step])
            # contiguous last-axis reduction: numpy sums pairwise in a fixed order
            out[lo : lo + step] = np.sum(h * self.coef, axis=1)
        return float(out[0]) if single else out


def _as_points(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1, 1)
    elif x.ndim == 1:
        x = x.reshape(1, dim) if x.shape[0] == dim else x.reshape(-1, 1)
    if x.shape[1] != dim:
        raise ValueError(f"points have dimension {x.shape[1]}, network expects {dim}")
    return x


def evaluate(net: RVFLNetwork, x):
    return net(x)


def _apply(f: Callable, pts: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(pts), dtype=float), (pts.shape[0],))


def _resolve_regime(activation: Activation, regime: str | None) -> str:
    if regime is None:
        regime = "derivative" if activation.kind == DERIVATIVE_INTEGRABLE else "integrable"
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}")
    expected = INTEGRABLE if regime == "integrable" else DERIVATIVE_INTEGRABLE
    if activation.kind != expected:
        raise ValueError(
            f"activation {activation.name!r} is {activation.kind}; regime {regime!r} needs {expected}"
        )
    if not activation.normalized:
        raise ValueError(
            f"activation {activation.name!r} has integral {activation.integral}; "
            "normalize it to unit integral before building analytic weights"
        )
    return regime


def integrand_weight(f_y, w, u, alpha: float, omega: float, L: int, regime: str = "integrable"):
    """The weight function of the parameter-space integral.

    ``w`` is in integration coordinates (``[-omega, omega]^dim``) and ``f_y``
    holds ``f`` evaluated at the anchor points.
    """
    w = np.atleast_2d(w)
    dim = w.shape[1]
    pref = alpha / (2.0 * omega) ** dim * np.abs(np.prod(w, axis=1)) * f_y
    if regime == "integrable":
        return pref * trunc_cos(L, u)
    return -pref * trunc_sin(L, u)


@dataclass(frozen=True)
class WeightRecipe:
    regime: str
    M: float
    vol_KOmega: float


def weight_recipe(f, cfg: ParamConfig, K: CompactDomain, regime: str, seed: int = 0) -> WeightRecipe:
    """sup|f| estimated on 10^4 uniform points, plus the parameter volume."""
    pts = sample_uniform(K, 10_000, seed, stream=("sup-f",))
    return WeightRecipe(regime, float(np.max(np.abs(_apply(f, pts)))), cfg.param_volume(K))


def analytic_weights(
    f: Callable,
    cfg: ParamConfig,
    K: CompactDomain,
    samples: NodeSamples,
    activation: Activation,
    regime: str | None = None,
) -> RVFLNetwork:
    """Output weights from the Monte-Carlo discretization of the integral representation.

    ``v_k = vol(K(Omega))/n * F(y_k, w_k / alpha, u_k)``; the network then
    coincides with the raw cubature sum (:func:`cubature_sum`) at every x.
    """
    regime = _resolve_regime(activation, regime)
    if samples.w.shape[1] != cfg.dim or K.dim != cfg.dim:
        raise ValueError("sample, domain and config dimensions disagree")
    n = len(samples)
    L = cfg.L(K)
    F = integrand_weight(_apply(f, samples.y), samples.w / cfg.alpha, samples.u, cfg.alpha, cfg.omega, L, regime)
    v = cfg.param_volume(K) / n * F
    return RVFLNetwork(samples.w, samples.b, v, activation)


def cubature_sum(
    f: Callable,
    cfg: ParamConfig,
    K: CompactDomain,
    samples: NodeSamples,
    activation: Activation,
    x,
    regime: str | None = None,
) -> np.ndarray:
    """Equal-weight cubature of the parameter integral at points ``x``.

    Evaluated in integration coordinates: ``rho(alpha <w, x> + b_alpha)`` with
    ``b_alpha = -alpha(<w, y> + u)`` and ``w`` rescaled by ``1/alpha``.
    """
    regime = _resolve_regime(activation, regime)
    x = _as_points(x, cfg.dim)
    wi = samples.w / cfg.alpha
    L = cfg.L(K)
    F = integrand_weight(_apply(f, samples.y), wi, samples.u, cfg.alpha, cfg.omega, L, regime)
    b_alpha = -cfg.alpha * (np.sum(wi * samples.y, axis=1) + samples.u)
    vol = cfg.param_volume(K)
    n = len(samples)
    out = np.empty(x.shape[0])
    step = max(1, _CHUNK // max(n, 1))
    for lo in range(0, x.shape[0], step):
        arg = cfg.alpha * (x[lo : lo + step] @ wi.T) + b_alpha
        out[lo : lo + step] = vol / n * np.sum(F * activation(arg), axis=1)
    return out


def lsq_train(
    points,
    labels,
    weights,
    biases,
    activation: Activation,
    ridge: float = 0.0,
) -> RVFLNetwork:
    """Least-squares output weights for fixed hidden parameters.

    Minimizes ``||H v - labels||^2 + ridge ||v||^2``.  With ``ridge == 0`` the
    minimum-norm (pseudoinverse) solution is returned, and a rank-deficient
    hidden matrix raises :class:`IllConditionedWarning`.
    """
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    weights = np.atleast_2d(np.asarray(weights, dtype=float))
    biases = np.asarray(biases, dtype=float).reshape(-1)
    x = _as_points(points, weights.shape[1])
    y = np.asarray(labels, dtype=float).reshape(-1)
    if x.shape[0] < 1:
        raise ValueError("need at least one training pair")
    if x.shape[0] != y.shape[0]:
        raise ValueError("points and labels differ in length")
    H = activation(x @ weights.T + biases)
    if ridge == 0.0:
        v, _, rank, _ = np.linalg.lstsq(H, y, rcond=None)
        if rank < min(H.shape):
            warnings.warn(
                f"hidden matrix {H.shape} has numerical rank {rank}; returning the minimum-norm solution",
                IllConditionedWarning,
                stacklevel=2,
            )
    else:
        # thin SVD: v = V diag(s / (s^2 + ridge)) U^T y
        U, s, Vt = np.linalg.svd(H, full_matrices=False)
        v = Vt.T @ (s / (s * s + ridge) * (U.T @ y))
    return RVFLNetwork(weights, biases, v, activation)


def l2_error(f: Callable, net: RVFLNetwork, K: CompactDomain, n_mc: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of the squared L2(K) error with its standard error."""
    if n_mc < 2:
        raise ValueError("n_mc must be at least 2")
    x = sample_uniform(K, n_mc, seed, stream=("l2err",))
    sq = (_apply(f, x) - net(x)) ** 2
    vol = K.volume
    return vol * float(np.mean(sq)), vol * float(np.std(sq, ddof=1)) / math.sqrt(n_mc)


def admissible_delta(
    cfg: ParamConfig, K: CompactDomain, activation: Activation, epsilon: float, sup_f: float
) -> float:
    """Largest net resolution allowed by the non-asymptotic node bound."""
    if activation.lipschitz is None:
        raise ValueError(f"activation {activation.name!r} has no known Lipschitz constant")
    N = cfg.dim
    denom = (
        4.0
        * math.sqrt(N)
        * activation.lipschitz
        * cfg.alpha**2
        * sup_f
        * cfg.omega ** (N + 2)
        * K.volume**1.5
        * (1.0 + 2.0 * N * K.radius)
    )
    return math.sqrt(epsilon) / denom if denom > 0 else math.inf


def node_bound(
    cfg: ParamConfig,
    K: CompactDomain,
    activation: Activation,
    epsilon: float,
    eta: float,
    delta: float,
    C_emp: float,
    Sigma_emp: float,
    sup_f: float = 1.0,
    c: float = 1.0,
) -> int:
    """Node count sufficient for an epsilon-accurate network with probability 1 - eta.

    The universal constant ``c`` defaults to 1, so the value is a normalized
    diagnostic rather than a calibrated guarantee.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if activation.lipschitz is None:
        raise ValueError(
            f"node bound unsupported: activation {activation.name!r} has unknown Lipschitz constant"
        )
    dmax = admissible_delta(cfg, K, activation, epsilon, sup_f)
    if not 0 < delta < dmax:
        raise ValueError(f"delta={delta} outside the admissible range (0, {dmax:.6g})")
    if C_emp < 0 or Sigma_emp < 0:
        raise ValueError("complexity constants must be nonnegative")
    if C_emp == 0 or Sigma_emp == 0:
        # deviation is almost surely zero
        return 1
    N = cfg.dim
    cover = covering_number_bound(K, delta)
    se = math.sqrt(epsilon)
    num = 2.0 * math.sqrt(2.0 * K.volume) * C_emp * c * math.log(3.0 * cover / eta)
    ratio = (C_emp * se) / (
        4.0 * math.sqrt(2.0) * N * (2.0 * cfg.omega) ** (N + 1) * K.radius * K.volume**2.5 * Sigma_emp
    )
    return max(1, math.ceil(num / (se * math.log1p(ratio))))


class ComplexityConstants(NamedTuple):
    C: float
    Sigma: float
    probes: np.ndarray
    I1: np.ndarray
    I2: np.ndarray


def parameter_moments(
    f: Callable,
    cfg: ParamConfig,
    K: CompactDomain,
    activation: Activation,
    z,
    n_probe: int,
    seed: int,
    regime: str | None = None,
):
    """Plug-in estimates of I(z;1), I(z;2), sigma(z)^2 and C_z at each probe ``z``."""
    regime = _resolve_regime(activation, regime)
    z = _as_points(z, cfg.dim)
    s = sample_nodes(cfg, K, seed, 0, n_probe, stream=("probe",))
    vol = cfg.param_volume(K)
    F = integrand_weight(_apply(f, s.y), s.w / cfg.alpha, s.u, cfg.alpha, cfg.omega, cfg.L(K), regime)
    I1 = np.empty(z.shape[0])
    I2 = np.empty(z.shape[0])
    Cz = np.empty(z.shape[0])
    step = max(1, _CHUNK // n_probe)
    for lo in range(0, z.shape[0], step):
        T = F * activation(z[lo : lo + step] @ s.w.T + s.b)
        m1 = np.mean(T, axis=1)
        I1[lo : lo + step] = vol * m1
        I2[lo : lo + step] = vol * np.mean(T * T, axis=1)
        Cz[lo : lo + step] = np.max(np.abs(vol * T - vol * m1[:, None]), axis=1)
    sigma_sq = np.maximum(I2 / vol - I1**2 / vol**2, 0.0)
    return I1, I2, sigma_sq, Cz


def estimate_complexity_constants(
    f: Callable,
    cfg: ParamConfig,
    K: CompactDomain,
    activation: Activation,
    n_probe: int,
    seed: int,
    delta: float | None = None,
    n_random: int = 1000,
) -> ComplexityConstants:
    """Empirical stand-ins for the sup over a delta-net of C_z and sigma(z)^2.

    The essential suprema are replaced by maxima over ``n_probe`` parameter
    draws and over the covering grid plus ``n_random`` uniform points of K.
    ``delta`` defaults to a tenth of the domain radius.
    """
    if delta is None:
        delta = 0.1 * max(K.radius, 1e-12)
    probes = np.vstack([covering_grid(K, delta), sample_uniform(K, n_random, seed, stream=("net",))])
    I1, I2, sigma_sq, Cz = parameter_moments(f, cfg, K, activation, probes, n_probe, seed)
    return ComplexityConstants(float(np.max(Cz)), float(np.max(sigma_sq)), probes, I1, I2)
