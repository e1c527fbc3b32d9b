"""Plain Monte-Carlo cubature with its variance, mean-square-error law and tail bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .domain import CompactDomain
from .rng import iter_uniform_rows, uniform_rows


@dataclass(frozen=True)
class MCEstimate:
    value: float
    n: int
    variance_est: float
    seed: int


def _f_on(f: Callable, S: CompactDomain, u: np.ndarray) -> np.ndarray:
    x = S.from_uniforms(u)
    return np.broadcast_to(np.asarray(f(x), dtype=float), (x.shape[0],))


def mc_integrate(f: Callable, S: CompactDomain, n: int, seed: int) -> MCEstimate:
    """(vol(S)/n) * sum f(x_j) over n i.i.d. uniform points of S."""
    if n < 1:
        raise ValueError("n must be at least 1")
    vals = _f_on(f, S, uniform_rows(seed, ("mc",), 0, n, S.n_uniforms))
    vol = S.volume
    var = float(np.var(vals, ddof=1)) if n > 1 else 0.0
    return MCEstimate(vol * float(np.mean(vals)), n, vol * vol * var / n, seed)


def mc_variance(f: Callable, S: CompactDomain, n_probe: int, seed: int) -> float:
    """Plug-in estimate of I(f^2,S)/vol(S) - I(f,S)^2/vol(S)^2, clipped at zero."""
    if n_probe < 2:
        raise ValueError("n_probe must be at least 2")
    vals = _f_on(f, S, uniform_rows(seed, ("mc-variance",), 0, n_probe, S.n_uniforms))
    # centred form avoids cancellation in E f^2 - (E f)^2
    return max(float(np.mean((vals - vals.mean()) ** 2)), 0.0)


def mc_trials(f: Callable, S: CompactDomain, n: int, trials: int, seed: int) -> np.ndarray:
    """``trials`` independent n-point estimates; trial t is row t of its own substream."""
    width = n * S.n_uniforms
    vol = S.volume
    out = np.empty(trials)
    for lo, u in iter_uniform_rows(seed, ("mc-trials", n), 0, trials, width):
        vals = _f_on(f, S, u.reshape(-1, S.n_uniforms)).reshape(u.shape[0], n)
        out[lo : lo + u.shape[0]] = vol * np.mean(vals, axis=1)
    return out


class MSERow(NamedTuple):
    n: int
    mse_emp: float
    mse_pred: float
    ratio: float


def verify_mse_law(
    f: Callable,
    S: CompactDomain,
    n_grid,
    trials: int,
    seed: int,
    exact: float | None = None,
    sigma_sq: float | None = None,
    n_reference: int = 1_000_000,
) -> list[MSERow]:
    """Empirical MSE of the n-point estimate next to vol^2 sigma^2 / n.

    ``exact`` and ``sigma_sq`` default to large-sample estimates drawn from
    streams disjoint from the trials.
    """
    if trials < 2:
        raise ValueError("trials must be at least 2")
    if exact is None:
        exact = mc_integrate(f, S, n_reference, seed).value
    if sigma_sq is None:
        sigma_sq = mc_variance(f, S, n_reference, seed)
    vol = S.volume
    rows = []
    for n in n_grid:
        est = mc_trials(f, S, int(n), trials, seed)
        mse = float(np.mean((est - exact) ** 2))
        pred = vol * vol * sigma_sq / n
        rows.append(MSERow(int(n), mse, pred, mse / pred if pred > 0 else math.nan))
    return rows


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


class BennettBound(NamedTuple):
    value: float
    raw: float


def bennett_bound(n: int, t: float, K_bound: float, vol_sq_sigma_sq: float, c: float = 1.0) -> BennettBound:
    """3 exp(-(n t / (c K)) log(1 + K t / (vol^2 sigma^2))), clipped at one.

    ``c`` is the unspecified universal constant; 1 is only a normalization.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if K_bound <= 0 or c <= 0:
        raise ValueError("K_bound and c must be positive")
    if vol_sq_sigma_sq <= 0:
        # degenerate integrand: the estimate is exact
        return BennettBound(0.0, 0.0)
    raw = 3.0 * math.exp(-(n * t / (c * K_bound)) * math.log1p(K_bound * t / vol_sq_sigma_sq))
    return BennettBound(min(raw, 1.0), raw)


def almost_sure_bound(f: Callable, S: CompactDomain, exact: float, n_probe: int, seed: int) -> float:
    """max over probe points of |vol(S) f(x) - I(f,S)|."""
    vals = _f_on(f, S, uniform_rows(seed, ("as-bound",), 0, n_probe, S.n_uniforms))
    return float(np.max(np.abs(S.volume * vals - exact)))


def tail_frequencies(estimates: np.ndarray, exact: float, ts) -> np.ndarray:
    """Fraction of estimates with |I_n - I| >= t, for each t."""
    dev = np.abs(np.asarray(estimates) - exact)
    return np.array([float(np.mean(dev >= t)) for t in ts])
