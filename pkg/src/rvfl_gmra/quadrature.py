"""Deterministic quadrature for the one-dimensional parameter-space integral.

Used as the reference value that Monte-Carlo networks are measured against.
With ``s = w (x - y)`` the integrand factors as
``(F(y, w, u) rho(alpha (s - u)))^p``, so the phase integral collapses to a
smooth function ``g_p(s)`` that is Chebyshev-interpolated once; the remaining
``(y, w)`` integral uses composite Gauss-Legendre panels.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.polynomial import Chebyshev

from .activation import Activation, trunc_cos, trunc_sin
from .domain import CompactDomain
from .sampler import ParamConfig


def gl_panels(a: float, b: float, width: float, order: int = 12, breaks=()) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    cuts = sorted({a, b, *[c for c in breaks if a < c < b]})
    x0, w0 = np.polynomial.legendre.leggauss(order)
    xs, ws = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        m = max(1, math.ceil((hi - lo) / width))
        edges = np.linspace(lo, hi, m + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        xs.append((mid[:, None] + half[:, None] * x0).ravel())
        ws.append((half[:, None] * w0).ravel())
    return np.concatenate(xs), np.concatenate(ws)


def _phase_kernel(cfg: ParamConfig, K: CompactDomain, activation: Activation, p: int, regime: str, deg: int):
    h = cfg.u_half_width(K)
    L = cfg.L(K)
    trig = trunc_cos if regime == "integrable" else trunc_sin
    sign = 1.0 if regime == "integrable" else -1.0
    u, wu = gl_panels(-h, h, min(0.25, 0.25 / cfg.alpha), order=16)
    ku = (sign * trig(L, u)) ** p
    smax = cfg.omega * float(np.max(K.sides)) + 1e-12

    def g(s):
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        for i in range(0, s.size, 512):
            blk = s.ravel()[i : i + 512]
            out.ravel()[i : i + 512] = (activation(cfg.alpha * (blk[:, None] - u)) ** p) @ (ku * wu)
        return out

    return Chebyshev.interpolate(g, deg, domain=[-smax, smax])


def parameter_integral_1d(
    f: Callable,
    cfg: ParamConfig,
    K: CompactDomain,
    activation: Activation,
    x,
    p: int = 1,
    regime: str = "integrable",
    y_breaks=(),
    deg: int = 400,
) -> np.ndarray:
    """I(x;p) over K x [-Omega, Omega] x (phase interval) for a 1-D box K."""
    if cfg.dim != 1 or K.dim != 1 or K.kind != "box":
        raise ValueError("quadrature reference is implemented for 1-D boxes only")
    x = np.asarray(x, dtype=float).reshape(-1)
    g = _phase_kernel(cfg, K, activation, p, regime, deg)
    a, b = float(K.lower[0]), float(K.upper[0])
    om = cfg.omega
    w, ww = gl_panels(-om, om, min(0.25, 0.5 / cfg.alpha), order=16, breaks=(0.0,))
    Ww = ww * (cfg.alpha / (2.0 * om) * np.abs(w)) ** p
    # G_p(r) = int (alpha |w| / (2 Omega))^p g_p(w r) dw, smooth and even in r
    G = Chebyshev.interpolate(lambda r: g(np.outer(r, w)) @ Ww, deg, domain=[a - b, b - a])
    y, wy = gl_panels(a, b, (b - a) / 24, order=16, breaks=y_breaks)
    Wy = wy * np.asarray(f(y[:, None]), dtype=float).reshape(-1) ** p
    return G(x[:, None] - y[None, :]) @ Wy
