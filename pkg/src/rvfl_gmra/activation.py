"""Activation functions and truncated trigonometric kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy import integrate

INTEGRABLE = "integrable"
DERIVATIVE_INTEGRABLE = "derivative-integrable"


@dataclass(frozen=True)
class Activation:
    """Scalar nonlinearity with the integral metadata used by the analytic weights.

    For ``kind == "integrable"`` the norms describe the activation itself.  For
    ``kind == "derivative-integrable"`` they describe its derivative, which is
    the function the analytic construction actually integrates against.
    ``lipschitz`` always refers to the activation itself.  ``scale``
    multiplies the base function; normalization only touches it.
    """

    name: str
    base: Callable[[np.ndarray], np.ndarray]
    l1_norm: float
    integral: float
    l2_norm_sq: float
    lipschitz: float | None
    kind: str = INTEGRABLE
    scale: float = 1.0

    def __call__(self, z):
        return self.scale * self.base(np.asarray(z, dtype=float))

    eval = __call__

    @property
    def normalized(self) -> bool:
        return abs(self.integral - 1.0) <= 1e-12


def normalize_to_unit_integral(a: Activation) -> Activation:
    """Rescale ``a`` so that its integral (or its derivative's) equals one."""
    if not math.isfinite(a.integral) or a.integral == 0.0:
        raise ValueError(
            f"cannot normalize {a.name!r}: integral is {a.integral!r}; "
            "a unit-integral rescaling needs a finite nonzero integral"
        )
    s = 1.0 / a.integral
    if s == 1.0:
        return a
    return replace(
        a,
        scale=a.scale * s,
        integral=1.0,
        l1_norm=a.l1_norm * abs(s),
        l2_norm_sq=a.l2_norm_sq * s * s,
        lipschitz=None if a.lipschitz is None else a.lipschitz * abs(s),
    )


def _sech(z):
    az = np.abs(z)
    e = np.exp(-az)
    return 2.0 * e / (1.0 + e * e)


def _gaussian(z):
    return np.exp(-z * z)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _sigmoid_derivative(z):
    s = _sigmoid(z)
    return s * (1.0 - s)


# closed-form metadata; sup|rho'| gives the Lipschitz constant
_BUILTINS = {
    "sech": lambda: Activation("sech", _sech, math.pi, math.pi, 2.0, 0.5),
    "gaussian": lambda: Activation(
        "gaussian",
        _gaussian,
        math.sqrt(math.pi),
        math.sqrt(math.pi),
        math.sqrt(math.pi / 2.0),
        math.sqrt(2.0) * math.exp(-0.5),
    ),
    "sigmoid-derivative": lambda: Activation(
        "sigmoid-derivative", _sigmoid_derivative, 1.0, 1.0, 1.0 / 6.0, math.sqrt(3.0) / 18.0
    ),
    # metadata of the derivative (the logistic density)
    "sigmoid": lambda: Activation(
        "sigmoid", _sigmoid, 1.0, 1.0, 1.0 / 6.0, 0.25, kind=DERIVATIVE_INTEGRABLE
    ),
}


def available_activations() -> list[str]:
    return sorted(_BUILTINS)


def get_activation(name: str, normalized: bool = False) -> Activation:
    try:
        a = _BUILTINS[name]()
    except KeyError:
        raise ValueError(
            f"unknown activation {name!r}; choose from {available_activations()}"
        ) from None
    return normalize_to_unit_integral(a) if normalized else a


def custom_activation(
    name: str,
    fn: Callable[[np.ndarray], np.ndarray],
    tail: Callable[[float], float] | None = None,
    lipschitz: float | None = None,
    kind: str = INTEGRABLE,
    derivative: Callable[[np.ndarray], np.ndarray] | None = None,
) -> Activation:
    """Build an activation whose norms are found by adaptive quadrature.

    Args:
        fn: the activation, vectorized over numpy arrays.
        tail: envelope tail bound ``T -> int_{|z|>T} |g|`` of the integrated
            function ``g`` (``fn`` or ``derivative``).  The quadrature window
            ``[-T, T]`` is doubled until this drops below 1e-10.  Without an
            envelope a window of 64 is used.
        lipschitz: known Lipschitz constant, or None when unknown.
        kind: ``"integrable"`` or ``"derivative-integrable"``.
        derivative: required for the derivative-integrable kind.
    """
    if kind == DERIVATIVE_INTEGRABLE:
        if derivative is None:
            raise ValueError("derivative-integrable activations need their derivative")
        g = derivative
    elif kind == INTEGRABLE:
        g = fn
    else:
        raise ValueError(f"unknown activation kind {kind!r}")

    T = 1.0
    if tail is None:
        T = 64.0
    else:
        while tail(T) >= 1e-10:
            T *= 2.0
            if T > 1e8:
                raise ValueError("envelope tail bound never falls below 1e-10")

    def quad(h):
        val, _ = integrate.quad(lambda z: float(h(np.asarray(z))), -T, T, limit=500, points=[0.0])
        return val

    return Activation(
        name=name,
        base=fn,
        l1_norm=quad(lambda z: np.abs(g(z))),
        integral=quad(g),
        l2_norm_sq=quad(lambda z: g(z) ** 2),
        lipschitz=lipschitz,
        kind=kind,
    )


def truncation_half_width(L: int) -> float:
    """Half-width pi(2L+1)/2 of the support of the truncated kernels."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    return 0.5 * math.pi * (2 * L + 1)


def trunc_cos(L: int, x):
    """cos(x) on [-pi(2L+1)/2, pi(2L+1)/2], zero outside."""
    x = np.asarray(x, dtype=float)
    out = np.where(np.abs(x) <= truncation_half_width(L), np.cos(x), 0.0)
    return out[()] if out.ndim == 0 else out


def trunc_sin(L: int, x):
    """sin(x) on [-pi(2L+1)/2, pi(2L+1)/2], zero outside."""
    x = np.asarray(x, dtype=float)
    out = np.where(np.abs(x) <= truncation_half_width(L), np.sin(x), 0.0)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class TruncatedTrig:
    L: int
    mode: str = "cosine"

    def __post_init__(self):
        if self.mode not in ("cosine", "sine"):
            raise ValueError(f"mode must be 'cosine' or 'sine', got {self.mode!r}")

    @property
    def omega_range_half(self) -> float:
        return truncation_half_width(self.L)

    def __call__(self, x):
        return trunc_cos(self.L, x) if self.mode == "cosine" else trunc_sin(self.L, x)
