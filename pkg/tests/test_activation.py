import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from rvfl_gmra.activation import (
    DERIVATIVE_INTEGRABLE,
    INTEGRABLE,
    Activation,
    TruncatedTrig,
    available_activations,
    custom_activation,
    get_activation,
    normalize_to_unit_integral,
    trunc_cos,
    trunc_sin,
    truncation_half_width,
)


def _quad(fn, T=60.0):
    return integrate.quad(lambda z: float(fn(np.asarray(z))), -T, T, limit=400, points=[0.0])[0]


class TestBuiltins:
    def test_registry(self):
        assert available_activations() == ["gaussian", "sech", "sigmoid", "sigmoid-derivative"]

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown activation"):
            get_activation("relu")

    @pytest.mark.parametrize("name", ["sech", "gaussian", "sigmoid-derivative"])
    def test_metadata_matches_quadrature(self, name):
        a = get_activation(name)
        assert a.kind == INTEGRABLE
        assert _quad(a) == pytest.approx(a.integral, rel=1e-9)
        assert _quad(lambda z: np.abs(a(z))) == pytest.approx(a.l1_norm, rel=1e-9)
        assert _quad(lambda z: a(z) ** 2) == pytest.approx(a.l2_norm_sq, rel=1e-9)

    @pytest.mark.parametrize("name", available_activations())
    def test_lipschitz_is_sup_of_derivative(self, name):
        a = get_activation(name)
        z = np.linspace(-12, 12, 200_001)
        slope = np.max(np.abs(np.diff(a(z)) / np.diff(z)))
        assert slope <= a.lipschitz * (1 + 1e-6)
        assert slope == pytest.approx(a.lipschitz, rel=1e-3)

    def test_sech_values(self):
        a = get_activation("sech")
        assert a(0.0) == 1.0
        assert a(1.0) == pytest.approx(1 / math.cosh(1.0), rel=1e-15)
        assert a(800.0) == 0.0

    def test_sigmoid_is_derivative_kind(self):
        a = get_activation("sigmoid")
        assert a.kind == DERIVATIVE_INTEGRABLE
        # metadata describes the logistic density
        assert a.integral == 1.0 and a.l2_norm_sq == pytest.approx(1 / 6)


class TestNormalize:
    def test_sech_to_unit_integral(self):
        a = normalize_to_unit_integral(get_activation("sech"))
        assert a.integral == 1.0
        assert a(0.0) == pytest.approx(1 / math.pi, rel=1e-15)
        assert _quad(a) == pytest.approx(1.0, abs=1e-6)
        assert a.l1_norm == pytest.approx(1.0)
        assert a.l2_norm_sq == pytest.approx(2 / math.pi**2)
        assert a.lipschitz == pytest.approx(0.5 / math.pi)

    def test_already_unit_is_unchanged(self):
        a = get_activation("sigmoid-derivative")
        assert normalize_to_unit_integral(a) is a

    def test_zero_integral_rejected(self):
        odd = custom_activation("odd", lambda z: z * np.exp(-z * z), lipschitz=1.0)
        with pytest.raises(ValueError, match="integral"):
            normalize_to_unit_integral(odd)

    def test_non_finite_rejected(self):
        a = Activation("bad", np.cos, math.inf, math.inf, math.inf, 1.0)
        with pytest.raises(ValueError):
            normalize_to_unit_integral(a)

    @pytest.mark.parametrize("name", ["sech", "gaussian", "sigmoid-derivative"])
    def test_quadrature_of_normalized(self, name):
        assert _quad(get_activation(name, normalized=True)) == pytest.approx(1.0, abs=1e-6)

    def test_idempotent(self):
        a = get_activation("gaussian", normalized=True)
        assert normalize_to_unit_integral(a) is a
        assert a.normalized


class TestCustom:
    def test_quadrature_metadata(self):
        a = custom_activation("g2", lambda z: np.exp(-2 * z * z), tail=lambda T: math.exp(-2 * T * T))
        assert a.integral == pytest.approx(math.sqrt(math.pi / 2), rel=1e-10)
        assert a.l2_norm_sq == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-10)
        assert a.lipschitz is None

    def test_derivative_kind_needs_derivative(self):
        with pytest.raises(ValueError, match="derivative"):
            custom_activation("s", np.tanh, kind=DERIVATIVE_INTEGRABLE)

    def test_derivative_kind(self):
        a = custom_activation(
            "tanh", np.tanh, kind=DERIVATIVE_INTEGRABLE, derivative=lambda z: 1 / np.cosh(z) ** 2, lipschitz=1.0
        )
        assert a.integral == pytest.approx(2.0, rel=1e-9)
        assert a(0.5) == pytest.approx(math.tanh(0.5))

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            custom_activation("x", np.exp, kind="periodic")


class TestTruncatedTrig:
    def test_examples(self):
        assert trunc_cos(0, 0.0) == 1.0
        assert trunc_cos(0, 2 * math.pi) == 0.0
        assert trunc_cos(2, math.pi) == -1.0
        assert trunc_sin(1, 0.0) == 0.0
        assert trunc_sin(1, math.pi / 2) == 1.0
        assert trunc_sin(1, 10.0) == 0.0

    def test_scalar_in_scalar_out(self):
        assert isinstance(trunc_cos(1, 0.3), float)
        assert trunc_cos(1, np.array([0.0, 100.0])).shape == (2,)

    def test_boundary_inclusive(self):
        h = truncation_half_width(3)
        assert trunc_cos(3, h) == pytest.approx(math.cos(h))
        assert trunc_cos(3, np.nextafter(h, np.inf)) == 0.0

    def test_negative_L(self):
        with pytest.raises(ValueError):
            trunc_cos(-1, 0.0)

    def test_object(self):
        t = TruncatedTrig(2, "sine")
        assert t.omega_range_half == pytest.approx(2.5 * math.pi)
        assert t(1.0) == pytest.approx(math.sin(1.0))
        with pytest.raises(ValueError):
            TruncatedTrig(1, "tangent")

    @given(L=st.integers(0, 20), x=st.floats(-500, 500))
    def test_parity_and_bound(self, L, x):
        assert trunc_cos(L, -x) == trunc_cos(L, x)
        assert trunc_sin(L, -x) == -trunc_sin(L, x)
        assert abs(trunc_cos(L, x)) <= 1 and abs(trunc_sin(L, x)) <= 1
        if abs(x) > truncation_half_width(L):
            assert trunc_cos(L, x) == 0 and trunc_sin(L, x) == 0

    @settings(max_examples=300)
    @given(L=st.integers(0, 12), s=st.floats(-1, 1), t=st.floats(-1, 1))
    def test_product_to_sum_inside_window(self, L, s, t):
        h = truncation_half_width(L)
        a, b = 0.5 * h * s, 0.5 * h * t  # |a|, |b|, |a +- b| all within h
        lhs = 2 * trunc_cos(L, a) * trunc_cos(L, b)
        rhs = trunc_cos(L, a - b) + trunc_cos(L, a + b)
        assert lhs == pytest.approx(rhs, abs=1e-12)


class TestLipschitzProperty:
    @given(a=st.floats(-30, 30), b=st.floats(-30, 30), name=st.sampled_from(available_activations()))
    def test_pairs(self, a, b, name):
        act = get_activation(name)
        assert abs(act(a) - act(b)) <= act.lipschitz * abs(a - b) + 1e-15
