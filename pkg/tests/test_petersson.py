import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from serre_adjoint.errors import UnsupportedRecipeError
from serre_adjoint.forms import DELTA, DELTA_10_2, E4, E6, V2DELTA, X2, delta, parse_form
from serre_adjoint.petersson import (
    COSET_REPS,
    ComplexPoint,
    apply_matrix,
    e2_eval,
    eisenstein_array,
    eta_eval,
    form_eval,
    norm_ratio_10_2,
    petersson_inner,
    phi_invariant,
)

from oracles import DELTA_NORM2

GAMMA_1_4 = math.gamma(0.25)
upper = st.builds(complex, st.floats(-2, 2), st.floats(0.2, 3))


def test_special_values_at_i():
    assert eta_eval(1j).real == pytest.approx(GAMMA_1_4 / (2 * math.pi**0.75), rel=1e-14)
    assert e2_eval(1j).real == pytest.approx(3 / math.pi, rel=1e-13)
    e4 = eisenstein_array(4, np.array([1j]))[0]
    assert e4.real == pytest.approx(3 * GAMMA_1_4**8 / (2 * math.pi) ** 6, rel=1e-13)
    assert abs(eisenstein_array(6, np.array([1j]))[0]) < 1e-13


def test_q_expansion_agrees_high_in_the_plane():
    z = 0.1 + 1.3j
    q = cmath.exp(2j * math.pi * z)
    series = sum(float(c) * q**n for n, c in enumerate(delta(30).coeffs))
    assert form_eval(DELTA, z) == pytest.approx(series, rel=1e-12)


@given(upper)
def test_eta_transformation(z):
    lhs = eta_eval(-1 / z)
    rhs = cmath.sqrt(z / 1j) * eta_eval(z)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), 1e-300)


@given(upper)
def test_e2_quasi_transformation(z):
    lhs = e2_eval(-1 / z)
    rhs = z * z * e2_eval(z) + 6 * z / (math.pi * 1j)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(rhs), 1.0)


@given(upper)
def test_weight_two_level_two_form_is_modular(z):
    # X2 transforms with weight 2 under (1 0; 2 1)
    w = z / (2 * z + 1)
    assert abs(form_eval(X2, w) - (2 * z + 1) ** 2 * form_eval(X2, z)) <= 1e-9 * max(abs(form_eval(X2, w)), 1.0)


@given(upper)
def test_phi_invariance(z):
    for f, g, k in ((DELTA_10_2, DELTA_10_2, 10), (DELTA, V2DELTA, 12), (E4, E4, 4)):
        base = phi_invariant(f, g, k, z)
        for gz in (z + 1, z / (2 * z + 1)):
            assert abs(phi_invariant(f, g, k, gz) - base) <= 1e-9 * abs(base)


def test_phi_invariance_under_inversion_at_level_one():
    z = 0.3 + 0.8j
    assert phi_invariant(E6, E6, 6, -1 / z) == pytest.approx(phi_invariant(E6, E6, 6, z), rel=1e-11)


def test_delta_norm():
    est = petersson_inner(DELTA, DELTA, 12, 1)
    assert est.real == pytest.approx(DELTA_NORM2, rel=1e-12)
    assert abs(est.real - DELTA_NORM2) <= est.est_error
    assert abs(est.value.imag) <= est.est_error


def test_level_consistency():
    a = petersson_inner(DELTA, DELTA, 12, 1)
    b = petersson_inner(DELTA, DELTA, 12, 2)
    assert abs(a.real - b.real) <= a.est_error + b.est_error


def test_v2_ratios():
    n = petersson_inner(DELTA, DELTA, 12, 2)
    cross = petersson_inner(DELTA, V2DELTA, 12, 2)
    v2 = petersson_inner(V2DELTA, V2DELTA, 12, 2)
    assert cross.real / n.real == pytest.approx(-1 / 256, rel=1e-10)
    assert v2.real / n.real == pytest.approx(2**-12, rel=1e-10)
    assert abs(v2.real - n.real / 4096) <= v2.est_error + n.est_error / 4096


def test_hermitian_symmetry():
    a = petersson_inner(DELTA, V2DELTA, 12, 2)
    b = petersson_inner(V2DELTA, DELTA, 12, 2)
    assert a.value == pytest.approx(b.value.conjugate(), rel=1e-12)


def test_norm_ratio():
    ratio, err = norm_ratio_10_2()
    assert ratio == pytest.approx(0.54713993550538, rel=1e-10)
    assert 0 < err < 1e-9


def test_cosets_and_matrices():
    assert len(COSET_REPS[1]) == 1 and len(COSET_REPS[2]) == 3
    z = np.array([0.2 + 1j])
    assert apply_matrix((0, -1, 1, 0), z)[0] == pytest.approx(-1 / z[0])


def test_errors():
    with pytest.raises(ValueError):
        ComplexPoint(0.0, -1.0)
    with pytest.raises(UnsupportedRecipeError):
        form_eval(parse_form("serre(delta_10_2,10)"), 1j)
    with pytest.raises(ValueError):
        petersson_inner(DELTA, DELTA, 12, 3)
    with pytest.raises(ValueError):
        petersson_inner(E4, E4, 4, 1)
    with pytest.raises(ValueError):
        petersson_inner(V2DELTA, V2DELTA, 12, 1)


def test_estimate_json():
    obj = petersson_inner(DELTA, DELTA, 12, 1, nodes=32).to_json_obj()
    assert {"value", "est_error", "nodes", "y_cutoff"} <= set(obj)
