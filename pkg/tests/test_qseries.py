from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from serre_adjoint.qseries import (
    QExpansion,
    int_convolve,
    qs_add,
    qs_derive,
    qs_mul,
    qs_pow_sparse,
    qs_scale,
    qs_v_expand,
)

from oracles import series_mul

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def series(min_size=1, max_size=25):
    return st.lists(fractions, min_size=min_size, max_size=max_size).map(QExpansion.from_coeffs)


def test_precision_is_minimum_of_operands():
    f = QExpansion.from_coeffs([1, 2, 3, 4])
    g = QExpansion.from_coeffs([1, 1])
    assert (f + g).prec == 2
    assert (f * g).prec == 2
    assert (f * g).coeffs == (1, 3)


def test_from_coeffs_pads_and_truncates():
    assert QExpansion.from_coeffs([1, 2], prec=4).coeffs == (1, 2, 0, 0)
    assert QExpansion.from_coeffs([1, 2, 3], prec=2).coeffs == (1, 2)


def test_unknown_coefficient_raises():
    f = QExpansion.from_coeffs([1, 2])
    assert f[1] == 2
    with pytest.raises(IndexError):
        f[2]


def test_cusp_flag_checks_constant_term():
    with pytest.raises(ValueError):
        QExpansion.from_coeffs([1, 2], cusp=True)


def test_weight_mismatch_in_sum():
    with pytest.raises(ValueError):
        qs_add(QExpansion.from_coeffs([1], weight=4), QExpansion.from_coeffs([1], weight=6))


def test_level_of_sum_is_lcm():
    f = QExpansion.from_coeffs([0, 1], level=2)
    g = QExpansion.from_coeffs([0, 1], level=3)
    assert (f + g).level == 6


def test_derivative_and_v_operator():
    f = QExpansion.from_coeffs([5, 1, 2, 3])
    assert qs_derive(f).coeffs == (0, 1, 4, 9)
    assert qs_v_expand(f, 2).coeffs == (5, 0, 1, 0)
    assert qs_v_expand(f, 2).level == 2


def test_valuation_and_integer_coeffs():
    f = QExpansion.from_coeffs([0, 0, 3, Fraction(1, 2)])
    assert f.valuation() == 2
    assert f.integer_coeffs() is None
    assert QExpansion.from_coeffs([0, 0]).valuation() is None
    assert QExpansion.from_coeffs([1, -2]).integer_coeffs() == [1, -2]


def test_int_convolve_skips_zeros():
    assert int_convolve([1, 0, 2], [3, 4, 0], 3) == [3, 4, 6]


def test_pow_sparse_matches_repeated_product():
    base = [1, -1, -1, 0, 0, 1, 0, 1]  # start of the pentagonal series
    direct = [1] + [0] * 7
    for _ in range(5):
        direct = [sum(direct[i] * base[n - i] for i in range(n + 1)) for n in range(8)]
    assert qs_pow_sparse(base, 5, 8) == direct


def test_pow_sparse_needs_unit_constant():
    with pytest.raises(ValueError):
        qs_pow_sparse([2, 1], 3, 4)


@given(series(), series(), series())
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert (f + g) * h == f * h + g * h
    assert f - f == QExpansion.zero(f.prec)


@given(series(), series())
def test_product_matches_naive_convolution(f, g):
    assert list(qs_mul(f, g).coeffs) == series_mul(f.coeffs, g.coeffs)


@given(series(), series())
def test_leibniz(f, g):
    assert qs_derive(f * g) == qs_derive(f) * g + f * qs_derive(g)


@given(series(), series(), st.integers(1, 5), st.integers(1, 5))
def test_v_operator_laws(f, g, t, s):
    assert qs_v_expand(f * g, t).coeffs == (qs_v_expand(f, t) * qs_v_expand(g, t)).coeffs
    assert qs_v_expand(qs_v_expand(f, t), s).coeffs == qs_v_expand(f, t * s).coeffs
    assert qs_derive(qs_v_expand(f, t)).coeffs == qs_scale(qs_v_expand(qs_derive(f), t), t).coeffs


@given(series(), fractions, fractions)
def test_scaling_is_linear(f, a, b):
    assert qs_scale(f, a + b) == qs_scale(f, a) + qs_scale(f, b)
    assert qs_scale(qs_scale(f, a), b) == qs_scale(f, a * b)


@given(series(), st.integers(0, 40), st.integers(1, 6), st.booleans())
def test_serialization_round_trips(f, weight, level, quasi):
    f = f.with_meta(weight=weight, level=level, quasimodular=quasi)
    assert QExpansion.from_text(f.to_text()) == f
    back = QExpansion.from_json(f.to_json())
    assert back == f
    assert (back.weight, back.level, back.quasimodular) == (weight, level, quasi)


def test_json_rejects_inconsistent_prec():
    obj = QExpansion.from_coeffs([1, 2]).to_json_obj()
    obj["prec"] = 5
    with pytest.raises(ValueError):
        QExpansion.from_json_obj(obj)
