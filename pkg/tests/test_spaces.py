from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from serre_adjoint.errors import InsufficientPrecisionError, NotInSpaceError, UnsupportedSpaceError
from serre_adjoint.forms import delta, delta_10_2, eisenstein, serre_derivative
from serre_adjoint.qseries import qs_mul, qs_v_expand
from serre_adjoint.spaces import SUPPORTED_SPACES, decompose, space_basis


def test_serre_derivative_of_delta_10_2():
    coords = decompose(serre_derivative(delta_10_2(200), 10), space_basis(12, 2, 200))
    assert coords == (Fraction(1, 6), Fraction(128, 3))


def test_dimensions():
    dims = {ks: space_basis(*ks, 30).dim for ks in SUPPORTED_SPACES}
    assert dims == {(12, 1): 1, (10, 2): 1, (12, 2): 2, (14, 1): 0}


def test_unsupported_space():
    with pytest.raises(UnsupportedSpaceError):
        space_basis(16, 1)


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_reconstruct_then_decompose(a, b):
    basis = space_basis(12, 2, 40)
    assert decompose(basis.reconstruct([a, b]), basis) == (a, b)


def test_not_in_space():
    f = qs_mul(delta(40), eisenstein(4, 40)).with_meta(weight=12)
    with pytest.raises(NotInSpaceError):
        decompose(f, space_basis(12, 1, 40))
    with pytest.raises(NotInSpaceError):
        decompose(delta(30).with_meta(weight=14), space_basis(14, 1, 30))


def test_insufficient_precision():
    with pytest.raises(InsufficientPrecisionError):
        decompose(delta(8), space_basis(12, 1, 8))


def test_weight_mismatch():
    with pytest.raises(ValueError):
        decompose(delta(30), space_basis(10, 2, 30))


def test_v2delta_is_level_two():
    coords = decompose(qs_v_expand(delta(60), 2), space_basis(12, 2, 60))
    assert coords == (0, 1)
