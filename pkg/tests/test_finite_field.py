import galois
import numpy as np
import pytest

from nestcat.core.errors import FieldDomainError, UnsupportedParameterError, UsageError
from nestcat.core.finite_field import (
    FieldOp,
    FieldParams,
    PolyOp,
    cyclotomic_cosets,
    degree,
    factor_xn_minus_1,
    field_arith,
    format_poly,
    multiplicative_order,
    parse_poly,
    poly_arith,
    poly_coeffs,
    poly_from_coeffs,
    splitting_field,
    to_ints,
    x_n_minus_1,
)


def test_gf8_addition_is_xor(gf8):
    a = np.arange(8)
    b = np.arange(8)[::-1]
    assert np.array_equal(to_ints(field_arith(gf8, a, b, FieldOp.ADD)), a ^ b)


def test_gf8_alpha_is_root_of_primitive_poly(gf8):
    alpha = gf8.alpha
    # x^3 + x + 1
    assert int(alpha**3 + alpha + gf8.gf(1)) == 0
    assert int(alpha) == 2


@pytest.mark.parametrize("m", [2, 3, 4, 8])
def test_every_nonzero_element_has_an_inverse(m):
    params = FieldParams(m)
    x = np.arange(1, params.q)
    inv = field_arith(params, x, op=FieldOp.INV)
    assert np.all(to_ints(params.gf(x) * inv) == 1)


def test_inverse_of_zero_raises(gf8):
    with pytest.raises(FieldDomainError):
        field_arith(gf8, [0], op=FieldOp.INV)


def test_negative_power_of_zero_raises(gf8):
    with pytest.raises(FieldDomainError):
        field_arith(gf8, [0], -1, op=FieldOp.POW)


def test_element_range_checked(gf8):
    assert int(gf8.element(7)) == 7
    with pytest.raises(UsageError):
        gf8.element(8)


def test_non_primitive_polynomial_rejected():
    # x^4 + x^3 + x^2 + x + 1 is irreducible but not primitive
    with pytest.raises(UsageError):
        FieldParams(4, 0b11111)


def test_extension_degree_bounded():
    with pytest.raises(UnsupportedParameterError):
        FieldParams(17)


def test_poly_serialization_is_ascending(gf2):
    p = parse_poly("1,1,0,1", gf2)
    assert p == galois.Poly.Degrees([3, 1, 0], field=gf2.gf)
    assert format_poly(p) == "1,1,0,1"


def test_parse_poly_rejects_out_of_range_coefficient(gf2):
    with pytest.raises(UsageError):
        parse_poly("1,2", gf2)


def test_division_by_zero_polynomial(gf8):
    a = poly_from_coeffs(gf8, [1, 2, 3])
    zero = poly_from_coeffs(gf8, [])
    with pytest.raises(FieldDomainError):
        poly_arith(a, zero, PolyOp.DIVMOD)


def test_divmod_reconstructs(gf8):
    a = poly_from_coeffs(gf8, [5, 0, 3, 7, 1])
    b = poly_from_coeffs(gf8, [2, 1])
    q, r = poly_arith(a, b, PolyOp.DIVMOD)
    assert q * b + r == a
    assert degree(r) < degree(b)


def test_zero_polynomial_degree(gf2):
    assert degree(poly_from_coeffs(gf2, [0, 0])) == -1


def test_poly_coeffs_padding_and_overflow(gf8):
    p = poly_from_coeffs(gf8, [1, 0, 4])
    assert to_ints(poly_coeffs(p, 5)).tolist() == [1, 0, 4, 0, 0]
    with pytest.raises(UsageError):
        poly_coeffs(p, 2)


def test_multiplicative_order():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(2, 15) == 4
    assert multiplicative_order(2, 31) == 5


def test_cyclotomic_cosets_mod_7():
    assert cyclotomic_cosets(7, 2) == [[0], [1, 2, 4], [3, 6, 5]]


def test_binary_factors_of_x7_minus_1(gf2):
    factors = [p for p, _ in factor_xn_minus_1(7, gf2)]
    assert [format_poly(p) for p in factors] == ["1,1", "1,1,0,1", "1,0,1,1"]


def test_gf8_factors_are_linear(gf8):
    big, omega = splitting_field(gf8, 7)
    factors = [p for p, _ in factor_xn_minus_1(7, gf8)]
    assert len(factors) == 7
    for i, p in enumerate(factors):
        assert p.degree == 1
        assert int(p(omega**i)) == 0


@pytest.mark.parametrize("n, m", [(7, 1), (15, 1), (31, 1), (7, 3), (15, 4)])
def test_factors_multiply_back(n, m):
    params = FieldParams(m)
    product = galois.Poly.One(field=params.gf)
    for p, multiplicity in factor_xn_minus_1(n, params):
        assert multiplicity == 1
        assert p.is_irreducible()
        product = product * p
    assert product == x_n_minus_1(n, params)


def test_even_length_unsupported(gf2):
    with pytest.raises(UnsupportedParameterError):
        splitting_field(gf2, 8)


def test_length_must_divide_q_minus_1(gf8):
    with pytest.raises(UnsupportedParameterError):
        factor_xn_minus_1(5, gf8)
