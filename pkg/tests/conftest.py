import pytest

from nestcat.core.concat import concatenate
from nestcat.core.finite_field import GF2, FieldParams, parse_poly
from nestcat.core.linear_code import LinearCode, repetition_code
from nestcat.core.nested_cyclic import FactorSplit, build_nested

# (7,3) binary cyclic code generated by 1 + x^2 + x^3 + x^4, every nonzero codeword of weight 4.
CYCLIC73_POLY = "1,0,1,1,1"


@pytest.fixture(scope="session")
def gf2():
    return GF2


@pytest.fixture(scope="session")
def gf8():
    return FieldParams(3)


@pytest.fixture(scope="session")
def gf16():
    return FieldParams(4)


@pytest.fixture(scope="session")
def hamming_nested(gf2):
    """x^7 - 1 = (x+1)(x^3+x+1)(x^3+x^2+1): g = x^3+x+1, f = x+1, h = x^3+x^2+1."""
    return build_nested(7, gf2, FactorSplit.of([1], [0], [2]))


@pytest.fixture(scope="session")
def rs_nested(gf8):
    """RS(7,5) over GF(8) with roots w, w^2; f = x - 1 gives k1 = 1, k2 = 4."""
    return build_nested(7, gf8, FactorSplit.of([1, 2], [0], [3, 4, 5, 6]))


@pytest.fixture(scope="session")
def cyclic73():
    return LinearCode.cyclic(GF2, 7, parse_poly(CYCLIC73_POLY, GF2), name="cyclic(7,3)")


@pytest.fixture(scope="session")
def hamming_concat(hamming_nested):
    """N=21, K=4, K1=1, K2=3."""
    return concatenate(hamming_nested, repetition_code(3), 7)


@pytest.fixture(scope="session")
def rs_concat(rs_nested, cyclic73):
    """N=49, K=15, K1=3, K2=12."""
    return concatenate(rs_nested, cyclic73, 7)
