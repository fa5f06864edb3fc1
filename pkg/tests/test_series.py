from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superyangian.ncalg import NCPoly, s_sym
from superyangian.series import (EXACT, BiLaurent, SeriesMatrix, TruncSeries, expand_rational, generic_matrix,
                                 gen_binom, linear_inverse)
from superyangian.tensor import SuperContext

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def scalar_series(draw, prec=6, unit=True):
    coeffs = {k: draw(small) for k in range(1, prec + 1)}
    coeffs[0] = Fraction(1) if unit else draw(small)
    return TruncSeries(coeffs, prec)


@given(scalar_series())
def test_inverse_is_two_sided(s):
    one = TruncSeries.const(Fraction(1), s.prec)
    assert s * s.inverse() == one
    assert s.inverse() * s == one


@given(scalar_series(), small, small)
def test_shifts_compose(s, a, b):
    assert s.shift(a).shift(b) == s.shift(a + b)


@given(scalar_series())
def test_negation_is_an_involution(s):
    assert s.at(-1).at(-1) == s


def test_shift_of_inverse_power():
    # 1/(u+1) = u^-1 - u^-2 + u^-3 - ...
    s = TruncSeries({1: Fraction(1)}, 5).shift(1)
    assert s.coeffs == {1: 1, 2: -1, 3: 1, 4: -1, 5: 1}


def test_rational_expansion():
    s = expand_rational([-1, 2], [1, 2], 4)  # (2u-1)/(2u+1)
    assert s.coeffs == {0: 1, 1: -1, 2: Fraction(1, 2), 3: Fraction(-1, 4), 4: Fraction(1, 8)}
    assert linear_inverse(2, 0, 3).coeffs == {1: Fraction(1, 2)}
    with pytest.raises(ZeroDivisionError):
        expand_rational([1], [0], 3)


def test_generalized_binomial():
    assert gen_binom(-1, 3) == -1
    assert gen_binom(5, 2) == 10


def test_watermark_propagates_through_products():
    a = TruncSeries({0: Fraction(1), 1: Fraction(2)}, 3)
    u = TruncSeries({-1: Fraction(1)}, EXACT)
    assert (a * u).prec == 2
    with pytest.raises(ValueError):
        (a * u).coefficient(3)


def test_watermark_soundness_under_refinement():
    ctx = SuperContext(1, 1)
    lo = generic_matrix(ctx, 3, s_sym).inverse()
    hi = generic_matrix(ctx, 5, s_sym).inverse()
    for key, s in lo.entries.items():
        for k in range(s.prec + 1):
            assert s.coefficient(k) == hi[key].coefficient(k)


def test_generic_matrix_inverse_is_two_sided():
    ctx = SuperContext(1, 2)
    X = generic_matrix(ctx, 3, s_sym)
    ident = SeriesMatrix.identity(ctx)
    assert (X * X.inverse()).eq_window(ident)
    assert (X.inverse() * X).eq_window(ident)


def test_quasi_determinant_of_scalar_matrix():
    ctx = SuperContext(2, 0)
    X = SeriesMatrix.constant(ctx, {(1, 1): Fraction(2), (1, 2): Fraction(1), (2, 1): Fraction(3),
                                    (2, 2): Fraction(4)}, 4)
    # |X|^{22} = 4 - 3 * 1/2 * 1
    assert X.quasi_determinant(2, 2).coefficient(0) == Fraction(5, 2)


def test_gauss_decomposition_rebuilds_matrix():
    ctx = SuperContext(1, 1)
    X = generic_matrix(ctx, 3, s_sym)
    F, Dg, E = X.gauss_decompose()
    assert (F * Dg * E).eq_window(X)


def test_bilaurent_window():
    a = BiLaurent.from_u(TruncSeries({0: Fraction(1), 1: Fraction(1)}, 3))
    b = BiLaurent.poly({(1, 0): 1, (0, 1): -1})
    prod = a * b
    assert prod.win[0] == 2
    assert prod.coeffs[(-1, 0)] == 1


def test_render_is_exact():
    s = TruncSeries({0: Fraction(1), 2: Fraction(-3, 4)}, 3)
    assert s.render() == "1; u^-2: -3/4"
    p = TruncSeries({1: NCPoly.gen(s_sym(1, 1, 1), Fraction(1, 3))}, 2)
    assert "1/3*s[1,1,1]" in p.render()
