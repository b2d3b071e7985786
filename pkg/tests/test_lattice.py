from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kstab.errors import DomainError
from kstab.lattice import (
    DivClass,
    SurfaceModel,
    anticanonical,
    basis_exceptional,
    basis_line,
    canonical,
    div,
    intersect,
    rational,
    rational_str,
    square,
)


def test_rational_parsing():
    assert rational("3/4") == Fraction(3, 4)
    assert rational("-2") == Fraction(-2)
    assert rational(5) == Fraction(5)
    assert rational(Fraction(1, 3)) == Fraction(1, 3)
    assert rational_str(Fraction(3, 4)) == "3/4"
    assert rational_str(Fraction(-8, 4)) == "-2"
    assert rational_str(Fraction(7)) == "7"


def test_rational_parsing_rejects_garbage():
    with pytest.raises(DomainError):
        rational("a/b")
    with pytest.raises(DomainError):
        rational("1/0")
    with pytest.raises(DomainError):
        rational(1.5)


def test_surface_model_range():
    assert SurfaceModel(1).r == 8
    assert SurfaceModel(8).r == 1
    with pytest.raises(DomainError):
        SurfaceModel(0)
    with pytest.raises(DomainError):
        SurfaceModel(9)


def test_basis_products():
    s = SurfaceModel(3)
    h = basis_line(s)
    assert intersect(h, h, s) == 1
    for i in range(1, s.r + 1):
        ei = basis_exceptional(s, i)
        assert intersect(ei, ei, s) == -1
        assert intersect(h, ei, s) == 0
        for j in range(i + 1, s.r + 1):
            assert intersect(ei, basis_exceptional(s, j), s) == 0


def test_canonical_square_equals_degree():
    for d in range(1, 9):
        s = SurfaceModel(d)
        assert square(canonical(s), s) == d
        assert square(anticanonical(s), s) == d


def test_anticanonical_meets_every_exceptional_once():
    s = SurfaceModel(5)
    mk = anticanonical(s)
    for i in range(1, s.r + 1):
        assert intersect(mk, basis_exceptional(s, i), s) == 1


def test_tangent_line_polarization_square():
    # L = -K + x*E1 on the cubic model, x = 1/2: L^2 = 3 + 2x - x^2
    s = SurfaceModel(3)
    x = Fraction(1, 2)
    L = anticanonical(s) + x * basis_exceptional(s, 1)
    assert square(L, s) == Fraction(15, 4)
    assert square(L, s) == 3 + 2 * x - x * x


def test_dimension_mismatch_rejected():
    s = SurfaceModel(3)
    a = div(1, [0] * 6)
    b = div(1, [0] * 5)
    with pytest.raises(DomainError):
        intersect(a, b, s)
    with pytest.raises(DomainError):
        a + b


def test_componentwise_arithmetic():
    a = div("1/2", ["1", "-2/3"])
    b = div(1, [1, 1])
    assert a + b == div("3/2", ["2", "1/3"])
    assert a - b == div("-1/2", ["0", "-5/3"])
    assert 3 * a == div("3/2", ["3", "-2"])
    assert -a == div("-1/2", ["-1", "2/3"])
    assert str(a) == "(1/2; 1, -2/3)"


small_rationals = st.fractions(
    min_value=-5, max_value=5, max_denominator=12
)


@settings(max_examples=60, derandomize=True)
@given(
    st.lists(small_rationals, min_size=6, max_size=6),
    st.lists(small_rationals, min_size=6, max_size=6),
    st.lists(small_rationals, min_size=6, max_size=6),
)
def test_bilinearity_and_symmetry(xs, ys, zs):
    s = SurfaceModel(3)
    a = DivClass(xs[0], tuple(xs[1:]) + (Fraction(0),))
    b = DivClass(ys[0], tuple(ys[1:]) + (Fraction(0),))
    c = DivClass(zs[0], tuple(zs[1:]) + (Fraction(0),))
    assert intersect(a + b, c, s) == intersect(a, c, s) + intersect(b, c, s)
    assert intersect(a, b, s) == intersect(b, a, s)
    assert intersect(2 * a, b, s) == 2 * intersect(a, b, s)
