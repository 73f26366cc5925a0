from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homlie.polyring import (
    AffineTwist,
    DimensionMismatch,
    Poly,
    inverse_pullback,
    monomials,
    partial,
    poly_divides,
    pullback,
)


def P2(expr_terms):
    return Poly(2, expr_terms)


@pytest.fixture
def scale_map():
    # (x, y) -> (2x, y/2)
    return AffineTwist([[2, 0], [0, Fraction(1, 2)]])


x = Poly.variable(2, 0)
y = Poly.variable(2, 1)


rationals = st.builds(
    Fraction, st.integers(-20, 20), st.integers(1, 8)
)


@st.composite
def polys(draw, n=2, max_degree=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(0, max_degree)) for _ in range(n))
        terms[exps] = draw(rationals)
    return Poly(n, terms)


class TestPolyArithmetic:
    def test_canonical_form_add_negate(self):
        f = x * x + y
        assert (f + (-f)).terms == {}
        assert f - f == Poly.zero(2)

    def test_equality_is_term_map_equality(self):
        assert x * y == y * x
        assert x + x == 2 * x
        assert Poly.const(2, 0).terms == {}

    @given(polys(), polys(), polys())
    @settings(max_examples=60)
    def test_ring_axioms(self, f, g, h):
        assert (f + g) + h == f + (g + h)
        assert f + g == g + f
        assert (f * g) * h == f * (g * h)
        assert f * g == g * f
        assert f * (g + h) == f * g + f * h

    def test_pow(self):
        assert (x + y) ** 2 == x * x + 2 * x * y + y * y


class TestPartial:
    def test_x2y_by_x(self):
        f = x * x * y
        assert partial(f, 0) == 2 * x * y

    def test_x2y_by_y(self):
        f = x * x * y
        assert partial(f, 1) == x * x

    def test_constant(self):
        assert partial(Poly.const(2, 7), 0) == Poly.zero(2)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            partial(x, 5)

    @given(polys(), polys())
    @settings(max_examples=40)
    def test_product_rule(self, f, g):
        for i in range(2):
            assert partial(f * g, i) == partial(f, i) * g + f * partial(g, i)


class TestPullback:
    def test_identity_map(self):
        phi = AffineTwist.identity(2)
        f = x * x + y
        assert pullback(phi, f) == f

    def test_scale_map_xy(self, scale_map):
        # (2x)(y/2) = x*y, worked by direct substitution
        assert pullback(scale_map, x * y) == x * y

    def test_scale_map_x_squared(self, scale_map):
        assert pullback(scale_map, x * x) == 4 * x * x

    def test_offset(self):
        phi = AffineTwist([[1, 0], [0, 1]], [1, 0])
        assert pullback(phi, x) == x + 1
        assert pullback(phi, x * x) == x * x + 2 * x + 1

    @given(polys(), polys())
    @settings(max_examples=40)
    def test_ring_homomorphism(self, f, g):
        phi = AffineTwist([[2, 1], [0, Fraction(1, 2)]], [0, 3])
        assert pullback(phi, f * g) == pullback(phi, f) * pullback(phi, g)
        assert pullback(phi, f + g) == pullback(phi, f) + pullback(phi, g)

    def test_dimension_mismatch(self, scale_map):
        with pytest.raises(DimensionMismatch):
            pullback(scale_map, Poly.variable(3, 0))


class TestInversePullback:
    def test_identity(self):
        phi = AffineTwist.identity(2)
        f = x * y + 3
        assert inverse_pullback(phi, f) == f

    def test_scale_map(self, scale_map):
        # inverse map is (x/2, 2y)
        assert inverse_pullback(scale_map, x) == Fraction(1, 2) * x
        assert inverse_pullback(scale_map, y) == 2 * y

    @given(polys())
    @settings(max_examples=100)
    def test_round_trip(self, f):
        phi = AffineTwist([[1, 2], [1, 3]], [5, Fraction(-1, 2)])
        assert pullback(phi, inverse_pullback(phi, f)) == f
        assert inverse_pullback(phi, pullback(phi, f)) == f


class TestAffineTwist:
    def test_compose_with_inverse_is_identity(self, scale_map):
        assert scale_map.compose(scale_map.inverse()).is_identity()
        assert scale_map.inverse().compose(scale_map).is_identity()

    def test_singular_matrix_rejected(self):
        with pytest.raises(ValueError):
            AffineTwist([[1, 1], [2, 2]])


class TestMonomials:
    def test_degree_two_in_two_vars(self):
        ms = monomials(2, 2)
        assert len(ms) == 6
        assert ms[0] == Poly.const(2, 1)

    def test_count_degree_three(self):
        assert len(monomials(2, 3)) == 10
        assert len(monomials(3, 3)) == 20


class TestExactDivision:
    def test_divides(self):
        f = (x + y) * (x * x + 3)
        q = poly_divides(x + y, f)
        assert q == x * x + 3

    def test_not_divisible(self):
        assert poly_divides(x + y, x * x + 1) is None

    def test_zero_cases(self):
        assert poly_divides(Poly.zero(2), Poly.zero(2)) == Poly.zero(2)
        assert poly_divides(Poly.zero(2), x) is None
