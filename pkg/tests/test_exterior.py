from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homlie.exterior import (
    EndoMap,
    Form,
    MultiVector,
    SectionTwist,
    dual_twist,
    pair,
    poly_mat_det,
    twist_tensor,
    wedge,
)
from homlie.polyring import AffineTwist, Poly
from homlie.report import StructureError

N = 2
x = Poly.variable(N, 0)
y = Poly.variable(N, 1)


def e(i):
    return MultiVector.basis(2, N, (i - 1,))


def eps(i):
    return Form.basis(2, N, (i - 1,))


@pytest.fixture
def s1_twist():
    """Conjugation twist of the base map (x,y) -> (2x, y/2): the frame
    scales by (1/2, 2)."""
    phi = AffineTwist([[2, 0], [0, Fraction(1, 2)]])
    return SectionTwist([[Fraction(1, 2), 0], [0, 2]], phi, "multivector")


class TestWedge:
    def test_square_vanishes(self):
        assert wedge(e(1), e(1)).is_zero()

    def test_basis_two_vector(self):
        w = wedge(e(1), e(2))
        assert w.degree == 2
        assert w.coeff((0, 1)) == Poly.const(N, 1)

    def test_bilinearity_with_coefficients(self):
        w = wedge(e(1).scale(x), e(2).scale(y))
        assert w.coeff((0, 1)) == x * y

    def test_antisymmetry_order(self):
        assert wedge(e(2), e(1)).coeff((0, 1)) == Poly.const(N, -1)

    def test_kind_mismatch_rejected(self):
        with pytest.raises(StructureError):
            wedge(e(1), eps(1))

    @given(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1), st.integers(0, 1))
    @settings(max_examples=20)
    def test_graded_commutativity_degree_one(self, a, b, c, d):
        u = e(1).scale(a) + e(2).scale(b)
        v = e(1).scale(c) + e(2).scale(d)
        assert wedge(u, v) == -wedge(v, u)

    def test_associativity_rank3(self):
        u = MultiVector.from_vector(3, 3, [Poly.variable(3, 0), Poly.const(3, 1), Poly.zero(3)])
        v = MultiVector.from_vector(3, 3, [Poly.zero(3), Poly.variable(3, 1), Poly.const(3, 2)])
        w = MultiVector.from_vector(3, 3, [Poly.const(3, 1), Poly.zero(3), Poly.variable(3, 2)])
        assert wedge(wedge(u, v), w) == wedge(u, wedge(v, w))

    def test_graded_commutativity_mixed_degrees(self):
        z3 = Poly.variable(3, 2)
        D1 = MultiVector.from_vector(3, 3, [z3, Poly.const(3, 1), Poly.zero(3)])
        D2 = MultiVector(3, 3, 2, {(0, 1): Poly.variable(3, 0), (1, 2): Poly.const(3, 2)})
        # degrees (1,2): sign (-1)^(1*2) = +1; degrees (2,2): +1
        assert wedge(D1, D2) == wedge(D2, D1)
        assert wedge(D2, D2) == wedge(D2, D2)
        D3 = MultiVector.from_vector(3, 3, [Poly.zero(3), z3, Poly.const(3, 5)])
        assert wedge(D1, D3) == -wedge(D3, D1)


class TestPair:
    def test_dual_frame(self):
        assert pair(eps(1), e(1)) == Poly.const(N, 1)
        assert pair(eps(1), e(2)) == Poly.zero(N)

    def test_determinant_convention(self):
        assert pair(wedge(eps(1), eps(2)), wedge(e(1), e(2))) == Poly.const(N, 1)
        assert pair(wedge(eps(2), eps(1)), wedge(e(1), e(2))) == Poly.const(N, -1)

    def test_gram_matrix_is_identity(self):
        for i in (1, 2):
            for j in (1, 2):
                expected = Poly.const(N, 1 if i == j else 0)
                assert pair(eps(i), e(j)) == expected

    def test_degree_mismatch(self):
        with pytest.raises(StructureError):
            pair(eps(1), wedge(e(1), e(2)))


class TestSectionTwist:
    def test_identity_twist_fixes_everything(self):
        phi = AffineTwist.identity(N)
        t = SectionTwist.identity(2, phi)
        D = wedge(e(1), e(2)).scale(x) + wedge(e(1), e(2))
        assert twist_tensor(D, t) == D

    def test_s1_fixes_top_bivector(self, s1_twist):
        # (e1/2) wedge (2 e2) = e1 wedge e2
        pi = wedge(e(1), e(2))
        assert twist_tensor(pi, s1_twist) == pi

    def test_s1_on_scaled_section(self, s1_twist):
        D = e(1).scale(x)
        # pullback of x is 2x, frame image is e1/2
        assert twist_tensor(D, s1_twist) == e(1).scale(x)

    def test_function_linearity(self, s1_twist):
        f = x * y + 3
        X = e(1).scale(y) + e(2)
        lhs = s1_twist.apply(X.scale(f))
        rhs = s1_twist.apply(X).scale(s1_twist.base.pullback(f))
        assert lhs == rhs

    def test_inverse(self, s1_twist):
        X = e(1).scale(x * x) + e(2).scale(y)
        assert s1_twist.inverse().apply(s1_twist.apply(X)) == X
        assert s1_twist.apply(s1_twist.inverse().apply(X)) == X

    def test_wedge_respected(self, s1_twist):
        u = e(1).scale(x) + e(2)
        v = e(2).scale(y + 1)
        lhs = s1_twist.apply_graded(wedge(u, v))
        rhs = wedge(s1_twist.apply(u), s1_twist.apply(v))
        assert lhs == rhs


class TestDualTwist:
    def test_identity(self):
        t = SectionTwist.identity(2, AffineTwist.identity(N))
        d = dual_twist(t)
        assert d.apply(eps(1)) == eps(1)

    def test_s1_dual_values(self, s1_twist):
        d = dual_twist(s1_twist)
        assert d.apply(eps(1)) == eps(1).scale(2)
        assert d.apply(eps(2)) == eps(2).scale(Fraction(1, 2))

    def test_involution(self, s1_twist):
        dd = dual_twist(dual_twist(s1_twist))
        assert dd == s1_twist

    def test_defining_relation(self, s1_twist):
        d = dual_twist(s1_twist)
        inv = s1_twist.inverse()
        probes_x = [e(1), e(2), e(1).scale(x), e(2).scale(y * y)]
        probes_xi = [eps(1), eps(2), eps(1).scale(y), eps(2).scale(x)]
        for xi in probes_xi:
            for X in probes_x:
                lhs = pair(d.apply(xi), X)
                rhs = s1_twist.base.pullback(pair(xi, inv.apply(X)))
                assert lhs == rhs

    def test_pairing_compatibility(self, s1_twist):
        d = dual_twist(s1_twist)
        for xi in (eps(1).scale(x), eps(2)):
            for X in (e(1), e(2).scale(y)):
                lhs = pair(d.apply(xi), s1_twist.apply(X))
                rhs = s1_twist.base.pullback(pair(xi, X))
                assert lhs == rhs

    def test_noninvertible_rejected(self):
        phi = AffineTwist.identity(N)
        t = SectionTwist([[x, Poly.zero(N)], [Poly.zero(N), Poly.const(N, 1)]], phi)
        with pytest.raises(StructureError):
            dual_twist(t)


class TestEndoMap:
    def test_function_linearity(self):
        Nmap = EndoMap([[x, y], [Poly.const(N, 1), Poly.zero(N)]])
        X = e(1).scale(y) + e(2)
        f = x + 2
        assert Nmap.apply(X.scale(f)) == Nmap.apply(X).scale(f)

    def test_transpose_adjunction(self):
        Nmap = EndoMap([[x, y], [Poly.const(N, 3), Poly.zero(N)]])
        Nt = Nmap.transpose()
        for i in (1, 2):
            for j in (1, 2):
                assert pair(Nt.apply(eps(i)), e(j)) == pair(eps(i), Nmap.apply(e(j)))

    def test_twist_conjugation_identity(self, s1_twist):
        ident = EndoMap.identity(2, N)
        assert twist_tensor(ident, s1_twist) == ident

    def test_poly_mat_det(self):
        m = [[x, y], [Poly.const(N, 1), x]]
        assert poly_mat_det(m) == x * x - y


class TestSerialization:
    def test_round_trip_constant_coeff(self):
        D = wedge(e(1), e(2)).scale(Fraction(3, 2)) + wedge(e(1), e(2))
        data = D.to_json()
        assert data == [{"indices": [1, 2], "coeff": "5/2"}]
        back = MultiVector.from_json(2, N, 2, data)
        assert back == D

    def test_round_trip_polynomial_coeff(self):
        om = eps(1).scale(x * y + 2)
        back = Form.from_json(2, N, 1, om.to_json())
        assert back == om
