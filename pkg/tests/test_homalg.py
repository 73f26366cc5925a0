from fractions import Fraction

import pytest

from homlie.exterior import SectionTwist
from homlie.homalg import (
    HomAlgebroid,
    PullbackVectorField,
    ad_twist,
    ad_twist_inverse,
    bracket_phistar,
    bracket_phistar_apply,
    check_axioms,
    make_pullback_tangent,
    make_tm_r,
    pullback_section,
)
from homlie.polyring import AffineTwist, Poly, monomials
from homlie.report import StructureError


def s1_base():
    return AffineTwist([[2, 0], [0, Fraction(1, 2)]])


@pytest.fixture(scope="module")
def S0():
    phi = AffineTwist.identity(1)
    return HomAlgebroid(
        phi,
        SectionTwist.identity(1, phi),
        [[Poly.zero(1)]],
        {},
    )


@pytest.fixture(scope="module")
def S1():
    return make_pullback_tangent(s1_base())


@pytest.fixture(scope="module")
def S2():
    return make_tm_r(s1_base())


@pytest.fixture(scope="module")
def S3():
    return make_pullback_tangent(AffineTwist.identity(3))


class TestPullbackVectorField:
    def test_twisted_derivation_law(self):
        phi = s1_base()
        X = PullbackVectorField(phi, [Poly.variable(2, 1), Poly.const(2, 1)])
        for f in monomials(2, 2):
            for g in monomials(2, 2):
                lhs = X.apply(f * g)
                rhs = X.apply(f) * phi.pullback(g) + phi.pullback(f) * X.apply(g)
                assert lhs == rhs

    def test_pullback_section_values(self):
        phi = s1_base()
        x = Poly.variable(2, 0)
        lifted = pullback_section(phi, [x, Poly.zero(2)])
        assert lifted.coeffs[0] == 2 * x
        assert lifted.coeffs[1].is_zero()

    def test_pullback_section_identity_map(self):
        phi = AffineTwist.identity(2)
        lifted = pullback_section(phi, [Poly.const(2, 1), Poly.zero(2)])
        assert lifted == PullbackVectorField.coordinate(phi, 0)

    def test_rational_linearity(self):
        phi = s1_base()
        a = pullback_section(phi, [Poly.variable(2, 0), Poly.const(2, 2)])
        b = pullback_section(phi, [Poly.variable(2, 1), Poly.zero(2)])
        f = Poly.variable(2, 0) * Poly.variable(2, 1)
        assert (a + b).apply(f) == a.apply(f) + b.apply(f)


class TestAdTwist:
    def test_identity_base(self):
        phi = AffineTwist.identity(2)
        X = PullbackVectorField(phi, [Poly.variable(2, 0), Poly.const(2, 3)])
        assert ad_twist(phi, X) == X

    def test_s1_frame_values(self):
        phi = s1_base()
        e1 = PullbackVectorField.coordinate(phi, 0)
        e2 = PullbackVectorField.coordinate(phi, 1)
        assert ad_twist(phi, e1).coeffs[0] == Poly.const(2, Fraction(1, 2))
        assert ad_twist(phi, e1).coeffs[1].is_zero()
        assert ad_twist(phi, e2).coeffs[1] == Poly.const(2, 2)

    def test_conjugation_oracle(self):
        # the extracted coefficients reproduce the conjugated operator
        phi = s1_base()
        X = PullbackVectorField(phi, [Poly.variable(2, 1), Poly.variable(2, 0)])
        conj = ad_twist(phi, X)
        for f in monomials(2, 3):
            direct = phi.pullback(X.apply(phi.inverse_pullback(f)))
            assert conj.apply(f) == direct

    def test_inverse_round_trip(self):
        phi = s1_base()
        X = PullbackVectorField(phi, [Poly.variable(2, 0), Poly.const(2, 5)])
        assert ad_twist_inverse(phi, ad_twist(phi, X)) == X


class TestBracketPhistar:
    def test_antisymmetry_on_self(self):
        phi = s1_base()
        X = PullbackVectorField(phi, [Poly.variable(2, 1), Poly.variable(2, 0)])
        assert bracket_phistar(phi, X, X).is_zero()

    def test_s1_frame_commutes(self):
        phi = s1_base()
        e1 = PullbackVectorField.coordinate(phi, 0)
        e2 = PullbackVectorField.coordinate(phi, 1)
        assert bracket_phistar(phi, e1, e2).is_zero()
        # both composites act as second partials composed with the map
        for f in monomials(2, 3):
            assert bracket_phistar_apply(phi, e1, e2, f).is_zero()

    def test_reduces_to_commutator_at_identity(self):
        phi = AffineTwist.identity(2)
        x, y = Poly.variable(2, 0), Poly.variable(2, 1)
        X = PullbackVectorField(phi, [y, Poly.zero(2)])
        Y = PullbackVectorField(phi, [Poly.zero(2), x])
        br = bracket_phistar(phi, X, Y)
        # classical [y d/dx, x d/dy] = y d/dy - x d/dx
        assert br.coeffs[0] == -x
        assert br.coeffs[1] == y

    def test_extraction_matches_operator(self):
        phi = s1_base()
        x, y = Poly.variable(2, 0), Poly.variable(2, 1)
        X = PullbackVectorField(phi, [y, Poly.zero(2)])
        Y = PullbackVectorField(phi, [Poly.zero(2), x * y])
        br = bracket_phistar(phi, X, Y)
        for f in monomials(2, 3):
            assert br.apply(f) == bracket_phistar_apply(phi, X, Y, f)


class TestConstructors:
    def test_identity_gives_classical_tangent(self):
        A = make_pullback_tangent(AffineTwist.identity(2))
        assert A.structure == {}
        assert A.phiA == SectionTwist.identity(2, A.phi)

    def test_s1_twist_matrix(self, S1):
        assert S1.phiA.matrix[0][0] == Poly.const(2, Fraction(1, 2))
        assert S1.phiA.matrix[1][1] == Poly.const(2, 2)
        assert S1.structure == {}

    def test_rank_one_passes(self):
        phi = AffineTwist([[Fraction(3, 2)]], [1])
        A = make_pullback_tangent(phi)
        assert check_axioms(A).passed

    def test_tm_r_shape(self, S2):
        assert S2.rank == 3
        assert S2.phiA.matrix[0][0] == Poly.const(2, Fraction(1, 2))
        assert S2.phiA.matrix[1][1] == Poly.const(2, 2)
        assert S2.phiA.matrix[2][2] == Poly.const(2, 1)
        # anchor kills the line factor
        assert all(S2.anchor[i][2].is_zero() for i in range(2))
        assert S2.structure == {}

    def test_tm_r_identity_reduces_to_classical(self):
        A = make_tm_r(AffineTwist.identity(2))
        x = Poly.variable(2, 0)
        g = Poly.variable(2, 1)
        # [(e1, 0), (0, g)] = (0, e1(g)) classically
        X = A.section([Poly.const(2, 1), Poly.zero(2), Poly.zero(2)])
        U = A.section([Poly.zero(2), Poly.zero(2), g])
        br = A.bracket(X, U)
        assert br.coeff((2,)) == Poly.const(2, 0) + g.partial(0)
        assert br.coeff((0,)).is_zero() and br.coeff((1,)).is_zero()

    def test_tm_r_spec_value(self, S2):
        # second-slot bracket of (e1, 0) against (0, pullback of y) vanishes
        phi = S2.phi
        h = phi.pullback(Poly.variable(2, 1))
        X = S2.section([Poly.const(2, 1), Poly.zero(2), Poly.zero(2)])
        U = S2.section([Poly.zero(2), Poly.zero(2), h])
        assert S2.bracket(X, U).is_zero()


class TestBracket:
    def test_trivial_instance(self, S0):
        X = S0.section([Poly.variable(1, 0)])
        Y = S0.section([Poly.const(1, 2)])
        assert S0.bracket(X, Y).is_zero()

    def test_s1_frame(self, S1):
        assert S1.bracket(S1.frame(0), S1.frame(1)).is_zero()

    def test_s1_leibniz_example(self, S1):
        # [e1, x e2] = a(phiA e1)(x) phiA(e2) = (1/2)(1)(2 e2) = e2
        x = Poly.variable(2, 0)
        out = S1.bracket(S1.frame(0), S1.frame(1).scale(x))
        assert out == S1.frame(1)

    def test_antisymmetry(self, S1):
        x, y = Poly.variable(2, 0), Poly.variable(2, 1)
        X = S1.section([x, y * y])
        Y = S1.section([y, x + 1])
        assert S1.bracket(X, Y) == -S1.bracket(Y, X)


class TestCheckAxioms:
    def test_s0_passes(self, S0):
        assert check_axioms(S0).passed

    def test_s1_passes(self, S1):
        assert check_axioms(S1).passed

    def test_s2_passes(self, S2):
        assert check_axioms(S2).passed

    def test_s3_passes(self, S3):
        assert check_axioms(S3, probe_degree=2).passed

    def test_perturbed_s1_fails_with_witness(self, S1):
        bad = HomAlgebroid(
            S1.phi,
            S1.phiA,
            S1.anchor,
            {(0, 1, 0): Poly.const(2, 1)},
        )
        result = check_axioms(bad)
        assert not result.passed
        assert result.witness is not None
        assert result.witness.residual != "0"

    def test_non_antisymmetric_structure_rejected(self, S1):
        with pytest.raises(StructureError):
            HomAlgebroid(
                S1.phi,
                S1.phiA,
                S1.anchor,
                {(0, 1, 0): Poly.const(2, 1), (1, 0, 0): Poly.const(2, 1)},
            )


class TestIntertwining:
    def test_pullback_bracket_compat(self):
        # twisted bracket of lifted fields = conjugated lift of the
        # classical commutator
        phi = s1_base()
        x, y = Poly.variable(2, 0), Poly.variable(2, 1)
        fields = [
            ([y, Poly.zero(2)], [Poly.zero(2), x]),
            ([x, y], [Poly.const(2, 1), x * y]),
        ]
        for Xc, Yc in fields:
            # classical commutator [X, Y]^i = X(Y^i) - Y(X^i)
            def cl_apply(coeffs, f):
                out = Poly.zero(2)
                for i, c in enumerate(coeffs):
                    out = out + c * f.partial(i)
                return out

            comm = [cl_apply(Xc, Yc[i]) - cl_apply(Yc, Xc[i]) for i in range(2)]
            lhs = bracket_phistar(phi, pullback_section(phi, Xc), pullback_section(phi, Yc))
            rhs = ad_twist(phi, pullback_section(phi, comm))
            assert lhs == rhs

    def test_pushforward_intertwines(self):
        # the lift of the pushforward is the inverse conjugation
        phi = s1_base()
        x, y = Poly.variable(2, 0), Poly.variable(2, 1)
        for Xc in ([y, x], [x * x, Poly.const(2, 1)]):
            # affine pushforward: (M X) after the inverse map
            M = phi.matrix
            pushed = [
                phi.inverse_pullback(
                    sum((M[i][j] * Xc[j] for j in range(2)), Poly.zero(2))
                )
                for i in range(2)
            ]
            lhs = pullback_section(phi, pushed)
            rhs = ad_twist_inverse(phi, pullback_section(phi, Xc))
            assert lhs == rhs
