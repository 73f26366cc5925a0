"""Hom-Lie algebroid structures over a fixed global frame: axiom
checking, the conjugation calculus on pullback vector fields, and the
canonical instance constructors (pullback tangent bundle and its
trivial-line extension).
"""

from __future__ import annotations

from .exterior import Form, MultiVector, SectionTwist
from .polyring import AffineTwist, Poly, monomials
from .report import CheckResult, StructureError, Witness, first_failure

# Pairwise-scaled probes grow quadratically, so they use a reduced
# degree bound; single-scaled probes use the full requested degree.
PAIRWISE_PROBE_DEGREE = 2


class PullbackVectorField:
    """Twisted derivation of the coefficient ring: the action on f is
    sum_i c_i * pullback(phi, df/dx_i).  These are the sections of the
    pullback tangent bundle along phi."""

    __slots__ = ("phi", "coeffs")

    def __init__(self, phi: AffineTwist, coeffs):
        self.phi = phi
        self.coeffs = tuple(
            c if isinstance(c, Poly) else Poly.const(phi.n, c) for c in coeffs
        )
        if len(self.coeffs) != phi.n:
            raise StructureError("coefficient count must match the base dimension")

    @classmethod
    def coordinate(cls, phi: AffineTwist, i: int) -> "PullbackVectorField":
        return cls(phi, [Poly.const(phi.n, 1 if j == i else 0) for j in range(phi.n)])

    @classmethod
    def zero(cls, phi: AffineTwist) -> "PullbackVectorField":
        return cls(phi, [Poly.zero(phi.n)] * phi.n)

    def apply(self, f: Poly) -> Poly:
        out = Poly.zero(self.phi.n)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                out = out + c * self.phi.pullback(f.partial(i))
        return out

    def __add__(self, other: "PullbackVectorField") -> "PullbackVectorField":
        return PullbackVectorField(self.phi, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "PullbackVectorField") -> "PullbackVectorField":
        return PullbackVectorField(self.phi, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, f) -> "PullbackVectorField":
        return PullbackVectorField(self.phi, [c * f for c in self.coeffs])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PullbackVectorField):
            return NotImplemented
        return self.phi == other.phi and self.coeffs == other.coeffs

    __hash__ = None

    def render(self, names=None) -> str:
        return "(" + ", ".join(c.render(names) for c in self.coeffs) + ")"

    def __repr__(self) -> str:
        return f"PullbackVectorField{self.render()}"


def pullback_section(phi: AffineTwist, coeffs) -> PullbackVectorField:
    """Pullback of a classical vector field: each coefficient is pulled
    back, matching the pointwise definition of the pullback section."""
    coeffs = [c if isinstance(c, Poly) else Poly.const(phi.n, c) for c in coeffs]
    return PullbackVectorField(phi, [phi.pullback(c) for c in coeffs])


def ad_twist(phi: AffineTwist, X: PullbackVectorField) -> PullbackVectorField:
    """Conjugation pullback . X . inverse-pullback, with coefficients
    recovered by applying the operator to the coordinate functions."""
    n = phi.n
    coeffs = []
    for k in range(n):
        xk = Poly.variable(n, k)
        coeffs.append(phi.pullback(X.apply(phi.inverse_pullback(xk))))
    return PullbackVectorField(phi, coeffs)


def ad_twist_inverse(phi: AffineTwist, X: PullbackVectorField) -> PullbackVectorField:
    n = phi.n
    coeffs = []
    for k in range(n):
        xk = Poly.variable(n, k)
        coeffs.append(phi.inverse_pullback(X.apply(phi.pullback(xk))))
    return PullbackVectorField(phi, coeffs)


def _phistar_composite_apply(phi, X, Y, f):
    """(pullback . X . inv . Y . inv)(f)."""
    return phi.pullback(X.apply(phi.inverse_pullback(Y.apply(phi.inverse_pullback(f)))))


def bracket_phistar_apply(phi, X, Y, f: Poly) -> Poly:
    return _phistar_composite_apply(phi, X, Y, f) - _phistar_composite_apply(phi, Y, X, f)


def bracket_phistar(phi: AffineTwist, X: PullbackVectorField, Y: PullbackVectorField) -> PullbackVectorField:
    """Twisted commutator on pullback vector fields; antisymmetric by
    construction, coefficients extracted on coordinates."""
    n = phi.n
    coeffs = [bracket_phistar_apply(phi, X, Y, Poly.variable(n, k)) for k in range(n)]
    return PullbackVectorField(phi, coeffs)


class HomAlgebroid:
    """A candidate Hom-Lie algebroid: base map, section twist, anchor
    matrix and antisymmetric structure functions on a rank-r frame.

    The type admits invalid candidates on purpose; check_axioms decides
    whether the data actually satisfies the axioms.
    """

    def __init__(self, phi: AffineTwist, phiA: SectionTwist, anchor, structure):
        self.phi = phi
        self.phiA = phiA
        self.n = phi.n
        self.rank = phiA.rank
        if phiA.kind != "multivector":
            raise StructureError("section twist must act on the section side")
        self.anchor = tuple(
            tuple(x if isinstance(x, Poly) else Poly.const(self.n, x) for x in row)
            for row in anchor
        )
        if len(self.anchor) != self.n or any(len(row) != self.rank for row in self.anchor):
            raise StructureError("anchor matrix must be n x rank")
        self.structure = self._normalize_structure(structure)
        self._phiA_frame = None
        self._anchor_phiA_frame = None
        self.is_zero_structure = not self.structure and all(
            x.is_zero() for row in self.anchor for x in row
        )

    def _normalize_structure(self, structure) -> dict:
        table = {}
        if structure:
            for key, value in structure.items():
                if len(key) == 2:
                    i, j = key
                    vec = value.vector() if isinstance(value, MultiVector) else list(value)
                    for k, c in enumerate(vec):
                        self._store_entry(table, i, j, k, c)
                else:
                    i, j, k = key
                    self._store_entry(table, i, j, k, value)
        out = {}
        for (i, j, k), c in table.items():
            c = c if isinstance(c, Poly) else Poly.const(self.n, c)
            if not c.is_zero():
                out[(i, j, k)] = c
        return out

    def _store_entry(self, table, i, j, k, c):
        if not (0 <= i < self.rank and 0 <= j < self.rank and 0 <= k < self.rank):
            raise StructureError(f"structure index ({i},{j},{k}) out of range")
        if i == j:
            if (not isinstance(c, Poly) and c) or (isinstance(c, Poly) and not c.is_zero()):
                raise StructureError(f"structure constant C[{i},{i}] must vanish")
            return
        if i > j:
            i, j, c = j, i, -(c if isinstance(c, Poly) else Poly.const(self.n, c))
        prev = table.get((i, j, k))
        if prev is not None and not (prev - c).is_zero():
            raise StructureError(f"structure table is not antisymmetric at ({i},{j},{k})")
        table[(i, j, k)] = c

    # -- frame helpers -------------------------------------------------

    def section(self, coeffs) -> MultiVector:
        return MultiVector.from_vector(self.rank, self.n, [
            c if isinstance(c, Poly) else Poly.const(self.n, c) for c in coeffs
        ])

    def frame(self, i: int) -> MultiVector:
        return MultiVector.basis(self.rank, self.n, (i,))

    def coframe(self, i: int) -> Form:
        return Form.basis(self.rank, self.n, (i,))

    def frame_bracket(self, i: int, j: int) -> MultiVector:
        if i == j:
            return MultiVector.zero(self.rank, self.n, 1)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        coeffs = {}
        for k in range(self.rank):
            c = self.structure.get((i, j, k))
            if c is not None:
                coeffs[(k,)] = c if sign > 0 else -c
        return MultiVector(self.rank, self.n, 1, coeffs)

    def phiA_frame(self, i: int) -> MultiVector:
        if self._phiA_frame is None:
            self._phiA_frame = [self.phiA.apply(self.frame(k)) for k in range(self.rank)]
        return self._phiA_frame[i]

    def anchor_field(self, X: MultiVector) -> PullbackVectorField:
        coeffs = X.vector()
        out = [
            sum((self.anchor[i][j] * coeffs[j] for j in range(self.rank)), Poly.zero(self.n))
            for i in range(self.n)
        ]
        return PullbackVectorField(self.phi, out)

    def anchor_apply(self, X: MultiVector, f: Poly) -> Poly:
        return self.anchor_field(X).apply(f)

    def _anchor_after_twist(self, i: int) -> PullbackVectorField:
        if self._anchor_phiA_frame is None:
            self._anchor_phiA_frame = [
                self.anchor_field(self.phiA_frame(k)) for k in range(self.rank)
            ]
        return self._anchor_phiA_frame[i]

    # -- the bracket ---------------------------------------------------

    def bracket(self, X: MultiVector, Y: MultiVector) -> MultiVector:
        """Extension of the frame bracket by the twisted Leibniz rule in
        each slot; antisymmetric."""
        out = MultiVector.zero(self.rank, self.n, 1)
        pb = self.phi.pullback
        for (i,), f in X.coeffs.items():
            pf = pb(f)
            for (j,), g in Y.coeffs.items():
                pg = pb(g)
                br = self.frame_bracket(i, j)
                if not br.is_zero():
                    out = out + br.scale(pf * pg)
                df = self._anchor_after_twist(i).apply(g)
                if not df.is_zero():
                    out = out + self.phiA_frame(j).scale(pf * df)
                dg = self._anchor_after_twist(j).apply(f)
                if not dg.is_zero():
                    out = out - self.phiA_frame(i).scale(pg * dg)
        return out

    def render_section(self, X: MultiVector) -> str:
        return X.render()

    def __repr__(self) -> str:
        return f"HomAlgebroid(n={self.n}, rank={self.rank})"


def _section_probes(A: HomAlgebroid, probe_degree: int):
    """Frame sections plus monomial-scaled frame sections, labelled for
    witness reporting."""
    probes = [(f"e{i + 1}", A.frame(i)) for i in range(A.rank)]
    scaled = []
    for f in monomials(A.n, probe_degree):
        if f.is_constant():
            continue
        for i in range(A.rank):
            scaled.append((f"({f.render()})*e{i + 1}", A.frame(i).scale(f)))
    return probes, scaled


def check_axioms(A: HomAlgebroid, probe_degree: int = 3) -> CheckResult:
    """Verify every Hom-Lie algebroid axiom as an exact polynomial
    identity on frame sections and monomial-scaled frame sections.

    Returns a passing report or the first violated identity together
    with a concrete witness.
    """
    frame, scaled = _section_probes(A, probe_degree)
    pair_deg = min(probe_degree, PAIRWISE_PROBE_DEGREE)
    _, scaled_small = _section_probes(A, pair_deg)
    funcs = monomials(A.n, probe_degree)
    singles = frame + scaled
    pairs = (
        [(x, y) for x in frame for y in frame]
        + [(x, y) for x in frame for y in scaled]
        + [(x, y) for x in scaled for y in frame]
        + [(x, y) for x in scaled_small for y in scaled_small]
    )
    results = []

    def witness(identity, inputs, residual):
        return CheckResult(identity, False, Witness(identity, inputs, residual.render()))

    def check_linearity():
        name = "phiA-function-linearity"
        for label, X in singles:
            for f in funcs:
                lhs = A.phiA.apply(X.scale(f))
                rhs = A.phiA.apply(X).scale(A.phi.pullback(f))
                res = lhs - rhs
                if not res.is_zero():
                    return witness(name, {"X": label, "f": f.render()}, res)
        return CheckResult(name, True)

    def check_hom():
        name = "phiA-bracket-homomorphism"
        for (lx, X), (ly, Y) in pairs:
            lhs = A.phiA.apply(A.bracket(X, Y))
            rhs = A.bracket(A.phiA.apply(X), A.phiA.apply(Y))
            res = lhs - rhs
            if not res.is_zero():
                return witness(name, {"X": lx, "Y": ly}, res)
        return CheckResult(name, True)

    def check_jacobi():
        name = "hom-jacobi"
        triples = [(x, y, z) for x in frame for y in frame for z in frame]
        for pos in range(3):
            for probe in scaled:
                for a in frame:
                    for b in frame:
                        t = [a, b]
                        t.insert(pos, probe)
                        triples.append(tuple(t))
        seen = set()
        for (lx, X), (ly, Y), (lz, Z) in triples:
            key = (lx, ly, lz)
            if key in seen:
                continue
            seen.add(key)
            total = (
                A.bracket(A.phiA.apply(X), A.bracket(Y, Z))
                + A.bracket(A.phiA.apply(Y), A.bracket(Z, X))
                + A.bracket(A.phiA.apply(Z), A.bracket(X, Y))
            )
            if not total.is_zero():
                return witness(name, {"X": lx, "Y": ly, "Z": lz}, total)
        return CheckResult(name, True)

    def check_leibniz():
        name = "leibniz-rule"
        for (lx, X), (ly, Y) in pairs:
            for f in funcs:
                lhs = A.bracket(X, Y.scale(f))
                rhs = A.bracket(X, Y).scale(A.phi.pullback(f)) + A.phiA.apply(Y).scale(
                    A.anchor_apply(A.phiA.apply(X), f)
                )
                res = lhs - rhs
                if not res.is_zero():
                    return witness(name, {"X": lx, "Y": ly, "f": f.render()}, res)
        return CheckResult(name, True)

    def check_anchor_twist():
        name = "anchor-twist-compatibility"
        for label, X in singles:
            a_tw = A.anchor_field(A.phiA.apply(X))
            a_raw = A.anchor_field(X)
            for f in funcs:
                lhs = a_tw.apply(f)
                rhs = A.phi.pullback(a_raw.apply(A.phi.inverse_pullback(f)))
                res = lhs - rhs
                if not res.is_zero():
                    return witness(name, {"X": label, "f": f.render()}, res)
        return CheckResult(name, True)

    def check_anchor_bracket():
        name = "anchor-bracket-compatibility"
        for (lx, X), (ly, Y) in pairs:
            a_br = A.anchor_field(A.bracket(X, Y))
            ax, ay = A.anchor_field(X), A.anchor_field(Y)
            for f in funcs:
                lhs = a_br.apply(f)
                rhs = bracket_phistar_apply(A.phi, ax, ay, f)
                res = lhs - rhs
                if not res.is_zero():
                    return witness(name, {"X": lx, "Y": ly, "f": f.render()}, res)
        return CheckResult(name, True)

    for chk in (
        check_linearity,
        check_hom,
        check_jacobi,
        check_leibniz,
        check_anchor_twist,
        check_anchor_bracket,
    ):
        results.append(chk())
        if not results[-1].passed:
            break
    return first_failure("check_axioms", results)


def make_pullback_tangent(phi: AffineTwist) -> HomAlgebroid:
    """The pullback tangent bundle as a Hom-Lie algebroid: identity
    anchor, conjugation twist, structure functions extracted from the
    twisted commutator on the coordinate frame."""
    n = phi.n
    ad_cols = [ad_twist(phi, PullbackVectorField.coordinate(phi, j)) for j in range(n)]
    P = [[ad_cols[j].coeffs[i] for j in range(n)] for i in range(n)]
    phiA = SectionTwist(P, phi, "multivector")
    anchor = [[Poly.const(n, 1 if i == j else 0) for j in range(n)] for i in range(n)]
    structure = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = bracket_phistar(
                phi,
                PullbackVectorField.coordinate(phi, i),
                PullbackVectorField.coordinate(phi, j),
            )
            for k, c in enumerate(br.coeffs):
                if not c.is_zero():
                    structure[(i, j, k)] = c
    return HomAlgebroid(phi, phiA, anchor, structure)


def make_tm_r(phi: AffineTwist) -> HomAlgebroid:
    """Tangent-plus-line extension: rank n+1 frame whose last element
    spans the trivial factor.  The twist acts by conjugation on the
    tangent block and by plain pullback on the line coefficient; the
    anchor kills the line."""
    n = phi.n
    tangent = make_pullback_tangent(phi)
    r = n + 1
    P = [[Poly.zero(n) for _ in range(r)] for _ in range(r)]
    for i in range(n):
        for j in range(n):
            P[i][j] = tangent.phiA.matrix[i][j]
    P[n][n] = Poly.const(n, 1)
    phiA = SectionTwist(P, phi, "multivector")
    anchor = [
        [Poly.const(n, 1 if i == j else 0) for j in range(n)] + [Poly.zero(n)]
        for i in range(n)
    ]
    structure = {}
    for (i, j, k), c in tangent.structure.items():
        structure[(i, j, k)] = c
    # line-factor brackets: [e_i, u] has vanishing tangent part and the
    # derivation hits the constant coefficient 1, so everything is zero
    return HomAlgebroid(phi, phiA, anchor, structure)
