"""Bialgebroid pairs and their double: the twisted product on the sum
bundle, the symmetric pairing with its metric-dual derivative, the
antisymmetrized bracket, and the full axiom verifier.

Hand-built instances with an explicit product table on the frame are
accepted through the same container so negative fixtures can exercise
every failure path.
"""

from __future__ import annotations

from fractions import Fraction

from .calculus import (
    CartanContext,
    differential,
    interior,
    lie_derivative_form,
    schouten,
)
from .exterior import Form, MultiVector, SectionTwist, reinterpret
from .homalg import HomAlgebroid, PullbackVectorField, bracket_phistar_apply
from .polyring import Poly, _mat_inverse, monomials
from .report import (
    CheckResult,
    PreconditionError,
    StructureError,
    TheoremViolation,
    Witness,
    first_failure,
)


class BialgebroidPair:
    """Two algebroids in duality: same base map, mutually dagger twists,
    frames identified as dual bases."""

    def __init__(self, A, Astar):
        if A.rank != Astar.rank or A.n != Astar.n:
            raise StructureError("paired algebroids must share rank and base dimension")
        if A.phi != Astar.phi:
            raise StructureError("paired algebroids must share the base map")
        self.A = A
        self.Astar = Astar
        self.ctx = CartanContext(A)
        self.dual_ctx = CartanContext(Astar)
        if Astar.phiA.matrix != self.ctx.dagger.matrix:
            raise StructureError("dual twist must be the dagger of the primal twist")

    @classmethod
    def trivial(cls, A) -> "BialgebroidPair":
        """Dual side carries the zero bracket and zero anchor."""
        ctx = CartanContext(A)
        twist = SectionTwist([list(r) for r in ctx.dagger.matrix], A.phi, "multivector")
        anchor = [[Poly.zero(A.n)] * A.rank for _ in range(A.n)]
        return cls(A, HomAlgebroid(A.phi, twist, anchor, {}))

    # -- dual-side calculus on primal data ------------------------------

    def dual_differential(self, D: MultiVector) -> MultiVector:
        """Differential of the dual algebroid acting on multivectors of
        the primal side."""
        out = differential(self.dual_ctx, reinterpret(D, Form))
        return reinterpret(out, MultiVector)

    def primal_differential(self, omega: Form) -> Form:
        return differential(self.ctx, omega)

    def dual_schouten(self, xi: Form, eta: Form) -> Form:
        out = schouten(
            self.dual_ctx, reinterpret(xi, MultiVector), reinterpret(eta, MultiVector)
        )
        return reinterpret(out, Form)

    def dual_bracket(self, xi: Form, eta: Form) -> Form:
        out = self.Astar.bracket(
            reinterpret(xi, MultiVector), reinterpret(eta, MultiVector)
        )
        return reinterpret(out, Form)

    def dual_lie_on_section(self, xi: Form, Y: MultiVector) -> MultiVector:
        out = lie_derivative_form(
            self.dual_ctx, reinterpret(xi, MultiVector), reinterpret(Y, Form)
        )
        return reinterpret(out, MultiVector)

    def dual_interior(self, eta: Form, D: MultiVector) -> MultiVector:
        out = interior(self.dual_ctx, reinterpret(eta, MultiVector), reinterpret(D, Form))
        return reinterpret(out, MultiVector)

    def dual_anchor_apply(self, xi: Form, f: Poly) -> Poly:
        return self.Astar.anchor_apply(reinterpret(xi, MultiVector), f)


def _section_probes(A, probe_degree):
    probes = [(f"e{i + 1}", A.frame(i)) for i in range(A.rank)]
    for f in monomials(A.n, probe_degree):
        if f.is_constant():
            continue
        for i in range(A.rank):
            probes.append((f"({f.render()})*e{i + 1}", A.frame(i).scale(f)))
    return probes


def check_bialgebroid(P: BialgebroidPair, probe_degree: int = 2) -> CheckResult:
    """The dual differential is a twisted derivation of the primal
    bracket, and symmetrically with the roles exchanged."""
    A, ctx = P.A, P.ctx
    results = []

    def direction_primal():
        name = "dual-derivation-of-bracket"
        for lx, X in _section_probes(A, probe_degree):
            for ly, Y in _section_probes(A, probe_degree):
                lhs = P.dual_differential(A.bracket(X, Y))
                rhs = schouten(ctx, P.dual_differential(X), A.phiA.apply(Y)) + schouten(
                    ctx, A.phiA.apply(X), P.dual_differential(Y)
                )
                res = lhs - rhs
                if not res.is_zero():
                    return CheckResult(
                        name, False, Witness(name, {"X": lx, "Y": ly}, res.render())
                    )
        return CheckResult(name, True)

    def direction_dual():
        name = "primal-derivation-of-dual-bracket"
        co = [
            (label.replace("e", "eps", 1), reinterpret(S, Form))
            for label, S in _section_probes(P.Astar, probe_degree)
        ]
        for lx, xi in co:
            for ly, eta in co:
                lhs = P.primal_differential(P.dual_bracket(xi, eta))
                rhs = P.dual_schouten(
                    P.primal_differential(xi), ctx.dagger.apply_graded(eta)
                ) + P.dual_schouten(ctx.dagger.apply_graded(xi), P.primal_differential(eta))
                res = lhs - rhs
                if not res.is_zero():
                    return CheckResult(
                        name, False, Witness(name, {"xi": lx, "eta": ly}, res.render())
                    )
        return CheckResult(name, True)

    for chk in (direction_primal, direction_dual):
        results.append(chk())
    return first_failure("check_bialgebroid", results)


class ESection:
    """Section of the doubled bundle: 2r coefficients, primal block
    first."""

    __slots__ = ("coeffs", "r", "n")

    def __init__(self, coeffs, n=None):
        self.coeffs = tuple(
            c if isinstance(c, Poly) else Poly.const(n, c) for c in coeffs
        )
        self.n = self.coeffs[0].n if self.coeffs else n
        if len(self.coeffs) % 2:
            raise StructureError("doubled sections need an even coefficient count")
        self.r = len(self.coeffs) // 2

    def __add__(self, other):
        return ESection([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return ESection([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return ESection([-a for a in self.coeffs])

    def scale(self, f):
        return ESection([a * f for a in self.coeffs])

    def is_zero(self):
        return all(a.is_zero() for a in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, ESection):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def render(self, names=None):
        return "(" + ", ".join(c.render(names) for c in self.coeffs) + ")"

    def __repr__(self):
        return f"ESection{self.render()}"


class CourantDouble:
    """The rank-2r doubled structure.  The product comes either from the
    bialgebroid formula or from an explicit frame table extended by the
    function-multiplication rules."""

    def __init__(self, pair: BialgebroidPair, product_table=None):
        self.pair = pair
        self.r = pair.A.rank
        self.n = pair.A.n
        self.phi = pair.A.phi
        self.product_table = None
        if product_table is not None:
            table = {}
            for (a, b), sec in product_table.items():
                if not (0 <= a < 2 * self.r and 0 <= b < 2 * self.r):
                    raise StructureError(f"product table index ({a},{b}) out of range")
                table[(a, b)] = sec if isinstance(sec, ESection) else ESection(list(sec), self.n)
            self.product_table = table

    # -- structure maps -------------------------------------------------

    def frame_section(self, a: int) -> ESection:
        coeffs = [Poly.zero(self.n)] * (2 * self.r)
        coeffs[a] = Poly.const(self.n, 1)
        return ESection(coeffs, self.n)

    def frame_sections(self):
        return [self.frame_section(a) for a in range(2 * self.r)]

    def split(self, u: ESection):
        X = MultiVector.from_vector(self.r, self.n, list(u.coeffs[: self.r]))
        xi = Form.from_vector(self.r, self.n, list(u.coeffs[self.r :]))
        return X, xi

    def join(self, X: MultiVector, xi: Form) -> ESection:
        return ESection(list(X.vector()) + list(xi.vector()), self.n)

    def phiE(self, u: ESection) -> ESection:
        X, xi = self.split(u)
        return self.join(self.pair.A.phiA.apply(X), self.pair.ctx.dagger.apply(xi))

    def pairing(self, u: ESection, v: ESection) -> Poly:
        X, xi = self.split(u)
        Y, eta = self.split(v)
        from .exterior import pair as duality

        half = Poly.const(self.n, Fraction(1, 2))
        return half * (duality(xi, Y) + duality(eta, X))

    def rho_field(self, u: ESection) -> PullbackVectorField:
        X, xi = self.split(u)
        return self.pair.A.anchor_field(X) + self.pair.Astar.anchor_field(
            reinterpret(xi, MultiVector)
        )

    def rho_apply(self, u: ESection, f: Poly) -> Poly:
        return self.rho_field(u).apply(f)

    # -- the product ------------------------------------------------------

    def product(self, u: ESection, v: ESection) -> ESection:
        if self.product_table is not None:
            return self._product_from_table(u, v)
        return self._product_from_formula(u, v)

    def _product_from_formula(self, u, v):
        P = self.pair
        ctx = P.ctx
        X, xi = self.split(u)
        Y, eta = self.split(v)
        a_part = P.A.bracket(X, Y)
        a_part = a_part + P.dual_lie_on_section(xi, Y)
        d_star_X = P.dual_differential(ctx.phiA_inv.apply(X))
        a_part = a_part - P.dual_interior(eta, d_star_X)
        b_part = P.dual_bracket(xi, eta)
        b_part = b_part + lie_derivative_form(ctx, X, eta)
        d_xi = differential(ctx, ctx.dagger_inv.apply_graded(xi))
        b_part = b_part - interior(ctx, Y, d_xi)
        return self.join(a_part, b_part)

    def _product_from_table(self, u, v):
        out = ESection([Poly.zero(self.n)] * (2 * self.r), self.n)
        frames = self.frame_sections()
        pb = self.phi.pullback
        for a in range(2 * self.r):
            f = u.coeffs[a]
            if f.is_zero():
                continue
            for b in range(2 * self.r):
                g = v.coeffs[b]
                if g.is_zero():
                    continue
                base = self.product_table.get((a, b))
                if base is None:
                    base = ESection([Poly.zero(self.n)] * (2 * self.r), self.n)
                inner = base.scale(pb(g)) + self.phiE(frames[b]).scale(
                    self.rho_apply(self.phiE(frames[a]), g)
                )
                term = inner.scale(pb(f))
                term = term - self.phiE(frames[a]).scale(
                    pb(g) * self.rho_apply(self.phiE(frames[b]), f)
                )
                pairing_ab = self.pairing(frames[a], frames[b])
                # the gradient term carries a factor 2 against the
                # half-normalized pairing
                term = term + self.script_D(f).scale(pb(g * pairing_ab) * 2)
                out = out + term
        return out

    def bracket(self, u: ESection, v: ESection) -> ESection:
        half = Fraction(1, 2)
        diff = self.product(u, v) - self.product(v, u)
        return diff.scale(half)

    def script_D(self, f: Poly) -> ESection:
        """Metric dual of half the anchor action, found by solving the
        pairing system against the frame."""
        frames = self.frame_sections()
        gram = [
            [self.pairing(frames[a], frames[b]).constant_value() for b in range(2 * self.r)]
            for a in range(2 * self.r)
        ]
        inv = _mat_inverse(gram)
        half = Poly.const(self.n, Fraction(1, 2))
        rhs = [half * self.rho_apply(frames[b], f) for b in range(2 * self.r)]
        coeffs = [
            sum((Poly.const(self.n, inv[a][b]) * rhs[b] for b in range(2 * self.r)), Poly.zero(self.n))
            for a in range(2 * self.r)
        ]
        return ESection(coeffs, self.n)


def double(P: BialgebroidPair, verify: bool = True, probe_degree: int = 2) -> CourantDouble:
    """Double a compatible pair; refuses pairs that fail the
    compatibility identity when verification is on."""
    if verify:
        ok = check_bialgebroid(P, probe_degree)
        if not ok.passed:
            raise PreconditionError(
                "pair is not a bialgebroid: " + ok.witness.render(), ok.witness
            )
    return CourantDouble(P)


def courant_bracket(E: CourantDouble, u: ESection, v: ESection) -> ESection:
    return E.bracket(u, v)


def script_D(E: CourantDouble, f: Poly) -> ESection:
    return E.script_D(f)


def check_closed_bracket_formula(E: CourantDouble, probe_degree: int = 1) -> CheckResult:
    """The antisymmetrized product agrees with the closed bracket
    formula on probe sections (doubles only)."""
    name = "closed-bracket-formula"
    if E.product_table is not None:
        raise PreconditionError("closed formula applies to doubles built from a pair")
    P = E.pair
    ctx = P.ctx
    half = Fraction(1, 2)
    from .exterior import pair as duality

    for lu, u in _e_probes(E, probe_degree):
        for lv, v in _e_probes(E, probe_degree):
            X, xi = E.split(u)
            Y, eta = E.split(v)
            cross = duality(eta, X) - duality(xi, Y)
            a_part = (
                P.A.bracket(X, Y)
                + P.dual_lie_on_section(xi, Y)
                - P.dual_lie_on_section(eta, X)
                + P.dual_differential(MultiVector.scalar(E.r, E.n, cross)).scale(half)
            )
            b_part = (
                P.dual_bracket(xi, eta)
                + lie_derivative_form(ctx, X, eta)
                - lie_derivative_form(ctx, Y, xi)
                - differential(ctx, cross).scale(half)
            )
            res = E.bracket(u, v) - E.join(a_part, b_part)
            if not res.is_zero():
                return CheckResult(name, False, Witness(name, {"u": lu, "v": lv}, res.render()))
    return CheckResult(name, True)


def _e_probes(E: CourantDouble, probe_degree: int, mixed: bool = False):
    probes = []
    frames = E.frame_sections()
    for a, u in enumerate(frames):
        probes.append((f"E{a + 1}", u))
    funcs = [f for f in monomials(E.n, probe_degree) if not f.is_constant()]
    for f in funcs:
        for a, u in enumerate(frames):
            probes.append((f"({f.render()})*E{a + 1}", u.scale(f)))
    if mixed:
        for a in range(2 * E.r):
            for b in range(a + 1, 2 * E.r):
                probes.append((f"E{a + 1}+E{b + 1}", frames[a] + frames[b]))
                if funcs:
                    f = funcs[0]
                    probes.append(
                        (f"E{a + 1}+({f.render()})*E{b + 1}", frames[a] + frames[b].scale(f))
                    )
    return probes


def check_courant_axioms(E: CourantDouble, probe_degree: int = 2) -> CheckResult:
    """All six axioms plus the two function-multiplication rules, on
    frame sections, scaled frames and mixed sums."""
    probes = _e_probes(E, min(probe_degree, 1), mixed=True)
    pair_probes = _e_probes(E, min(probe_degree, 1))
    funcs = monomials(E.n, probe_degree)
    pb = E.phi.pullback
    inv_pb = E.phi.inverse_pullback
    results = []

    def fail(name, inputs, residual):
        return CheckResult(name, False, Witness(name, inputs, residual))

    def axiom_i_a():
        name = "product-twist-homomorphism"
        for lu, u in pair_probes:
            for lv, v in pair_probes:
                res = E.phiE(E.product(u, v)) - E.product(E.phiE(u), E.phiE(v))
                if not res.is_zero():
                    return fail(name, {"u": lu, "v": lv}, res.render())
        return CheckResult(name, True)

    def axiom_i_b():
        name = "product-hom-leibniz"
        frames = [(f"E{a + 1}", u) for a, u in enumerate(E.frame_sections())]
        funcs1 = [f for f in monomials(E.n, 1) if not f.is_constant()]
        triples = [(x, y, z) for x in frames for y in frames for z in frames]
        for pos in range(3):
            for f in funcs1:
                for la, ua in frames:
                    for lb, ub in frames:
                        base = [(la, ua), (lb, ub)]
                        probe = (f"({f.render()})*{base[0][0]}", base[0][1].scale(f))
                        t = [base[0], base[1]]
                        t.insert(pos, probe)
                        triples.append(tuple(t))
        prod_cache = {}

        def prod(la, ua, lb, ub):
            key = (la, lb)
            got = prod_cache.get(key)
            if got is None:
                got = prod_cache[key] = E.product(ua, ub)
            return got

        for (l1, e1), (l2, e2), (l3, e3) in triples:
            lhs = E.product(E.phiE(e1), prod(l2, e2, l3, e3))
            rhs = E.product(prod(l1, e1, l2, e2), E.phiE(e3)) + E.product(
                E.phiE(e2), prod(l1, e1, l3, e3)
            )
            res = lhs - rhs
            if not res.is_zero():
                return fail(name, {"e1": l1, "e2": l2, "e3": l3}, res.render())
        return CheckResult(name, True)

    def axiom_ii():
        name = "anchor-twist-conjugation"
        for lu, u in pair_probes:
            for f in funcs:
                lhs = E.rho_apply(E.phiE(u), f)
                rhs = pb(E.rho_apply(u, inv_pb(f)))
                res = lhs - rhs
                if not res.is_zero():
                    return fail(name, {"u": lu, "f": f.render()}, res.render())
        return CheckResult(name, True)

    def axiom_iii():
        name = "anchor-product-compatibility"
        for lu, u in pair_probes:
            for lv, v in pair_probes:
                ru, rv = E.rho_field(u), E.rho_field(v)
                rp = E.rho_field(E.product(u, v))
                for f in funcs:
                    res = rp.apply(f) - bracket_phistar_apply(E.phi, ru, rv, f)
                    if not res.is_zero():
                        return fail(name, {"u": lu, "v": lv, "f": f.render()}, res.render())
        return CheckResult(name, True)

    def axiom_iv():
        name = "square-is-metric-gradient"
        for lu, u in probes:
            res = E.product(u, u) - E.script_D(E.pairing(u, u))
            if not res.is_zero():
                return fail(name, {"u": lu}, res.render())
        return CheckResult(name, True)

    def axiom_v():
        name = "pairing-twist-compatibility"
        for lu, u in probes:
            for lv, v in probes:
                res = E.pairing(E.phiE(u), E.phiE(v)) - pb(E.pairing(u, v))
                if not res.is_zero():
                    return fail(name, {"u": lu, "v": lv}, res.render())
        return CheckResult(name, True)

    def axiom_vi():
        name = "pairing-derivation"
        for le, e in pair_probes:
            rho_tw = E.rho_field(E.phiE(e))
            products = [(l1, e1, E.product(e, e1)) for l1, e1 in pair_probes]
            for l1, e1, prod_e1 in products:
                for l2, e2, prod_e2 in products:
                    lhs = rho_tw.apply(E.pairing(e1, e2))
                    rhs = E.pairing(prod_e1, E.phiE(e2)) + E.pairing(E.phiE(e1), prod_e2)
                    res = lhs - rhs
                    if not res.is_zero():
                        return fail(name, {"e": le, "e1": l1, "e2": l2}, res.render())
        return CheckResult(name, True)

    def function_rules():
        name = "function-multiplication-rules"
        frames = E.frame_sections()
        for a in range(2 * E.r):
            for b in range(2 * E.r):
                u, v = frames[a], frames[b]
                base = E.product(u, v)
                for f in funcs:
                    if f.is_constant():
                        continue
                    left = E.product(u, v.scale(f))
                    right1 = base.scale(pb(f)) + E.phiE(v).scale(E.rho_apply(E.phiE(u), f))
                    res = left - right1
                    if not res.is_zero():
                        return fail(
                            name,
                            {"rule": "right-slot", "u": f"E{a + 1}", "v": f"E{b + 1}", "f": f.render()},
                            res.render(),
                        )
                    left2 = E.product(u.scale(f), v)
                    right2 = (
                        base.scale(pb(f))
                        - E.phiE(u).scale(E.rho_apply(E.phiE(v), f))
                        + E.script_D(f).scale(pb(E.pairing(u, v)) * 2)
                    )
                    res2 = left2 - right2
                    if not res2.is_zero():
                        return fail(
                            name,
                            {"rule": "left-slot", "u": f"E{a + 1}", "v": f"E{b + 1}", "f": f.render()},
                            res2.render(),
                        )
        return CheckResult(name, True)

    for chk in (axiom_i_a, axiom_i_b, axiom_ii, axiom_iii, axiom_iv, axiom_v, axiom_vi, function_rules):
        results.append(chk())
        if not results[-1].passed:
            break
    return first_failure("check_courant_axioms", results)


def jacobiator(E: CourantDouble, e1: ESection, e2: ESection, e3: ESection):
    """Cyclic bracket sum and the pairing defect; the sum must equal the
    metric gradient of the defect."""
    cyc = [(e1, e2, e3), (e2, e3, e1), (e3, e1, e2)]
    total = ESection([Poly.zero(E.n)] * (2 * E.r), E.n)
    T = Poly.zero(E.n)
    third = Poly.const(E.n, Fraction(1, 3))
    for a, b, c in cyc:
        inner = E.bracket(a, b)
        total = total + E.bracket(inner, E.phiE(c))
        T = T + E.pairing(inner, E.phiE(c))
    T = third * T
    res = total - E.script_D(T)
    if not res.is_zero():
        raise TheoremViolation(
            "cyclic bracket sum does not match the metric gradient: " + res.render()
        )
    return total, T
