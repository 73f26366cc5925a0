"""Twist-invariant Poisson bivectors on a Hom-Lie algebroid: the sharp
map, the induced bracket on covectors, the dual algebroid, the induced
degree-raising operator on multivectors, and the correspondence with
classical Poisson pairs on the pullback tangent instance.
"""

from __future__ import annotations

from itertools import combinations

from . import classical
from .calculus import (
    CartanContext,
    differential,
    lie_derivative_form,
    schouten,
)
from .exterior import (
    EndoMap,
    Form,
    MultiVector,
    SectionTwist,
    eval_multivector,
    pair,
    twist_tensor,
    wedge_all,
)
from .homalg import HomAlgebroid, make_pullback_tangent
from .polyring import AffineTwist, Poly, monomials
from .report import (
    CheckResult,
    PreconditionError,
    TheoremViolation,
    Witness,
    first_failure,
)


class Bivector:
    """A degree-2 multivector with its cached sharp map.

    Sharp convention: for a decomposition sum X_i wedge Y_i the sharp of
    alpha is sum(<alpha, X_i> Y_i - <alpha, Y_i> X_i).
    """

    __slots__ = ("table", "rank", "n", "sharp")

    def __init__(self, table: MultiVector):
        if table.degree != 2:
            raise PreconditionError("a bivector must have degree 2")
        self.table = table
        self.rank = table.rank
        self.n = table.n
        mat = [[Poly.zero(self.n) for _ in range(self.rank)] for _ in range(self.rank)]
        for (i, j), c in table.coeffs.items():
            mat[j][i] = mat[j][i] + c
            mat[i][j] = mat[i][j] - c
        self.sharp = EndoMap(mat, kind="form")

    @classmethod
    def from_coeffs(cls, rank: int, n: int, coeffs) -> "Bivector":
        return cls(MultiVector(rank, n, 2, coeffs))

    @classmethod
    def from_sharp(cls, matrix, n: int) -> "Bivector":
        """Recover the bivector from a sharp matrix; requires the matrix
        to be antisymmetric."""
        rank = len(matrix)
        rows = [
            [x if isinstance(x, Poly) else Poly.const(n, x) for x in row] for row in matrix
        ]
        coeffs = {}
        for i in range(rank):
            if not rows[i][i].is_zero():
                raise TheoremViolation(
                    f"sharp matrix has a nonzero diagonal entry at {i}: "
                    f"{rows[i][i].render()}"
                )
            for j in range(i + 1, rank):
                res = rows[i][j] + rows[j][i]
                if not res.is_zero():
                    raise TheoremViolation(
                        f"sharp matrix is not antisymmetric at ({i},{j}): "
                        f"residual {res.render()}"
                    )
                c = -rows[i][j]
                if not c.is_zero():
                    coeffs[(i, j)] = c
        return cls(MultiVector(rank, n, 2, coeffs))

    def sharp_apply(self, alpha: Form) -> MultiVector:
        return self.sharp.apply_sharp(alpha)

    def render(self, names=None) -> str:
        return self.table.render(names)

    def __repr__(self) -> str:
        return f"Bivector({self.render()})"


def _as_bivector(ctx: CartanContext, pi) -> Bivector:
    if isinstance(pi, Bivector):
        return pi
    return Bivector(pi)


def _coform_probes(ctx: CartanContext, probe_degree: int):
    A = ctx.algebroid
    probes = [(f"eps{i + 1}", A.coframe(i)) for i in range(ctx.rank)]
    for f in monomials(ctx.n, probe_degree):
        if f.is_constant():
            continue
        for i in range(ctx.rank):
            probes.append((f"({f.render()})*eps{i + 1}", A.coframe(i).scale(f)))
    return probes


def is_hom_poisson(ctx: CartanContext, pi, probe_degree: int = 3) -> CheckResult:
    """Vanishing self-bracket plus twist invariance, both as exact
    residuals."""
    pi = _as_bivector(ctx, pi)
    results = []
    inv_res = twist_tensor(pi.table, ctx.algebroid.phiA) - pi.table
    if inv_res.is_zero():
        results.append(CheckResult("twist-invariance", True))
    else:
        results.append(
            CheckResult(
                "twist-invariance",
                False,
                Witness("twist-invariance", {"pi": pi.render()}, inv_res.render()),
            )
        )
    sq = schouten(ctx, pi.table, pi.table)
    if sq.is_zero():
        results.append(CheckResult("self-bracket", True))
    else:
        results.append(
            CheckResult("self-bracket", False, Witness("self-bracket", {"pi": pi.render()}, sq.render()))
        )
    return first_failure("is_hom_poisson", results)


def sharp_commutes(ctx: CartanContext, pi, probe_degree: int = 3) -> CheckResult:
    """Twist-sharp commutation on probe covectors, reported alongside
    invariance; the two verdicts must agree."""
    pi = _as_bivector(ctx, pi)
    A = ctx.algebroid
    commutes = True
    wit = None
    for label, alpha in _coform_probes(ctx, probe_degree):
        lhs = A.phiA.apply(pi.sharp_apply(alpha))
        rhs = pi.sharp_apply(ctx.dagger.apply(alpha))
        res = lhs - rhs
        if not res.is_zero():
            commutes = False
            wit = Witness("sharp-twist-commutation", {"alpha": label}, res.render())
            break
    invariant = (twist_tensor(pi.table, A.phiA) - pi.table).is_zero()
    result = CheckResult(
        "sharp_commutes",
        commutes,
        wit,
        details={"invariant": invariant, "commutes": commutes, "equivalent": commutes == invariant},
    )
    if commutes != invariant:
        raise TheoremViolation(
            "sharp commutation and twist invariance disagree: "
            f"commutes={commutes}, invariant={invariant}"
        )
    return result


def bracket_pi(ctx: CartanContext, pi, xi: Form, eta: Form) -> Form:
    """Covector bracket induced by the bivector."""
    pi = _as_bivector(ctx, pi)
    s_xi = pi.sharp_apply(xi)
    s_eta = pi.sharp_apply(eta)
    out = lie_derivative_form(ctx, s_xi, eta) - lie_derivative_form(ctx, s_eta, xi)
    return out - differential(ctx, pair(eta, s_xi))


def dual_algebroid(ctx: CartanContext, pi, probe_degree: int = 3) -> HomAlgebroid:
    """The dual-frame algebroid carried by a Poisson bivector: dagger
    twist, covector bracket, anchor through the sharp map.  Refuses
    non-Poisson input with the failing residual."""
    pi = _as_bivector(ctx, pi)
    ok = is_hom_poisson(ctx, pi, probe_degree)
    if not ok.passed:
        raise PreconditionError(
            f"bivector is not Poisson: {ok.witness.render()}", ok.witness
        )
    A = ctx.algebroid
    twist = SectionTwist(
        [list(row) for row in ctx.dagger.matrix], A.phi, "multivector"
    )
    anchor = [
        [
            sum(
                (A.anchor[i][k] * pi.sharp.matrix[k][j] for k in range(ctx.rank)),
                Poly.zero(ctx.n),
            )
            for j in range(ctx.rank)
        ]
        for i in range(ctx.n)
    ]
    structure = {}
    for i in range(ctx.rank):
        for j in range(i + 1, ctx.rank):
            br = bracket_pi(ctx, pi, A.coframe(i), A.coframe(j))
            for k, c in enumerate(br.vector()):
                if not c.is_zero():
                    structure[(i, j, k)] = c
    return HomAlgebroid(A.phi, twist, anchor, structure)


def d_pi(ctx: CartanContext, pi, D) -> MultiVector:
    """Degree-raising operator on multivectors driven by the bivector:
    the twisted evaluation formula run on the dual side.  The result is
    cross-checked against the graded bracket with the bivector on every
    call."""
    pi = _as_bivector(ctx, pi)
    A = ctx.algebroid
    inv_res = twist_tensor(pi.table, A.phiA) - pi.table
    if not inv_res.is_zero():
        raise PreconditionError(
            "bivector is not twist-invariant: residual " + inv_res.render(),
            Witness("twist-invariance", {"pi": pi.render()}, inv_res.render()),
        )
    D = ctx.as_multivector(D)
    k = D.degree
    out = MultiVector.zero(ctx.rank, ctx.n, k + 1)
    inv_coframe = [ctx.dagger_inv.apply(A.coframe(i)) for i in range(ctx.rank)]
    tw_D = A.phiA.apply_graded(D)
    if k + 1 <= ctx.rank:
        for I in combinations(range(ctx.rank), k + 1):
            val = Poly.zero(ctx.n)
            for a, idx in enumerate(I):
                rest = [inv_coframe[b] for b in I if b != idx]
                w = eval_multivector(D, rest)
                if not w.is_zero():
                    term = A.anchor_apply(pi.sharp_apply(A.coframe(idx)), w)
                    val = val + (term if a % 2 == 0 else -term)
            for a in range(k + 1):
                for b in range(a + 1, k + 1):
                    br = bracket_pi(ctx, pi, inv_coframe[I[a]], inv_coframe[I[b]])
                    if br.is_zero():
                        continue
                    rest = [A.coframe(I[c]) for c in range(k + 1) if c != a and c != b]
                    W = wedge_all(ctx.rank, ctx.n, [br] + rest, Form)
                    term = pair(W, tw_D)
                    val = val + (term if (a + b) % 2 == 0 else -term)
            if not val.is_zero():
                out.coeffs[I] = val
    bracket_route = schouten(ctx, pi.table, D)
    if out != bracket_route:
        raise TheoremViolation(
            "dual evaluation route disagrees with the graded bracket: "
            f"{(out - bracket_route).render()}"
        )
    return out


def pi_pi_identity(ctx: CartanContext, pi, alpha: Form, beta: Form) -> CheckResult:
    """Half the self-bracket contracted against twisted covectors equals
    the sharp-commutator defect; holds whether or not the self-bracket
    vanishes."""
    pi = _as_bivector(ctx, pi)
    A = ctx.algebroid
    sq = schouten(ctx, pi.table, pi.table)
    d_alpha = ctx.dagger.apply(alpha)
    d_beta = ctx.dagger.apply(beta)
    lhs_coeffs = []
    for k in range(ctx.rank):
        W = wedge_all(ctx.rank, ctx.n, [d_alpha, d_beta, A.coframe(k)], Form)
        lhs_coeffs.append(pair(W, sq))
    half = Poly.const(ctx.n, "1/2")
    lhs = MultiVector.from_vector(ctx.rank, ctx.n, [half * c for c in lhs_coeffs])
    rhs = A.bracket(pi.sharp_apply(alpha), pi.sharp_apply(beta)) - pi.sharp_apply(
        bracket_pi(ctx, pi, alpha, beta)
    )
    res = lhs - rhs
    passed = res.is_zero()
    wit = None
    if not passed:
        wit = Witness(
            "pi-pi-contraction",
            {"alpha": alpha.render(), "beta": beta.render()},
            res.render(),
        )
    return CheckResult("pi_pi_identity", passed, wit)


def lift_bivector(phi: AffineTwist, pi_classical):
    """Pullback tangent instance together with the lifted bivector
    (coefficients pulled back along the base map)."""
    n = phi.n
    if isinstance(pi_classical, MultiVector):
        pi_cl = pi_classical
    else:
        pi_cl = MultiVector(n, n, 2, pi_classical)
    ctx = CartanContext(make_pullback_tangent(phi))
    lifted = MultiVector(n, n, 2, {I: phi.pullback(c) for I, c in pi_cl.coeffs.items()})
    return ctx, Bivector(lifted), pi_cl


def classical_poisson_lift(phi: AffineTwist, pi_classical) -> CheckResult:
    """Build the pullback tangent instance, lift the classical bivector,
    and report whether the classical verdict (vanishing self-bracket and
    invariance under the pushforward) matches the twisted verdict."""
    ctx, lifted_biv, pi_cl = lift_bivector(phi, pi_classical)
    classical_square = classical.schouten_classical(pi_cl, pi_cl)
    classical_poisson = classical_square.is_zero()
    pushed = classical.pushforward_bivector(phi, pi_cl)
    classical_invariant = (pushed - pi_cl).is_zero()
    hom = is_hom_poisson(ctx, lifted_biv)
    hom_poisson = hom.details.get("self-bracket") == "pass"
    hom_invariant = hom.details.get("twist-invariance") == "pass"
    agrees = (classical_poisson == hom_poisson) and (
        classical_invariant == hom_invariant
    )
    details = {
        "classical-poisson": classical_poisson,
        "classical-invariant": classical_invariant,
        "hom-poisson": hom_poisson,
        "hom-invariant": hom_invariant,
    }
    wit = None
    if not agrees:
        wit = Witness("lift-correspondence", {"pi": pi_cl.render()}, str(details))
    return CheckResult("classical_poisson_lift", agrees, wit, details)


def check_bialgebroid_pair(ctx: CartanContext, pi, probe_degree: int = 2) -> CheckResult:
    """Compatibility of the algebroid with the dual structure carried by
    the bivector, checked in both directions."""
    from .courant import BialgebroidPair, check_bialgebroid

    pi = _as_bivector(ctx, pi)
    dual = dual_algebroid(ctx, pi)
    pair_ = BialgebroidPair(ctx.algebroid, dual)
    sub = check_bialgebroid(pair_, probe_degree)
    return CheckResult("check_bialgebroid_pair", sub.passed, sub.witness, sub.details)
