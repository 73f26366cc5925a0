"""Graded antisymmetric tensor algebra over a free rank-r module with
Poly coefficients: multivectors, forms, endomorphisms, wedge, the
duality pairing, and invertible section twists with their duals.

Covariant and contravariant data share one coefficient-table
representation and are distinguished only by a kind tag; the pairing is
the single bridge between the two kinds.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .polyring import AffineTwist, Poly
from .report import StructureError


def _merge_sign(I: tuple, J: tuple):
    """Sorted concatenation of two disjoint increasing tuples and the
    sign of the shuffle; None if the tuples overlap."""
    if set(I) & set(J):
        return None, 0
    merged = tuple(sorted(I + J))
    inversions = sum(1 for i in I for j in J if j < i)
    return merged, -1 if inversions % 2 else 1


class GradedElement:
    """Shared container for multivectors and forms.

    coeffs maps strictly increasing index tuples (0-based, length =
    degree) to nonzero Poly coefficients.
    """

    kind = "graded"
    __slots__ = ("rank", "n", "degree", "coeffs")

    def __init__(self, rank: int, n: int, degree: int, coeffs=None):
        self.rank = rank
        self.n = n
        self.degree = degree
        clean = {}
        for k, v in (coeffs or {}).items():
            k = tuple(k)
            if len(k) != degree or list(k) != sorted(set(k)) or (k and not (0 <= k[0] and k[-1] < rank)):
                raise StructureError(f"bad index tuple {k} for degree {degree}, rank {rank}")
            if not isinstance(v, Poly):
                v = Poly.const(n, v)
            if not v.is_zero():
                clean[k] = v
        self.coeffs = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, rank: int, n: int, degree: int):
        return cls(rank, n, degree)

    @classmethod
    def basis(cls, rank: int, n: int, indices):
        return cls(rank, n, len(tuple(indices)), {tuple(indices): Poly.const(n, 1)})

    @classmethod
    def from_vector(cls, rank: int, n: int, coeffs):
        return cls(rank, n, 1, {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def scalar(cls, rank: int, n: int, f: Poly):
        return cls(rank, n, 0, {(): f})

    # -- accessors ----------------------------------------------------

    def coeff(self, indices) -> Poly:
        return self.coeffs.get(tuple(indices), Poly.zero(self.n))

    def vector(self) -> list:
        if self.degree != 1:
            raise StructureError("vector() needs degree 1")
        return [self.coeff((i,)) for i in range(self.rank)]

    def scalar_value(self) -> Poly:
        if self.degree != 0:
            raise StructureError("scalar_value() needs degree 0")
        return self.coeff(())

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- arithmetic ---------------------------------------------------

    def _check_compatible(self, other):
        if type(self) is not type(other) or self.rank != other.rank or self.degree != other.degree:
            raise StructureError("incompatible graded elements")

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return type(self)(self.rank, self.n, self.degree, out)

    def __neg__(self):
        return type(self)(self.rank, self.n, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if not isinstance(f, Poly):
            f = Poly.const(self.n, f)
        return type(self)(
            self.rank, self.n, self.degree, {k: f * v for k, v in self.coeffs.items()}
        )

    def wedge(self, other):
        self._check_compatible_kind(other)
        deg = self.degree + other.degree
        if deg > self.rank:
            return type(self)(self.rank, self.n, deg)
        out = {}
        for I, f in self.coeffs.items():
            for J, g in other.coeffs.items():
                K, sign = _merge_sign(I, J)
                if K is None:
                    continue
                term = f * g if sign > 0 else -(f * g)
                s = out.get(K)
                s = term if s is None else s + term
                if s.is_zero():
                    out.pop(K, None)
                else:
                    out[K] = s
        return type(self)(self.rank, self.n, deg, out)

    def _check_compatible_kind(self, other):
        if type(self) is not type(other) or self.rank != other.rank:
            raise StructureError("wedge requires the same kind and rank")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedElement):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.rank == other.rank
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def render(self, names=None, frame: str = "e") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            body = self.coeffs[k].render(names)
            label = "" if not k else frame + "[" + ",".join(str(i + 1) for i in k) + "]"
            parts.append(f"({body})" + (f" {label}" if label else ""))
        return " + ".join(parts)

    def to_json(self):
        """Coefficient table as a list of {indices, coeff}; indices are
        1-based, constants serialize as bare rational strings."""
        out = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            coeff = str(c.constant_value()) if c.is_constant() else c.to_json()
            out.append({"indices": [i + 1 for i in k], "coeff": coeff})
        return out

    @classmethod
    def from_json(cls, rank: int, n: int, degree: int, data):
        coeffs = {}
        for item in data:
            key = tuple(i - 1 for i in item["indices"])
            c = Poly.from_json(n, item["coeff"])
            prev = coeffs.get(key)
            coeffs[key] = c if prev is None else prev + c
        return cls(rank, n, degree, coeffs)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(deg={self.degree}, {self.render()})"


class MultiVector(GradedElement):
    kind = "multivector"
    __slots__ = ()

    def render(self, names=None, frame: str = "e") -> str:
        return super().render(names, frame)


class Form(GradedElement):
    kind = "form"
    __slots__ = ()

    def render(self, names=None, frame: str = "eps") -> str:
        return super().render(names, frame)


def wedge(a: GradedElement, b: GradedElement) -> GradedElement:
    return a.wedge(b)


def wedge_all(rank: int, n: int, factors, cls=MultiVector) -> GradedElement:
    out = cls.scalar(rank, n, Poly.const(n, 1))
    for f in factors:
        out = out.wedge(f)
    return out


def pair(omega: Form, D: MultiVector) -> Poly:
    """Full contraction with the determinant convention: dual frame
    wedges pair to the identity on increasing index tuples."""
    if not isinstance(omega, Form) or not isinstance(D, MultiVector):
        raise StructureError("pair() needs a Form and a MultiVector")
    if omega.degree != D.degree or omega.rank != D.rank:
        raise StructureError("pair() needs equal degrees and ranks")
    out = Poly.zero(omega.n)
    for k, f in omega.coeffs.items():
        g = D.coeffs.get(k)
        if g is not None:
            out = out + f * g
    return out


def eval_form(omega: Form, sections) -> Poly:
    """omega(X_1, ..., X_k) for degree-1 multivector arguments."""
    D = wedge_all(omega.rank, omega.n, sections, MultiVector)
    return pair(omega, D)


def eval_multivector(D: MultiVector, coforms) -> Poly:
    """D(xi_1, ..., xi_k) for degree-1 form arguments."""
    W = wedge_all(D.rank, D.n, coforms, Form)
    return pair(W, D)


def poly_mat_det(matrix) -> Poly:
    """Determinant of a square Poly matrix by cofactor expansion."""
    r = len(matrix)
    if r == 0:
        raise StructureError("empty matrix")
    n = matrix[0][0].n
    if r == 1:
        return matrix[0][0]
    out = Poly.zero(n)
    for j in range(r):
        if matrix[0][j].is_zero():
            continue
        minor = [[row[c] for c in range(r) if c != j] for row in matrix[1:]]
        term = matrix[0][j] * poly_mat_det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def poly_mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    n = a[0][0].n
    return [
        [
            sum((a[i][k] * b[k][j] for k in range(inner)), Poly.zero(n))
            for j in range(cols)
        ]
        for i in range(rows)
    ]


def poly_mat_inverse(matrix):
    """Inverse of a Poly matrix whose determinant is a nonzero rational
    constant (adjugate over determinant, entries stay polynomial)."""
    det = poly_mat_det(matrix)
    if not det.is_constant() or det.is_zero():
        raise StructureError("determinant is not a nonzero rational constant")
    r = len(matrix)
    n = matrix[0][0].n
    inv_det = Fraction(1) / det.constant_value()
    if r == 1:
        return [[Poly.const(n, inv_det)]]
    adj = [[Poly.zero(n) for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            minor = [[matrix[a][b] for b in range(r) if b != j] for a in range(r) if a != i]
            cof = poly_mat_det(minor)
            adj[j][i] = (cof if (i + j) % 2 == 0 else -cof) * inv_det
    return adj


class EndoMap:
    """Function-linear bundle map in frame representation: an r x r
    matrix of Poly acting on degree-1 coefficients.  kind records which
    frame it acts on ("multivector" for A -> A, "form" for the dual)."""

    __slots__ = ("rank", "n", "matrix", "kind")

    def __init__(self, matrix, n=None, kind: str = "multivector"):
        self.rank = len(matrix)
        rows = []
        for row in matrix:
            if len(row) != self.rank:
                raise StructureError("endomorphism matrix is not square")
            rows.append(tuple(x if isinstance(x, Poly) else Poly.const(n, x) for x in row))
        self.matrix = tuple(rows)
        self.n = self.matrix[0][0].n if self.rank else n
        self.kind = kind

    @classmethod
    def identity(cls, rank: int, n: int, kind: str = "multivector") -> "EndoMap":
        return cls(
            [[Poly.const(n, 1 if i == j else 0) for j in range(rank)] for i in range(rank)],
            kind=kind,
        )

    @classmethod
    def zero(cls, rank: int, n: int, kind: str = "multivector") -> "EndoMap":
        return cls([[Poly.zero(n)] * rank for _ in range(rank)], kind=kind)

    @classmethod
    def diagonal(cls, n: int, entries, kind: str = "multivector") -> "EndoMap":
        r = len(entries)
        return cls(
            [
                [
                    (entries[i] if isinstance(entries[i], Poly) else Poly.const(n, entries[i]))
                    if i == j
                    else Poly.zero(n)
                    for j in range(r)
                ]
                for i in range(r)
            ],
            kind=kind,
        )

    def _mat_apply(self, coeffs):
        return [
            sum((self.matrix[i][j] * coeffs[j] for j in range(self.rank)), Poly.zero(self.n))
            for i in range(self.rank)
        ]

    def apply(self, v: GradedElement) -> GradedElement:
        if v.degree != 1 or v.kind != self.kind:
            raise StructureError("endomorphism applied to a mismatched element")
        cls = type(v)
        return cls.from_vector(self.rank, self.n, self._mat_apply(v.vector()))

    def apply_sharp(self, alpha: Form) -> MultiVector:
        """Dual-to-primal application (matrix columns are images of the
        dual frame); used for sharp maps and graph constructions."""
        if alpha.degree != 1:
            raise StructureError("sharp application needs a degree-1 form")
        return MultiVector.from_vector(self.rank, self.n, self._mat_apply(alpha.vector()))

    def transpose(self) -> "EndoMap":
        flipped = "form" if self.kind == "multivector" else "multivector"
        return EndoMap(
            [[self.matrix[j][i] for j in range(self.rank)] for i in range(self.rank)],
            kind=flipped,
        )

    def compose(self, other: "EndoMap") -> "EndoMap":
        if other.kind != self.kind:
            raise StructureError("composition of mixed-kind endomorphisms")
        return EndoMap(poly_mat_mul(self.matrix, other.matrix), kind=self.kind)

    def power(self, p: int) -> "EndoMap":
        out = EndoMap.identity(self.rank, self.n, self.kind)
        for _ in range(p):
            out = self.compose(out)
        return out

    def __add__(self, other: "EndoMap") -> "EndoMap":
        return EndoMap(
            [
                [self.matrix[i][j] + other.matrix[i][j] for j in range(self.rank)]
                for i in range(self.rank)
            ],
            kind=self.kind,
        )

    def __sub__(self, other: "EndoMap") -> "EndoMap":
        return EndoMap(
            [
                [self.matrix[i][j] - other.matrix[i][j] for j in range(self.rank)]
                for i in range(self.rank)
            ],
            kind=self.kind,
        )

    def scale(self, c) -> "EndoMap":
        return EndoMap(
            [[self.matrix[i][j] * c for j in range(self.rank)] for i in range(self.rank)],
            kind=self.kind,
        )

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.matrix for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EndoMap):
            return NotImplemented
        return self.kind == other.kind and self.matrix == other.matrix

    __hash__ = None

    def render(self, names=None) -> str:
        rows = ["[" + ", ".join(x.render(names) for x in row) + "]" for row in self.matrix]
        return "[" + "; ".join(rows) + "]"

    def __repr__(self) -> str:
        return f"EndoMap(kind={self.kind}, {self.render()})"


class SectionTwist:
    """phi*-function-linear invertible map on sections: the coefficient
    vector (f_j) goes to (sum_j P_ij * pullback(phi, f_j))_i.

    Invertibility requires det(P) to be a nonzero rational constant, so
    the inverse matrix stays polynomial.
    """

    __slots__ = ("rank", "n", "matrix", "base", "kind", "det")

    def __init__(self, matrix, base: AffineTwist, kind: str = "multivector"):
        self.rank = len(matrix)
        self.base = base
        self.n = base.n
        rows = []
        for row in matrix:
            if len(row) != self.rank:
                raise StructureError("twist matrix is not square")
            rows.append(
                tuple(x if isinstance(x, Poly) else Poly.const(self.n, x) for x in row)
            )
        self.matrix = tuple(rows)
        self.kind = kind
        self.det = poly_mat_det([list(r) for r in self.matrix]) if self.rank else Poly.const(self.n, 1)

    @classmethod
    def identity(cls, rank: int, base: AffineTwist, kind: str = "multivector") -> "SectionTwist":
        n = base.n
        return cls(
            [[Poly.const(n, 1 if i == j else 0) for j in range(rank)] for i in range(rank)],
            base,
            kind,
        )

    def is_invertible(self) -> bool:
        return self.det.is_constant() and not self.det.is_zero()

    def _require_invertible(self):
        if not self.is_invertible():
            raise StructureError(
                f"twist determinant {self.det.render()} is not a nonzero rational constant"
            )

    def matrix_inverse(self):
        self._require_invertible()
        return poly_mat_inverse([list(r) for r in self.matrix])

    def apply(self, v: GradedElement) -> GradedElement:
        """Degree-1 action: matrix times pulled-back coefficients."""
        if v.kind != self.kind:
            raise StructureError(f"{self.kind} twist applied to a {v.kind}")
        return self.apply_graded(v)

    def apply_graded(self, T: GradedElement) -> GradedElement:
        """Wedge extension to any degree via minors of the matrix."""
        if T.kind != self.kind:
            raise StructureError(f"{self.kind} twist applied to a {T.kind}")
        k = T.degree
        cls = type(T)
        if k == 0:
            return cls.scalar(self.rank, self.n, self.base.pullback(T.scalar_value()))
        if k == 1:
            out = cls.zero(self.rank, self.n, 1)
            for (j,), v in T.coeffs.items():
                pv = self.base.pullback(v)
                for i in range(self.rank):
                    m = self.matrix[i][j]
                    if m.is_zero():
                        continue
                    prev = out.coeffs.get((i,))
                    total = m * pv if prev is None else prev + m * pv
                    if total.is_zero():
                        out.coeffs.pop((i,), None)
                    else:
                        out.coeffs[(i,)] = total
            return out
        pulled = {J: self.base.pullback(v) for J, v in T.coeffs.items()}
        out = cls.zero(self.rank, self.n, k)
        for I in combinations(range(self.rank), k):
            acc = Poly.zero(self.n)
            for J, v in pulled.items():
                sub = [[self.matrix[a][b] for b in J] for a in I]
                d = poly_mat_det(sub)
                if not d.is_zero():
                    acc = acc + d * v
            if not acc.is_zero():
                out.coeffs[I] = acc
        return out

    def apply_poly(self, f: Poly) -> Poly:
        return self.base.pullback(f)

    def apply_endo(self, N: EndoMap) -> EndoMap:
        """Induced action on (1,1)-tensors: P . pullback(N) . P^{-1}."""
        if N.kind != self.kind:
            raise StructureError("endomorphism kind does not match the twist")
        pulled = [[self.base.pullback(x) for x in row] for row in N.matrix]
        conj = poly_mat_mul(poly_mat_mul([list(r) for r in self.matrix], pulled), self.matrix_inverse())
        return EndoMap(conj, kind=self.kind)

    def inverse(self) -> "SectionTwist":
        inv = self.matrix_inverse()
        phi_inv = self.base.inverse()
        mat = [
            [self.base.inverse_pullback(inv[i][j]) for j in range(self.rank)]
            for i in range(self.rank)
        ]
        return SectionTwist(mat, phi_inv, self.kind)

    def dual(self) -> "SectionTwist":
        """The twist on the dual frame defined by
        <dual(xi), X> = pullback(phi, <xi, inverse(X)>)."""
        inv = self.matrix_inverse()
        mat = [[inv[j][i] for j in range(self.rank)] for i in range(self.rank)]
        flipped = "form" if self.kind == "multivector" else "multivector"
        return SectionTwist(mat, self.base, flipped)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SectionTwist):
            return NotImplemented
        return self.kind == other.kind and self.matrix == other.matrix and self.base == other.base

    __hash__ = None

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(x.render() for x in row) + "]" for row in self.matrix]
        return f"SectionTwist(kind={self.kind}, [" + "; ".join(rows) + "])"


def dual_twist(Phi: SectionTwist) -> SectionTwist:
    return Phi.dual()


def twist_tensor(T, Phi: SectionTwist):
    """Apply the twist to contravariant data and its dual to covariant
    data; on functions this is the pullback."""
    if Phi.kind != "multivector":
        raise StructureError("twist_tensor expects the twist on the section side")
    if isinstance(T, Poly):
        return Phi.apply_poly(T)
    if isinstance(T, MultiVector):
        return Phi.apply_graded(T)
    if isinstance(T, Form):
        return Phi.dual().apply_graded(T)
    if isinstance(T, EndoMap):
        if T.kind == "multivector":
            return Phi.apply_endo(T)
        return Phi.dual().apply_endo(T)
    raise StructureError(f"cannot twist {type(T).__name__}")


def reinterpret(x: GradedElement, cls) -> GradedElement:
    """Reuse a coefficient table under the other kind tag (the bridge
    used when a dual algebroid treats covectors as its own sections)."""
    return cls(x.rank, x.n, x.degree, dict(x.coeffs))
