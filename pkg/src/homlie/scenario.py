"""Scenario files: strict JSON schema describing an instance and the
ordered list of verification tasks to run against it.

All rationals are strings like "3/2" (or plain integers); polynomial
values are lists of {"exp": [...], "coeff": "p/q"} with one exponent per
declared variable; frame and structure indices are 1-based.  Unknown
keys are rejected with their JSON path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exterior import EndoMap, MultiVector, SectionTwist
from .homalg import HomAlgebroid
from .poisson import Bivector
from .polyring import AffineTwist, Poly


class ScenarioError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


TOP_KEYS = {
    "n",
    "vars",
    "phi",
    "rank",
    "phiA_matrix",
    "anchor_matrix",
    "structure",
    "pi",
    "N",
    "dual",
    "dirac",
    "hierarchy_depth",
    "probe_degree",
    "tasks",
}

KNOWN_TASKS = [
    "check_axioms",
    "check_differential_props",
    "is_hom_poisson",
    "sharp_commutes",
    "pi_pi_identity",
    "check_dual_algebroid",
    "check_bialgebroid_pair",
    "is_hom_nijenhuis",
    "lemma_checks",
    "d_n_props",
    "is_hpn",
    "hierarchy",
    "hpn_bialgebroid_equiv",
    "bialgebroid_defect_checks",
    "check_bialgebroid",
    "check_courant_axioms",
    "jacobiator",
    "dirac_checks",
    "graph_theorem_check",
    "maurer_cartan",
]

FULL_ORDER = KNOWN_TASKS  # deterministic expansion order for "full"


def _require(cond, path, message):
    if not cond:
        raise ScenarioError(path, message)


def _parse_rational(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ScenarioError(path, f"expected a rational string or integer, got {value!r}")
    try:
        from fractions import Fraction

        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(path, f"bad rational {value!r}: {exc}") from None


def _parse_poly(n, value, path) -> Poly:
    if isinstance(value, (int, str)):
        return Poly.const(n, _parse_rational(value, path))
    _require(isinstance(value, list), path, "expected a rational or a list of terms")
    terms = {}
    for k, item in enumerate(value):
        ipath = f"{path}[{k}]"
        _require(isinstance(item, dict), ipath, "expected a term object")
        extra = set(item) - {"exp", "coeff"}
        _require(not extra, ipath, f"unknown keys {sorted(extra)}")
        _require("exp" in item and "coeff" in item, ipath, "term needs exp and coeff")
        exp = item["exp"]
        _require(
            isinstance(exp, list) and len(exp) == n and all(isinstance(e, int) and e >= 0 for e in exp),
            f"{ipath}.exp",
            f"expected {n} non-negative integer exponents",
        )
        c = _parse_rational(item["coeff"], f"{ipath}.coeff")
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + c
    return Poly(n, terms)


def _parse_matrix(n_vars, rows, cols, value, path):
    _require(isinstance(value, list) and len(value) == rows, path, f"expected {rows} rows")
    out = []
    for i, row in enumerate(value):
        _require(
            isinstance(row, list) and len(row) == cols,
            f"{path}[{i}]",
            f"expected {cols} entries",
        )
        out.append([_parse_poly(n_vars, x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return out


@dataclass
class Scenario:
    n: int
    vars: list
    algebroid: HomAlgebroid
    tasks: list
    probe_degree: int = 3
    hierarchy_depth: int = 3
    pi: Bivector | None = None
    endo: EndoMap | None = None
    dual_spec: object = "trivial"
    dirac_spec: dict | None = None
    raw: dict = field(default_factory=dict)
    cache: dict = field(default_factory=dict)


def parse_scenario(data: dict) -> Scenario:
    _require(isinstance(data, dict), "$", "scenario must be a JSON object")
    extra = set(data) - TOP_KEYS
    _require(not extra, "$", f"unknown keys {sorted(extra)}")
    for key in ("n", "vars", "phi", "rank", "phiA_matrix", "anchor_matrix", "tasks"):
        _require(key in data, "$", f"missing required key {key!r}")

    n = data["n"]
    _require(isinstance(n, int) and n >= 1, "$.n", "n must be a positive integer")
    vars_ = data["vars"]
    _require(
        isinstance(vars_, list) and len(vars_) == n and all(isinstance(v, str) for v in vars_),
        "$.vars",
        f"expected {n} variable names",
    )

    phi_spec = data["phi"]
    _require(isinstance(phi_spec, dict), "$.phi", "expected an object")
    extra = set(phi_spec) - {"matrix", "offset"}
    _require(not extra, "$.phi", f"unknown keys {sorted(extra)}")
    _require("matrix" in phi_spec, "$.phi", "missing matrix")
    mat = phi_spec["matrix"]
    _require(isinstance(mat, list) and len(mat) == n, "$.phi.matrix", f"expected {n} rows")
    matrix = []
    for i, row in enumerate(mat):
        _require(
            isinstance(row, list) and len(row) == n, f"$.phi.matrix[{i}]", f"expected {n} entries"
        )
        matrix.append([_parse_rational(x, f"$.phi.matrix[{i}][{j}]") for j, x in enumerate(row)])
    offset = [0] * n
    if "offset" in phi_spec:
        off = phi_spec["offset"]
        _require(isinstance(off, list) and len(off) == n, "$.phi.offset", f"expected {n} entries")
        offset = [_parse_rational(x, f"$.phi.offset[{i}]") for i, x in enumerate(off)]
    try:
        phi = AffineTwist(matrix, offset)
    except ValueError as exc:
        raise ScenarioError("$.phi.matrix", str(exc)) from None

    rank = data["rank"]
    _require(isinstance(rank, int) and rank >= 1, "$.rank", "rank must be a positive integer")

    phiA = SectionTwist(
        _parse_matrix(n, rank, rank, data["phiA_matrix"], "$.phiA_matrix"), phi, "multivector"
    )
    anchor = _parse_matrix(n, n, rank, data["anchor_matrix"], "$.anchor_matrix")

    structure = {}
    struct_spec = data["structure"] if "structure" in data else []
    _require(isinstance(struct_spec, list), "$.structure", "expected a list")
    for k, item in enumerate(struct_spec):
        path = f"$.structure[{k}]"
        _require(isinstance(item, dict), path, "expected an object")
        extra = set(item) - {"i", "j", "k", "coeff"}
        _require(not extra, path, f"unknown keys {sorted(extra)}")
        for key in ("i", "j", "k"):
            _require(
                isinstance(item.get(key), int) and 1 <= item[key] <= rank,
                f"{path}.{key}",
                f"expected a frame index in 1..{rank}",
            )
        c = _parse_poly(n, item["coeff"], f"{path}.coeff")
        key = (item["i"] - 1, item["j"] - 1, item["k"] - 1)
        prev = structure.get(key)
        structure[key] = c if prev is None else prev + c
    try:
        algebroid = HomAlgebroid(phi, phiA, anchor, structure)
    except ValueError as exc:
        raise ScenarioError("$.structure", str(exc)) from None

    pi = None
    if "pi" in data:
        spec = data["pi"]
        _require(isinstance(spec, list), "$.pi", "expected a list of bivector terms")
        coeffs = {}
        for k, item in enumerate(spec):
            path = f"$.pi[{k}]"
            _require(isinstance(item, dict), path, "expected an object")
            extra = set(item) - {"i", "j", "coeff"}
            _require(not extra, path, f"unknown keys {sorted(extra)}")
            i, j = item.get("i"), item.get("j")
            _require(
                isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= rank,
                path,
                f"expected indices with 1 <= i < j <= {rank}",
            )
            c = _parse_poly(n, item["coeff"], f"{path}.coeff")
            key = (i - 1, j - 1)
            coeffs[key] = coeffs.get(key, Poly.zero(n)) + c
        pi = Bivector(MultiVector(rank, n, 2, coeffs))

    endo = None
    if "N" in data:
        endo = EndoMap(_parse_matrix(n, rank, rank, data["N"], "$.N"))

    dual_spec = "trivial"
    if "dual" in data:
        spec = data["dual"]
        if isinstance(spec, str):
            _require(spec in ("trivial", "from_pi"), "$.dual", "expected 'trivial', 'from_pi' or an object")
            if spec == "from_pi":
                _require(pi is not None, "$.dual", "'from_pi' needs a pi key")
            dual_spec = spec
        else:
            _require(isinstance(spec, dict), "$.dual", "expected 'trivial', 'from_pi' or an object")
            extra = set(spec) - {"structure", "anchor"}
            _require(not extra, "$.dual", f"unknown keys {sorted(extra)}")
            d_struct = {}
            for k, item in enumerate(spec.get("structure", [])):
                path = f"$.dual.structure[{k}]"
                _require(isinstance(item, dict), path, "expected an object")
                extra = set(item) - {"i", "j", "k", "coeff"}
                _require(not extra, path, f"unknown keys {sorted(extra)}")
                key = (item["i"] - 1, item["j"] - 1, item["k"] - 1)
                d_struct[key] = _parse_poly(n, item["coeff"], f"{path}.coeff")
            d_anchor = _parse_matrix(n, n, rank, spec.get("anchor", [[0] * rank] * n), "$.dual.anchor")
            dual_spec = {"structure": d_struct, "anchor": d_anchor}

    dirac_spec = None
    if "dirac" in data:
        spec = data["dirac"]
        _require(isinstance(spec, dict), "$.dirac", "expected an object")
        kind = spec.get("type")
        _require(kind in ("graph", "span"), "$.dirac.type", "expected 'graph' or 'span'")
        if kind == "graph":
            extra = set(spec) - {"type", "H"}
            _require(not extra, "$.dirac", f"unknown keys {sorted(extra)}")
            _require("H" in spec, "$.dirac", "graph needs an H matrix")
            dirac_spec = {
                "type": "graph",
                "H": _parse_matrix(n, rank, rank, spec["H"], "$.dirac.H"),
            }
        else:
            extra = set(spec) - {"type", "generators"}
            _require(not extra, "$.dirac", f"unknown keys {sorted(extra)}")
            gens = spec.get("generators")
            _require(isinstance(gens, list) and len(gens) == rank, "$.dirac.generators", f"expected {rank} generators")
            parsed = []
            for g, row in enumerate(gens):
                path = f"$.dirac.generators[{g}]"
                _require(isinstance(row, list) and len(row) == 2 * rank, path, f"expected {2 * rank} coefficients")
                parsed.append([_parse_poly(n, x, f"{path}[{i}]") for i, x in enumerate(row)])
            dirac_spec = {"type": "span", "generators": parsed}

    probe_degree = data.get("probe_degree", 3)
    _require(
        isinstance(probe_degree, int) and probe_degree >= 0,
        "$.probe_degree",
        "expected a non-negative integer",
    )
    hierarchy_depth = data.get("hierarchy_depth", 3)
    _require(
        isinstance(hierarchy_depth, int) and hierarchy_depth >= 0,
        "$.hierarchy_depth",
        "expected a non-negative integer",
    )

    tasks = data["tasks"]
    _require(isinstance(tasks, list) and tasks, "$.tasks", "expected a non-empty list")
    expanded = []
    for k, t in enumerate(tasks):
        _require(isinstance(t, str), f"$.tasks[{k}]", "expected a task name")
        if t == "full":
            expanded.append(t)
            continue
        _require(t in KNOWN_TASKS, f"$.tasks[{k}]", f"unknown task {t!r}")
        expanded.append(t)

    return Scenario(
        n=n,
        vars=list(vars_),
        algebroid=algebroid,
        tasks=expanded,
        probe_degree=probe_degree,
        hierarchy_depth=hierarchy_depth,
        pi=pi,
        endo=endo,
        dual_spec=dual_spec,
        dirac_spec=dirac_spec,
        raw=data,
    )


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError("$", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON: {exc}") from None
    return parse_scenario(data)
