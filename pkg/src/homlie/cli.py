"""Command-line entry point: run verification tasks from a scenario
file, or list the built-in fixture catalog.

Exit status: 0 when every task passes, 1 when any identity fails (or a
task errors), 2 on malformed input.  Output is deterministic; wall
times are only included behind --timings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .calculus import CartanContext, check_differential_props
from .courant import (
    BialgebroidPair,
    check_courant_axioms,
    double,
    jacobiator,
)
from .dirac import Subbundle, dirac_checks, graph, graph_theorem_check, maurer_cartan_defect
from .fixtures import list_fixtures
from .homalg import HomAlgebroid, check_axioms
from .nijenhuis import (
    bialgebroid_defect_checks,
    d_n_props,
    hierarchy,
    hpn_bialgebroid_equiv,
    is_hom_nijenhuis,
    is_hpn,
    lemma_checks,
)
from .poisson import (
    check_bialgebroid_pair,
    dual_algebroid,
    is_hom_poisson,
    pi_pi_identity,
    sharp_commutes,
)
from .courant import check_bialgebroid
from .report import CheckResult, PreconditionError, TheoremViolation, Witness
from .scenario import Scenario, ScenarioError, load_scenario


class TaskError(ValueError):
    pass


def _ctx(scn: Scenario) -> CartanContext:
    if "ctx" not in scn.cache:
        scn.cache["ctx"] = CartanContext(scn.algebroid)
    return scn.cache["ctx"]


def _need_pi(scn: Scenario):
    if scn.pi is None:
        raise TaskError("task needs a pi key in the scenario")
    return scn.pi


def _need_endo(scn: Scenario):
    if scn.endo is None:
        raise TaskError("task needs an N key in the scenario")
    return scn.endo


def _pair(scn: Scenario) -> BialgebroidPair:
    key = "pair"
    if key not in scn.cache:
        spec = scn.dual_spec
        if spec == "trivial":
            pair = BialgebroidPair.trivial(scn.algebroid)
        elif spec == "from_pi":
            pair = BialgebroidPair(
                scn.algebroid, dual_algebroid(_ctx(scn), _need_pi(scn), scn.probe_degree)
            )
        else:
            from .exterior import SectionTwist

            ctx = _ctx(scn)
            twist = SectionTwist(
                [list(r) for r in ctx.dagger.matrix], scn.algebroid.phi, "multivector"
            )
            dual = HomAlgebroid(scn.algebroid.phi, twist, spec["anchor"], spec["structure"])
            pair = BialgebroidPair(scn.algebroid, dual)
        scn.cache[key] = pair
    return scn.cache[key]


def _task_check_axioms(scn):
    return check_axioms(scn.algebroid, scn.probe_degree)


def _task_differential_props(scn):
    return check_differential_props(_ctx(scn), scn.probe_degree)


def _task_is_hom_poisson(scn):
    return is_hom_poisson(_ctx(scn), _need_pi(scn), scn.probe_degree)


def _task_sharp_commutes(scn):
    return sharp_commutes(_ctx(scn), _need_pi(scn), scn.probe_degree)


def _task_pi_pi_identity(scn):
    ctx = _ctx(scn)
    pi = _need_pi(scn)
    A = scn.algebroid
    for i in range(A.rank):
        for j in range(A.rank):
            res = pi_pi_identity(ctx, pi, A.coframe(i), A.coframe(j))
            if not res.passed:
                return res
    return CheckResult("pi_pi_identity", True)


def _task_check_dual_algebroid(scn):
    dual = dual_algebroid(_ctx(scn), _need_pi(scn), scn.probe_degree)
    sub = check_axioms(dual, scn.probe_degree)
    return CheckResult("check_dual_algebroid", sub.passed, sub.witness, sub.details)


def _task_check_bialgebroid_pair(scn):
    return check_bialgebroid_pair(_ctx(scn), _need_pi(scn), min(scn.probe_degree, 2))


def _task_is_hom_nijenhuis(scn):
    return is_hom_nijenhuis(_ctx(scn), _need_endo(scn), scn.probe_degree)


def _task_lemma_checks(scn):
    N = _need_endo(scn)
    return lemma_checks(_ctx(scn), N, N, min(scn.probe_degree, 2))


def _task_d_n_props(scn):
    return d_n_props(_ctx(scn), _need_endo(scn), scn.probe_degree)


def _task_is_hpn(scn):
    return is_hpn(_ctx(scn), _need_pi(scn), _need_endo(scn), min(scn.probe_degree, 2))


def _task_hierarchy(scn):
    _, res = hierarchy(
        _ctx(scn), _need_pi(scn), _need_endo(scn), scn.hierarchy_depth, probe_degree=1
    )
    return res


def _task_hpn_bialgebroid_equiv(scn):
    return hpn_bialgebroid_equiv(_ctx(scn), _need_pi(scn), _need_endo(scn), 1)


def _task_bialgebroid_defect_checks(scn):
    return bialgebroid_defect_checks(_ctx(scn), _need_pi(scn), _need_endo(scn), 1)


def _task_check_bialgebroid(scn):
    return check_bialgebroid(_pair(scn), min(scn.probe_degree, 2))


def _task_check_courant_axioms(scn):
    E = double(_pair(scn), verify=False)
    return check_courant_axioms(E, min(scn.probe_degree, 2))


def _task_jacobiator(scn):
    E = double(_pair(scn), verify=False)
    frames = E.frame_sections()
    try:
        for i in range(len(frames)):
            for j in range(len(frames)):
                for k in range(len(frames)):
                    jacobiator(E, frames[i], frames[j], frames[k])
    except TheoremViolation as exc:
        return CheckResult(
            "jacobiator",
            False,
            Witness("jacobiator", {"triple": f"(E{i + 1},E{j + 1},E{k + 1})"}, str(exc)),
        )
    return CheckResult("jacobiator", True)


def _dirac_subbundle(scn) -> Subbundle:
    E = double(_pair(scn), verify=False)
    spec = scn.dirac_spec
    if spec is None:
        pi = _need_pi(scn)
        return graph(E, pi.sharp)
    if spec["type"] == "graph":
        return graph(E, spec["H"])
    return Subbundle(E, spec["generators"])


def _task_dirac_checks(scn):
    return dirac_checks(_dirac_subbundle(scn))


def _task_graph_theorem_check(scn):
    spec = scn.dirac_spec
    if spec is not None and spec["type"] == "graph":
        H = spec["H"]
    else:
        H = [list(r) for r in _need_pi(scn).sharp.matrix]
    return graph_theorem_check(_pair(scn), H)


def _task_maurer_cartan(scn):
    defect = maurer_cartan_defect(_pair(scn), _need_pi(scn))
    if defect.is_zero():
        return CheckResult("maurer_cartan", True)
    return CheckResult(
        "maurer_cartan",
        False,
        Witness("maurer-cartan-equation", {"pi": _need_pi(scn).render()}, defect.render()),
    )


TASKS = {
    "check_axioms": _task_check_axioms,
    "check_differential_props": _task_differential_props,
    "is_hom_poisson": _task_is_hom_poisson,
    "sharp_commutes": _task_sharp_commutes,
    "pi_pi_identity": _task_pi_pi_identity,
    "check_dual_algebroid": _task_check_dual_algebroid,
    "check_bialgebroid_pair": _task_check_bialgebroid_pair,
    "is_hom_nijenhuis": _task_is_hom_nijenhuis,
    "lemma_checks": _task_lemma_checks,
    "d_n_props": _task_d_n_props,
    "is_hpn": _task_is_hpn,
    "hierarchy": _task_hierarchy,
    "hpn_bialgebroid_equiv": _task_hpn_bialgebroid_equiv,
    "bialgebroid_defect_checks": _task_bialgebroid_defect_checks,
    "check_bialgebroid": _task_check_bialgebroid,
    "check_courant_axioms": _task_check_courant_axioms,
    "jacobiator": _task_jacobiator,
    "dirac_checks": _task_dirac_checks,
    "graph_theorem_check": _task_graph_theorem_check,
    "maurer_cartan": _task_maurer_cartan,
}


def _expand_tasks(scn: Scenario):
    out = []
    for t in scn.tasks:
        if t != "full":
            out.append(t)
            continue
        out.append("check_axioms")
        out.append("check_differential_props")
        if scn.pi is not None:
            for name in (
                "is_hom_poisson",
                "sharp_commutes",
                "pi_pi_identity",
                "check_dual_algebroid",
                "check_bialgebroid_pair",
            ):
                out.append(name)
        if scn.endo is not None:
            out.extend(["is_hom_nijenhuis", "lemma_checks", "d_n_props"])
        if scn.pi is not None and scn.endo is not None:
            out.extend(
                ["is_hpn", "hierarchy", "hpn_bialgebroid_equiv", "bialgebroid_defect_checks"]
            )
        out.extend(["check_bialgebroid", "check_courant_axioms", "jacobiator"])
        if scn.dirac_spec is not None or scn.pi is not None:
            out.extend(["dirac_checks", "graph_theorem_check", "maurer_cartan"])
    seen = set()
    unique = []
    for t in out:
        if t not in seen:
            seen.add(t)
            unique.append(t)
    return unique


def run_scenario(scn: Scenario, tasks=None, timings: bool = False) -> dict:
    names = list(tasks) if tasks else _expand_tasks(scn)
    report = {"tasks": [], "verdict": "pass"}
    for name in names:
        fn = TASKS.get(name)
        entry = {"task": name}
        start = time.monotonic()
        if fn is None:
            entry["verdict"] = "error"
            entry["error"] = f"unknown task {name!r}"
        else:
            try:
                result = fn(scn)
                entry["verdict"] = "pass" if result.passed else "fail"
                if result.witness is not None:
                    entry["witness"] = result.witness.to_json()
                if result.details:
                    entry["details"] = {
                        k: str(v) for k, v in sorted(result.details.items())
                    }
            except (PreconditionError, TaskError) as exc:
                entry["verdict"] = "fail"
                wit = getattr(exc, "witness", None)
                entry["witness"] = (
                    wit.to_json()
                    if wit is not None
                    else {"identity": name, "inputs": {}, "residual": str(exc)}
                )
            except TheoremViolation as exc:
                entry["verdict"] = "error"
                entry["error"] = str(exc)
        if timings:
            entry["seconds"] = round(time.monotonic() - start, 3)
        report["tasks"].append(entry)
        if entry["verdict"] != "pass" and report["verdict"] == "pass":
            report["verdict"] = "fail"
    return report


def _render_text(report: dict) -> str:
    lines = []
    for entry in report["tasks"]:
        line = f"{entry['task']}: {entry['verdict']}"
        if "witness" in entry:
            wit = entry["witness"]
            inputs = ", ".join(f"{k}={v}" for k, v in sorted(wit.get("inputs", {}).items()))
            bits = [wit.get("identity", "")]
            if inputs:
                bits.append(inputs)
            if wit.get("residual"):
                bits.append("residual=" + wit["residual"])
            line += " [" + "; ".join(b for b in bits if b) + "]"
        if "error" in entry:
            line += f" [{entry['error']}]"
        if "seconds" in entry:
            line += f" ({entry['seconds']}s)"
        lines.append(line)
    lines.append(f"overall: {report['verdict']}")
    return "\n".join(lines)


def cmd_check(args) -> int:
    try:
        scn = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    if args.probe_degree is not None:
        scn.probe_degree = args.probe_degree
    for t in args.task or []:
        if t not in TASKS and t != "full":
            print(f"scenario error: $.tasks: unknown task {t!r}", file=sys.stderr)
            return 2
    tasks = None
    if args.task:
        expanded = []
        for t in args.task:
            if t == "full":
                expanded.extend(_expand_tasks(scn))
            else:
                expanded.append(t)
        tasks = expanded
    report = run_scenario(scn, tasks, timings=args.timings)
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_render_text(report))
    return 0 if report["verdict"] == "pass" else 1


def cmd_fixtures(args) -> int:
    fixtures = list_fixtures(args.tag)
    if args.format == "json":
        payload = [
            {"name": f.name, "description": f.description, "tags": sorted(f.tags)}
            for f in fixtures
        ]
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for f in fixtures:
            print(f"{f.name} [{', '.join(sorted(f.tags))}]")
            print(f"    {f.description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homlie",
        description="Exact verification of twisted algebroid structures over polynomial coefficients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run verification tasks from a scenario file")
    check.add_argument("scenario", help="path to the scenario JSON file")
    check.add_argument(
        "--task",
        action="append",
        help="run only the named task (repeatable); overrides the scenario's task list",
    )
    check.add_argument("--probe-degree", type=int, default=None, help="probe monomial degree bound")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument(
        "--timings", action="store_true", help="include wall times (breaks byte-identical output)"
    )
    check.set_defaults(func=cmd_check)

    fixtures = sub.add_parser("fixtures", help="list the built-in fixture catalog")
    fixtures.add_argument("--format", choices=("text", "json"), default="text")
    fixtures.add_argument("--tag", default=None, help="only fixtures carrying this tag")
    fixtures.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
