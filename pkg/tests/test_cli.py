import json
import subprocess
import sys
from pathlib import Path

import pytest

from homlie.cli import run_scenario
from homlie.fixtures import (
    CATALOG,
    get_fixture,
    list_fixtures,
    search_invariant_non_poisson_bivector,
)
from homlie.scenario import ScenarioError, load_scenario, parse_scenario

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


def s1_scenario_dict(**overrides):
    data = {
        "n": 2,
        "vars": ["x", "y"],
        "phi": {"matrix": [["2", "0"], ["0", "1/2"]], "offset": ["0", "0"]},
        "rank": 2,
        "phiA_matrix": [["1/2", "0"], ["0", "2"]],
        "anchor_matrix": [["1", "0"], ["0", "1"]],
        "structure": [],
        "tasks": ["check_axioms"],
    }
    data.update(overrides)
    return data


class TestScenarioParsing:
    def test_round_trip_minimal(self):
        scn = parse_scenario(s1_scenario_dict())
        assert scn.n == 2 and scn.algebroid.rank == 2
        assert scn.tasks == ["check_axioms"]

    def test_unknown_top_key_rejected(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario(s1_scenario_dict(bogus=1))
        assert "$" in str(err.value) and "bogus" in str(err.value)

    def test_unknown_task_rejected_with_path(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario(s1_scenario_dict(tasks=["check_axioms", "nope"]))
        assert "$.tasks[1]" in str(err.value)

    def test_bad_rational_path(self):
        data = s1_scenario_dict()
        data["phi"]["matrix"][0][0] = "2/0"
        with pytest.raises(ScenarioError) as err:
            parse_scenario(data)
        assert "$.phi.matrix[0][0]" in str(err.value)

    def test_bad_pi_indices(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario(s1_scenario_dict(pi=[{"i": 2, "j": 1, "coeff": "1"}]))
        assert "$.pi[0]" in str(err.value)

    def test_singular_base_map_rejected(self):
        data = s1_scenario_dict()
        data["phi"]["matrix"] = [["1", "1"], ["1", "1"]]
        with pytest.raises(ScenarioError):
            parse_scenario(data)

    def test_polynomial_entries(self):
        data = s1_scenario_dict(
            pi=[{"i": 1, "j": 2, "coeff": [{"exp": [1, 0], "coeff": "1"}]}]
        )
        scn = parse_scenario(data)
        assert scn.pi is not None
        assert not scn.pi.table.is_zero()


class TestRunScenario:
    def test_s0_passes(self):
        scn = load_scenario(str(SCENARIOS / "s0_axioms.json"))
        report = run_scenario(scn)
        assert report["verdict"] == "pass"

    def test_bad_pi_fails_with_witness(self):
        scn = load_scenario(str(SCENARIOS / "s1_bad_pi.json"))
        report = run_scenario(scn)
        assert report["verdict"] == "fail"
        entries = {e["task"]: e for e in report["tasks"]}
        assert entries["check_axioms"]["verdict"] == "pass"
        bad = entries["is_hom_poisson"]
        assert bad["verdict"] == "fail"
        assert bad["witness"]["residual"] == "(x) e[1,2]"

    def test_single_task_reproduces_failure(self):
        scn = load_scenario(str(SCENARIOS / "s1_bad_pi.json"))
        report = run_scenario(scn, tasks=["is_hom_poisson"])
        assert report["verdict"] == "fail"
        assert report["tasks"][0]["witness"]["residual"] == "(x) e[1,2]"

    def test_task_missing_data_fails(self):
        scn = parse_scenario(s1_scenario_dict(tasks=["is_hom_poisson"]))
        report = run_scenario(scn)
        assert report["verdict"] == "fail"


class TestCliProcess:
    def run_cli(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "homlie", *args],
            capture_output=True,
            text=True,
            cwd=str(ROOT),
            env={"PYTHONPATH": "src", "PATH": "/usr/bin:/bin"},
        )

    def test_exit_zero_on_pass(self):
        out = self.run_cli("check", "scenarios/s0_axioms.json")
        assert out.returncode == 0
        assert "overall: pass" in out.stdout

    def test_exit_one_on_failure(self):
        out = self.run_cli("check", "scenarios/s1_bad_pi.json")
        assert out.returncode == 1
        assert "overall: fail" in out.stdout

    def test_exit_two_on_malformed(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        out = self.run_cli("check", str(bad))
        assert out.returncode == 2

    def test_exit_two_on_schema_violation(self, tmp_path):
        data = s1_scenario_dict(bogus=True)
        p = tmp_path / "schema.json"
        p.write_text(json.dumps(data))
        out = self.run_cli("check", str(p))
        assert out.returncode == 2
        assert "bogus" in out.stderr

    def test_byte_identical_reports(self):
        a = self.run_cli("check", "scenarios/s1_bad_pi.json", "--format", "json")
        b = self.run_cli("check", "scenarios/s1_bad_pi.json", "--format", "json")
        assert a.stdout == b.stdout
        assert a.returncode == b.returncode == 1

    def test_json_format_is_valid(self):
        out = self.run_cli("check", "scenarios/s0_axioms.json", "--format", "json")
        payload = json.loads(out.stdout)
        assert payload["verdict"] == "pass"

    def test_fixtures_listing(self):
        out = self.run_cli("fixtures")
        assert out.returncode == 0
        for name in ("S0", "S1", "S2", "S3"):
            assert name in out.stdout

    def test_fixtures_tag_filter(self):
        out = self.run_cli("fixtures", "--tag", "negative")
        assert "S1-perturbed-structure" in out.stdout
        assert "S0" not in out.stdout.split()

    def test_fixtures_json(self):
        out = self.run_cli("fixtures", "--format", "json")
        payload = json.loads(out.stdout)
        names = {f["name"] for f in payload}
        assert {"S0", "S1", "S2", "S3"} <= names


class TestFixtureCatalog:
    def test_catalog_size(self):
        assert len(CATALOG) >= 8
        assert len(list_fixtures("negative")) >= 4

    def test_all_fixtures_build(self):
        for f in CATALOG:
            data = f.build()
            assert "algebroid" in data

    def test_search_oracle_finds_nonpoisson(self):
        from homlie.calculus import CartanContext, schouten
        from homlie.fixtures import algebroid_s3

        ctx = CartanContext(algebroid_s3())
        pi = search_invariant_non_poisson_bivector(ctx)
        assert not schouten(ctx, pi.table, pi.table).is_zero()

    def test_unknown_fixture(self):
        with pytest.raises(KeyError):
            get_fixture("nope")
