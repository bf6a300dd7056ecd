"""Scenario runner: exit codes, report schema, determinism, config handling."""

import json
import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "qkoszul.cli"]


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(CLI + list(args), capture_output=True, env=full_env)


class TestBasics:
    def test_list_scenarios(self):
        res = run("--list-scenarios")
        assert res.returncode == 0
        names = res.stdout.decode().split()
        assert "s1-translation" in names and "axioms-std" in names

    def test_missing_arguments(self):
        assert run().returncode == 2

    def test_unknown_scenario(self):
        res = run("--scenario", "no-such-thing")
        assert res.returncode == 2
        assert b"config error" in res.stderr


class TestReports:
    def test_s1p_single_passes(self):
        res = run("--scenario", "s1p-single")
        assert res.returncode == 0
        report = json.loads(res.stdout)
        assert report["scenario"] == "s1p-single"
        assert report["status"] == "pass"
        assert all(c["status"] == "pass" for c in report["checks"])
        names = [c["name"] for c in report["checks"]]
        assert names == sorted(names)

    def test_schema_fields(self):
        res = run("--scenario", "ce-heisenberg")
        report = json.loads(res.stdout)
        for key in ("scenario", "status", "config", "conventions", "checks"):
            assert key in report
        for c in report["checks"]:
            assert set(c) <= {"name", "status", "witness", "info"}

    def test_conventions_echoed(self):
        res = run("--scenario", "ce-heisenberg")
        report = json.loads(res.stdout)
        assert report["conventions"]["weyl_q_star_p_order1"] == "(0/1)+(1/2)i"
        assert report["conventions"]["std_p_star_q_order1"] == "(0/1)-(1/1)i"
        assert report["conventions"]["wick_z_star_zbar_order1"] == "(2/1)+(0/1)i"

    def test_std_hermitian_expected_failure_with_witness(self):
        res = run("--scenario", "axioms-std")
        assert res.returncode == 0
        report = json.loads(res.stdout)
        entry = next(c for c in report["checks"]
                     if c["name"] == "axioms.hermitian_fails_as_expected")
        assert entry["status"] == "pass"
        assert "witness" in entry
        assert "conj_product" in entry["witness"]

    def test_text_format(self):
        res = run("--scenario", "ce-heisenberg", "--format", "text")
        assert res.returncode == 0
        text = res.stdout.decode()
        assert text.startswith("scenario: ce-heisenberg")
        assert "[pass] ce.boundary_squared_zero_grade2" in text


class TestDeterminism:
    def test_byte_identical_reruns(self):
        a = run("--scenario", "s1p-single")
        b = run("--scenario", "s1p-single")
        assert a.stdout == b.stdout

    def test_seed_changes_report(self):
        a = run("--scenario", "axioms-weyl", "--seed", "1")
        b = run("--scenario", "axioms-weyl", "--seed", "2")
        assert json.loads(a.stdout)["config"]["seed"] == 1
        assert json.loads(b.stdout)["config"]["seed"] == 2


class TestConfigFile:
    def test_load_and_run(self, tmp_path):
        cfg = {
            "name": "custom",
            "n": 2,
            "translated": [1],
            "star": "weyl",
            "lambda_order": 3,
            "samples": 4,
            "seed": 5,
            "checks": ["momentum", "knp"],
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        res = run("--config", str(path))
        assert res.returncode == 0
        report = json.loads(res.stdout)
        assert report["scenario"] == "custom"
        assert report["config"]["lambda_order"] == 3

    def test_magnetic_config_roundtrip(self, tmp_path):
        cfg = {
            "name": "mini-magnetic",
            "n": 2,
            "translated": [1],
            "b": {"1": [2, "1/2"]},
            "mu": {"1": "3"},
            "samples": 3,
            "checks": ["knp"],
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        res = run("--config", str(path))
        assert res.returncode == 0
        report = json.loads(res.stdout)
        assert report["config"]["b"] == {"1": [2, "1/2"]}

    def test_invalid_stage_split(self, tmp_path):
        cfg = {"name": "bad", "n": 3, "translated": [1, 2],
               "stage_first": [7], "checks": ["stages"]}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        res = run("--config", str(path))
        assert res.returncode == 2
        assert b"out of range" in res.stderr

    def test_broken_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text("{not json")
        assert run("--config", str(path)).returncode == 2


class TestReportDir:
    def test_report_written(self, tmp_path):
        res = run("--scenario", "ce-heisenberg",
                  env={"QK_REPORT_DIR": str(tmp_path)})
        assert res.returncode == 0
        written = (tmp_path / "ce-heisenberg.json").read_bytes()
        assert written == res.stdout
