import json

import pytest

from ccrkit.errors import StructureError
from ccrkit.suite import RunReport, suite


def test_run_report_bookkeeping():
    report = RunReport(["demo"], {"cap": 4}, seed=3)
    good = report.check("small residual", 1e-13, 1e-12)
    bad = report.check("large residual", 2.0, 1e-12)
    assert good.passed and not bad.passed
    assert not report.all_passed
    assert report.exit_code == 1
    report.checks.remove(bad)
    assert report.exit_code == 0
    boundary = report.check("at tolerance", 1e-12, 1e-12)
    assert boundary.passed  # residual equal to the tolerance still passes


def test_run_report_fail_records_the_message():
    report = RunReport(["demo"], {})
    report.fail("witness", "carrier too large")
    assert report.checks[0].name == "witness [carrier too large]"
    assert report.checks[0].residual == float("inf")
    assert report.exit_code == 1
    assert "FAIL" in report.summary()


def test_run_report_serialization_is_stable():
    def build():
        report = RunReport(["suite", "quick"], {"profile": "quick", "cap": 16},
                           seed=9)
        report.check("one", 0.0, 1e-12)
        report.check("two", 5e-13, 1e-12)
        report.wall_time_s = 1.23456
        return report

    a, b = build().to_data(), build().to_data()
    assert a == b
    assert json.dumps(a) == json.dumps(b)
    assert a["wall_time_s"] == 1.235
    assert a["passed"] == 2 and a["failed"] == 0
    assert list(a.keys())[0] == "record"


def test_config_hash_tracks_inputs_only():
    base = RunReport(["x"], {"cap": 16}, seed=0)
    same = RunReport(["y"], {"cap": 16}, seed=0)
    other_seed = RunReport(["x"], {"cap": 16}, seed=1)
    other_cfg = RunReport(["x"], {"cap": 64}, seed=0)
    base.check("anything", 0.0, 1.0)
    assert base.config_hash() == same.config_hash()
    assert base.config_hash() != other_seed.config_hash()
    assert base.config_hash() != other_cfg.config_hash()
    assert len(base.config_hash()) == 16


def test_suite_rejects_unknown_profile():
    with pytest.raises(StructureError):
        suite("exhaustive")
