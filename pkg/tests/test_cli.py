import json
import os

import pytest

from coneforms.cli import main
from coneforms.report import Report


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def read_json(tmp_path, name):
    with open(os.path.join(tmp_path, name + ".json"), encoding="utf-8") as fh:
        return json.load(fh)


def test_verify_exit_zero_and_schema(tmp_path):
    assert run(tmp_path, "verify", "--chart", "r2", "--count", "10",
               "--seed", "7") == 0
    doc = read_json(tmp_path, "verify")
    assert doc["schema"] == 1
    assert doc["command"] == "verify"
    assert doc["config"]["seed"] == 7
    assert all(c["status"] == "pass" for c in doc["checks"])
    assert os.path.exists(os.path.join(tmp_path, "verify.csv"))


def test_reports_are_byte_identical(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    for out in (out1, out2):
        assert main(["verify", "--chart", "r2", "--count", "8", "--seed", "3",
                     "--out", str(out)]) == 0
    data1 = (out1 / "verify.json").read_bytes()
    data2 = (out2 / "verify.json").read_bytes()
    assert data1 == data2


def test_homology_reports_stable_ranks(tmp_path):
    assert run(tmp_path, "homology", "--chart", "r2", "--trunc", "8",
               "--operator", "delta", "--no-figures") == 0
    doc = read_json(tmp_path, "homology")
    assert doc["results"]["ranks"] == [0, 0, 1]
    assert doc["results"]["stable_ranks"] == [0, 0, 1]
    assert doc["results"]["truncated_ranks"] == [9, 10, 1]


def test_homology_invariant_figure(tmp_path):
    assert run(tmp_path, "homology", "--chart", "r2", "--trunc", "4",
               "--operator", "deRham", "--group-order", "3") == 0
    assert (tmp_path / "homology.png").exists()
    doc = read_json(tmp_path, "homology")
    assert doc["results"]["ranks"] == [1, 0, 0]


def test_cone_report_flat(tmp_path):
    assert run(tmp_path, "cone-report", "--link", "flat",
               "--samples", "200") == 0
    doc = read_json(tmp_path, "cone-report")
    names = {c["name"] for c in doc["checks"]}
    assert "conical_identity.closed" in names
    assert "contact_nondegenerate" in names
    assert (tmp_path / "cone-report.png").exists()


def test_cone_report_latitude_includes_nash(tmp_path):
    assert run(tmp_path, "cone-report", "--link", "latitude:1/2",
               "--samples", "200", "--tolerance", "1e-6",
               "--no-figures") == 0
    doc = read_json(tmp_path, "cone-report")
    assert "nash_samples" in doc["results"]
    names = {c["name"] for c in doc["checks"]}
    assert "metric_c1_at_apex" in names


def test_membership_query_exit_zero_both_ways(tmp_path, capsys):
    assert run(tmp_path, "membership", "--theta", "0", "--term", "1:0:1") == 0
    assert "not smooth" in capsys.readouterr().out
    assert (tmp_path / "membership.png").exists()
    assert run(tmp_path, "membership", "--theta", "1/2", "--term", "1:0:1",
               "--no-figures") == 0
    out = capsys.readouterr().out
    assert "is smooth" in out
    doc = read_json(tmp_path, "membership")
    assert doc["results"]["smooth"] is True


def test_flatness_command(tmp_path):
    assert run(tmp_path, "flatness", "--pairs", "2", "--no-figures") == 0
    doc = read_json(tmp_path, "flatness")
    assert doc["results"]["flatness_degree"] == 4


def test_bump_check_command(tmp_path):
    assert run(tmp_path, "bump-check", "--epsilon", "0.5",
               "--samples", "2000") == 0
    assert (tmp_path / "bump.png").exists()
    assert (tmp_path / "partition.png").exists()


def test_invalid_config_exits_two(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--chart", "r99", "--out", str(tmp_path)])
    assert err.value.code == 2
    assert main(["homology", "--trunc", "-1", "--out", str(tmp_path)]) == 2
    assert main(["homology", "--group-order", "5", "--trunc", "2",
                 "--out", str(tmp_path)]) == 2
    assert main(["membership", "--theta", "0", "--term", "nonsense",
                 "--out", str(tmp_path)]) == 2
    assert main(["bump-check", "--epsilon", "-1", "--out", str(tmp_path)]) == 2
    assert main(["cone-report", "--tolerance", "-2", "--out", str(tmp_path)]) == 2


def test_failing_check_exits_one():
    from coneforms.report import CheckResult

    report = Report("demo", {})
    report.add("good", True)
    report.add("bad", False, witness="broken")
    assert not report.passed
    with pytest.raises(ValueError):
        CheckResult("bad2", "fail")  # failures must carry a witness
    with pytest.raises(ValueError):
        CheckResult("odd", "maybe")


def test_env_var_default_out(tmp_path, monkeypatch):
    monkeypatch.setenv("CONEFORMS_OUT", str(tmp_path / "envout"))
    assert main(["flatness", "--pairs", "0", "--no-figures"]) == 0
    assert (tmp_path / "envout" / "flatness.json").exists()
