import json

import pytest

from cmred.cli import RunConfig, main, parse_spec, render_json, run
from cmred.errors import ParseError
from cmred.group_zoo import ZooSpec


def run_main(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(no_floats(k) and no_floats(v) for k, v in obj.items())
    if isinstance(obj, list):
        return all(no_floats(x) for x in obj)
    return True


def test_parse_spec_zoo():
    assert parse_spec("sym:4") == ZooSpec("sym", "4")
    assert parse_spec("sp4f2:+") == ZooSpec("sp4f2", "+")
    with pytest.raises(ParseError):
        parse_spec("nonsense:9")


def test_parse_spec_file(tmp_path):
    path = tmp_path / "klein.json"
    path.write_text(json.dumps({
        "degree": 4,
        "group_generators": [[1, 0, 3, 2], [2, 3, 0, 1]],
        "subgroup_generators": [],
    }))
    kind, degree, ggens, hgens = parse_spec(f"file:{path}")
    assert kind == "file" and degree == 4
    assert ggens == [(1, 0, 3, 2), (2, 3, 0, 1)] and hgens == []


def test_parse_spec_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "degree": 3,
        "group_generators": [[0, 0, 1]],  # not a bijection
        "subgroup_generators": [],
    }))
    with pytest.raises(ParseError):
        parse_spec(f"file:{bad}")
    with pytest.raises(ParseError):
        parse_spec("file:/does/not/exist.json")
    notjson = tmp_path / "notjson.json"
    notjson.write_text("{oops")
    with pytest.raises(ParseError):
        parse_spec(f"file:{notjson}")


def test_zoo_list(capsys):
    code, out, _ = run_main(capsys, "zoo", "list", "--format", "json")
    assert code == 0
    data = json.loads(out)
    specs = [e["spec"] for e in data["zoo"]]
    assert "sym:n" in specs and "sp6f2:+|-" in specs


def test_verify_sym3_passes(capsys):
    code, out, _ = run_main(capsys, "verify", "sym:3", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["group"] == {"order": 6, "n": 3, "h": 2, "classes": 3}
    assert all(c["status"] == "pass" for c in report["checks"])
    names = [c["name"] for c in report["checks"]]
    assert names == ["closed-form", "induced-character", "pair-reduction",
                     "cm0-membership", "galois-invariance"]
    assert report["certificate"]["criterion_met"] is True


def test_verify_file_model(capsys, tmp_path):
    path = tmp_path / "v4.json"
    path.write_text(json.dumps({
        "degree": 4,
        "group_generators": [[1, 0, 3, 2], [2, 3, 0, 1]],
        "subgroup_generators": [[1, 0, 3, 2]],
    }))
    code, out, _ = run_main(capsys, "verify", f"file:{path}", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["group"]["order"] == 4 and report["group"]["n"] == 2


def test_certify_negative_is_not_failure(capsys):
    code, out, _ = run_main(capsys, "certify", "cyclic:5", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["certificate"]["criterion_met"] is False
    assert report["certificate"]["pair_orbit_count"] == 4


def test_bad_file_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "degree": 3,
        "group_generators": [[0, 0, 1]],
        "subgroup_generators": [],
    }))
    code, out, err = run_main(capsys, "verify", f"file:{bad}")
    assert code == 2
    assert "ParseError" in err


def test_unknown_family_exits_2(capsys):
    code, _, err = run_main(capsys, "verify", "wat:7")
    assert code == 2 and "ParseError" in err


def test_large_gate(capsys):
    code, _, err = run_main(capsys, "certify", "sp6f2:+")
    assert code == 2
    assert "--large" in err


def test_skipped_cap_reported(capsys):
    code, out, _ = run_main(capsys, "verify", "sym:4", "--format", "json",
                            "--brute-cap", "10")
    assert code == 0
    report = json.loads(out)
    by_name = {c["name"]: c for c in report["checks"]}
    assert by_name["closed-form"]["status"] == "skipped"
    assert "cap" in by_name["closed-form"]["reason"]
    # closed-path checks still run
    assert by_name["pair-reduction"]["status"] == "pass"
    assert by_name["galois-invariance"]["status"] == "pass"


def test_report_roundtrip_and_no_floats(capsys):
    code, out, _ = run_main(capsys, "verify", "dihedral:4", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert no_floats(report)
    assert json.loads(render_json(report)) == report


def test_determinism_excluding_timing(capsys):
    outputs = []
    for _ in range(2):
        code, out, _ = run_main(capsys, "verify", "sym:4", "--format", "json",
                                "--seed", "7")
        assert code == 0
        report = json.loads(out)
        report.pop("timing")
        outputs.append(json.dumps(report, sort_keys=True).encode())
    assert outputs[0] == outputs[1]


def test_run_config_api():
    report, code = run(RunConfig(command="certify", spec="sym:4"))
    assert code == 0 and report["certificate"]["criterion_met"]
    with pytest.raises(ParseError):
        RunConfig(command="verify", spec="sym:4", eps_max=100)


def test_text_format_mentions_checks(capsys):
    code, out, _ = run_main(capsys, "verify", "cyclic:3", "--format", "text")
    assert code == 0
    assert "closed-form" in out and "certificate" in out
