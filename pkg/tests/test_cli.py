import json

import pytest

from reqlattice.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_STRICT, run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def corpus_arg(worked_example_path):
    return ["--corpus", str(worked_example_path)]


def test_validate_ok(capsys, corpus_arg):
    code, out, _ = invoke(capsys, "validate", *corpus_arg)
    assert code == EXIT_OK
    assert "corpus valid" in out


def test_validate_json_envelope(capsys, corpus_arg):
    code, out, _ = invoke(capsys, "validate", *corpus_arg, "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["tool"] == "reqlattice"
    assert doc["formatVersion"] == 1
    assert doc["reportType"] == "validate"


def test_invalid_corpus_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"formatVersion": 1, "jurisdictions": [], "oops": 1}')
    code, _, err = invoke(capsys, "validate", "--corpus", str(bad))
    assert code == EXIT_INVALID
    assert "UNKNOWN_FIELD" in err


def test_missing_corpus_exit_3(capsys, tmp_path):
    code, _, err = invoke(capsys, "validate", "--corpus", str(tmp_path / "absent.json"))
    assert code == EXIT_IO


def test_unknown_subcommand_exit_1(capsys):
    code, _, err = invoke(capsys, "frobnicate")
    assert code == EXIT_INVALID
    assert "usage" in err


def test_unknown_flag_exit_1(capsys, corpus_arg):
    code, _, err = invoke(capsys, "validate", *corpus_arg, "--wat")
    assert code == EXIT_INVALID


def test_conflicts_strict_exit_2(capsys, corpus_arg):
    code, out, _ = invoke(capsys, "conflicts", *corpus_arg, "--strict")
    assert code == EXIT_STRICT
    assert "req-de-retention" in out


def test_conflicts_lenient_exit_0(capsys, corpus_arg):
    code, _, _ = invoke(capsys, "conflicts", *corpus_arg)
    assert code == EXIT_OK


def test_partition_strict_escalates_condition_warnings(capsys, corpus_arg):
    code, _, _ = invoke(capsys, "partition", *corpus_arg, "--strict")
    assert code == EXIT_STRICT


@pytest.mark.parametrize("command,extra", [
    ("validate", []),
    ("partition", []),
    ("scenario", []),
    ("optimize", []),
    ("conflicts", []),
    ("hierarchy", []),
])
def test_json_reports_deterministic(capsys, corpus_arg, command, extra):
    _, out1, _ = invoke(capsys, command, *corpus_arg, "--format", "json", *extra)
    _, out2, _ = invoke(capsys, command, *corpus_arg, "--format", "json", *extra)
    assert out1 == out2
    json.loads(out1)


def test_rank_deterministic(capsys, corpus_arg, alts_path):
    args = ["rank", *corpus_arg, "--alts", str(alts_path), "--format", "json"]
    _, out1, _ = invoke(capsys, *args)
    _, out2, _ = invoke(capsys, *args)
    assert out1 == out2
    body = json.loads(out1)["body"]
    assert body["ranking"][0]["alternative"] == "alt-per-jurisdiction-policy"


def test_change_deterministic_and_writes_corpus(capsys, corpus_arg, change_set_path, tmp_path, worked_example_path):
    out_path = tmp_path / "after.reqcorpus.json"
    args = ["change", *corpus_arg, "--changes", str(change_set_path),
            "--out", str(out_path), "--format", "json"]
    before = worked_example_path.read_bytes()
    code, out1, _ = invoke(capsys, *args)
    assert code == EXIT_OK
    _, out2, _ = invoke(capsys, *args)
    assert out1 == out2
    # input corpus file untouched, output corpus loadable
    assert worked_example_path.read_bytes() == before
    from reqlattice import corpus_io
    corpus_io.load_corpus(out_path)
    body = json.loads(out1)["body"]
    assert [op["case"] for op in body["ops"]] == ["1b", "2b"]


def test_report_out_file(capsys, corpus_arg, tmp_path):
    dest = tmp_path / "report.json"
    code, out, _ = invoke(capsys, "scenario", *corpus_arg, "--format", "json", "--out", str(dest))
    assert code == EXIT_OK and out == ""
    doc = json.loads(dest.read_text())
    assert doc["body"]["legal"]["option"] == "PartialOverlap"
    assert doc["body"]["cultural"]["option"] == "Disjoint"


def test_emit_flag_filters_optimize_report(capsys, corpus_arg):
    _, out_min, _ = invoke(capsys, "optimize", *corpus_arg, "--format", "json", "--emit", "min")
    body = json.loads(out_min)["body"]
    assert "baseline" in body["global"] and "strongest" not in body["global"]
    _, out_star, _ = invoke(capsys, "optimize", *corpus_arg, "--format", "json", "--emit", "star")
    body = json.loads(out_star)["body"]
    assert "strongest" in body["global"] and "baseline" not in body["global"]


def test_level_flag(capsys, tmp_path):
    doc = {
        "formatVersion": 1,
        "jurisdictions": [
            {"id": "nat", "name": "N", "level": "national"},
            {"id": "st1", "name": "S1", "level": "state", "parent": "nat"},
            {"id": "st2", "name": "S2", "level": "state", "parent": "nat"},
        ],
        "requirements": [
            {"id": "r-nat", "kind": "functional", "jurisdiction": "nat",
             "conceptKey": "shared", "text": "same everywhere"},
            {"id": "r-st1", "kind": "functional", "jurisdiction": "st1",
             "conceptKey": "local", "text": "one"},
        ],
    }
    path = tmp_path / "tree.reqcorpus.json"
    path.write_text(json.dumps(doc))
    code, out, _ = invoke(capsys, "partition", "--corpus", str(path),
                          "--level", "state", "--format", "json")
    assert code == EXIT_OK
    body = json.loads(out)["body"]
    functional = body["perKind"]["functional"]
    # the national requirement is inherited by both states, hence general
    assert functional["general"] == {"shared": ["r-nat"]}
    assert functional["specific"]["st1"] == ["r-st1"]


def test_color_env_toggle(capsys, corpus_arg, monkeypatch):
    monkeypatch.setenv("REQLATTICE_COLOR", "1")
    _, out_color, _ = invoke(capsys, "scenario", *corpus_arg)
    monkeypatch.setenv("REQLATTICE_COLOR", "0")
    _, out_plain, _ = invoke(capsys, "scenario", *corpus_arg)
    assert "\x1b[" not in out_plain
