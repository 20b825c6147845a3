import json

import pytest

from descentkit.cli import build_parser, main, run

from conftest import FIXTURES

CASES = json.loads((FIXTURES / "cases.json").read_text())


def invoke(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(capsys, name):
    cmd, path, *rest = CASES[name]
    code, out = invoke(capsys, cmd, str(FIXTURES / path), "--json", *rest)
    assert out + f"exit={code}\n" == (FIXTURES / "golden" / f"{name}.out").read_text()


def test_every_command_has_a_golden_case():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    assert set(sub.choices) == {argv[0] for argv in CASES.values()}


def test_exit_codes(capsys):
    assert invoke(capsys, "validate", str(FIXTURES / "validate_terminal.json"))[0] == 0
    assert invoke(capsys, "validate", str(FIXTURES / "validate_nonassoc.json"))[0] == 1
    # a non-equivalence is an answer, not an error
    code, out = invoke(capsys, "descent-check", str(FIXTURES / "descent_broken_cone.json"), "--json")
    assert code == 0 and json.loads(out)["result"]["equivalence"] is False


def test_human_output(capsys):
    code, out = invoke(capsys, "h1", str(FIXTURES / "h1_z2_z2_trivial.json"))
    assert code == 0
    assert out.splitlines()[0] == "h1: ok"
    assert "  count: 2" in out


def test_timing_only_on_request(capsys):
    path = str(FIXTURES / "lim1_constant.json")
    _, plain = invoke(capsys, "lim1", path, "--json")
    _, timed = invoke(capsys, "lim1", path, "--json", "--timing")
    assert "timing_seconds" not in json.loads(plain)
    assert json.loads(timed)["timing_seconds"] >= 0


def test_size_guard_is_reported(capsys):
    code, out = invoke(capsys, "lax", str(FIXTURES / "lax_const.json"), "--json", "--max-candidates", "2")
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    assert "--max-candidates" in report["result"]["error"]


def test_env_bound(capsys, monkeypatch):
    monkeypatch.setenv("DESCENTKIT_MAX_CANDIDATES", "2")
    code, out = invoke(capsys, "lax", str(FIXTURES / "lax_const.json"), "--json")
    assert code == 1 and "candidates" in json.loads(out)["result"]["error"]


def test_missing_file(tmp_path):
    rep, _ = run(["validate", str(tmp_path / "nope.json")])
    assert not rep.ok and rep.result["error"].startswith("cannot read")


def test_unknown_object(capsys):
    code, out = invoke(capsys, "conj", str(FIXTURES / "conj_collapsing.json"), "--json", "--object", "zz")
    assert code == 1
    assert "unknown id" in json.loads(out)["result"]["error"]


def test_digest_tracks_input(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"gamma": {"cyclic": 2}, "target": {"cyclic": 2}}))
    first, _ = run(["h1", str(p)])
    p.write_text(json.dumps({"gamma": {"cyclic": 2}, "target": {"cyclic": 3}}))
    second, _ = run(["h1", str(p)])
    assert first.input_digest != second.input_digest
    assert (first.result["count"], second.result["count"]) == (2, 1)
