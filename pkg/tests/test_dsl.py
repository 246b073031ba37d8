from __future__ import annotations

import json

import pytest

from edskit import cli
from edskit.dsl import Options, ParseError, parse, parse_file, run, to_text
from edskit.dsl import runner as runner_mod
from conftest import CORPUS

CONE = """chart x y z p;
form theta = dz + p*dx + pow(p, 2)*dy;
system S = [theta];
"""


def run_text(text: str):
    return run(parse(text, "t.eds"), Options())


@pytest.mark.parametrize("text,message", [
    ("chart x p;\nform a = p^2*dx;", "'^' is the wedge product"),
    ("chart x;\nform a = dx;\nform a = dx;", "duplicate name 'a'"),
    ("chart x;\nform a = dy;", "unresolved name 'dy'"),
    ("chart x;\ncheck frobnicate a;", "unknown check 'frobnicate'"),
    ("chart x;\nform a = dx", "unexpected 'end of file'"),
])
def test_parse_errors_have_locations(text, message):
    with pytest.raises(ParseError) as exc:
        parse(text, "t.eds")
    assert str(exc.value).startswith("t.eds:") and message in str(exc.value)


def test_corpus_round_trips_through_the_printer():
    for path in sorted(CORPUS.glob("*.eds")):
        doc = parse_file(str(path))
        text = to_text(doc)
        assert to_text(parse(text, str(path))) == text


@pytest.mark.parametrize("check,verdict,expected,outcome", [
    ("check cauchy S expect rank 3;", "pass", "pass", None),
    ("check cauchy S expect rank 2;", "fail", "pass", None),
    ("check first_integral x for S;", "fail", "pass", None),
    ("check first_integral x for S expect fail;", "pass", "fail", "fail"),
    ("check first_integral p for S expect fail;", "fail", "fail", "pass"),
    ("check integrable S expect fail;", "pass", "fail", "fail"),
    ("check integrable S expect refused;", "fail", "refused", "fail"),
])
def test_verdict_mapping(check, verdict, expected, outcome):
    r = run_text(CONE + check).checks[-1]
    assert r.verdict == verdict
    assert r.expected == expected
    if outcome is not None:
        assert r.outcome == outcome


def test_zero_on_either_side_of_a_claim():
    text = "chart x y;\nform a = dx;\nform b = dy;\ncoframe C = [a, b];\nclaim d(a) == 0 in C;\nclaim 0 == d(a) in C;"
    assert [r.verdict for r in run_text(text).checks] == ["pass", "pass"]


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_exit_codes(tmp_path, capsys, monkeypatch):
    ok = write(tmp_path, "ok.eds", CONE + "check cauchy S expect rank 3;")
    bad = write(tmp_path, "bad.eds", CONE + "check first_integral x for S;")
    refused = write(tmp_path, "refused.eds", CONE + "liealg L dim 2 {};\njetspec W dims 1 1 order 1;\n"
                                                    "check dla L m (1, 2) j0 (3) model W;")
    broken = write(tmp_path, "broken.eds", "chart x;\nform a = dy;")
    assert cli.main(["run", ok]) == 0
    assert cli.main(["run", ok, bad]) == 1
    assert cli.main(["run", ok, bad, refused]) == 2
    assert cli.main(["run", broken]) == 2
    assert "unresolved name" in capsys.readouterr().err

    def explode(self, b):
        raise RuntimeError("boom")

    monkeypatch.setattr(runner_mod.Environment, "c_cauchy", explode)
    assert cli.main(["run", ok, bad, refused]) == 3
    out = capsys.readouterr().out
    assert "[ERROR]" in out and "RuntimeError" in out


def test_text_report(tmp_path, capsys):
    path = write(tmp_path, "a.eds", CONE + "check cauchy S expect rank 3;\ncheck first_integral x for S expect fail;")
    assert cli.main(["run", path]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "(expected fail, got fail)" in out and "2/2 checks pass" in out


def test_json_report_shape_and_determinism(tmp_path, capsys):
    path = write(tmp_path, "a.eds", CONE + "check cauchy S expect rank 3;")
    cli.main(["run", "--json", path])
    first = capsys.readouterr().out
    cli.main(["run", "--json", "--seed", "5", path])
    assert capsys.readouterr().out == first
    data = json.loads(first)
    assert set(data) == {"version", "file", "checks"}
    check = data["checks"][0]
    assert check["verdict"] == "pass" and check["kind"] == "cauchy" and "side_conditions" in check
    cli.main(["run", "--json", path, path])
    assert set(json.loads(capsys.readouterr().out)) == {"version", "reports"}


def test_parse_command(tmp_path, capsys):
    path = write(tmp_path, "a.eds", CONE)
    assert cli.main(["parse", "--dump", path]) == 0
    assert capsys.readouterr().out == to_text(parse(CONE))
    assert cli.main(["parse", str(tmp_path / "missing.eds")]) == 2


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("EDSKIT_SEED", "nope")
    with pytest.raises(SystemExit):
        cli._seed(None)
    monkeypatch.setenv("EDSKIT_SEED", "11")
    assert cli._seed(None) == 11 and cli._seed(3) == 3


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.eds")), ids=lambda p: p.stem)
def test_corpus_file_is_green(path):
    report = run(parse_file(str(path)), Options())
    assert report.error is None
    bad = [(r.name, r.verdict, r.witness) for r in report.checks if r.verdict != "pass"]
    assert not bad and report.exit_code == 0
