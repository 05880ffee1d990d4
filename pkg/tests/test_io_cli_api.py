"""JSON formats, CLI exit codes, HTTP endpoints — thin-layer contract tests."""

import json

import pytest
from fastapi.testclient import TestClient

from rangecompat.api import create_app
from rangecompat.cli import cli_run, render_text
from rangecompat.errors import FieldError
from rangecompat.gf import field_make
from rangecompat.io import (dumps, field_from_json, field_to_json,
                            map_from_json, map_to_json, space_from_json,
                            space_to_json)
from rangecompat.rcmaps import eval_map, map_from_images
from rangecompat.spaces import full_space, named_space


# -- formats -------------------------------------------------------------------


def test_space_roundtrip(F3, F4):
    for S in (named_space(F3, "intro_U"), full_space(F4, 3, 2),
              named_space(F4, "type2_canonical", n=3, p=3)):
        d = space_to_json(S)
        assert d["format"] == 1
        assert space_from_json(json.loads(json.dumps(d))) == S


def test_space_rejects_bad_payloads(F2):
    d = space_to_json(named_space(F2, "K2"))
    bad = dict(d, format=2)
    with pytest.raises(ValueError):
        space_from_json(bad)
    bad = dict(d, basis=[[9] * 6])
    with pytest.raises(ValueError):
        space_from_json(bad)


def test_field_poly_conventions(F4):
    d = field_to_json(F4)
    assert len(d["poly"]) == F4.k
    assert field_from_json(d) == F4
    # monic length-(k+1) form accepted
    assert field_from_json({"p": 2, "k": 2,
                            "poly": list(F4.poly) + [1]}) == F4
    with pytest.raises(FieldError):
        field_from_json({"p": 2, "k": 2, "poly": [0, 0]})


def test_map_roundtrip(F4):
    S = named_space(F4, "K2")
    Fm = eval_map(S, (1, 2))
    d = map_to_json(Fm)
    back = map_from_json(d)
    assert back.domain == S and back.matrix == Fm.matrix


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [2, 3]}) == '{"a":[2,3],"b":1}\n'
    assert dumps({"a": 1}) == dumps({"a": 1})


def test_render_text_mirrors_json():
    text = render_text({"outer": {"b": 2, "a": 1}, "n": 5})
    assert "outer:" in text and "a: 1" in text and "n: 5" in text


# -- CLI -----------------------------------------------------------------------


def run_cli(args, capsys):
    code = cli_run(args)
    out = capsys.readouterr().out
    return code, out


def test_cli_space_and_rc(tmp_path, capsys):
    space_file = tmp_path / "U.json"
    code, _ = run_cli(["space", "--named", "intro_U", "--field", "3",
                       "--out", str(tmp_path / "report.json")], capsys)
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    space_file.write_text(json.dumps(report["space"]))
    code, out = run_cli(["rc", "--space", str(space_file),
                         "--flavor", "linear"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["kdim"] == 3 and rep["local_kdim"] == 2


def test_cli_exit_codes(tmp_path, capsys):
    # usage: no space given
    assert run_cli(["rc"], capsys)[0] == 2
    # usage: bad subcommand
    assert cli_run(["frobnicate"]) == 2
    # budget refusal
    code, _ = run_cli(["enum", "--field", "2", "--n", "3", "--p", "3",
                       "--codim-max", "2", "--list", "--budget", "100"],
                      capsys)
    assert code == 3
    # violation: non-local map flagged by is-local
    F3 = field_make(3)
    U = named_space(F3, "intro_U")
    Fm = map_from_images(U, 2, [(g.get(0, 1), 0) for g in U.gfp_basis()])
    sp, mp = tmp_path / "U.json", tmp_path / "F.json"
    sp.write_text(json.dumps(space_to_json(U)))
    mp.write_text(json.dumps(map_to_json(Fm)))
    code, out = run_cli(["rc", "--space", str(sp), "--action", "is-local",
                         "--map", str(mp)], capsys)
    assert code == 1 and json.loads(out)["local"] is False


def test_cli_verify_pass_and_counts(capsys):
    code, out = run_cli(["verify", "main-linear", "--field", "2", "--n", "3",
                         "--p", "2", "--codim-max", "2"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass" and rep["checked"] == 715


def test_cli_enum_count(capsys):
    code, out = run_cli(["enum", "--field", "4", "--n", "3", "--p", "2",
                         "--codim", "1"], capsys)
    assert code == 0 and json.loads(out)["count"] == 1365


def test_cli_reports_byte_identical_across_jobs(tmp_path, capsys):
    outs = []
    for jobs in ("1", "3"):
        f = tmp_path / f"rep{jobs}.json"
        code, _ = run_cli(["verify", "K-local", "--jobs", jobs,
                           "--out", str(f)], capsys)
        assert code == 0
        d = json.loads(f.read_text())
        d["config"]["jobs"] = 1
        outs.append(dumps(d))
    assert outs[0] == outs[1]


def test_cli_text_format(tmp_path, capsys):
    sp = tmp_path / "K2.json"
    F4 = field_make(2, 2)
    sp.write_text(json.dumps(space_to_json(named_space(F4, "K2"))))
    code, out = run_cli(["classify", "--space", str(sp), "--format", "text"],
                        capsys)
    assert code == 0 and "verdict: type1" in out


# -- HTTP API ------------------------------------------------------------------


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_api_health(client):
    r = client.get("/health")
    assert r.status_code == 200 and r.json()["status"] == "ok"


def test_api_space_rc_flow(client):
    r = client.post("/space", json={"named": "intro_U", "field": 3})
    assert r.status_code == 200
    space = r.json()["report"]["space"]
    r = client.post("/rc", json={"space": space, "flavor": "linear"})
    assert r.status_code == 200
    assert r.json()["report"]["kdim"] == 3


def test_api_error_codes(client):
    assert client.post("/rc", json={"named": "nope", "field": 3}).status_code == 400
    r = client.post("/enum", json={"field": 2, "n": 3, "p": 3,
                                   "max_codim": 2, "list": True, "budget": 10})
    assert r.status_code == 422


def test_api_verify_and_preserve(client):
    r = client.post("/verify", json={"theorem": "sharpness-dn"})
    d = r.json()
    assert r.status_code == 200 and not d["violation"]
    assert d["report"]["verdict"] == "pass"
    r = client.post("/preserve", json={"named": "full", "field": 3,
                                       "n": 2, "p": 2, "q": 2})
    assert r.json()["report"]["preservers"]["count"] == 48
