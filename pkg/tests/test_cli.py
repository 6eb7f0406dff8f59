import json

import pytest

from sdhall import report as rpt
from sdhall.cli import ConfigError, RunConfig, main, parse_budget, parse_charge, parse_lambda_table

JORDAN = "vertices: 1\narrow: 1 1\n"
LOOP_TO_REAL = "vertices: 1 2\narrow: 1 1\narrow: 1 2\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_cartan(files, capsys):
    assert main(["cartan", files("j.quiver", JORDAN)]) == 0
    out = capsys.readouterr().out
    assert "[0]" in out and "isotropic: [1]" in out


def test_cartan_a2(files, capsys):
    assert main(["cartan", files("a.quiver", "vertices: 1 2\narrow: 1 2\n")]) == 0
    assert "[ 2 -1]" in capsys.readouterr().out


def test_parse_error_exit(files, capsys):
    assert main(["cartan", files("bad.quiver", "vertices: 1\narrow 1 1\n")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_hallnum(files, capsys, tmp_path):
    out = tmp_path / "h.json"
    assert main(["hallnum", files("j.quiver", JORDAN), "--q", "2", "--bound", "2", "--nilpotent", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())["table"]
    F = {(r["X"], r["Y"], r["Z"]): r["F"] for r in rows}
    assert F[("[x:1]", "[x:1]", "[x:1,1]")] == 3
    assert F[("[x:1]", "[x:1]", "[x:2]")] == 1


def test_hallnum_bound_zero(files, tmp_path):
    out = tmp_path / "h0.json"
    assert main(["hallnum", files("j.quiver", JORDAN), "--bound", "0", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())["table"]
    assert [(r["X"], r["Y"], r["Z"], r["F"]) for r in rows] == [("0", "0", "0", 1)]


def test_verify_qbb_and_determinism(files, tmp_path):
    q = files("c.quiver", LOOP_TO_REAL)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", q, "--q", "2", "--lmax", "2", "--out", str(a)]) == 0
    assert main(["verify", q, "--q", "2", "--lmax", "2", "--serial", "--out", str(b)]) == 0
    ra, rb = rpt.load_report(a), rpt.load_report(b)
    assert rpt.stable_view(ra) == rpt.stable_view(rb)
    assert ra["summary"]["passed"] and ra["summary"]["controls_ok"]
    assert ra["independence"][0]["rank"] == 3


def test_report_roundtrip(files, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", files("j.quiver", JORDAN), "--q", "3", "--lmax", "2", "--serial", "--out", str(a)]) == 0
    assert main(["verify", "--from-report", str(a), "--serial", "--out", str(b)]) == 0
    assert rpt.stable_view(rpt.load_report(a)) == rpt.stable_view(rpt.load_report(b))


def test_verify_qkm(files, capsys):
    assert main(["verify", files("j.quiver", JORDAN), "--mode", "qkm", "--q", "3", "--charge", "1=2", "--serial"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_qkm_lambda_file(files):
    lam = files("t.lambda", "lambda: 1 0\nlambda: 1 1\n")
    assert main(["verify", files("j.quiver", JORDAN), "--mode", "qkm", "--q", "2", "--lambda-table", lam, "--serial"]) == 0


@pytest.mark.parametrize("extra, frag", [
    (["--lambda-table", "DUP"], "duplicate"),
    (["--charge", "1=3"], "exceeds"),
    (["--charge", "1=x"], "integers"),
])
def test_verify_qkm_config_errors(files, capsys, extra, frag):
    extra = [files("dup.lambda", "lambda: 1 0\nlambda: 1 0\n") if x == "DUP" else x for x in extra]
    assert main(["verify", files("j.quiver", JORDAN), "--mode", "qkm", "--q", "2", *extra]) == 2
    assert frag in capsys.readouterr().err


def test_non_prime_q(files):
    assert main(["verify", files("j.quiver", JORDAN), "--q", "4"]) == 2


def test_identities_exit_status(files, tmp_path):
    q = files("g2.quiver", "vertices: 1\narrow: 1 1\narrow: 1 1\n")
    out = tmp_path / "i.json"
    assert main(["identities", q, "--q", "2", "--lmax", "2", "--serial", "--out", str(out)]) == 0
    rep = rpt.load_report(out)
    assert rep["summary"]["zero"] == rep["summary"]["total"] == 5 * 4
    # the literal variants carry the printed sign and ordering and must fail here
    assert main(["identities", q, "--q", "2", "--lmax", "2", "--variant", "literal", "--serial"]) == 1


def test_identities_parallel_matches_serial(files, tmp_path):
    q = files("j.quiver", JORDAN)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["identities", q, "--q", "2", "--lmax", "2", "--workers", "2", "--out", str(a)]) == 0
    assert main(["identities", q, "--q", "2", "--lmax", "2", "--serial", "--out", str(b)]) == 0
    assert rpt.stable_view(rpt.load_report(a)) == rpt.stable_view(rpt.load_report(b))


def test_parsers():
    assert parse_charge("1=2, 2=1") == {1: 2, 2: 1}
    assert parse_lambda_table("# t\nlambda: 1 0 1\nlambda: 1 1 0\n") == {1: [(0, 1), (1, 0)]}
    assert parse_budget("max_ext=10") == {"max_ext": 10}
    with pytest.raises(ConfigError):
        parse_budget("nope=1")
    with pytest.raises(ConfigError):
        parse_lambda_table("vertex: 1\n")


def test_config_roundtrip():
    cfg = RunConfig("verify", JORDAN, [3], "qkm", 2, {1: 2}, {1: [(0,), (1,)]})
    assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_budget_error_recorded(files, capsys):
    rc = main(["verify", files("c.quiver", LOOP_TO_REAL), "--q", "2", "--lmax", "2", "--serial",
               "--budget", "max_subspaces=1"])
    assert rc == 1
    assert "ERROR" in capsys.readouterr().out
