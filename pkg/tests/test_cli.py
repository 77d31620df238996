import io
import json
import subprocess
import sys

import pytest

from amass import acceptance, cli


def run(argv, capsys=None):
    out = io.StringIO()
    code = cli.run_command(argv, stdout=out)
    return code, out.getvalue()


def test_mass_example():
    code, out = run(["mass", "--poly", "1,0,0,1,1", "--prime", "3"])
    assert code == 0
    assert json.loads(out) == {"total_mass": "1", "evenly_ramified": False}
    assert out == '{"total_mass": "1", "evenly_ramified": false}\n'


def test_mass_pm_and_precision():
    code, out = run(["--precision", "3:4", "mass", "--poly", "1,0,2,0,4", "--prime", "3", "--pm"])
    assert code == 0
    assert json.loads(out) == {"total_mass": "2", "evenly_ramified": True,
                               "m_plus": "1", "m_minus": "0"}


def test_avg_example():
    code, out = run(["avg", "--n", "4", "--r1", "2", "--r2", "1"])
    data = json.loads(out)
    assert code == 0
    assert list(data) == ["cl2", "cl2_plus", "cl2_star", "note"]
    assert data["cl2_star"] == "7/4" and data["cl2"] == "11/8"


def test_avg_csv_and_trace():
    code, out = run(["--format", "csv", "avg", "--n", "4", "--r1", "0", "--r2", "2", "--ram", "3:1/2"])
    assert code == 0 and out.splitlines()[1] == "4,0,2,3:1/2,5/2,5/2,5"
    code, out = run(["avg", "--n", "4", "--r1", "2", "--r2", "1", "--trace"])
    assert ["2^(r1+r2)+4", "12"] in json.loads(out)["trace"]["oriented"]


def test_rationals_are_reduced_strings():
    code, out = run(["genus", "--so-order", "--n", "4", "--k", "2"])
    data = json.loads(out)
    assert data["ratio"] == "1/3" and data["match"] is True


@pytest.mark.parametrize("argv,fragment", [
    (["mass", "--poly", "1,0,x,1", "--prime", "3"], "position 2"),
    (["genus", "--matrix", "1,0;0,q"], "row 1, column 1"),
    (["mass", "--poly", "1,0,-9", "--prime", "3"], "maximal"),
    (["avg", "--n", "4", "--r1", "2", "--r2", "2"], "incompatible"),
    (["avg", "--n", "4", "--r1", "2", "--r2", "1", "--ram", "3=1"], "p:r"),
    (["verify", "--suite", "42"], "unknown criterion"),
    (["gauss"], "needs"),
])
def test_usage_errors(argv, fragment, capsys):
    code, _ = run(argv)
    assert code == 2
    assert fragment in capsys.readouterr().err


def test_argparse_errors_exit_two():
    assert run(["bogus"])[0] == 2
    assert run(["mass", "--prime", "3"])[0] == 2
    assert run(["--workers", "0", "gauss", "--disc", "-4"])[0] == 2


def test_verification_failure_exits_one(monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", [(1, "always fails", lambda: (False, {}))])
    code, out = run(["verify", "--suite", "1"])
    assert code == 1 and json.loads(out)["passed"] is False


def test_output_is_deterministic():
    argv = ["gauss", "--survey", "-100", "100"]
    assert run(argv) == run(argv)


def test_verify_workers_do_not_change_report():
    a = run(["--workers", "1", "verify", "--suite", "4,6,8"])
    b = run(["--workers", "3", "verify", "--suite", "8,6,4"])
    assert a == b and a[0] == 0
    assert json.loads(a[1])["table"][0].startswith("criterion  4 PASS")


def test_cache_hit_on_second_run(tmp_path, monkeypatch):
    path = tmp_path / "cache.jsonl"
    argv = ["--cache", str(path), "genus", "--so-order", "--n", "4", "--k", "2"]
    first = run(argv)
    assert len(path.read_text().splitlines()) == 1
    calls = []
    monkeypatch.setattr(cli, "cmd_genus", lambda a, c: calls.append(1))
    monkeypatch.setitem(cli.COMMANDS, "genus", cli.cmd_genus)
    assert run(argv) == first and calls == []
    rec = json.loads(path.read_text())
    assert rec["version"] and rec["timestamp"]


def test_no_cache_flag_skips_journal(tmp_path):
    path = tmp_path / "cache.jsonl"
    run(["--cache", str(path), "--no-cache", "gauss", "--disc", "-15"])
    assert not path.exists()


def test_recompute_detects_tampered_value(tmp_path, capsys):
    path = tmp_path / "cache.jsonl"
    argv = ["--cache", str(path), "gauss", "--disc", "-15"]
    run(argv)
    rec = json.loads(path.read_text())
    rec["value"][0]["h"] = 99
    path.write_text(json.dumps(rec) + "\n")
    assert json.loads(run(argv)[1])["h"] == 99            # served from cache
    code, _ = run(["--recompute"] + argv)
    assert code == 1 and "cache corruption" in capsys.readouterr().err


def test_recompute_agrees_with_good_cache(tmp_path):
    path = tmp_path / "cache.jsonl"
    argv = ["--cache", str(path), "gauss", "--disc", "21"]
    first = run(argv)
    assert run(["--recompute"] + argv) == first
    assert len(path.read_text().splitlines()) == 1


def test_conflicting_entries_abort(tmp_path, capsys):
    path = tmp_path / "cache.jsonl"
    argv = ["--cache", str(path), "gauss", "--disc", "-15"]
    run(argv)
    line = path.read_text()
    rec = json.loads(line)
    rec["value"][0]["h"] = 3
    path.write_text(line + json.dumps(rec) + "\n")
    code, _ = run(argv)
    assert code == 1 and "conflicting" in capsys.readouterr().err


def test_version_mismatch_recomputes(tmp_path):
    path = tmp_path / "cache.jsonl"
    argv = ["--cache", str(path), "gauss", "--disc", "-15"]
    run(argv)
    rec = json.loads(path.read_text())
    rec["version"] = "0.0.0-old"
    rec["value"][0]["h"] = 77
    path.write_text(json.dumps(rec) + "\n")
    code, out = run(argv)
    assert code == 0 and json.loads(out)["h"] == 2
    assert len(path.read_text().splitlines()) == 2


def test_cache_unreadable_line(tmp_path, capsys):
    path = tmp_path / "cache.jsonl"
    path.write_text("{not json\n")
    assert run(["--cache", str(path), "gauss", "--disc", "-4"])[0] == 1


def test_config_file_and_flag_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "amass.cfg"
    cfg.write_text("# defaults\nformat = csv\nbudget = 1000\nprecision = 2:9\n")
    monkeypatch.setenv("AMASS_CONFIG", str(cfg))
    code, out = run(["avg", "--n", "4", "--r1", "4", "--r2", "0"])
    assert code == 0 and out.startswith("n,r1,r2")
    code, out = run(["--format", "json", "avg", "--n", "4", "--r1", "4", "--r2", "0"])
    assert json.loads(out)["cl2_plus"] == "5/2"
    c = cli.load_config(str(cfg))
    assert (c.budget, c.precision, c.format) == (1000, {2: 9}, "csv")


def test_config_errors(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(["--config", str(cfg), "gauss", "--disc", "-4"])[0] == 2
    cfg.write_text("budget = -5\n")
    assert run(["--config", str(cfg), "gauss", "--disc", "-4"])[0] == 2


def test_enumerate_and_cusp_commands():
    code, out = run(["enumerate", "--n", "4", "--X", "1", "--count"])
    assert code == 0 and json.loads(out)["count"] == 81
    code, out = run(["enumerate", "--n", "2", "--X", "1"])
    assert len(json.loads(out)["polynomials"]) == 9
    code, out = run(["cusp", "--n", "6"])
    assert code == 0 and json.loads(out)["checked"] == 19


def test_genus_subcommands():
    assert json.loads(run(["genus", "--canonical", "4", "-", "1"])[1])["matrix"] == \
        "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,-1"
    assert json.loads(run(["genus", "--c-inf", "4", "4"])[1])["c_inf_0"] == 2
    data = json.loads(run(["genus", "--matrix", "1,0,0,0;0,1,0,0;0,0,-1,0;0,0,0,-1"])[1])
    assert data["label"] == "M_-1"


def test_gauss_check():
    code, out = run(["gauss", "--check", "-500", "-1"])
    assert code == 0 and json.loads(out)["passed"] is True


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "amass", "gauss", "--disc", "-15"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["h"] == 2
