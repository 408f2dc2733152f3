import json
import shutil
import subprocess
import sys

import pytest

from compcycle.cli import main
from compcycle.dsl import parse
from conftest import SPECS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- check ------------------------------------------------------------------------------

def test_passing_claim_exits_zero(capsys):
    code, out, _ = run(capsys, "check", str(SPECS / "adder_claim.catspec"))
    assert code == 0
    assert "PASS  claim computes (compute)" in out
    assert out.rstrip().endswith("all checks passed")


def test_broken_decode_exits_one_with_stage(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "check", str(SPECS / "broken_decode.catspec"),
                       "--json", str(report))
    assert code == 1
    assert "FAIL  claim computes (compute): stage inverse-pair" in out
    data = json.loads(report.read_text())
    assert data["ok"] is False
    claim = data["claims"][0]
    assert claim["stage"] == "inverse-pair" and claim["counterexample_count"] >= 1
    assert claim["witnesses"][0]["axiom"].startswith("INVERSE_")


def test_syntax_error_exits_two_with_location(capsys, tmp_path):
    bad = tmp_path / "bad.catspec"
    bad.write_text("category c {\n  objects: a\n  mor f a -> a\n}\n")
    code, out, err = run(capsys, "check", str(bad))
    assert code == 2
    assert f"{bad}:3:9: error E003" in err


def test_missing_file_exits_two(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.catspec"))
    assert code == 2 and "cannot read" in err


def test_bad_budget_exits_two(capsys):
    code, _, _ = run(capsys, "check", str(SPECS / "interval.catspec"), "--max-witnesses", "0")
    assert code == 2


def test_unknown_subcommand_exits_two(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


@pytest.mark.parametrize("path", sorted(SPECS.glob("*.catspec")), ids=lambda p: p.name)
def test_corpus_exit_codes(capsys, path):
    want = 1 if path.name == "broken_decode.catspec" else 0
    assert run(capsys, "check", str(path))[0] == want


def test_json_is_byte_identical_across_runs(capsys, tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"{i}.json"
        run(capsys, "check", str(SPECS / "realizability.catspec"), "--json", str(p))
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert b"wall_time" not in outs[0]


def test_timing_adds_wall_time(capsys, tmp_path):
    p = tmp_path / "t.json"
    code, out, _ = run(capsys, "check", str(SPECS / "interval.catspec"), "--timing",
                       "--json", str(p))
    assert code == 0 and " in " in out.splitlines()[-1]
    assert json.loads(p.read_text())["wall_time"] >= 0


def test_audit_line_reports_counts(capsys):
    _, out, _ = run(capsys, "check", str(SPECS / "audit_demo.catspec"))
    assert "simple=3 functorial=0 strict=true" in out


def test_color_forced_on_and_off(capsys, monkeypatch):
    path = str(SPECS / "interval.catspec")
    monkeypatch.setenv("COMPCYCLE_COLOR", "always")
    assert "\033[32m" in run(capsys, "check", path)[1]
    monkeypatch.setenv("COMPCYCLE_COLOR", "never")
    assert "\033[" not in run(capsys, "check", path)[1]


# -- fixtures --------------------------------------------------------------------------------

def test_fixture_unsupported_base_exits_two(capsys):
    code, _, err = run(capsys, "fixtures", "adder", "--base", "3")
    assert code == 2 and "UNSUPPORTED_BASE" in err


def test_chain_fixture(capsys):
    code, out, _ = run(capsys, "fixtures", "chain", "--len", "3")
    assert code == 0
    lts = parse(out).get("lts", "chain")
    assert lts.states == ("s0", "s1", "s2") and len(lts.transitions) == 2


def test_adder_fixture_contains_sum_arrow(capsys):
    code, out, _ = run(capsys, "fixtures", "adder", "--base", "10", "--width", "2")
    assert code == 0
    assert 'mor "add_6,9": "6,9" -> "15"' in out


def test_fixture_written_to_file(capsys, tmp_path):
    p = tmp_path / "demo.catspec"
    assert run(capsys, "fixtures", "audit-demo", "--out", str(p))[0] == 0
    assert run(capsys, "check", str(p))[0] == 0


# -- render ----------------------------------------------------------------------------------

def test_render_interval(capsys, tmp_path):
    code, _, _ = run(capsys, "render", str(SPECS / "interval.catspec"), "--select", "interval",
                     "--out", str(tmp_path))
    assert code == 0
    dot = (tmp_path / "interval.dot").read_text()
    nodes = {line.split()[0] for line in dot.splitlines()
             if line.strip().startswith('"') and "->" not in line}
    assert nodes == {'"a"', '"b"'}


def test_render_claim_and_nattrans(capsys, tmp_path):
    code, _, _ = run(capsys, "render", str(SPECS / "adjunction.catspec"), "--select", "unit",
                     "--out", str(tmp_path))
    assert code == 0 and (tmp_path / "unit.dot").exists()
    code, _, _ = run(capsys, "render", str(SPECS / "adder_claim.catspec"), "--select",
                     "computes", "--out", str(tmp_path))
    assert code == 0 and (tmp_path / "computes.dot").exists()


def test_render_unknown_name_exits_two(capsys, tmp_path):
    code, _, err = run(capsys, "render", str(SPECS / "interval.catspec"), "--select",
                       "missing", "--out", str(tmp_path))
    assert code == 2 and "missing" in err


# -- installed entry point -----------------------------------------------------------------

def test_console_script():
    exe = shutil.which("compcycle")
    cmd = [exe] if exe else [sys.executable, "-m", "compcycle.cli"]
    done = subprocess.run(cmd + ["--version"], capture_output=True, text=True)
    assert done.returncode == 0 and "compcycle" in done.stdout
