import json
import subprocess
import sys

from rbx.catalog import get_entry
from rbx.cli import main
from rbx.operators import export_operator


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_show(capsys):
    code, out = run(capsys, "show", "6-IV")
    assert code == 0 and "six-tuple: (5, 6, 3, 3, 1, 3)" in out


def test_show_json(capsys):
    code, out = run(capsys, "--format", "json", "show", "M3.8-I")
    data = json.loads(out)
    assert code == 0 and data["rb"] and data["fingerprint"]["six_tuple"][:2] == [5, 5]


def test_format_after_subcommand(capsys):
    code, out = run(capsys, "show", "M2.M5", "--format", "json")
    assert json.loads(out)["id"] == "M2.M5"


def test_unknown_entry(capsys):
    assert main(["show", "nope"]) == 2


def test_conjugate_with_expectation(capsys):
    code, out = run(capsys, "conjugate", "M3.6-IV", "--morph", "phi12*phi12", "--expect", "M3.6-IV")
    assert code == 0 and "equals M3.6-IV: True" in out
    code, out = run(capsys, "conjugate", "M3.6-IV", "--morph", "phi12", "--expect", "M3.6-IV")
    assert code == 1


def test_bad_morphism(capsys):
    assert main(["conjugate", "M3.6-IV", "--morph", "phi12*wat"]) == 2


def test_check_file(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text(export_operator(get_entry("M3.2-I").operator))
    assert main(["check", str(good)]) == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("operator X on M2 weight 1\nR(e11) = e22\n")
    code, out = run(capsys, "check", str(bad))
    assert code == 1 and "FAILS" in out


def test_export_roundtrips(capsys, tmp_path):
    code, out = run(capsys, "catalog", "export")
    blocks = [b for b in out.split("\n\n") if b.strip()]
    assert code == 0 and len(blocks) == 36 + 7 + 18 + 25 + 5 + 5
    f = tmp_path / "one.txt"
    f.write_text(blocks[-1])
    assert main(["check", str(f)]) == 0


def test_search_f3_json(capsys):
    code, out = run(capsys, "search", "f3", "--format", "json", "--no-timing")
    data = json.loads(out)
    assert code == 0 and data["report"]["candidates"] == 19683 and "timing" not in data


def test_search_m2_budget_exit_code(capsys):
    code, _ = run(capsys, "search", "m2", "--budget-sec", "0")
    assert code == 1


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "rbx.cli", "verify-catalog", "--format", "json", "--no-timing"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["report"]["green"] is True
