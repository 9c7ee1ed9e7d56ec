import json
import shutil

import pytest

from shcalc import __version__, cli

LINEAR_COUNTS = "".join(f"{t} {t}\n" for t in range(1, 5000, 7))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_ball(capsys):
    code, out, _ = run(capsys, "eval", "ball(5)")
    assert code == 0 and out.splitlines()[0] == "SH = 0"


def test_json_document(capsys):
    code, out, _ = run(capsys, "eval", "csum(axiom(ramanujam), axiom(ramanujam))", "--output", "json")
    doc = json.loads(out)
    assert code == 0 and doc["version"] == __version__ and doc["command"] == "eval"
    assert doc["result"]["value"]["kind"] == "nonzero"


@pytest.mark.parametrize("argv", [
    ("eval", "ball("),
    ("eval", "ball(2) ball(3)"),
    ("nosuch",),
    ("ss", "--case", "klein"),
    ("e1", "--case", "ball(2)", "--window", "3..1"),
    ("eval", "ball(2)", "--field", "fp:4"),
])
def test_parse_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


@pytest.mark.parametrize("argv", [
    ("eval", "handle(ball(2), 5)"),
    ("eval", "csum(ball(2), ball(3))"),
    ("eval", "prod(surface(1), surface(2))"),
])
def test_computation_errors_exit_3(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and "computation failed" in err


def test_ss_matches_golden(capsys):
    code, out, _ = run(capsys, "ss", "--case", "s2_equivariant")
    assert code == 0
    assert out == cli.golden_path("s2_equivariant").read_text()


def test_e1_window_flag(capsys):
    code, out, _ = run(capsys, "e1", "--case", "ball(3)", "--window=-16..0", "--output", "json")
    assert code == 0
    res = json.loads(out)["result"]
    assert res is not None


def test_growth_linear_profile(capsys):
    code, out, _ = run(capsys, "growth", "--torus-profile", "linear", "--tau-max", "10000", "--output", "json")
    assert code == 0
    assert abs(float(json.loads(out)["result"]["exponent"]) - 2) < 0.05


def test_growth_counts_file(tmp_path, capsys):
    f = tmp_path / "counts.txt"
    f.write_text(LINEAR_COUNTS)
    code, out, _ = run(capsys, "growth", "--counts", str(f), "--output", "json")
    assert code == 0
    assert abs(float(json.loads(out)["result"]["exponent"]) - 1) < 0.05
    f.write_text("1 2 3\n")
    assert run(capsys, "growth", "--counts", str(f))[0] == 2


def test_mc_subcommand(tmp_path, capsys):
    f = tmp_path / "discs.txt"
    f.write_text("1 0 1 1\n-1 0 1 1\n")
    code, out, _ = run(capsys, "mc", str(f), "--trunc", "20", "--output", "json")
    res = json.loads(out)["result"]
    assert code == 0 and res["status"] == "essential"
    assert run(capsys, "mc", str(tmp_path / "missing.txt"))[0] == 2


def test_selftest_passes_and_is_deterministic(capsys):
    code, first, _ = run(capsys, "selftest", "--seed", "7", "--output", "json", "--cases", "10")
    assert code == 0
    _, second, _ = run(capsys, "selftest", "--seed", "7", "--output", "json", "--cases", "10")
    assert first == second


def test_selftest_golden_mismatch_exit_4(tmp_path, monkeypatch, capsys):
    shutil.copytree(cli.GOLDEN_DIR, tmp_path / "golden")
    monkeypatch.setattr(cli, "GOLDEN_DIR", tmp_path / "golden")
    (tmp_path / "golden" / "ball_3.txt").write_text("tampered\n")
    code, _, _ = run(capsys, "selftest", "--cases", "2")
    assert code == 4
    assert run(capsys, "selftest", "--cases", "2", "--regen-golden")[0] == 0
    assert run(capsys, "selftest", "--cases", "2")[0] == 0
