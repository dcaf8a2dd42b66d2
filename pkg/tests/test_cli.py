from pathlib import Path

import pytest

from esk.cli import BROKEN, OK, REJECTED, main

PROGRAMS = Path(__file__).parent / "programs"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def test_run_writes_trace(files, tmp_path, capsys):
    prog = files("p.esk", "input a;\noutput o;\npause ; if a then emit o end")
    inputs = files("in.txt", "a=-\na=+\n")
    trace = tmp_path / "trace.txt"
    for engine in ("cbs", "css", "micro", "lbs"):
        assert main(["run", "--engine", engine, "--program", prog, "--inputs", inputs,
                     "--trace", str(trace)]) == OK
        assert trace.read_text(encoding="utf-8") == "a=- ⊢ o=- | 1\na=+ ⊢ o=+ | 0\n"
    assert "a=+ ⊢ o=+ | 0" in capsys.readouterr().out


def test_run_rejection(capsys):
    code = main(["run", "--program", str(PROGRAMS / "noncausal.esk"), "--explain"])
    out = capsys.readouterr().out
    assert code == REJECTED
    assert out.startswith("instant 0 ")
    assert "rejected: non-causal" in out
    assert "# Must/Can under" in out


def test_run_explain(files, capsys):
    prog = files("p.esk", "output o;\n!o")
    assert main(["run", "--program", prog, "--explain"]) == OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == " ⊢ o=+ | 0"
    assert "Must" in out


def test_step_trace_and_dot(files, tmp_path, capsys):
    prog = files("p.esk", "output o;\npause ; emit o")
    dot = tmp_path / "nf.dot"
    assert main(["run", "--engine", "micro", "--program", prog, "--step-trace",
                 "--dump-dot", str(dot)]) == OK
    out = capsys.readouterr().out
    assert "#1 rule=" in out
    assert dot.read_text(encoding="utf-8").startswith("digraph micro {")
    assert main(["run", "--program", prog, "--step-trace"]) == REJECTED


@pytest.mark.parametrize("name, expected", [
    ("deadlock.esk", "deadlock under {}: 0 LBS reactions"),
    ("nondeterministic.esk", "nondeterministic under {}: 2 LBS reactions"),
    ("noncausal.esk", "non-causal under {}: 1 LBS reaction"),
])
def test_check_pathological(name, expected, capsys):
    assert main(["check", str(PROGRAMS / name)]) == REJECTED
    assert capsys.readouterr().out.startswith(expected)


def test_check_constructive(files, capsys):
    assert main(["check", files("p.esk", "input a;\noutput o;\na ? !o : 0")]) == OK
    assert capsys.readouterr().out == "constructive\n"


def test_bad_input(files, capsys):
    assert main(["check", files("p.esk", "1 ;; 0")]) == REJECTED
    assert main(["run", "--program", "/nonexistent/p.esk"]) == REJECTED
    assert "error:" in capsys.readouterr().err


def test_difftest_command(capsys):
    assert main(["difftest", "--seed", "1", "--count", "3", "--depth", "3"]) == OK
    assert capsys.readouterr().out.rstrip().endswith("OK")


def test_difftest_reports_breakage(capsys):
    from esk.mutants import delta_drop

    with delta_drop():
        code = main(["difftest", "--count", "30", "--no-shrink"])
    assert code == BROKEN
    assert "[structure]" in capsys.readouterr().out
