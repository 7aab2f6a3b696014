import subprocess
import sys

import pytest

from feq.cli import EXIT_ERROR, EXIT_OK, EXIT_UNSUPPORTED, main
from feq.problem import corpus_dir


def test_solve_bundled_problem(capsys):
    assert main(["solve", "U91", "--template", "linear"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "{a = 1, b = 0} or {a = 1, b = 1}" in out


def test_solve_file(tmp_path, capsys):
    path = tmp_path / "mine.feq"
    path.write_text("problem Mine\nassert forall x y . f(x + y) = f(x) + f(y)\nsolution f(x) = 3*x\n")
    assert main(["solve", str(path), "--template", "mlinear", "--report", "csv"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Mine,lazy,unknown,proven,mlinear,{a in R},no" in out


def test_unsupported_only_exit_code(capsys):
    assert main(["solve", "U2"]) == EXIT_UNSUPPORTED
    assert "unsupported: order side-condition" in capsys.readouterr().out


def test_mixed_corpus_exits_zero(capsys):
    assert main(["solve", "corpus"]) == EXIT_OK


def test_bad_input_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.feq"
    path.write_text("problem Bad\nassert forall x . f(x) = x/2\n")
    assert main(["solve", str(path)]) == EXIT_ERROR
    assert "division" in capsys.readouterr().err
    assert main(["solve", "NoSuchProblem"]) == EXIT_ERROR
    assert main(["solve", "U3", "--solver", "missing-equals"]) == EXIT_ERROR


def test_emit_and_report_dir(tmp_path, capsys):
    emit, report = tmp_path / "emit", tmp_path / "report"
    code = main(["solve", str(corpus_dir()), "--emit", str(emit), "--report-dir", str(report), "--legacy-uniteq", "--all-templates"])
    assert code == EXIT_OK
    names = {p.name for p in emit.iterdir()}
    assert {"Eq1.find.smt2", "Eq1.prove.smt2", "Eq1.check1.smt2", "Eq1.unique.smt2", "U25.mlinear.p", "U25.mlinear.wm"} <= names
    assert "U2.linear.second.tv.smt2" in names
    assert not any(n.startswith("U2.") and n.endswith(".p") for n in names)
    for name in ("templates.csv", "summary.csv", "templates.txt", "summary.txt", "templates.png", "timings.png"):
        assert (report / name).stat().st_size > 0
    assert (report / "templates.png").read_bytes()[:4] == b"\x89PNG"
    assert (report / "templates.csv").read_text().splitlines()[0] == "problem,c,ax,ax+b,ax^2,ax^2+bx+c"


def test_config_file_and_solver_flags(tmp_path, monkeypatch, capsys):
    stub = tmp_path / "answer-unsat"
    stub.write_text(f"#!{sys.executable}\nprint('unsat')\n")
    stub.chmod(0o755)
    monkeypatch.setenv("FEQ_SOLVER_PATH", str(tmp_path))
    cfg = tmp_path / "solvers.cfg"
    cfg.write_text("timeout = 10\nsolver.stub = answer-unsat {file}\n")
    assert main(["solve", "C1", "--template", "mquad", "--config", str(cfg), "--report", "csv"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "C1,lazy,proven,proven,mquad,{a = 1},yes" in out
    assert main(["solve", "C1", "--mode", "eager", "--solver", "stub=answer-unsat", "--template", "mquad", "--report", "csv"]) == EXIT_OK
    assert "C1,eager,proven,proven,mquad,{a = 1},yes" in capsys.readouterr().out


def test_invalid_template_name():
    with pytest.raises(SystemExit):
        main(["solve", "U3", "--template", "cubic"])


def test_list(capsys):
    assert main(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "U91" in out and "x + 1" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "feq", "solve", "U24", "--template", "constant"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "{c = 0}" in proc.stdout


def test_parallel_jobs(capsys):
    assert main(["solve", "corpus", "-j", "4", "--report", "csv"]) == EXIT_OK
    rows = capsys.readouterr().out.split("\n\n")[1].splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["C1", "C12", "Eq1", "U2", "U24", "U25", "U3", "U87", "U91"]
