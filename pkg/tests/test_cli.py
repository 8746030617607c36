import os

import pytest

from compositum.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_search_found(capsys, tmp_path):
    out_file = str(tmp_path / "cert.txt")
    code, out, _ = run(capsys, "search", "--field", "GF(3)", "--f1", "x^2",
                       "--f2", "x^3+x^2+x", "--bound", "18",
                       "--output", out_file)
    assert code == 0
    assert "degree 18" in out
    code, out, _ = run(capsys, "verify", out_file)
    assert code == 0 and "VALID" in out


def test_search_divergent_pair(capsys):
    code, out, _ = run(capsys, "search", "--field", "GF(2)", "--f1", "x^2-x",
                       "--f2", "x^3-x^2", "--bound", "64")
    assert code == 2
    assert "2,3,4,6,8,12,16,24,32,48,64,96" in out


def test_search_same_inputs(capsys):
    code, out, _ = run(capsys, "search", "--field", "GF(2)", "--f1", "x^3+x",
                       "--f2", "x^3+x")
    assert code == 0
    assert "degree 3" in out


def test_search_machine_format_deterministic(capsys):
    args = ("search", "--field", "GF(3)", "--f1", "x^2", "--f2", "x^3+x^2+x",
            "--bound", "18", "--format", "machine", "--seed", "5")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "outcome=found" in out1
    assert "h=x^18-x^14-x^6+x^2" in out1


def test_analyze_not_exists(capsys, tmp_path):
    out_file = str(tmp_path / "ref.txt")
    code, out, _ = run(capsys, "analyze", "--field", "GF(2)", "--f1", "x^2-x",
                       "--f2", "x^3-x^2", "--bound", "32",
                       "--output", out_file, "--format", "machine")
    assert code == 1
    assert "verdict=not_exists" in out
    code, out, _ = run(capsys, "verify", out_file)
    assert code == 0


def test_analyze_exists(capsys):
    code, out, _ = run(capsys, "analyze", "--field", "GF(3)", "--f1", "x^2",
                       "--f2", "x^3+x^2+x", "--bound", "18")
    assert code == 0 and "exists" in out


def test_analyze_rationals_decisive(capsys):
    code, out, _ = run(capsys, "analyze", "--field", "QQ", "--f1", "x^2",
                       "--f2", "(x-1)^2")
    assert code == 1
    assert "not_exists" in out


def test_refute_and_verify(capsys, tmp_path):
    out_file = str(tmp_path / "ref.txt")
    code, out, _ = run(capsys, "refute", "--field", "GF(2)", "--f1", "x^2+x",
                       "--f2", "x^3+x^2", "--output", out_file)
    assert code == 0
    assert "multiplicity_cycle" in out
    code, out, _ = run(capsys, "verify", out_file, "--format", "machine")
    assert code == 0 and "valid=true" in out


def test_refute_absent(capsys):
    code, out, _ = run(capsys, "refute", "--field", "GF(2)", "--f1", "x^2+x",
                       "--f2", "x^6+x")
    assert code == 1
    assert "no refutation" in out


def test_verify_tampered(capsys, tmp_path):
    out_file = str(tmp_path / "cert.txt")
    run(capsys, "search", "--field", "GF(3)", "--f1", "x^2",
        "--f2", "x^3+x^2+x", "--bound", "18", "--output", out_file)
    text = open(out_file).read().replace("minimal=true", "minimal=true") \
        .replace("g1=x^9-x^7-x^3+x", "g1=x^9-x^7-x^3+x^2")
    with open(out_file, "w") as fh:
        fh.write(text)
    code, out, _ = run(capsys, "verify", out_file)
    assert code == 1 and "INVALID" in out


def test_fiber_command(capsys):
    code, out, _ = run(capsys, "fiber", "--field", "GF(2)", "--f1", "x^2-x",
                       "--f2", "x^3-x^2", "--seed-point", "0")
    assert code == 0
    assert "inconsistent" in out


def test_fiber_command_consistent(capsys):
    code, out, _ = run(capsys, "fiber", "--field", "GF(3)", "--f1", "x^2",
                       "--f2", "x^3+x^2+x", "--seed-point", "0",
                       "--format", "machine")
    assert code == 0
    assert "labeling=consistent" in out
    assert "ambient=GF(3^2)" in out


def test_dickson_command(capsys):
    code, out, _ = run(capsys, "dickson", "3", "1", "--field", "QQ")
    assert code == 0 and out.strip() == "x^3-3*x"
    code, out, _ = run(capsys, "dickson", "2", "w", "--field",
                       "GF(2^2; m=t^2+t+1)")
    assert code == 0 and out.strip() == "x^2"


def test_gen_corpus(capsys, tmp_path):
    out_file = str(tmp_path / "corpus.txt")
    code, out, _ = run(capsys, "gen-corpus", "--out", out_file, "--seed", "1")
    assert code == 0
    from compositum.certio import read_corpus
    recs = read_corpus(out_file)
    assert len(recs) >= 10
    tags = {r["family"] for r in recs}
    assert "cyclic_additive" in tags and "tame_dickson" in tags


def test_usage_errors(capsys):
    code, _, err = run(capsys, "search", "--field", "GF(4)", "--f1", "x",
                       "--f2", "x")
    assert code == 3
    code, _, err = run(capsys, "search", "--field", "GF(2)", "--f1", "x^",
                       "--f2", "x")
    assert code == 3
    code, _, err = run(capsys, "search", "--f1", "x", "--f2", "x")
    assert code == 3
    code, _, err = run(capsys, "nonsense")
    assert code == 3


def test_config_file_and_env_seed(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("field=GF(3)\nf1=x^2\nf2=x^3+x^2+x\nbound=18\n")
    code, out, _ = run(capsys, "search", "--config", str(cfg))
    assert code == 0 and "degree 18" in out
    monkeypatch.setenv("COMPOSITUM_SEED", "9")
    code, out, _ = run(capsys, "search", "--config", str(cfg),
                       "--format", "machine")
    assert code == 0 and "seed=9" in out

def test_io_error_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "gen-corpus", "--out",
                       str(tmp_path / "nodir" / "x.txt"))
    assert code == 4
