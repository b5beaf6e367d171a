import gzip
import json
from pathlib import Path

import pytest

from proofbench.calculus import proof_equal
from proofbench.cli import limits_from_env, main
from proofbench.errors import WorkbenchError
from proofbench.exporters import import_proof_json

DATA = Path(__file__).parent / "data"
CHAIN = str(DATA / "chain.lks")

E1_TEXT = (
    "proof e1 proves P |- P {\n"
    "  1: ax(P |- P)\n"
    "  2: ax(P |- P)\n"
    "  root: cut(1, 2, P)\n"
    "}\n"
)


@pytest.fixture
def e1_file(tmp_path):
    f = tmp_path / "e1.lks"
    f.write_text(E1_TEXT)
    return str(f)


def test_check_chain(capsys):
    assert main(["check", CHAIN]) == 0
    out = capsys.readouterr()
    assert out.out == "ok: 1 schema (psi)\n"


def test_check_single_proof(capsys, e1_file):
    assert main(["check", e1_file, "--proof", "e1"]) == 0
    assert capsys.readouterr().out == "ok: 1 proof (e1)\n"


def test_parse_missing_file(capsys):
    assert main(["parse", "missing.lks"]) == 1
    err = capsys.readouterr().err
    assert "no such file" in err


def test_parse_summary(capsys):
    assert main(["parse", CHAIN]) == 0
    out = capsys.readouterr().out
    assert "1 schema (psi)" in out
    assert "A(0)" in out


def test_parse_error_span_reported(tmp_path, capsys):
    f = tmp_path / "broken.lks"
    f.write_text("proof p proves P |- P base { root: ax(P |- ) }\n")
    assert main(["parse", str(f)]) == 1
    err = capsys.readouterr().err
    assert "broken.lks:1:" in err


def test_transform_clauseset(capsys):
    assert main(["transform", CHAIN, "--proof", "psi", "--op", "clauseset", "--n", "1"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l]
    assert lines and all(l.endswith(";") for l in lines)


def test_transform_needs_n_for_schema(capsys):
    assert main(["transform", CHAIN, "--proof", "psi", "--op", "clauseset"]) == 1
    assert "schema" in capsys.readouterr().err


def test_transform_gentzen(capsys, e1_file):
    assert main(["transform", e1_file, "--proof", "e1", "--op", "gentzen"]) == 0
    out = capsys.readouterr().out
    assert out == "[ax] P |- P\n"


def test_transform_cutformulas(capsys, e1_file):
    assert main(["transform", e1_file, "--proof", "e1", "--op", "cutformulas"]) == 0
    assert capsys.readouterr().out == "P\n"


def test_transform_herbrand(capsys):
    f = DATA / "chain.lks"
    assert main(["transform", str(f), "--proof", "psi", "--op", "herbrand", "--n", "1"]) == 0
    out = capsys.readouterr().out
    assert "|-" in out


def test_instantiate_deterministic(capsys):
    assert main(["instantiate", CHAIN, "--proof", "psi", "--n", "2"]) == 0
    first = capsys.readouterr().out
    assert main(["instantiate", CHAIN, "--proof", "psi", "--n", "2"]) == 0
    assert capsys.readouterr().out == first
    assert "[cut]" in first


def test_export_json_roundtrip(tmp_path, capsys, e1_file):
    out_path = tmp_path / "e1.json"
    assert main(["export", e1_file, "--proof", "e1", "--format", "json",
                 "--out", str(out_path)]) == 0
    data = out_path.read_bytes()
    back = import_proof_json(data)
    assert str(back.conclusion) == "P |- P"
    doc = json.loads(data)
    assert doc["formatVersion"] == 1


def test_export_tex(tmp_path, capsys, e1_file):
    out_path = tmp_path / "e1.tex"
    assert main(["export", e1_file, "--proof", "e1", "--format", "tex",
                 "--out", str(out_path)]) == 0
    tex = out_path.read_text()
    assert tex.count("P \\vdash P") == 3 and "cut" in tex


def test_export_tptp(tmp_path, capsys, e1_file):
    out_path = tmp_path / "e1.p"
    assert main(["export", e1_file, "--proof", "e1", "--format", "tptp",
                 "--out", str(out_path)]) == 0
    assert out_path.read_text() == "cnf(c0, axiom, p).\ncnf(c1, axiom, ~p).\n"


def test_gzip_input_accepted(tmp_path, capsys):
    gz = tmp_path / "chain.lks.gz"
    gz.write_bytes(gzip.compress(Path(CHAIN).read_bytes()))
    assert main(["check", str(gz)]) == 0
    assert capsys.readouterr().out == "ok: 1 schema (psi)\n"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as e:
        main(["transform", CHAIN, "--proof", "psi", "--op", "nonsense"])
    assert e.value.code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as e:
        main(["parse", CHAIN, "--frobnicate"])
    assert e.value.code == 2


@pytest.mark.parametrize("sub", ["parse", "check", "instantiate", "transform", "export", "serve"])
def test_every_subcommand_has_help(sub, capsys):
    with pytest.raises(SystemExit) as e:
        main([sub, "--help"])
    assert e.value.code == 0
    assert "usage" in capsys.readouterr().out


def test_limits_env(monkeypatch):
    monkeypatch.setenv("PROOFBENCH_LIMITS", "123,4.5")
    limits = limits_from_env()
    assert limits.max_clauses == 123 and limits.max_seconds == 4.5
    monkeypatch.setenv("PROOFBENCH_LIMITS", "bogus")
    with pytest.raises(WorkbenchError):
        limits_from_env()
