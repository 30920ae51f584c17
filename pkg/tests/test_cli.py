"""CLI: pipeline reproducibility, diagnostics, exit codes."""
from __future__ import annotations

import pathlib

import pytest
from click.testing import CliRunner

from fluentkb.cli import main

from conftest import FIXTURES, KBNS, RES

RESOURCES = [
    ("skos", RES + "linguistics", "skos-linguistics.ttl"),
    ("terminology", RES + "terminology-1896", "terminology-1896.ttl"),
    ("terminology", RES + "terminology-1905", "terminology-1905.ttl"),
    ("owl", RES + "people", "people.ttl"),
    ("owl", RES + "letters", "letters.ttl"),
]


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, db, *args, expect=0):
    result = runner.invoke(main, ["--db", str(db), *args])
    assert result.exit_code == expect, result.output
    return result


def build_pipeline(runner, db):
    for kind, rid, name in RESOURCES:
        run(runner, db, "import", "--kind", kind, "--id", rid, str(FIXTURES / name))
    run(runner, db, "align", str(FIXTURES / "alignments.csv"))
    infer = run(runner, db, "infer", "--rules", str(FIXTURES / "saussure.rules"))
    index = run(runner, db, "index",
                "--transcriptions", str(FIXTURES / "transcriptions.jsonl"))
    return infer, index


def test_pipeline_end_to_end(runner, tmp_path):
    db = tmp_path / "kb.nq"
    infer, index = build_pipeline(runner, db)
    assert "new fluents: 3" in infer.output
    assert "inferred writing times: 1" in infer.output
    assert "proposed associations: 2" in index.output
    check = run(runner, db, "check")
    assert "no clashes" in check.output


def test_pipeline_runs_are_byte_identical(runner, tmp_path):
    exports = []
    for n in (1, 2):
        db = tmp_path / f"kb{n}.nq"
        build_pipeline(runner, db)
        out = tmp_path / f"export{n}.nq"
        run(runner, db, "export", str(out))
        exports.append(out.read_bytes())
    assert exports[0] == exports[1]


def test_infer_rerun_adds_nothing(runner, tmp_path):
    db = tmp_path / "kb.nq"
    build_pipeline(runner, db)
    again = run(runner, db, "infer", "--rules", str(FIXTURES / "saussure.rules"))
    assert "new fluents: 0" in again.output
    assert "new static triples: 0" in again.output


def test_import_syntax_error_reports_position(runner, tmp_path):
    bad = tmp_path / "bad.ttl"
    bad.write_text('@prefix : <http://e.org/> .\n:x :p .\n', encoding="utf-8")
    result = runner.invoke(main, ["--db", str(tmp_path / "kb.nq"), "import",
                                  "--kind", "owl", "--id", "http://e.org/r", str(bad)])
    assert result.exit_code == 1
    assert f"{bad}:2:" in result.output


def test_import_clash_rejected(runner, tmp_path):
    db = tmp_path / "kb.nq"
    clashing = tmp_path / "clash.ttl"
    clashing.write_text(
        "@prefix : <http://e.org/> .\n"
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
        ":x a :C1 . :x a :C2 .\n"
        ":C1 owl:disjointWith :C2 .\n",
        encoding="utf-8")
    result = runner.invoke(main, ["--db", str(db), "import", "--kind", "owl",
                                  "--id", "http://e.org/r", str(clashing)])
    assert result.exit_code == 1
    assert "disjoint_types" in result.output
    assert not db.exists()


def test_check_exits_nonzero_on_clash(runner, tmp_path):
    db = tmp_path / "kb.nq"
    db.write_text(
        "<http://e.org/p> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> "
        "<http://www.w3.org/2002/07/owl#FunctionalProperty> <http://e.org/g> .\n"
        '<http://e.org/s> <http://e.org/p> "1" <http://e.org/g> .\n'
        '<http://e.org/s> <http://e.org/p> "2" <http://e.org/g> .\n',
        encoding="utf-8")
    result = runner.invoke(main, ["--db", str(db), "check"])
    assert result.exit_code == 1
    assert "functional_conflict" in result.output


def test_query_patterns(runner, tmp_path):
    db = tmp_path / "kb.nq"
    build_pipeline(runner, db)
    result = run(runner, db, "query", f"? <{KBNS}inferredWritingTime> ? ?")
    assert result.output.count("\n") == 1
    assert "m3" in result.output
    prefixed = run(runner, db, "query", ":m3 :inferredWritingTime ? ?")
    assert prefixed.output == result.output
    usage = runner.invoke(main, ["--db", str(db), "query", "a b"])
    assert usage.exit_code == 2


def test_missing_file_is_usage_error(runner, tmp_path):
    result = runner.invoke(main, ["--db", str(tmp_path / "kb.nq"), "align",
                                  str(tmp_path / "absent.csv")])
    assert result.exit_code == 2
