"""Command-line interface: exit codes, document shapes, determinism."""

import io
import json
import subprocess
import sys

import pytest

from khext.cli import run

import conftest


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def jdoc(capsys, *argv):
    code, out, _ = call(capsys, *argv)
    return code, json.loads(out)


def path(corpus_dir, name):
    return str(corpus_dir / name)


def test_classify_document(capsys, corpus_dir):
    code, doc = jdoc(capsys, "classify", path(corpus_dir, "trefoil_right.pd"))
    assert code == 0
    assert doc["schema"] == "khext/1"
    assert doc["report"]["n"] == 3
    assert doc["report"]["one_adequate"] is True


def test_homology_both_functors_agree(capsys, corpus_dir):
    code, doc = jdoc(
        capsys, "homology", "--functor", "both", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 0
    assert doc["agree"] is True
    assert doc["j"] == 7
    assert doc["groups"]["F"] == doc["groups"]["M"] == {"3": {"free": 0, "torsion": [2]}}


def test_homology_max_grading(capsys, corpus_dir):
    code, doc = jdoc(
        capsys, "homology", "--grading", "max", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 0
    assert doc["groups"]["X"] == {"3": {"free": 1, "torsion": []}}


def test_homology_specific_j_uses_oracle(capsys, corpus_dir):
    code, doc = jdoc(
        capsys, "homology", "--grading", "j=9", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 0
    assert doc["groups"]["oracle"] == {"3": {"free": 1, "torsion": []}}


def test_homology_j_grading_needs_pd(capsys, corpus_dir):
    code, _, err = call(
        capsys, "homology", "--grading", "j=1", path(corpus_dir, "altpair.cd")
    )
    assert code == 1
    assert err


def test_missing_file_is_input_error(capsys):
    code, _, err = call(capsys, "classify", "no/such/file.pd")
    assert code == 1
    assert err


def test_malformed_pd_is_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.pd"
    bad.write_text("PD[X[1,2,3,4]]\n")
    code, _, err = call(capsys, "classify", str(bad))
    assert code == 1


def test_crossing_guard_exit_code(capsys, corpus_dir):
    code, _, err = call(
        capsys, "classify", "--max-crossings", "2", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 3
    assert "crossing" in err.lower()


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"))
    code, doc = jdoc(capsys, "classify", "-")
    assert code == 0
    assert doc["report"]["n"] == 3


def test_extreme_document(capsys, corpus_dir):
    code, doc = jdoc(capsys, "extreme", path(corpus_dir, "t3_4.pd"))
    assert code == 0
    assert doc["lando"]["shape"] == ["cycle", 8]
    assert doc["duality"]["agree"] is True
    assert doc["independence"]["reduced_homology"] == {"2": {"free": 1, "torsion": []}}


def test_decompose_document(capsys, corpus_dir):
    code, doc = jdoc(capsys, "decompose", path(corpus_dir, "figure_eight.pd"))
    assert code == 0
    assert doc["cofibre"]["ok"] is True
    assert doc["cofibre"]["degree_shift"] == 0


def test_skein_document_and_bad_chord(capsys, corpus_dir):
    code, doc = jdoc(
        capsys, "skein", "--chord", "0", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 0
    assert doc["skein"]["kind"] == "bichord"
    assert set(doc["skein"]["sequences"]) == {"M"}
    code, _, err = call(
        capsys, "skein", "--chord", "9", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 1


def test_simplify_document(capsys, corpus_dir):
    code, doc = jdoc(capsys, "simplify", path(corpus_dir, "diskdisk_2.cd"))
    assert code == 0
    assert doc["suspensions"] == 0
    assert doc["moves"] == []
    assert doc["reduced"]["n"] == 8
    assert "circle" in doc["reduced"]["text"]


def test_verify_selected_checks(capsys, corpus_dir):
    code, doc = jdoc(
        capsys,
        "verify",
        "--checks",
        "d_squared,gamma",
        path(corpus_dir, "trefoil_right.pd"),
    )
    assert code == 0
    (entry,) = doc["files"]
    assert entry["checks"]["d_squared"] == {"ok": True}
    assert entry["checks"]["gamma"] == {"ok": True}


def test_verify_all_and_checks_are_exclusive(capsys, corpus_dir):
    code, _, _ = call(
        capsys,
        "verify",
        "--all",
        "--checks",
        "gamma",
        path(corpus_dir, "trefoil_right.pd"),
    )
    assert code == 1


def test_verify_unknown_check_name(capsys, corpus_dir):
    code, _, err = call(
        capsys, "verify", "--checks", "nonsense", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 1


def test_oracle_document(capsys, corpus_dir):
    code, doc = jdoc(
        capsys, "oracle", "--j", "7", path(corpus_dir, "trefoil_right.pd")
    )
    assert code == 0
    assert doc["khovanov"] == {"7": {"3": {"free": 0, "torsion": [2]}}}


def test_tsv_output_is_flat(capsys, corpus_dir):
    code, out, _ = call(
        capsys, "classify", "--format", "tsv", path(corpus_dir, "hopf_pos.pd")
    )
    assert code == 0
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert all(len(r) == 2 for r in rows)
    keys = [r[0] for r in rows]
    assert "schema" in keys
    assert any(k.startswith("report.") for k in keys)
    assert keys == sorted(keys)


def test_byte_determinism(capsys, corpus_dir):
    a = call(capsys, "decompose", path(corpus_dir, "figure_eight.pd"))
    b = call(capsys, "decompose", path(corpus_dir, "figure_eight.pd"))
    assert a == b


def test_directory_walk_and_jobs(capsys, corpus_dir, tmp_path):
    sub = tmp_path / "mini"
    sub.mkdir()
    for name in ("unknot.pd", "hopf_pos.pd"):
        (sub / name).write_text((corpus_dir / name).read_text())
    code, doc = jdoc(
        capsys, "verify", "--checks", "d_squared,gamma", "--jobs", "2", str(sub)
    )
    assert code == 0
    assert [e["file"] for e in doc["files"]] == sorted(e["file"] for e in doc["files"])
    assert len(doc["files"]) == 2


def test_console_script_entry_point(corpus_dir):
    out = subprocess.run(
        [sys.executable, "-m", "khext.cli", "classify", str(corpus_dir / "unknot.pd")],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["report"]["n"] == 0
