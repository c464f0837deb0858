from __future__ import annotations

import json
import random
import subprocess
import sys

import pytest

from eulercalc import cli
from eulercalc import generate as gen
from eulercalc.cli import cf_to_document, data_path, document_to_cf, load, main, save
from eulercalc.constructible import AffineCF
from eulercalc.errors import ConsistencyError, ValidationError
from eulercalc.projective import embed_eim

from .conftest import interval


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name: str, doc: dict) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


# documents


def test_save_load_round_trip(tmp_path):
    for cf in (interval(0, 1), gen.random_cf(random.Random(0), 2, 4),
               embed_eim(gen.triangle((0, 0), (2, 0), (0, 2)))):
        path = tmp_path / "f.json"
        save(cf, path)
        assert load(path) == cf
        # saving again is byte-identical
        first = path.read_text()
        save(load(path), path)
        assert path.read_text() == first


def test_zero_cells_may_be_omitted():
    doc = cf_to_document(interval(0, 1))
    explicit = dict(doc, cells=doc["cells"] + [{"signs": "++", "value": 0}])
    assert document_to_cf(explicit) == document_to_cf(doc)


def test_rationals_and_form_order_are_free():
    doc = {"kind": "affine", "dim": 1, "forms": [["-2", "4/3"]], "cells": [{"signs": "-", "value": 1}]}
    # -2x + 4/3 < 0  <=>  x > 2/3
    phi = document_to_cf(doc)
    assert phi((1,)) == 1 and phi((0,)) == 0


@pytest.mark.parametrize("signs,fragment", [
    ("+", "length 1, expected 2"),
    ("+x", "position 1"),
])
def test_corrupted_sign_strings(signs, fragment):
    doc = cf_to_document(interval(0, 1))
    doc["cells"][0]["signs"] = signs
    with pytest.raises(ValidationError, match=fragment):
        document_to_cf(doc)


def test_unrealizable_cell_is_named():
    doc = cf_to_document(interval(0, 1))
    doc["cells"] = [{"signs": "+-", "value": 1}]  # x > 1 and x < 0
    with pytest.raises(ValidationError, match=r"cell 0: sign vector '\+-'"):
        document_to_cf(doc)


def test_projective_documents_are_validated():
    doc = cf_to_document(embed_eim(interval(0, 1)))
    odd = dict(doc, cells=doc["cells"][:1])
    with pytest.raises(ValidationError, match="evenness"):
        document_to_cf(odd)
    no_coord = dict(doc, forms=[f for f in doc["forms"] if f != ["1", "0"]], cells=[])
    with pytest.raises(ValidationError, match="coordinate form"):
        document_to_cf(no_coord)


@pytest.mark.parametrize("doc", [
    {"kind": "spherical", "dim": 1},
    {"kind": "affine", "dim": 1, "forms": [["1", "2", "3"]]},
    {"kind": "affine", "dim": 1, "forms": [["0", "2"]]},
    {"kind": "affine", "dim": 1, "forms": [["0.5", "2"]]},
    {"kind": "affine", "dim": 1, "forms": [["1", "0"], ["2", "0"]], "cells": [{"signs": "+-", "value": 1}]},
    {"kind": "affine", "dim": 1, "forms": [["1", "0"]],
     "cells": [{"signs": "+", "value": 1}, {"signs": "+", "value": 2}]},
])
def test_malformed_documents(doc):
    with pytest.raises(ValidationError):
        document_to_cf(doc)


# commands


def test_integrate_shipped_open_interval(capsys):
    code, out, _ = run_cli(capsys, "integrate", "--input", str(data_path("interval_open.json")))
    assert code == 0 and out.strip() == "-1"


def test_radon_invert_shipped_triangle(capsys):
    code, out, _ = run_cli(capsys, "radon-invert", "--input", str(data_path("triangle.json")))
    assert code == 0 and out.strip() == "equal: true"


def test_scalar_commands(capsys):
    closed = str(data_path("interval_closed.json"))
    assert run_cli(capsys, "integrate-np", "--input", closed)[1].strip() == "1"
    assert run_cli(capsys, "eval", "--input", closed, "--point", "1/2")[1].strip() == "1"
    body = str(data_path("cube_with_hole.json"))
    assert run_cli(capsys, "slice-eval", "--input", body, "--plane", "0,0,1,-3/2")[1].strip() == "0"
    assert run_cli(capsys, "betti-slice", "--input", body, "--plane", "0,0,1,-3/2")[1] == "b0: 1\nb1: 1\n"


def test_function_commands(tmp_path, capsys):
    closed = str(data_path("interval_closed.json"))
    out = str(tmp_path / "d.json")
    assert run_cli(capsys, "dual", "--input", closed, "--output", out)[0] == 0
    assert load(out) == -interval(0, 1, ">", "<")
    assert run_cli(capsys, "add", "--input", closed, "--input2", out, "--output", out)[0] == 0
    assert load(out) == interval(0, 0) + interval(1, 1)
    assert run_cli(capsys, "convolve", "--input", closed, "--input2", closed, "--output", out)[0] == 0
    assert load(out) == interval(0, 2)
    assert run_cli(capsys, "gamma-project", "--input", closed, "--gamma", str(data_path("half_line.json")),
                   "--output", out)[0] == 0
    assert load(out) == interval(None, 1)
    tri = str(data_path("triangle_affine.json"))
    assert run_cli(capsys, "push", "--input", tri, "--map", str(data_path("projection.json")),
                   "--output", out)[0] == 0
    assert load(out) == interval(0, 2)
    assert run_cli(capsys, "embed", "--input", tri, "--output", out)[0] == 0
    proj = out
    out2 = str(tmp_path / "r.json")
    assert run_cli(capsys, "restrict", "--input", proj, "--chart", "3", "--output", out2)[0] == 0
    assert load(out2) == load(tri)


def test_stdout_output_is_a_document(capsys):
    code, out, _ = run_cli(capsys, "dual", "--input", str(data_path("interval_open.json")))
    assert code == 0
    assert document_to_cf(json.loads(out)) == -interval(0, 1)


def test_output_is_deterministic(tmp_path, capsys):
    tri = str(data_path("triangle.json"))
    texts = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        run_cli(capsys, "radon", "--input", tri, "--output", str(out))
        texts.append(out.read_text())
    assert texts[0] == texts[1]


def test_exit_codes(tmp_path, capsys, monkeypatch):
    closed = str(data_path("interval_closed.json"))
    assert run_cli(capsys, "integrate", "--input", str(tmp_path / "missing.json"))[0] == 1
    bad = write(tmp_path, "bad.json", {"kind": "affine", "dim": 1, "forms": [["1"]]})
    code, _, err = run_cli(capsys, "integrate", "--input", bad)
    assert code == 1 and "form 0" in err
    code, _, err = run_cli(capsys, "convolve", "--input", closed, "--input2", closed, "--max-cells", "2")
    assert code == 2 and "resource error" in err
    assert any(ch.isdigit() for ch in err)

    def broken(*a, **k):
        raise ConsistencyError("forced")

    monkeypatch.setattr(cli, "integrate", broken)
    assert run_cli(capsys, "integrate", "--input", closed)[0] == 3


def test_missing_flag_is_a_validation_error(capsys):
    code, _, err = run_cli(capsys, "eval", "--input", str(data_path("interval_closed.json")))
    assert code == 1 and "--point" in err


def test_check_suite_small_scale(capsys):
    code, out, _ = run_cli(capsys, "check-suite", "--scale", "0.05")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("checks passed")
    assert "FAIL" not in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "eulercalc.cli", "integrate", "--input",
                          str(data_path("interval_open.json"))], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "-1"


def test_affine_only_commands_reject_projective(capsys):
    code, _, err = run_cli(capsys, "integrate-np", "--input", str(data_path("triangle.json")))
    assert code == 1
