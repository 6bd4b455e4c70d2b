import json
import shutil
from importlib.resources import files

import pytest

from cagemip.cli import EXIT_MALFORMED, EXIT_OK, EXIT_REFUTED, main

SQUARE_PROBLEM = files("cagemip") / "data" / "square.problem"


@pytest.fixture(scope="module")
def square_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("square")
    problem = out / "square.problem"
    shutil.copy(SQUARE_PROBLEM, problem)
    code = main(["synthesize", str(problem), "--solver", "highs", "--theta-step", "3"])
    return code, out


def test_synthesize_bundled_square(square_run, capsys):
    code, out = square_run
    assert code == EXIT_OK
    assert (out / "square.certificate.json").exists()
    assert (out / "square.svg").read_text().startswith("<svg")


def test_verify_accepts_then_rejects_a_mutilated_certificate(square_run, tmp_path, capsys):
    _, out = square_run
    cert = out / "square.certificate.json"
    assert main(["verify", str(cert), "--theta-step", "3"]) == EXIT_OK
    doc = json.loads(cert.read_text())
    doc["fingers"] = doc["fingers"][:-1]
    doc["loop"] = doc["loop"][:-1]
    bad = tmp_path / "three.certificate.json"
    bad.write_text(json.dumps(doc, indent=2))
    assert main(["verify", str(bad), "--theta-step", "3"]) == EXIT_REFUTED
    assert "escapes" in capsys.readouterr().out


def test_render_command(square_run, tmp_path, capsys):
    _, out = square_run
    target = tmp_path / "fig.svg"
    assert main(["render", str(out / "square.certificate.json"), "--out", str(target)]) == EXIT_OK
    assert target.read_bytes() == (out / "square.svg").read_bytes()
    assert main(["render", str(out / "square.certificate.json"), "--out",
                 str(tmp_path / "nope" / "x.svg")]) == EXIT_MALFORMED


def test_malformed_problem_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.problem"
    bad.write_text('{\n  "schema": "cagemip.problem/1",\n  "outline": [[0, 0], [1, 0]],\n'
                   '  "q": [0, 0, 0],\n  "fingers": 4\n}\n')
    assert main(["synthesize", str(bad)]) == EXIT_MALFORMED
    assert f"{bad}:3:" in capsys.readouterr().err
    assert main(["verify", str(tmp_path / "missing.json")]) == EXIT_MALFORMED


def test_suite_prints_table_and_median(capsys):
    code = main(["suite", "--count", "10", "--vertices", "3", "4", "--solver", "highs", "--timeout", "3",
                 "--no-verify"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 12
    assert [ln.split()[0] for ln in lines[1:11]] == [str(k) for k in range(10)]
    assert "median solve time" in lines[-1]
