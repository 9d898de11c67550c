from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_unitary
from utforms import io
from utforms.cli import main
from utforms.linalg import eigenvalues


def run(capsys, *argv) -> tuple[int, dict | None, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@pytest.fixture
def write(tmp_path):
    def _write(name: str, a) -> str:
        path = tmp_path / name
        io.write_matrix(path, np.asarray(a, dtype=complex))
        return str(path)

    return _write


def test_gen_is_deterministic(capsys, tmp_path):
    code, doc, _ = run(capsys, "gen", "triangular", "--n", "2", "--seed", "0")
    assert code == 0 and doc["n"] == 2 and len(doc["data"]) == 4
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "gen", "spectral", "--n", "8", "--seed", "7", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_near_defective_gap(capsys):
    _, doc, _ = run(capsys, "gen", "near-defective", "--n", "4", "--seed", "1")
    lam = eigenvalues(io.matrix_from_json(doc))
    gaps = np.abs(lam[:, None] - lam[None, :]) + np.diag([np.inf] * 4)
    assert 1e-4 * 0.99 <= gaps.min() <= 1e-2 * 1.01


def test_gen_commuting_pair_writes_two_files(capsys, tmp_path):
    code, doc, _ = run(capsys, "gen", "commuting-pair", "--n", "5", "--out", str(tmp_path / "pair.json"))
    assert code == 0
    assert [p.rsplit("/", 1)[-1] for p in doc["files"]] == ["pair.N.json", "pair.Q.json"]
    n_mat, q = (io.read_matrix(p) for p in doc["files"])
    assert np.linalg.norm(n_mat @ q - q @ n_mat) <= 1e-12 * np.linalg.norm(n_mat) * np.linalg.norm(q)


def test_seed_from_environment(capsys, monkeypatch):
    _, explicit, _ = run(capsys, "gen", "triangular", "--n", "3", "--seed", "42")
    monkeypatch.setenv("UTF_SEED", "42")
    _, from_env, _ = run(capsys, "gen", "triangular", "--n", "3")
    assert explicit == from_env
    _, flag_wins, _ = run(capsys, "gen", "triangular", "--n", "3", "--seed", "0")
    assert flag_wins != from_env
    monkeypatch.setenv("UTF_SEED", "x")
    assert run(capsys, "gen", "triangular", "--n", "3")[0] == 2


def test_gen_bad_arguments(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gen", "triangular", "--n", "1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["gen", "square", "--n", "3"])
    assert info.value.code == 2


def test_decompose(capsys, write, tmp_path):
    code, doc, _ = run(capsys, "decompose", write("t.json", [[1, 1], [0, 2]]))
    assert code == 0
    n_mat = io.matrix_from_json(doc["decomposition"]["N"])
    q = io.matrix_from_json(doc["decomposition"]["Q"])
    np.testing.assert_allclose(n_mat, np.diag([1, 2]), atol=1e-15)
    np.testing.assert_allclose(q, [[0, 1], [0, 0]], atol=1e-15)
    assert doc["summary"]["q_nilpotent"] is True

    u = random_unitary(0, 4)
    normal = write("normal.json", (u * np.array([1, 2, 3j, -1])) @ u.conj().T)
    _, doc, _ = run(capsys, "decompose", normal)
    assert doc["summary"]["q_norm"] <= 1e-9

    out = tmp_path / "d.json"
    _, summary, _ = run(capsys, "decompose", write("nil.json", [[0, 1], [0, 0]]), "--out", str(out))
    assert summary["n_norm"] == 0.0
    assert summary["brown"] == {"atoms": [{"re": 0.0, "im": 0.0, "num": 2, "den": 2}]}
    assert list(json.loads(out.read_text())) == ["N", "Q", "flag", "order"]


def test_calc(capsys, write):
    t = write("t.json", [[1, 1], [0, 2]])
    _, doc, _ = run(capsys, "calc", t, "--fn", "z^2")
    np.testing.assert_allclose(io.matrix_from_json(doc), [[1, 3], [0, 4]], atol=1e-10)
    _, doc, _ = run(capsys, "calc", t, "--fn", "1", "--method", "schur")
    np.testing.assert_allclose(io.matrix_from_json(doc), np.eye(2), atol=1e-14)
    d = write("d.json", np.diag([1, 2]))
    code, doc, err = run(capsys, "calc", d, "--fn", "1/(z-3)", "--method", "both")
    assert code == 0
    np.testing.assert_allclose(io.matrix_from_json(doc), np.diag([-0.5, -1]), atol=1e-10)
    assert "cross-method residual" in err


def test_calc_with_contour_file(capsys, write, tmp_path):
    contour = tmp_path / "c.json"
    contour.write_text(json.dumps({"circles": [{"center": [1.5, 0], "radius": 2, "nodes": 64}]}))
    _, doc, _ = run(capsys, "calc", write("d.json", np.diag([1, 2])), "--fn", "z", "--contour", str(contour))
    np.testing.assert_allclose(io.matrix_from_json(doc), np.diag([1, 2]), atol=1e-10)


def test_calc_errors(capsys, write, tmp_path):
    t = write("t.json", [[1, 1], [0, 3]])
    assert run(capsys, "calc", t, "--fn", "1/(z-3)")[0] == 2
    assert run(capsys, "calc", t, "--fn", "sin(z)")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "data": [[1, 0]]')
    code, doc, err = run(capsys, "calc", str(bad), "--fn", "z")
    assert code == 2 and doc is None and "error" in err


def test_verify(capsys, tmp_path):
    inst = tmp_path / "t.json"
    run(capsys, "gen", "triangular", "--n", "6", "--seed", "3", "--out", str(inst))
    report = tmp_path / "r.json"
    code, summary, _ = run(capsys, "verify", str(inst), "--fn", "z^2", "--report", str(report))
    assert code == 0 and summary["ok"] and summary["failed"] == 0
    assert "timings" not in json.loads(report.read_text())


def test_verify_skips_on_nilpotent(capsys, write):
    code, doc, _ = run(capsys, "verify", write("nil.json", [[0, 1], [0, 0]]), "--fn", "exp(z)")
    assert code == 0
    status = {c["name"]: c["status"] for c in doc["checks"]}
    assert status["multiplicative_form"] == "skipped"


def test_verify_failure_exit_code(capsys, write):
    code, doc, _ = run(capsys, "--tol-scale", "1e-300", "verify", write("t.json", [[1, 1], [0, 2]]), "--fn", "exp(z)")
    assert code == 1
    failed = [c for c in doc["checks"] if c["status"] == "failed"]
    assert failed and all("inputs" in c for c in failed)


def test_verify_corrupted_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    assert run(capsys, "verify", str(bad), "--fn", "z")[0] == 2


def test_tol_scale_must_be_positive(capsys, write):
    with pytest.raises(SystemExit) as info:
        main(["--tol-scale", "0", "brown", write("t.json", np.eye(2))])
    assert info.value.code == 2


def test_brown(capsys, write):
    _, doc, _ = run(capsys, "brown", write("d.json", np.diag([1, 2])))
    assert doc["atoms"] == [
        {"re": 1.0, "im": 0.0, "num": 1, "den": 2},
        {"re": 2.0, "im": 0.0, "num": 1, "den": 2},
    ]
    assert doc["fk_determinant"] == pytest.approx(1.41421356, abs=1e-8)
    _, doc, _ = run(capsys, "brown", write("nil.json", [[0, 1], [0, 0]]))
    assert doc["fk_determinant"] == 0.0 and len(doc["atoms"]) == 1
    _, doc, _ = run(capsys, "brown", write("u.json", random_unitary(2, 5)))
    assert doc["fk_determinant"] == pytest.approx(1.0, rel=1e-14)


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "utforms", "gen", "spectral", "--n", "3", "--seed", "1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["n"] == 3
    assert out.stderr == ""
