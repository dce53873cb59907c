import json

import pytest

from kj.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_homology_unknot(capsys):
    code, out, _ = run_cli(capsys, "homology", "unknot", "--theory", "kh")
    assert code == 0
    assert "i =   0, q =   1: rank 1" in out
    assert "i =   0, q =  -1: rank 1" in out


def test_homology_trefoil_lee_rank(capsys):
    code, out, _ = run_cli(capsys, "homology", "trefoil", "--theory", "lee", "--ring", "Q")
    assert code == 0
    assert "rank 2" in out


def test_homology_trefoil_torsion(capsys):
    code, out, _ = run_cli(capsys, "homology", "trefoil", "--theory", "kh", "--ring", "Z")
    assert code == 0
    assert "torsion Z/2" in out


def test_movie_numbers(capsys):
    for name, n in (("torus.movie", 2), ("sphere.movie", 0), ("genus2.movie", 0)):
        code, out, _ = run_cli(capsys, "movie", name)
        assert code == 0
        assert f"n = {n}" in out


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.pd"
    bad.write_text("PD[X(1,2,3)]")
    code, _, err = run_cli(capsys, "homology", str(bad))
    assert code == 1 and "parse error" in err
    invalid = tmp_path / "invalid.pd"
    invalid.write_text("PD[X(1,1,1,2)]")
    code, _, err = run_cli(capsys, "homology", str(invalid))
    assert code == 2 and "validation error" in err
    movie = tmp_path / "bad.movie"
    movie.write_text(json.dumps({"initial": "empty", "moves": [{"type": "death", "edge": 7}]}))
    code, _, err = run_cli(capsys, "movie", str(movie))
    assert code == 4 and "illegal move" in err


def test_lee_rejects_characteristic_two(capsys):
    code, _, err = run_cli(capsys, "homology", "trefoil", "--theory", "lee", "--ring", "Fp:2")
    assert code == 2


def test_json_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "--format", "json", "movie", "torus.movie")
    code2, out2, _ = run_cli(capsys, "--format", "json", "movie", "torus.movie")
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["schema"] == 1 and payload["n"] == 2


def test_generators_json(capsys):
    code, out, _ = run_cli(capsys, "--format", "json", "generators", "unknot")
    assert code == 0
    payload = json.loads(out)
    assert payload["basis_ok"] and payload["rank"] == 2
    labels = {tuple(g["labels"]) for g in payload["generators"]}
    assert labels == {("a",), ("b",)}


def test_verify_suite_cli(capsys):
    code, out, _ = run_cli(capsys, "verify", "euler-oracle")
    assert code == 0
    assert "checks passed" in out


def test_open_movie_prints_matrix(capsys):
    import json as _json
    import tempfile, os

    movie = {"initial": "PD[O]", "moves": [
        {"type": "saddle", "edges": [1, 1]},
        {"type": "saddle", "edges": [1, 2]},
    ]}
    with tempfile.NamedTemporaryFile("w", suffix=".movie", delete=False) as f:
        _json.dump(movie, f)
        path = f.name
    try:
        code, out, _ = run_cli(capsys, "movie", path)
        assert code == 0
        assert "induced map on homology" in out
        assert "euler characteristic: -2" in out
    finally:
        os.unlink(path)
