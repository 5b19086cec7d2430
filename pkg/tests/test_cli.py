import json

import numpy as np
import pytest

from polycomplex.bicomplex import Dot, Square, standard_summand
from polycomplex.cli import fileformat
from polycomplex.cli.main import main
from polycomplex.core import GF, QQ
from polycomplex.sampling import random_module
from polycomplex.tricomplex import Q, Tricomplex
from polycomplex.zigzag import AComplex, build_algebra, projective


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


@pytest.mark.parametrize("kind", ["bicomplex", "tricomplex"])
def test_file_roundtrip(kind, field):
    rng = np.random.default_rng(7)
    lo, hi = ((-1, -1), (1, 1)) if kind == "bicomplex" else ((-1, -1, -1), (1, 1, 1))
    from polycomplex.bicomplex import Bicomplex
    cls = Bicomplex if kind == "bicomplex" else Tricomplex
    M = random_module(cls, field, rng, lo, hi, max_dim=2)
    text = fileformat.serialize(M)
    k, back = fileformat.parse(text)
    assert k == kind and back == M
    assert fileformat.serialize(back) == text


def test_acomplex_roundtrip():
    alg = build_algebra(GF, -2, 2)
    P = AComplex.from_module(projective(alg, 0, 0)).shift(1, -1)
    k, back = fileformat.parse(fileformat.serialize(P))
    assert k == "acomplex" and back == P


@pytest.mark.parametrize("bad", [
    "",
    "gradedmod v2\n",
    "gradedmod v1\nfield p:7\nkind bicomplex\narity 2\ndim 0,0 x\nend\n",
    "gradedmod v1\nfield p:7\nkind bicomplex\narity two\nend\n",
    "gradedmod v1\nfield p:7\nkind bicomplex\narity 2\ndim 0,0 -1\nend\n",
    "gradedmod v1\nfield p:7\nkind bicomplex\narity 2\ndim (0,0) 1\nend\n",
    "gradedmod v1\nfield p:7\nkind bicomplex\narity 2\ndim 0,0 1\ndim 1,0 1\n"
    "map d1 0,0 1x1\n1 2\nend\n",
    "gradedmod v1\nfield p:7\nkind bicomplex\narity 2\ndim 0,0 1\n",
])
def test_malformed_files_rejected(bad):
    with pytest.raises(fileformat.FormatError):
        fileformat.parse(bad)


def test_square_file_census(tmp_path, capsys):
    path = tmp_path / "sq.gm"
    fileformat.save(standard_summand(Square(0, 0), QQ), path)
    code, rep, _ = run(capsys, "decompose", path)
    assert code == 0
    assert rep["result"]["summands"] == ["Square@(0,0) x1"]


def test_dot_file_census(tmp_path, capsys):
    path = tmp_path / "dot.gm"
    fileformat.save(standard_summand(Dot(2, -1), GF), path)
    code, rep, _ = run(capsys, "decompose", path)
    assert code == 0 and rep["result"]["summands"] == ["Dot@(2,-1) x1"]


def test_random_decompose_espage_tot(tmp_path, capsys):
    path = tmp_path / "b.gm"
    assert run(capsys, "random", "bicomplex", "--seed", 3, "--out", path)[0] == 0
    for argv in (("decompose", path), ("espage", path, "--page", 1), ("espage", path, "--page", 2),
                 ("tot", path)):
        code, rep, _ = run(capsys, *argv)
        assert code == 0 and rep["passed"]


def test_reports_are_deterministic(tmp_path, capsys):
    path = tmp_path / "t.gm"
    run(capsys, "random", "tricomplex", "--seed", 1, "--max-dim", 2, "--out", path)
    main(["braid", str(path), "--word", "0,1"])
    first = capsys.readouterr().out
    main(["braid", str(path), "--word", "0,1"])
    assert capsys.readouterr().out == first
    main(["verify", "tl", "--trials", "2", "--seed", "4"])
    a = capsys.readouterr().out
    main(["verify", "tl", "--trials", "2", "--seed", "4"])
    assert capsys.readouterr().out == a


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "decompose", tmp_path / "missing.gm")[0] == 2
    bad = tmp_path / "bad.gm"
    bad.write_text("not a module\n")
    assert run(capsys, "tot", bad)[0] == 2
    assert run(capsys, "verify", "nosuch")[0] == 2
    assert run(capsys, "verify", "homtable", "--window", "3:1")[0] == 2
    tri = tmp_path / "q.gm"
    fileformat.save(Q(GF), tri)
    # a tricomplex is not a bicomplex
    assert run(capsys, "decompose", tri)[0] == 2
    assert run(capsys, "braid", tri, "--word", "0,x")[0] == 2


def test_inverse_letters_rejected_on_complex_side(tmp_path, capsys):
    path = tmp_path / "p.gm"
    alg = build_algebra(GF, -3, 3)
    fileformat.save(AComplex.from_module(projective(alg, 0, 0)), path)
    code, _, err = run(capsys, "braid", path, "--word", "-0", "--side", "complex")
    assert code == 2 and "tricomplex" in err


def test_failing_suite_exits_one(monkeypatch, capsys):
    from polycomplex.tricomplex import functors
    monkeypatch.setattr(functors, "OUT_SIGNS", [1, 1, 1, 1])
    code, rep, _ = run(capsys, "verify", "inverse", "--trials", "3")
    assert code == 1 and rep["result"]["failed"] > 0


def test_braid_fingerprints(tmp_path, capsys):
    path = tmp_path / "m.gm"
    run(capsys, "random", "tricomplex", "--seed", 2, "--max-dim", 2, "--out", path)

    def fp(word):
        code, rep, _ = run(capsys, "braid", path, "--word", word)
        assert code == 0
        return rep["result"]["fingerprint"]

    assert fp("0,1,0") == fp("1,0,1")
    assert fp("0,2") == fp("2,0")
    assert fp("0,-0") == fp("")


def test_empty_word_gives_input_fingerprint(tmp_path, capsys):
    from polycomplex.cli.harness import _fingerprint_json
    from polycomplex.tricomplex import fingerprint
    path = tmp_path / "q.gm"
    fileformat.save(Q(GF, (1, 0, 0)), path)
    code, rep, _ = run(capsys, "braid", path, "--word", "")
    assert code == 0
    assert rep["result"]["fingerprint"] == _fingerprint_json(fingerprint(Q(GF, (1, 0, 0))))


def test_complex_side_matches_tricomplex_side(tmp_path, capsys):
    path = tmp_path / "p.gm"
    alg = build_algebra(GF, -4, 4)
    fileformat.save(AComplex.from_module(projective(alg, 0, 0)), path)
    a = run(capsys, "braid", path, "--word", "0,1", "--side", "complex")[1]
    b = run(capsys, "braid", path, "--word", "0,1", "--side", "tricomplex")[1]
    assert a["result"]["fingerprint"] == b["result"]["fingerprint"]


def test_verify_homtable_cli(capsys):
    code, rep, _ = run(capsys, "verify", "homtable", "--window", "-2:2")
    assert code == 0 and rep["result"]["failed"] == 0
    assert rep["inputs"]["window"] == [-2, 2]
