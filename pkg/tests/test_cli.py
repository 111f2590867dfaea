import json

import pytest

from equitrans import GameTransformation, PiecewiseLinear, PowerOddInt
from equitrans.cli import main
from equitrans.serialize import transformation_to_json


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return write


GAME = {"players": 2, "shape": [2, 2], "payoffs": [[1, 2, 3, 4], [5, 6, 7, 8]]}
PAT = {"shape": [2, 2], "pat": {"player 1": {"alpha": "2", "constants": ["1", "0"]}}}


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_apply_pat(files, capsys):
    code, out, _ = _run(capsys, "apply", files("g.json", GAME), files("p.json", PAT))
    assert code == 0
    assert json.loads(out)["payoffs"] == [[3, 4, 7, 8], [5, 6, 7, 8]]


def test_apply_to_file(files, capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, err = _run(capsys, "apply", files("g.json", GAME), files("p.json", PAT), "-o", str(target))
    assert code == 0 and out == "" and "wrote" in err
    assert json.loads(target.read_text())["payoffs"][0] == [3, 4, 7, 8]


def test_check_pat(files, capsys):
    code, out, _ = _run(capsys, "check-pat", files("p.json", PAT))
    assert code == 0 and json.loads(out)["is_pat"]
    cube = transformation_to_json(GameTransformation.uniform((2, 2), PowerOddInt(3)))
    code, out, err = _run(capsys, "check-pat", files("c.json", cube))
    assert code == 1
    assert json.loads(out)["reason"] == "non_affine"
    assert "(1; 1,1)" in err


def test_equiv(files, capsys):
    code, out, _ = _run(capsys, "equiv", files("g.json", GAME), files("p.json", PAT), "--samples", "5")
    assert code == 0 and json.loads(out)["passed"]
    neg = transformation_to_json(GameTransformation.uniform((2, 2), PowerOddInt(3)))
    neg["maps"]["player 1"] = [{"affine": {"a": -1, "c": 0}}] * 4
    code, _, err = _run(capsys, "equiv", files("g.json", GAME), files("n.json", neg), "--samples", "5")
    assert code == 1 and "failed" in err


def test_falsify_exit_codes(files, capsys, monkeypatch):
    cube = files("c.json", transformation_to_json(GameTransformation.uniform((2, 2), PowerOddInt(3))))
    code, out, err = _run(capsys, "falsify", cube)
    assert code == 1 and json.loads(out)["verdict"] == "witness" and "witness via" in err
    code, out, _ = _run(capsys, "falsify", files("p.json", PAT))
    assert code == 0 and json.loads(out)["verdict"] == "is_pat"
    monkeypatch.setenv("EQUITRANS_BUDGET", "2")
    code, out, err = _run(capsys, "falsify", cube)
    assert code == 4 and "inconclusive" in err


def test_falsify_inconclusive_on_grid_evading_map(files, capsys):
    m = PiecewiseLinear((-1, 0, "1/4", "1/2", 1), (-1, 0, 1, "1/2", 1))
    path = files("e.json", transformation_to_json(GameTransformation.uniform((2, 2), m)))
    code, out, _ = _run(capsys, "falsify", path)
    assert code == 4 and json.loads(out)["verdict"] == "no_refutation_found"
    code, _, _ = _run(capsys, "falsify", path, "--grid-refine", "1")
    assert code == 1


def test_solve(files, capsys):
    code, out, err = _run(capsys, "solve", files("g.json", GAME))
    data = json.loads(out)
    assert code == 0 and data["pure_nash"] == [[1, 1]]
    const = {"players": 2, "shape": [2, 2], "payoffs": [[0] * 4, [0] * 4]}
    code, out, err = _run(capsys, "solve", files("k.json", const))
    assert "all pure profiles are NE" in err
    assert json.loads(out)["degenerate_supports"]


def test_parse_and_shape_errors(files, capsys):
    assert _run(capsys, "solve", files("bad.json", "{"))[0] == 2
    assert _run(capsys, "solve", files("m.json", {"shape": [2, 2], "payoffs": [[1]]}))[0] == 2
    wide = {"shape": [2, 3], "pat": {}}
    assert _run(capsys, "apply", files("g.json", GAME), files("w.json", wide))[0] == 3
    assert _run(capsys, "equiv", files("g.json", GAME), files("w.json", wide))[0] == 3
    assert _run(capsys, "solve", files("g.json", GAME), "--profile-budget", "2")[0] == 4
