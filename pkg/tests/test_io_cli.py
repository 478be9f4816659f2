import json

import numpy as np
import pytest

from colligations import io
from colligations import linalg as la
from colligations.cli import main
from colligations.core import Shape, conjugate, neutral, random_colligation, random_inner
from colligations.errors import ModeError, ShapeError
from colligations.scalars import EXACT, FLOAT


def write(tmp_path, name, C):
    path = tmp_path / name
    path.write_text(io.dumps(io.colligation_to_json(C)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("mode", [EXACT, FLOAT])
def test_roundtrip_is_bit_exact(mode):
    for seed in range(5):
        C = random_colligation(Shape(2, 2, 2), mode=mode, seed=seed)
        text = io.dumps(io.colligation_to_json(C))
        D = io.colligation_from_json(io.loads(text))
        assert D.mode == mode and D.shape == C.shape
        if mode == EXACT:
            assert D == C
        else:
            assert np.array_equal(D.entries, C.entries)
        assert io.dumps(io.colligation_to_json(D)) == text


def test_scalar_forms():
    assert io.scalar_from_json("3/4-1/2*i") == io.scalar_from_json("3/4-1/2*i", EXACT)
    assert io.scalar_from_json([1.5, -2.0]) == complex(1.5, -2.0)
    with pytest.raises(ModeError):
        io.scalar_from_json([1.0, 0.0], EXACT)
    with pytest.raises(ModeError):
        io.scalar_from_json("1", FLOAT)
    with pytest.raises(ShapeError):
        io.matrix_from_json([[1], [1, 2]])


def test_bad_documents():
    doc = io.colligation_to_json(random_colligation(Shape(1, 1, 1), mode=EXACT, seed=0))
    with pytest.raises(ShapeError):
        io.colligation_from_json({**doc, "N": 2})
    with pytest.raises(ShapeError):
        io.colligation_from_json({**doc, "mode": "symbolic"})
    with pytest.raises(ShapeError):
        io.colligation_from_json({"alpha": 1})


def test_random_is_deterministic(capsys):
    args = ("random", "--alpha", "1", "--m", "2", "--N", "2", "--seed", "7")
    code, first, _ = run(capsys, *args)
    assert code == 0
    _, second, _ = run(capsys, *args)
    assert first == second
    _, other, _ = run(capsys, *args[:-1], "8")
    assert other != first
    doc = json.loads(first)
    assert (doc["alpha"], doc["m"], doc["N"], doc["mode"]) == (1, 2, 2, "exact")


def test_random_float_and_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("COLLIG_SEED", "5")
    _, a, _ = run(capsys, "--mode", "float", "random", "--alpha", "1", "--m", "1", "--N", "1")
    _, b, _ = run(capsys, "random", "--alpha", "1", "--m", "1", "--N", "1", "--mode", "float", "--seed", "5")
    assert a == b
    monkeypatch.setenv("COLLIG_SEED", "x")
    code, _, err = run(capsys, "random", "--alpha", "1", "--m", "1", "--N", "1")
    assert code == 2 and "COLLIG_SEED" in err


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "random", "--alpha", "1", "--m", "2", "--N", "1", "--flavor", "unitary")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "product", str(tmp_path / "missing.json"), "x")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "divisor", str(bad))[0] == 2


def test_product_with_neutral(capsys, tmp_path):
    g = random_colligation(Shape(2, 2, 2), mode=EXACT, seed=1)
    gp, ep = write(tmp_path, "g.json", g), write(tmp_path, "e.json", neutral(2, 2))
    code, out, _ = run(capsys, "product", gp, ep)
    assert code == 0
    assert io.colligation_from_json(json.loads(out)) == g


def test_charfn_identity_and_det_check(capsys, tmp_path):
    from colligations.core import identity

    p = write(tmp_path, "i.json", identity(Shape(2, 2, 2)))
    code, out, _ = run(capsys, "charfn", p, '[["1/2","3"],["-1","2/5"]]', "--check-det-identity")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == [["1/1", "0/1"], ["0/1", "1/1"]]
    assert doc["detIdentityResidual"] == "0/1"
    g = random_colligation(Shape(1, 1, 1), mode=EXACT, seed=2)
    p = write(tmp_path, "g.json", g)
    # a pole is an input error
    d = g.d(1, 1)[0, 0]
    code, _, err = run(capsys, "charfn", p, json.dumps([[io.scalar_to_json(1 / d)]]))
    assert code == 2 and "residual" in err


def test_charfn_amplified(capsys, tmp_path):
    g = random_colligation(Shape(1, 1, 1), mode=EXACT, seed=3)
    p = write(tmp_path, "g.json", g)
    code, out, _ = run(capsys, "charfn", p, '[["1/3","0"],["0","1/5"]]', "--amplify", "2")
    assert code == 0
    assert len(json.loads(out)["value"]) == 2


def test_divisor_invariants_conjtest(capsys, tmp_path):
    C = random_colligation(Shape(1, 2, 2), mode=EXACT, seed=4)
    D = conjugate(C, random_inner(2, mode=EXACT, seed=5))
    cp, dp = write(tmp_path, "c.json", C), write(tmp_path, "d.json", D)
    code, out, _ = run(capsys, "divisor", cp)
    assert code == 0 and json.loads(out)["degree"] == 4
    _, fc, _ = run(capsys, "invariants", cp)
    _, fd, _ = run(capsys, "invariants", dp)
    assert json.loads(fc)["traceWords"] == json.loads(fd)["traceWords"]
    code, out, _ = run(capsys, "conjtest", cp, dp)
    v = json.loads(out)
    assert code == 0 and v["verdict"] == "conjugate"
    u = io.matrix_from_json(v["witness"], EXACT)
    assert conjugate(C, u) == D
    assert run(capsys, "divisor", cp, "--det-cap", "2")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "multiplicativity", "--trials", "3")
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["fail"] == 0 and len(doc["cases"]) == 3
    assert run(capsys, "verify", "nothing")[0] == 2
    assert run(capsys, "verify", "unitarity", "--mode", "exact")[0] == 2
    code, out, _ = run(capsys, "verify", "unitarity", "--mode", "float", "--trials", "2")
    assert code == 0
