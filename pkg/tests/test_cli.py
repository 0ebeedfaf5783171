import json

import pytest

from galg.codes import alist_import, tanner_classic
from galg.cli import main
from galg.linalg import FieldMatrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_group_info(capsys):
    code, out, _ = run(capsys, "group-info", "--group", "dihedral:4")
    info = json.loads(out)
    assert code == 0 and info["order"] == 8 and info["labels"][4] == "y" and not info["abelian"]


def test_elem_arithmetic(capsys):
    code, out, _ = run(capsys, "elem", "--group", "cyclic:7", "--elem", "support=[0,1]", "--mul", "terms=1+x")
    assert code == 0 and json.loads(out)["repr"] == "1 + x^2"
    code, out, _ = run(capsys, "elem", "--group", "cyclic:7", "--p", "3", "--elem", "coeffs=[1,2,0,0,0,0,0]", "--pow", "2")
    assert json.loads(out)["support"] == [[0, 1], [1, 1], [2, 1]]


def test_repmat_text(capsys):
    code, out, _ = run(capsys, "repmat", "--group", "cyclic:3", "--elem", "support=[0,1]")
    assert code == 0
    assert FieldMatrix.from_text(out).data.tolist() == [[1, 0, 1], [1, 1, 0], [0, 1, 1]]


def test_repmat_symbolic_and_json(capsys):
    code, out, _ = run(capsys, "repmat", "--group", "product:cyclic:2,cyclic:4", "--symbolic")
    assert code == 0 and out.splitlines()[0].split() == ["a1", "a4", "a3", "a2", "a5", "a8", "a7", "a6"]
    code, out, _ = run(capsys, "repmat", "--group", "cyclic:3", "--elem", "support=[1]", "--format", "json")
    assert json.loads(out)


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--group", "product:cyclic:2,cyclic:4", "--elem", "support=[0,5]")
    d = json.loads(out)
    assert code == 0 and d["factors"] == [2, 4]
    assert d["blocks"] == [{"index": [1], "seed": [1, 0]}, {"index": [2], "seed": [0, 1]}]


def test_is_unit_and_invert_errors(capsys):
    code, out, _ = run(capsys, "is-unit", "--group", "cyclic:7", "--elem", "support=[0,1,2]")
    assert code == 0 and out.strip() == "true"
    code, out, err = run(capsys, "invert", "--group", "cyclic:7", "--elem", "support=[0,1]", "--json-errors")
    payload = json.loads(err)
    assert code == 1 and payload["error"] == "not-invertible" and payload["witness"]["support"]


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2


def test_tanner_classic_rank(capsys):
    code, out, _ = run(capsys, "tanner", "--classic", "--p", "31", "--a", "2", "--b", "5", "--rank")
    assert code == 0 and "rank=91" in out and "dim=64" in out


def test_tanner_alist_output_parses(capsys, tmp_path):
    path = tmp_path / "h.alist"
    code, _, _ = run(capsys, "tanner", "--classic", "--p", "31", "--a", "2", "--b", "5", "--out", str(path))
    assert code == 0 and alist_import(path.read_text()) == tanner_classic(31, 2, 5)


def test_alist_conversion_round_trip(capsys, tmp_path):
    mat = tmp_path / "m.txt"
    mat.write_text("2 3 2\n1 1 0\n0 1 1\n")
    code, alist_text, _ = run(capsys, "alist", "--from-matrix", str(mat))
    assert code == 0
    al = tmp_path / "m.alist"
    al.write_text(alist_text)
    code, back, _ = run(capsys, "alist", "--to-matrix", str(al))
    assert FieldMatrix.from_text(back) == FieldMatrix.from_text(mat.read_text())


def test_mdpc_files_round_trip(capsys, tmp_path):
    sk, pk, ct = tmp_path / "sk.json", tmp_path / "pk.json", tmp_path / "ct.json"
    code, _, _ = run(capsys, "mdpc-keygen", "--group", "cyclic:1013", "--t", "21", "--seed", "4",
                     "--sk-out", str(sk), "--pk-out", str(pk))
    assert code == 0 and json.loads(pk.read_text())["t"] == 21
    code, _, _ = run(capsys, "mdpc-encrypt", "--pk", str(pk), "--message-hex", "c0ffee", "--out", str(ct))
    assert code == 0
    code, out, _ = run(capsys, "mdpc-decrypt", "--sk", str(sk), "--ct", str(ct), "--message-bits", "24")
    res = json.loads(out)
    assert code == 0 and res["success"]
    assert res["message_hex"] == "c0ffee"


def test_mdpc_decrypt_failure_exit_code(capsys, tmp_path):
    sk, pk, ct = tmp_path / "sk.json", tmp_path / "pk.json", tmp_path / "ct.json"
    run(capsys, "mdpc-keygen", "--group", "cyclic:101", "--seed", "3", "--sk-out", str(sk), "--pk-out", str(pk))
    run(capsys, "mdpc-encrypt", "--pk", str(pk), "--message-hex", "ab", "--out", str(ct))
    code, out, _ = run(capsys, "mdpc-decrypt", "--sk", str(sk), "--ct", str(ct))
    assert code == 1 and json.loads(out)["reason"] == "decode-failure"


def test_dfr_csv(capsys, tmp_path):
    code, out, err = run(capsys, "dfr", "--group", "cyclic:101", "--trials", "4", "--t", "5", "--seed", "10")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("trial,seed,success")
    assert [ln.split(",")[1] for ln in lines[1:]] == ["10", "11", "12", "13"]
    assert "trials=4" in err


def test_selftest_is_deterministic(capsys):
    first = run(capsys, "selftest", "--seed", "1")
    second = run(capsys, "selftest", "--seed", "1")
    assert first == second and first[0] == 0 and "7/7" in first[1]
