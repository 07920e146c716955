import json

import pytest

from tilesphere.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_vertices(capsys):
    code, out = run(capsys, "vertices", "--m", "4", "--format", "json")
    assert code == 0
    data = json.loads(out.out)
    assert {"a3", "ab2", "abc"} <= set(data["types"])


def test_avcs(capsys):
    code, out = run(capsys, "avcs", "--m", "7")
    assert code == 0 and out.out.strip() == "{abc}"


def test_classify(capsys):
    code, out = run(capsys, "classify", "--m", "5", "--format", "json")
    assert code == 0
    data = json.loads(out.out)
    assert [t["id"] for t in data["tilings"]] == ["prism:5"]


def test_classify_text_single_chirality(capsys):
    code, out = run(capsys, "classify", "--m", "3", "--single-chirality")
    assert code == 0
    assert "S2" in out.out and "S1" not in out.out


def test_classify_cap_is_incomplete(capsys):
    code, _ = run(capsys, "classify", "--m", "3", "--max-tiles", "8")
    assert code == 4


def test_verify_reports_mismatch(capsys):
    code, out = run(capsys, "verify", "--up-to", "4")
    assert code == 2
    assert "missing=['S5']" in out.out


def test_realize(capsys):
    code, out = run(capsys, "realize", "--id", "S2", "--format", "json")
    assert code == 0
    data = json.loads(out.out)
    assert data["id"] == "S2" and data["gauss_bonnet_residual"] < 1e-9


def test_realize_beta(capsys):
    code, out = run(capsys, "realize", "--id", "prism:4", "--beta", "7/10")
    assert code == 0 and "prism:4" in out.out


def test_realize_degenerate(capsys):
    code, out = run(capsys, "realize", "--id", "S5")
    assert code == 1 and out.err


def test_export(tmp_path, capsys):
    path = tmp_path / "s2.svg"
    code, _ = run(capsys, "export", "--id", "S2", "--format", "svg", "--out", str(path))
    assert code == 0 and path.read_text().startswith("<svg")


def test_unknown_id(capsys):
    code, out = run(capsys, "realize", "--id", "S7")
    assert code == 1 and "unknown" in out.err


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["classify"])
