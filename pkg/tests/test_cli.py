import json
from importlib import resources

import pytest

from hypercover.cli import main, parse_text_report, render
from hypercover.cover import CoverFamily, Hyperplane, appendix_cover


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def appendix_file(tmp_path):
    path = tmp_path / "appendix-n2.cover"
    path.write_text(resources.files("hypercover").joinpath("data", "appendix-n2.cover").read_text())
    return path


def test_verify_file_and_builtin_agree(capsys, appendix_file):
    code, out_file, _ = run(capsys, "verify", "--m", "2", "--n", "2", "--k", "3", str(appendix_file))
    assert code == 0
    code, out_builtin, _ = run(capsys, "verify", "--m", "2", "--n", "2", "--k", "3", "--appendix", "2")
    assert code == 0 and out_file == out_builtin
    assert "satisfied: true" in out_file


def test_verify_missing_plane(capsys, tmp_path):
    fam = appendix_cover(2).without(Hyperplane((1, 1), 2))
    path = tmp_path / "short.cover"
    path.write_text(fam.to_text())
    code, out, _ = run(capsys, "verify", "--m", "2", "--n", "2", "--k", "3", str(path), "--emit", "json")
    rep = json.loads(out)
    assert code == 1 and [1, 1] in rep["deficient"] and rep["per_point"]["1,1"] == 2


@pytest.mark.parametrize("text", ["1 0 = \n", "1 0 = 1 y 2\n", "one two = 3\n"])
def test_verify_malformed(capsys, tmp_path, text):
    path = tmp_path / "bad.cover"
    path.write_text(text)
    code, _, err = run(capsys, "verify", "--m", "2", "--n", "2", "--k", "3", str(path))
    assert code == 2 and "error" in err


def test_verify_dimension_mismatch(capsys):
    code, _, err = run(capsys, "verify", "--m", "2", "--n", "3", "--k", "3", "--appendix", "2")
    assert code == 2


def test_bad_arguments(capsys):
    assert run(capsys, "verify", "--m", "2")[0] == 2
    assert run(capsys, "search", "--m", "0", "--n", "2", "--k", "1", "--size", "1")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "construct", "two-cover", "--m", "2", "--n", "2", "--excluded", "1,5")[0] == 2


def test_construct(capsys, tmp_path):
    out_path = tmp_path / "two.cover"
    code, out, _ = run(capsys, "construct", "two-cover", "--m", "2", "--n", "3", "--excluded", "1,0,2", "-o", str(out_path))
    assert code == 0 and "size: 8" in out
    assert CoverFamily.from_text(out_path.read_text()).size() == 8
    code, out, _ = run(capsys, "construct", "layered", "--m", "1", "--n", "2", "--k", "3")
    assert code == 0 and "size: 5" in out
    code, out, _ = run(capsys, "construct", "appendix", "--n", "4")
    assert code == 0 and "size: 13" in out


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--m", "1", "--n", "2", "--k", "1", "--size", "1")
    assert code == 1 and "found: false" in out
    code, out, _ = run(capsys, "search", "--m", "1", "--n", "2", "--k", "1", "--size", "2", "--emit", "json")
    assert code == 0 and json.loads(out)["found"] is True


@pytest.mark.parametrize("m,n,k,value", [(2, 2, 3, 9), (1, 2, 2, 3)])
def test_certify(capsys, tmp_path, m, n, k, value):
    path = tmp_path / "w.cover"
    code, out, _ = run(capsys, "certify", "--m", str(m), "--n", str(n), "--k", str(k), "-o", str(path), "--emit", "json")
    rep = json.loads(out)
    assert code == 0 and rep["value"] == value and rep["status"] == "exact"
    assert rep["witness_file"] == str(path)
    assert CoverFamily.from_text(path.read_text()).size() == value


def test_certify_appendix_witness(capsys):
    code, out, _ = run(capsys, "certify", "--m", "2", "--n", "4", "--k", "3", "--witness", "appendix")
    assert code == 0 and "value: 13" in out and "status: exact" in out


def test_certify_budget(capsys):
    code, _, err = run(capsys, "certify", "--m", "2", "--n", "3", "--k", "3", "--budget", "20")
    assert code == 3 and "budget" in err and '"lower": 11' in err


def test_nss_rank(capsys, tmp_path):
    mat = tmp_path / "psi.txt"
    code, out, _ = run(capsys, "nss", "rank", "--m", "1", "--n", "2", "--k", "2", "-o", str(mat))
    assert code == 0 and out.rstrip().endswith("N=10 rank=10 isomorphism")
    assert len(mat.read_text().splitlines()) == 10
    code, _, _ = run(capsys, "nss", "rank", "--m", "2", "--n", "4", "--k", "3", "--budget", "low")
    assert code == 3


def test_nss_y(capsys):
    code, out, _ = run(capsys, "nss", "y", "--m", "2", "--n", "2", "--k", "3", "--pipeline", "--emit", "json")
    rep = json.loads(out)
    assert code == 0 and rep["y_sum"] == rep["y_closed"] == rep["anchor"] == "6"
    code, out, _ = run(capsys, "nss", "y", "--m", "1", "--n", "4", "--k", "4")
    assert code == 0 and "y_closed: none" in out
    code, out, _ = run(capsys, "nss", "y", "--m", "1", "--n", "5", "--k", "6")
    assert code == 0 and "nonzero:" in out


def test_nss_extremal(capsys):
    code, out, _ = run(capsys, "nss", "extremal", "--m", "1", "--n", "2", "--k", "2", "--l", "0")
    assert code == 0 and "degree: 3" in out and "bound: 3" in out
    code, _, err = run(capsys, "nss", "extremal", "--m", "1", "--n", "3", "--k", "5")
    assert code == 2 and "k in {2,3,4}" in err


def test_nss_reduce(capsys, tmp_path):
    src = tmp_path / "p.poly"
    src.write_text("1 2 2\n-1 1 0\n")  # x1^2 x2^2 - x1
    code, out, _ = run(capsys, "nss", "reduce", "--m", "1", "--n", "2", "--k", "2", "--input", str(src), "--emit", "json")
    rep = json.loads(out)
    assert code == 0 and rep["reduced"] and rep["residual_zero"] and rep["degree"] <= 3
    src.write_text("1 2\n")
    assert run(capsys, "nss", "reduce", "--m", "1", "--n", "2", "--k", "2", "--input", str(src))[0] == 2


def test_coeffs(capsys):
    code, out, _ = run(capsys, "coeffs", "--m", "2", "--k", "4", "--emit", "json")
    rep = json.loads(out)
    assert code == 0 and rep["a[2][2]"] == "1" and rep["closed_forms"]["a[2][2]"] == ["1", "1"]
    code, out, _ = run(capsys, "coeffs", "--m", "1", "--k", "2", "--emit", "json")
    rep = json.loads(out)
    assert (rep["b[0]"], rep["b[1]"]) == ("-1", "1")
    code, out, _ = run(capsys, "coeffs", "--m", "3", "--k", "5", "--emit", "json")
    rep = json.loads(out)
    assert code == 0 and rep["recurrence"] is True and "closed_forms" not in rep


COMMANDS = [
    ["verify", "--m", "2", "--n", "3", "--k", "3", "--appendix", "3"],
    ["construct", "layered", "--m", "2", "--n", "2", "--k", "3"],
    ["certify", "--m", "2", "--n", "2", "--k", "3"],
    ["nss", "rank", "--m", "2", "--n", "2", "--k", "2"],
    ["nss", "y", "--m", "2", "--n", "3", "--k", "4"],
    ["nss", "extremal", "--m", "2", "--n", "3", "--k", "3", "--l", "1"],
    ["coeffs", "--m", "2", "--k", "3", "--n", "3"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_deterministic_and_text_matches_json(capsys, argv):
    c1, t1, _ = run(capsys, *argv)
    c2, t2, _ = run(capsys, *argv)
    assert c1 == c2 and t1 == t2
    cj, js, _ = run(capsys, *argv, "--emit", "json")
    data = json.loads(js)
    parsed = parse_text_report(render(data, "text"))
    from_text = parse_text_report(t1)
    for key, value in parsed.items():
        assert from_text[key] == value
    assert set(data) <= set(from_text)
