import csv
import io
import json
import math

import pytest

from pswfkit import cli


def run(capsys, *argv):
    assert cli.main(list(argv)) in (0, None)
    return capsys.readouterr().out


def test_parse_c():
    assert cli.parse_c("120pi") == pytest.approx(120 * math.pi)
    assert cli.parse_c("pi") == pytest.approx(math.pi)
    assert cli.parse_c("2.5") == 2.5


def test_grid_csv(capsys):
    rows = list(csv.reader(io.StringIO(run(capsys, "grid", "--c", "1", "--N", "4"))))
    assert rows[0][:2] == ["artifact", "grid"] and rows[0][4:6] == ["N", "4"]
    assert rows[1] == ["j", "x", "w"]
    assert len(rows) == 2 + 5
    assert [r[2] for r in rows[2:]] == [r[2] for r in rows[:1:-1]]
    legendre = list(csv.reader(io.StringIO(run(capsys, "grid", "--c", "0", "--N", "4"))))
    assert sum(float(r[2]) for r in legendre[2:]) == pytest.approx(2.0, abs=1e-14)
    assert rows[3][1] == "-0.65003146319135374"  # 17 significant digits


def test_krrule_json(capsys):
    d = json.loads(run(capsys, "krrule", "--c", "120pi"))
    assert set(d) == {"c", "eps", "n_star", "nu", "lambda_estimate"}
    assert d["n_star"] == 284


def test_bvp_json(capsys):
    d = json.loads(run(capsys, "bvp", "--scheme", "ppcol", "--N", "16", "--iterative"))
    assert d["scheme"] == "P-PCOL" and d["iterations"] <= 8 and d["c"] == 8.0


def test_diffmat(capsys):
    rows = list(csv.reader(io.StringIO(run(capsys, "diffmat", "--c", "0", "--N", "2"))))
    assert rows[0][1] == "D1" and len(rows) == 2 + 3
    assert float(rows[2][0]) == pytest.approx(-1.5)


def test_helmholtz_writes_samples(capsys, tmp_path):
    out = tmp_path / "h.csv"
    d = json.loads(run(capsys, "helmholtz", "--k", "60", "--bandwidth", "40",
                       "--out", str(out), "--samples", "11"))
    assert d["max_error"] < 1e-8
    rows = list(csv.reader(out.open()))
    assert rows[1] == ["x", "u_real", "u_imag"] and len(rows) == 13


def test_project_and_errors(capsys):
    out = run(capsys, "project", "--c", "1", "--N", "2", "--M", "2,4")
    assert out.count("\n") == 4
    assert cli.main(["grid", "--c", "1", "--N", "0"]) == 2


@pytest.fixture(scope="module")
def run_all_dirs(tmp_path_factory):
    a = tmp_path_factory.mktemp("a")
    b = tmp_path_factory.mktemp("b")
    cli.run_all(a)
    cli.run_all(b)
    return a, b


EXPECTED = {"table1.csv", "table2.csv", "table3.csv", "eig_laplacian.csv", "eig_bessel.csv",
            "fig4_envelope.csv", "helmholtz_k60.csv", "helmholtz_k160.csv", "summary.json"}


def test_run_all_files_and_determinism(run_all_dirs):
    a, b = run_all_dirs
    assert {p.name for p in a.iterdir()} == EXPECTED
    for name in EXPECTED:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    for name in EXPECTED - {"summary.json"}:
        first = (a / name).read_text().splitlines()[0].split(",")
        assert first[0] == "artifact" and first[2::2] == ["c", "N", "eps"]


def test_summary_structure(run_all_dirs):
    s = json.loads((run_all_dirs[0] / "summary.json").read_text())
    assert s["total"] == 9 and len(s["criteria"]) == 9
    assert s["passed"] == sum(c["passed"] for c in s["criteria"])
