import json

import pandas as pd
import pytest
from click.testing import CliRunner

from app.cli import cli, run_command
from app.formats import read_lattice_file, serialize_matrix

REPORT_KEYS = {"command", "inputs", "result", "budget", "version"}

MARKED_LATTICE = """lattice v1
rank 4
gram
0 1 0 0
1 0 0 0
0 0 -2 0
0 0 0 -2
vec f 0 0 1 1
"""

SWAP_WITH_POSITIVE_REFLECTION = ((0, -1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))

INDEX_TWO_LATTICE = """lattice v1
rank 3
gram
0 1 0
1 0 0
0 0 -2
"""


@pytest.fixture
def runner():
    return CliRunner()


def run_json(argv):
    code, text = run_command(argv)
    report = json.loads(text)
    assert set(report) == REPORT_KEYS
    return code, report


def test_sp_gen_report():
    code, report = run_json(["sp-gen", "--q", "1", "--p", "2"])
    assert code == 0
    assert report["command"] == "sp-gen"
    assert report["result"] == {"order": 6, "expected": 6, "match": True}
    assert report["version"] == "1"


def test_sp_gen_without_sums_does_not_match():
    code, report = run_json(["sp-gen", "--q", "2", "--p", "2", "--no-sums"])
    assert code == 0
    assert report["result"] == {"order": 36, "expected": 720, "match": False}


def test_build_writes_lattice_file():
    code, text = run_command(["build", "annulus", "--g", "1"])
    assert code == 0
    lf = read_lattice_file(text)
    assert lf.rank == 4
    assert [name for name, _ in lf.vectors] == ["s_plus", "s_minus", "f"]


def test_build_diagonal_entries():
    code, text = run_command(["build", "diagonal", "--entries=-2,0,0"])
    assert code == 0
    assert read_lattice_file(text).gram == ((-2, 0, 0), (0, 0, 0), (0, 0, 0))


@pytest.mark.parametrize("argv,expected", [
    (["build", "e8", "--report"], {"signature": [0, 0, 8], "determinant": 1, "is_even": True}),
    (["build", "milnorJ", "--chi", "1", "--report"], {"signature": [0, 2, 8], "rank": 10}),
    (["build", "torus", "--q", "2", "--report"], {"signature": [2, 0, 2], "is_unimodular": True}),
])
def test_build_reports(argv, expected):
    code, report = run_json(argv)
    assert code == 0
    for key, value in expected.items():
        assert report["result"][key] == value


@pytest.mark.parametrize("argv,error", [
    (["build", "diagonal"], "EmptyInput"),
    (["build", "torus", "--q", "0"], "NonPositiveQ"),
    (["build", "milnorJ", "--chi", "0"], "NonPositiveChi"),
    (["build", "annulus", "--g=-1"], "NegativeGenus"),
    (["jscan", "--chi", "1", "--radius", "0.1", "--samples", "0"], "LatticeError"),
])
def test_validation_failures_exit_2(argv, error):
    code, report = run_json(argv)
    assert code == 2
    assert report["result"]["error"] == error


def test_usage_error_exits_2():
    code, _ = run_command(["sp-gen", "--q", "1"])
    assert code == 2


def test_build_witness_piped_into_certify(runner):
    built = runner.invoke(cli, ["build", "witness"])
    assert built.exit_code == 0
    certified = runner.invoke(cli, ["certify", "-", "--height", "2", "--max-size", "150"], input=built.stdout)
    assert certified.exit_code == 0
    result = json.loads(certified.stdout)["result"]
    assert result["generates"] is True
    assert result["single_orbit"] == "connected"
    assert result["witness"] is not None and len(result["witness"]) == 6
    assert result["complete"] is True


def test_certify_e8_file(tmp_path):
    _, text = run_command(["build", "e8"])
    path = tmp_path / "e8.lat"
    path.write_text(text)
    code, report = run_json(["certify", str(path)])
    assert code == 0
    assert report["result"]["generates"] is True
    assert report["result"]["single_orbit"] == "connected"
    assert report["result"]["witness"] is None
    assert report["result"]["exhausted"] is True
    assert report["budget"]["size"] == 120


def test_certify_budget_exhaustion_exits_3(tmp_path):
    _, text = run_command(["build", "e8"])
    path = tmp_path / "e8.lat"
    path.write_text(text)
    code, report = run_json(["certify", str(path), "--max-size", "10"])
    assert code == 3
    assert report["result"]["exhausted"] is False
    assert report["budget"]["size"] == 10


def test_certify_parse_error_exits_2(tmp_path):
    path = tmp_path / "bad.lat"
    path.write_text("lattice v1\nrank 2\ngram\n0 1\n1\n")
    code, report = run_json(["certify", str(path)])
    assert code == 2
    assert report["result"]["error"] == "ParseError"
    assert report["result"]["message"].startswith("line 5:")


def test_spinor_with_marked_vector(tmp_path):
    lattice = tmp_path / "marked.lat"
    lattice.write_text(MARKED_LATTICE)
    matrix = tmp_path / "swap.mat"
    matrix.write_text(serialize_matrix(SWAP_WITH_POSITIVE_REFLECTION))
    code, report = run_json(["spinor", str(lattice), "--matrix", str(matrix)])
    assert code == 0
    result = report["result"]
    assert result["fixes_f"] is True
    assert result["spinor_norm"] == -1
    assert result["in_O_prime_f"] is False


def test_spinor_norm_only(tmp_path):
    lattice = tmp_path / "u_plus.lat"
    lattice.write_text(INDEX_TWO_LATTICE)
    matrix = tmp_path / "minus.mat"
    matrix.write_text(serialize_matrix(((-1, 0, 0), (0, -1, 0), (0, 0, -1))))
    code, report = run_json(["spinor", str(lattice), "--matrix", str(matrix)])
    assert code == 0
    result = report["result"]
    assert result["spinor_norm"] == -1
    assert "in_O_prime_f" not in result
    assert result["positive_reflections"] % 2 == 1
    # rationals travel as "p/q" strings, integers stay integers
    for vector in result["reflections"]:
        assert all(isinstance(c, int) or "/" in c for c in vector)


def test_spinor_rejects_non_isometry(tmp_path):
    lattice = tmp_path / "u_plus.lat"
    lattice.write_text(INDEX_TWO_LATTICE)
    matrix = tmp_path / "shear.mat"
    matrix.write_text(serialize_matrix(((1, 1, 0), (0, 1, 0), (0, 0, 1))))
    code, report = run_json(["spinor", str(lattice), "--matrix", str(matrix)])
    assert code == 2
    assert report["result"]["error"] == "NotAnIsometry"


def test_jscan_report_and_csv(tmp_path):
    csv = tmp_path / "scan.csv"
    argv = ["jscan", "--chi", "1", "--radius", "0.1", "--samples", "200", "--seed", "3", "--csv", str(csv)]
    code, report = run_json(argv)
    assert code == 0
    result = report["result"]
    assert float(result["min_nonzero_modulus"]) > 0.5
    assert result["bound_holds"] is True
    assert result["degree"] == 12
    assert result["csv"] == str(csv)
    assert len(pd.read_csv(csv)) == 200


@pytest.mark.parametrize("argv", [
    ["jscan", "--chi", "2", "--radius", "0.3", "--samples", "100", "--seed", "11"],
    ["sp-gen", "--q", "2", "--p", "2"],
    ["build", "witness", "--report"],
])
def test_reports_are_byte_identical(argv):
    assert run_command(argv) == run_command(argv)


def test_every_json_number_is_an_integer():
    _, text = run_command(["jscan", "--chi", "1", "--radius", "0.1", "--samples", "20", "--seed", "0"])

    def walk(value):
        if isinstance(value, dict):
            for v in value.values():
                walk(v)
        elif isinstance(value, list):
            for v in value:
                walk(v)
        else:
            assert not isinstance(value, float)

    walk(json.loads(text))


@pytest.mark.parametrize("name,options", [
    ("e8", []),
    ("witness", ["--height", "2", "--max-size", "150"]),
])
def test_certify_reports_are_byte_identical(tmp_path, name, options):
    _, text = run_command(["build", name])
    path = tmp_path / f"{name}.lat"
    path.write_text(text)
    argv = ["certify", str(path)] + options
    first = run_command(argv)
    assert first[0] == 0
    assert first == run_command(argv)


def test_spinor_reports_are_byte_identical(tmp_path):
    lattice = tmp_path / "marked.lat"
    lattice.write_text(MARKED_LATTICE)
    matrix = tmp_path / "swap.mat"
    matrix.write_text(serialize_matrix(SWAP_WITH_POSITIVE_REFLECTION))
    argv = ["spinor", str(lattice), "--matrix", str(matrix)]
    first = run_command(argv)
    assert first[0] == 0
    assert first == run_command(argv)


def test_jscan_error_report_keeps_inputs():
    argv = ["jscan", "--chi", "1", "--radius", "0.1", "--samples", "0", "--seed", "4"]
    code, failed = run_json(argv)
    assert code == 2
    argv[argv.index("0")] = "5"
    _, passed = run_json(argv)
    assert failed["inputs"] == passed["inputs"]
