import json
import subprocess
import sys

import pytest

from torreg.cli import main
from torreg.svg import parse_cells, parse_staircase


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_variety(capsys):
    code, out, _ = run(capsys, "variety", "hirz2.json")
    assert code == 0
    assert "degrees: (1,0) (-2,1) (1,0) (0,1)" in out
    assert "B = <x2*x3, x0*x3, x0*x1, x1*x2>" in out
    assert "Nef rays: (0,1) (1,0)" in out
    assert "Eff rays: (-2,1) (1,0)" in out
    code, out, _ = run(capsys, "variety", "hirz2.json", "--json")
    data = json.loads(out)
    assert data["degree_map"] == [[1, -2, 1, 0], [0, 1, 0, 1]]


def test_reg_json_round_trip_and_svg(capsys, tmp_path):
    svg = tmp_path / "rank3.svg"
    code, out, err = run(capsys, "reg", "--variety", "hirz2.json", "--module",
                         "module_rank3.json", "--window=-7,-1:7,7", "--svg", str(svg))
    assert code == 0
    assert "certified on window" in err
    data = json.loads(out)
    assert data["minima"] == [[-1, 4], [1, 3]]
    assert json.loads(json.dumps(data, sort_keys=True)) == data
    text = svg.read_text()
    assert parse_staircase(text) == [(-1, 4), (1, 3)]
    assert parse_cells(text) == sorted(tuple(p) for p in data["points"])


def test_reg_svg_ring(capsys, tmp_path):
    svg = tmp_path / "s.svg"
    code, out, _ = run(capsys, "reg", "--variety", "H2", "--module", "ring.json",
                       "--window=-3,-3:3,3", "--svg", str(svg))
    assert code == 0
    assert parse_staircase(svg.read_text()) == [(0, 1), (1, 0)]


def test_torsion_quotient_reports_nef_failure_without_error(capsys):
    code, out, _ = run(capsys, "reg", "--variety", "hirz2.json", "--module",
                       "torsion_quotient.json", "--window=-7,-1:7,7")
    data = json.loads(out)
    assert code == 0
    assert data["bounds"]["eff_holds"] and not data["bounds"]["nef_holds"]
    assert not data["bounds"]["nef_bound_applicable"]


def test_zero_module(capsys):
    code, _, err = run(capsys, "reg", "--variety", "hirz2.json", "--module", "zero.json")
    assert code == 2
    assert "sheaf is zero" in err


def test_powers(capsys):
    code, out, err = run(capsys, "powers", "--variety", "hirz2.json", "--ideal",
                         "ideal_I.json", "--n", "2")
    assert code == 0
    assert "FAIL" not in err and err.count("PASS") == 8
    reports = json.loads(out)
    assert [r["reg_minima"] for r in reports] == [[[1, 3], [2, 2]], [[2, 4]]]


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--variety", "hirz2.json", "--degrees", "1,1;0,2",
                       "--n", "2", "--a", "1,3")
    assert code == 0
    data = json.loads(out)
    assert data[0]["inner"] == "(2,5) + reg S" and data[1]["outer"] == "(0,2) + Nef"
    code, out, _ = run(capsys, "bounds", "--variety", "hirz2.json", "--ideal", "ideal_J.json")
    assert json.loads(out)[0]["a"] == [1, 2]


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--variety", "hirz2.json", "--module",
                       "module_rank3.json", "--start=-4,4", "--step=0,1", "--count", "2")
    assert code == 0
    data = json.loads(out)
    assert data[0]["replay"] == "NotRegular"
    assert data[0]["certificate"]["differences"] == [[-1, 1], [-2, 2], [-3, 2]]
    code, _, err = run(capsys, "certify", "--variety", "hirz2.json", "--module",
                       "torsion_quotient.json", "--start", "0,0", "--step", "1,0",
                       "--count", "1")
    assert code == 0


@pytest.mark.parametrize("argv,fragment", [
    (["reg", "--variety", "missing.json", "--module", "ring.json"], "input error"),
    (["reg", "--variety", "hirz2.json", "--module", "ring.json", "--field", "4"], "input error"),
    (["reg", "--variety", "hirz2.json", "--module", "ring.json", "--window=0,0:1"],
     "input error"),
    (["reg", "--variety", "hirz2.json", "--module", "ring.json", "--caps", "[1]"],
     "input error"),
    (["powers", "--variety", "hirz2.json", "--module", "torsion_quotient.json"],
     "input error"),
    (["reg", "--variety", "hirz2.json", "--module", "ring.json", "--caps",
      '{"groebner_budget": 1}'], None),
])
def test_error_exit_codes(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    if fragment is None:
        assert code == 0
    else:
        assert code == 2 and err.startswith(fragment)


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "bounds", "--variety", "hirz2.json", "--ideal", "ideal_I.json",
                       "--caps", '{"groebner_budget": 0}')
    assert code == 2 and err.startswith("budget exceeded")


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "torreg.cli", "variety", "P1xP1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "degrees:" in proc.stdout


def test_figure_script(tmp_path):
    import runpy
    mod = runpy.run_path("scripts/figures.py")
    mod["main"](str(tmp_path))
    text = (tmp_path / "reg_rank3_module.svg").read_text()
    assert parse_staircase(text) == [(-1, 4), (1, 3)]
    reports = json.loads((tmp_path / "powers_J.json").read_text())
    assert [len(r["reg_minima"]) for r in reports] == [2, 3, 3, 4]
