import csv
import subprocess
import sys

import pytest

from selcol.cli import main
from selcol.graph import cycle_graph
from selcol.instance import SelColInstance, cube_instance
from selcol.io import read_instance, save_instance


@pytest.fixture
def cube_file(tmp_path):
    path = tmp_path / "cube.selcol"
    save_instance(cube_instance(), path)
    return str(path)


@pytest.fixture
def c5_file(tmp_path):
    path = tmp_path / "c5.selcol"
    save_instance(SelColInstance.singletons(cycle_graph(5)), path)
    return str(path)


@pytest.mark.parametrize("method", ["ip", "cutplane-perfect", "cutplane-general"])
def test_solve(cube_file, tmp_path, capsys, method):
    report = tmp_path / "row.csv"
    code = main(["solve", "--instance", cube_file, "--method", method, "--time-limit", "60",
                 "--seed", "7", "--report", str(report)])
    out = capsys.readouterr().out
    assert code == 0
    assert "status optimal" in out and "chi_sel 1 " in out
    rows = list(csv.DictReader(report.open(encoding="utf-8")))
    assert rows[0]["method"] == method and float(rows[0]["UB"]) == 1


def test_solve_sdp_outer(cube_file, capsys):
    assert main(["solve", "--instance", cube_file, "--subproblem", "sdp",
                 "--driver", "outer"]) == 0
    assert "chi_sel 1 " in capsys.readouterr().out


def test_clique_color_theta_oracle(c5_file, capsys):
    assert main(["clique", "--instance", c5_file]) == 0
    assert "omega 2" in capsys.readouterr().out
    assert main(["color", "--instance", c5_file]) == 0
    assert "chi 3" in capsys.readouterr().out
    assert main(["theta", "--instance", c5_file]) == 0
    assert "theta 2.2360" in capsys.readouterr().out
    assert main(["oracle", "--instance", c5_file]) == 0
    assert "chi_sel 3" in capsys.readouterr().out


def test_check(c5_file, cube_file, capsys):
    assert main(["check", "--perfect", "--instance", c5_file]) == 1
    assert "odd hole" in capsys.readouterr().out
    assert main(["check", "--perfect", "--instance", cube_file]) == 0
    assert capsys.readouterr().out.strip() == "perfect"


def test_gen_and_partition(tmp_path, capsys):
    out = tmp_path / "gen"
    assert main(["gen", "--n", "12", "--density", "0.5", "--seed", "4", "--count", "3",
                 "--out", str(out), "--min", "2", "--max", "3"]) == 0
    files = sorted(out.iterdir())
    assert len(files) == 3
    inst = read_instance(files[0])
    assert inst.n == 12 and all(2 <= len(c) <= 3 for c in inst.clusters[:-1])
    capsys.readouterr()
    part = tmp_path / "p.selcol"
    assert main(["partition", "--instance", str(files[0]), "--min", "3", "--max", "3",
                 "--out", str(part)]) == 0
    assert [len(c) for c in read_instance(part).clusters] == [3, 3, 3, 3]
    assert main(["partition", "--instance", str(files[0]), "--min", "1", "--max", "1"]) == 0
    assert capsys.readouterr().out.startswith("p selcol 12")


def test_bench(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--n", "10", "--density", "0.3", "--replicates", "2",
                 "--methods", "ip", "cutplane-perfect", "--time-limit", "30",
                 "--out", str(out)]) == 0
    assert "#opt" in capsys.readouterr().out
    assert len(out.read_text(encoding="utf-8").splitlines()) == 5


def test_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.selcol"
    bad.write_text("p selcol 2 0 1\nk 1 1\n", encoding="utf-8")
    assert main(["solve", "--instance", str(bad)]) == 2
    assert "vertex 2 unassigned" in capsys.readouterr().err


def test_module_entry_point(cube_file):
    proc = subprocess.run([sys.executable, "-m", "selcol", "clique", "--instance", cube_file],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("omega 2")
