import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ontensor import cli


def run(argv, tmp_path, capsys):
    code = cli.main(argv + ["--out", str(tmp_path)])
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_analyze_infinity(tmp_path, capsys):
    code, out, _ = run(["analyze", "infinity-1", "--json"], tmp_path, capsys)
    assert code == 0
    assert "omega = 1/2" in out
    assert "non-trivial jacket components: 1 (color 1 k=1)" in out
    assert "infinity(1)" in out
    rec = json.loads((tmp_path / "analyze-infinity-1.json").read_text())
    assert rec["two_omega"] == 1 and rec["jackets"] == {"1": [1], "2": [0], "3": [0]}
    rows = read_csv(tmp_path / "analyze-infinity-1.csv")
    assert sum(r[0] == "face" for r in rows[1:]) == 4


def test_analyze_graph_file(tmp_path, capsys):
    f = tmp_path / "tt.json"
    f.write_text('{"nodes": 8, "0": [[1,5],[2,6],[3,7],[4,8]], "1": [[1,2],[3,4],[5,6],[7,8]],'
                 ' "2": [[1,3],[2,4],[5,7],[6,8]], "3": [[1,4],[2,3],[5,8],[6,7]]}')
    code, out, _ = run(["analyze", str(f)], tmp_path, capsys)
    assert code == 0
    assert "omega = 0" in out and "melonic-base-I" in out


def test_invalid_matching_exits_2_without_output(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"nodes": 4, "0": [[1,2],[3,4]], "1": [[1,2],[2,3]],'
                 ' "2": [[1,3],[2,4]], "3": [[1,4],[2,3]]}')
    out_dir = tmp_path / "out"
    code = cli.main(["analyze", str(f), "--out", str(out_dir)])
    err = capsys.readouterr().err
    assert code == 2
    assert "InvalidMatching" in err and "node 2" in err
    assert not out_dir.exists()


def test_unknown_graph(tmp_path, capsys):
    code, _, err = run(["analyze", "no-such-graph"], tmp_path, capsys)
    assert code == 2 and "neither a built-in" in err


def test_trees(tmp_path, capsys):
    code, out, _ = run(["trees", "--p", "1", "--q", "1"], tmp_path, capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "6"
    assert "closed form" in lines[1] and "= 6: match" in lines[1]


def test_budget_exit_code(tmp_path, capsys):
    code, _, err = run(["census", "--n1", "7"], tmp_path, capsys)
    assert code == 3 and "BudgetExceeded" in err
    code, _, _ = run(["trees", "--p", "6", "--q", "0"], tmp_path, capsys)
    assert code == 3


def test_internal_inconsistency_exit_code(tmp_path, capsys, monkeypatch):
    import ontensor.graphs as graphs

    real = graphs.jackets

    def skewed(g):
        reps = real(g)
        c = reps[0].components[0]
        bad = graphs.JacketComponent(c.nodes, c.v, c.e + 2, c.f)
        return (graphs.JacketReport(reps[0].color, (bad,) + reps[0].components[1:]),) + reps[1:]

    monkeypatch.setattr(graphs, "jackets", skewed)
    code, _, err = run(["analyze", "tetra-tetra"], tmp_path, capsys)
    assert code == 4 and "InternalInconsistency" in err


def test_argument_errors_exit_2(tmp_path, capsys):
    for argv in (["series", "--order", "3", "--mu", "abc"], ["census", "--n1", "1", "--n2", "1,2"],
                 ["fit", "--mu", "1", "--nmax", "0"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv + ["--out", str(tmp_path)])
        assert exc.value.code == 2
    capsys.readouterr()


def test_critical_curve_csv(tmp_path, capsys):
    code, _, _ = run(["critical", "--mu-min", "0", "--mu-max", "5", "--step", "0.5", "--svg"],
                     tmp_path, capsys)
    assert code == 0
    rows = read_csv(tmp_path / "critical.csv")
    header, body = rows[0], rows[1:]
    assert len(body) == 11
    at3 = dict(zip(header, next(r for r in body if float(r[0]) == 3.0)))
    # root of the cubic at mu = 3
    assert float(at3["inverse_g_c (float)"]) == pytest.approx(23.589456, rel=1e-6)
    assert float(body[0][2]) == pytest.approx(27 / 256, abs=1e-12)
    assert (tmp_path / "critical.svg").read_text().lstrip().startswith("<?xml")


def test_critical_negative_mu(tmp_path, capsys):
    code, _, err = run(["critical", "--mu-min", "-1", "--mu-max", "0", "--step", "0.5"],
                       tmp_path, capsys)
    assert code == 2 and "NoBracket" in err


def test_series_table(tmp_path, capsys):
    code, _, _ = run(["series", "--order", "5", "--mu", "1/2"], tmp_path, capsys)
    assert code == 0
    rows = read_csv(tmp_path / "series-5.csv")
    assert rows[0][:2] == ["n (exact int)", "alpha_n (exact rational)"]
    assert rows[2] == ["1", "3/2", "8", "1"]
    assert Fraction(rows[3][1]) == 4 + 3 + Fraction(1, 2)


def test_census_deterministic_across_workers(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["census", "--n1", "1", "--n2", "1,1,0", "--out", str(a)]) == 0
    assert cli.main(["census", "--n1", "1", "--n2", "1,1,0", "--workers", "2", "--out", str(b)]) == 0
    name = "census-1-1-1-0.csv"
    assert (a / name).read_bytes() == (b / name).read_bytes()
    out = capsys.readouterr().out
    assert "theorem checks: pass" in out


def test_svg_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["census", "--n1", "2", "--svg", "--out", str(d)]) == 0
    capsys.readouterr()
    assert (a / "census-2-0-0-0.svg").read_bytes() == (b / "census-2-0-0-0.svg").read_bytes()


def test_fit(tmp_path, capsys):
    code, out, _ = run(["fit", "--mu", "1", "--nmax", "150", "--json"], tmp_path, capsys)
    assert code == 0
    rec = json.loads((tmp_path / "fit-150.json").read_text())
    alpha, h = rec["fits"]
    assert alpha["power (float)"] == pytest.approx(-1.5, abs=0.05)
    assert h["power (float)"] == pytest.approx(-0.5, abs=0.05)


def test_every_header_names_exactness(tmp_path, capsys):
    cmds = [["analyze", "tetra-tetra"], ["census", "--n1", "1"], ["trees", "--p", "0", "--q", "2"],
            ["series", "--order", "3", "--mu", "1"], ["critical", "--mu-min", "0", "--mu-max", "1",
                                                     "--step", "1"],
            ["fit", "--mu", "0", "--nmax", "60"]]
    for argv in cmds:
        assert cli.main(argv + ["--out", str(tmp_path)]) == 0
    capsys.readouterr()
    for path in tmp_path.glob("*.csv"):
        header = read_csv(path)[0]
        for cell in header:
            assert cell.endswith(")") and " (" in cell, (path, cell)


def test_env_output_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["trees", "--p", "1", "--q", "0"]) == 0
    capsys.readouterr()
    assert (tmp_path / "env" / "trees-1-0.csv").exists()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "ontensor", "trees", "--p", "0", "--q", "3", "--out", str(tmp_path)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "5"
