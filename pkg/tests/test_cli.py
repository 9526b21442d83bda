import csv
import io
import json
import subprocess
import sys

import pytest

from netdim.centrality import MEASURES
from netdim.cli import main, read_config_file
from netdim.graph_core import karate_path

KARATE = str(karate_path())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestStats:
    def test_karate_row(self, capsys):
        code, out, _ = run(capsys, "stats", "--input", KARATE)
        assert code == 0
        assert out == "n,m,avg_degree,max_degree,avg_shortest_distance,diameter\n34,78,4.5882,17,2.4082,5\n"

    def test_empty_file(self, capsys, tmp_path):
        empty = tmp_path / "empty.txt"
        empty.write_text("# nothing\n")
        code, out, err = run(capsys, "stats", "-i", str(empty))
        assert code == 1 and out == ""
        assert "empty graph" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "stats", "-i", str(tmp_path / "nope.txt"))
        assert code == 1 and "cannot read" in err

    def test_parse_error_reports_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("1 2\nlonely\n")
        code, _, err = run(capsys, "stats", "-i", str(bad))
        assert code == 1 and "line 2" in err

    def test_disconnected(self, capsys, tmp_path):
        f = tmp_path / "two.txt"
        f.write_text("1 2\n2 3\n3 1\n3 4\n7 8\n")
        code, _, err = run(capsys, "stats", "-i", str(f))
        assert code == 1 and "largest component" in err
        code, out, _ = run(capsys, "stats", "-i", str(f), "--largest-component")
        assert code == 0
        assert rows(out)[1][:2] == ["4", "4"]

    def test_json(self, capsys):
        code, out, _ = run(capsys, "stats", "-i", KARATE, "--out-format", "json")
        data = json.loads(out)
        assert code == 0 and data["n"] == 34 and data["diameter"] == 5

    def test_pajek_input(self, capsys, tmp_path):
        net = tmp_path / "tri.net"
        net.write_text("*Vertices 3\n*Edges\n1 2\n2 3\n3 1\n")
        code, out, _ = run(capsys, "stats", "-i", str(net))
        assert code == 0 and rows(out)[1] == ["3", "3", "2.0000", "2", "1.0000", "1"]


class TestRank:
    def test_dc_top3(self, capsys):
        code, out, _ = run(capsys, "rank", "-i", KARATE, "--measures", "DC", "--k", "3")
        assert code == 0
        table = rows(out)
        assert table[0] == ["measure", "rank", "label", "score"]
        assert [r[2] for r in table[1:]] == ["34", "1", "33"]

    def test_unknown_measure(self, capsys):
        code, _, err = run(capsys, "rank", "-i", KARATE, "--measures", "DC,XX")
        assert code == 1 and "unknown measure: XX" in err

    def test_k_beyond_n(self, capsys):
        code, out, err = run(capsys, "rank", "-i", KARATE, "--measures", "DC", "--k", "100")
        assert code == 0
        assert len(rows(out)) == 35
        assert "exceeds" in err

    def test_bad_k(self, capsys):
        code, _, err = run(capsys, "rank", "-i", KARATE, "--k", "0")
        assert code == 1 and "--k" in err

    def test_universal_sentinel(self, capsys, tmp_path):
        f = tmp_path / "star.txt"
        f.write_text("0 1\n0 2\n0 3\n")
        code, out, _ = run(capsys, "rank", "-i", str(f), "--measures", "LID", "--k", "1")
        assert rows(out)[1] == ["LID", "1", "0", "universal"]
        code, out, _ = run(capsys, "rank", "-i", str(f), "--measures", "LD", "--k", "1", "--out-format", "json")
        assert json.loads(out)["LD"][0] == {"rank": 1, "label": "0", "score": None, "universal": True}

    def test_all_measures_by_default(self, capsys):
        code, out, _ = run(capsys, "rank", "-i", KARATE, "--k", "1")
        assert [r[0] for r in rows(out)[1:]] == list(MEASURES)


class TestBench:
    def test_six_rows(self, capsys):
        code, out, _ = run(capsys, "bench", "-i", KARATE)
        table = rows(out)[1:]
        assert code == 0 and len(table) == 6
        assert all(0 <= float(s) < 5 for _, s in table)

    def test_disconnected(self, capsys, tmp_path):
        f = tmp_path / "two.txt"
        f.write_text("1 2\n3 4\n")
        code, _, err = run(capsys, "bench", "-i", str(f))
        assert code == 1


class TestSimulationCommands:
    def test_si_curve(self, capsys):
        code, out, _ = run(capsys, "si", "-i", KARATE, "--beta", "3", "--steps", "30")
        table = rows(out)
        assert code == 0 and table[0] == ["t", "mean_F"] and len(table) == 32
        values = [float(r[1]) for r in table[1:]]
        assert values[0] == 10 and values == sorted(values) and values[-1] <= 34

    def test_si_explicit_seeds(self, capsys):
        code, out, _ = run(capsys, "si", "-i", KARATE, "--lambda", "1", "--steps", "2", "--seeds", "34")
        # node 34 has degree 17, so at lambda=1 one step reaches 18 nodes
        assert code == 0 and [r[1] for r in rows(out)[1:3]] == ["1.0", "18.0"]

    def test_si_needs_rate(self, capsys):
        code, _, err = run(capsys, "si", "-i", KARATE)
        assert code == 1 and "--beta" in err

    def test_rate_flags_exclusive(self):
        with pytest.raises(SystemExit):
            main(["si", "-i", KARATE, "--beta", "3", "--lambda", "0.1"])

    def test_ability(self, capsys):
        code, out, _ = run(capsys, "ability", "-i", KARATE, "--lambda", "0", "--runs", "2")
        table = rows(out)
        assert table[0] == ["label", "ability"] and len(table) == 35
        assert {r[1] for r in table[1:]} == {"1.0"}

    def test_kendall(self, capsys):
        code, out, _ = run(capsys, "kendall", "-i", KARATE, "--lambdas", "0.05,0.1", "--runs", "10")
        table = rows(out)
        assert table[0] == ["measure", "lambda", "tau"]
        assert [(r[0], r[1]) for r in table[1:]] == [("LID", "0.05"), ("LD", "0.05"), ("LID", "0.1"), ("LD", "0.1")]

    def test_scatter(self, capsys):
        code, out, _ = run(capsys, "scatter", "-i", KARATE, "--comparison", "LD", "--runs", "3")
        table = rows(out)
        assert code == 0 and table[0] == ["node", "x", "y", "f"] and len(table) == 35


class TestReproducibility:
    def test_byte_identical_files(self, capsys, tmp_path):
        outputs = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            assert main(["ability", "-i", KARATE, "--lambda", "0.1", "--runs", "5", "--seed", "9", "-o", str(path)]) == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]
        assert b"\r\n" not in outputs[0]

    def test_seed_changes_output(self, capsys):
        _, a, _ = run(capsys, "ability", "-i", KARATE, "--lambda", "0.1", "--runs", "5", "--seed", "1")
        _, b, _ = run(capsys, "ability", "-i", KARATE, "--lambda", "0.1", "--runs", "5", "--seed", "2")
        assert a != b

    def test_env_seed_fallback(self, capsys, monkeypatch):
        args = ["ability", "-i", KARATE, "--lambda", "0.1", "--runs", "5"]
        _, explicit, _ = run(capsys, *args, "--seed", "42")
        monkeypatch.setenv("NETDIM_SEED", "42")
        _, from_env, _ = run(capsys, *args)
        _, flag_wins, _ = run(capsys, *args, "--seed", "0")
        monkeypatch.delenv("NETDIM_SEED")
        _, default, _ = run(capsys, *args)
        assert explicit == from_env
        assert flag_wins == default

    def test_failed_run_leaves_no_file(self, capsys, tmp_path):
        out = tmp_path / "out.csv"
        code, _, _ = run(capsys, "rank", "-i", KARATE, "--measures", "XX", "-o", str(out))
        assert code == 1 and not out.exists()
        assert list(tmp_path.iterdir()) == []


class TestConfigFile:
    def test_parse(self, tmp_path):
        f = tmp_path / "exp.cfg"
        f.write_text("# experiment\ninput = karate.txt\nruns=7  # inline\n\nt-obs = 3\n")
        assert read_config_file(f) == {"input": "karate.txt", "runs": "7", "t_obs": "3"}

    def test_flags_override_file(self, capsys, tmp_path):
        f = tmp_path / "exp.cfg"
        f.write_text(f"input = {KARATE}\nmeasures = DC\nk = 2\n")
        code, out, _ = run(capsys, "rank", "--config", str(f))
        assert code == 0 and len(rows(out)) == 3
        code, out, _ = run(capsys, "rank", "--config", str(f), "--k", "4", "--measures", "BC")
        assert [r[0] for r in rows(out)[1:]] == ["BC"] * 4

    def test_file_lambda(self, capsys, tmp_path):
        f = tmp_path / "exp.cfg"
        f.write_text(f"input = {KARATE}\nlambda = 0\nruns = 2\n")
        code, out, _ = run(capsys, "ability", "--config", str(f))
        assert code == 0 and {r[1] for r in rows(out)[1:]} == {"1.0"}

    def test_bad_value(self, capsys, tmp_path):
        f = tmp_path / "exp.cfg"
        f.write_text(f"input = {KARATE}\nk = many\n")
        code, _, err = run(capsys, "rank", "--config", str(f))
        assert code == 1 and "bad configuration value" in err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "netdim", "rank", "-i", KARATE, "--measures", "EC", "--k", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert rows(proc.stdout)[1][:3] == ["EC", "1", "34"]
