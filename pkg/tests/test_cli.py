import argparse
import csv
import io
import json
import math

import pytest

from sphereloc.cli import dumps, parse_grid, run

from _instances import cli_command_lines as command_lines, write_bodies


@pytest.fixture
def bodies(tmp_path):
    return write_bodies(tmp_path)


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def results_payload(text):
    return dumps(json.loads(text)["results"])


def test_every_subcommand_is_deterministic(bodies):
    seen = set()
    for argv in command_lines(bodies):
        first, second = invoke(argv), invoke(argv)
        assert first[0] == second[0]
        assert results_payload(first[1]) == results_payload(second[1]), argv
        seen.add(argv[0])
    assert len(seen) == 11


def test_report_envelope(bodies):
    code, out, _ = invoke(["mahler-bound", "--n", "4", "--alpha", "0.0625"])
    doc = json.loads(out)
    assert code == 0
    assert set(doc) >= {"command", "status", "params", "results", "quadrature", "seed", "wall_time"}
    assert doc["results"]["bound"] == pytest.approx(math.pi ** 4 / 4, rel=1e-15)
    assert doc["params"]["abs_tol"] == 1e-10


def test_waist_csv(tmp_path):
    path = tmp_path / "out.csv"
    code, _, _ = invoke(["waist", "--n", "4", "--k", "1", "--space", "l2",
                         "--eps", "0:1.5:0.05", "--csv", str(path)])
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["eps", "w", "tube"]
    assert len(rows) == 1 + 31
    assert float(rows[0 + 1][1]) == 0.0


def test_exit_codes(bodies, tmp_path):
    assert invoke(["no-such-command"])[0] == 1
    assert invoke(["waist", "--n", "4"])[0] == 1
    assert invoke(["mahler-bound", "--n", "3", "--alpha", "0.1"])[0] == 2
    assert invoke(["gcc-strip-hunt", "--budget", "0"])[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "type": "disk",\n "radius": -1\n}\n')
    code, out, err = invoke(["bodies-validate", str(bad), bodies["disk"]])
    assert code == 2
    assert err.startswith(f"{bad}:")
    assert json.loads(out)["results"]["invalid"] == 1


def test_gcc_t0_wide_cone_is_domain_error(bodies):
    code, _, err = invoke(["gcc-t0", "--cone", "0,3.5", "--n", "4", "--k1", bodies["square"],
                           "--k2", bodies["disk"]])
    assert code == 2 and "error" in err


def test_gcc_t0_whole_plane(bodies):
    code, out, _ = invoke(["gcc-t0", "--cone", "-0.5,0.5", "--n", "4", "--k1", bodies["plane"],
                           "--k2", bodies["plane"], "--grid", "16"])
    res = json.loads(out)["results"]
    assert code == 0 and res["found"] and res["t0"] == 0.0


def test_out_file(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = invoke(["tube", "--n", "2", "--k", "1", "--eps", "0.5", "--out", str(path)])
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["results"]["rows"][0][1] == pytest.approx(math.sin(0.5))


def test_parse_grid():
    assert parse_grid("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_grid("0.1, 0.2") == [0.1, 0.2]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_grid("1:0:0.1")


def test_dumps_round_trips_floats():
    x = [0.1, 1 / 3, math.pi, 1e-300, math.inf]
    back = json.loads(dumps({"x": x}))["x"]
    assert back == x
