import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qjoin.cli import main
from qjoin.graphs import cycle
from qjoin.io import format_matrix, load_graph, load_matrix, parse_matrix, save_graph, save_matrix
from qjoin.realizers import c6_integer_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6)).map(lambda s: (s[0], s[0])), elements=st.floats(allow_nan=False, allow_infinity=False)))
def test_matrix_text_round_trip_is_exact(A):
    assert np.array_equal(parse_matrix(format_matrix(A)), A)


def test_matrix_file_round_trip(tmp_path):
    A = np.random.default_rng(0).normal(size=(5, 5))
    save_matrix(tmp_path / "a.txt", A)
    assert np.array_equal(load_matrix(tmp_path / "a.txt"), A)
    save_graph(tmp_path / "g.txt", cycle(6))
    assert load_graph(tmp_path / "g.txt") == cycle(6)


def test_parse_matrix_rejects_ragged():
    with pytest.raises(ValueError):
        parse_matrix("2\n1 2\n3\n")


def test_cmt(capsys):
    r = report(capsys, "cmt", "--m", "1,2,5,5,3,1", "--t", "3")
    assert r["outputs"]["value"] == 7
    assert r["outputs"]["witness"] == [1, 4, 6]


def test_join_report(capsys):
    r = report(capsys, "join", "--g", "P3", "--h", "P5", "--k", "1")
    assert r["outputs"]["q"] == 2
    assert r["verification"]["pattern"]["ok"]
    assert r["verification"]["formula"]["ceil_bound"] == 2


def test_reports_are_deterministic(capsys):
    argv = ("realize", "--graph", "C6", "--spectrum=-2:2,-1,1,2:2")
    a, b = report(capsys, *argv), report(capsys, *argv)
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert a == b


def test_border_from_file(capsys, tmp_path):
    src, dst = tmp_path / "c6.txt", tmp_path / "out.txt"
    save_matrix(src, c6_integer_matrix())
    r = report(capsys, "border", "--matrix", str(src), "--remove=-1,1", "--add=-2,0,2", "--out", str(dst))
    assert r["verification"]["shift_rule"]["ok"]
    assert r["outputs"]["spectrum_after"]["multiplicities"] == [3, 1, 3]
    assert load_matrix(dst).shape == (7, 7)


def test_algorithm1_from_spectrum(capsys):
    r = report(capsys, "algorithm1", "--spectrum", "1,2:3,3:3,4,5", "--t", "3")
    assert [s["spectrum"]["text"] for s in r["outputs"]["steps"]][-1] == "{1^4, 3^6, 5^2}"
    assert [s["c_value"] for s in r["outputs"]["steps"]] == [2, 1, 0]


def test_enumerate(capsys):
    r = report(capsys, "enumerate", "--spectrum", "1,2:3,3:3,4,5", "--t", "3")
    assert r["outputs"]["r"] == 3 and len(r["outputs"]["families"]) == 3


def test_bounds(capsys):
    r = report(capsys, "bounds", "--graph", "K2+C10", "--mult-list", "2,2,2,2,2", "--g-size", "2")
    assert r["outputs"]["bound"]["exact"] == 3
    assert r["outputs"]["list_lower_bound"] == 3


@pytest.mark.parametrize("example", ["table1", "table2", "c6", "c10", "hypercube", "cor23"])
def test_verify_paper(capsys, example):
    r = report(capsys, "verify-paper", example)
    assert r["verification"]["passed"]


def test_text_format(capsys):
    code, out, _ = run(capsys, "--format", "text", "cmt", "--m", "1,1", "--t", "2")
    assert code == 0 and "value: 0" in out


def test_parse_error_exit_code(capsys):
    code, _, _ = run(capsys, "cmt", "--m", "x", "--t", "3")
    assert code == 2
    code, _, _ = run(capsys, "border", "--matrix", "/nonexistent", "--remove", "1", "--add", "0,2")
    assert code == 2


def test_precondition_exit_code(capsys):
    code, _, err = run(capsys, "cmt", "--m", "1,2", "--t", "1")
    assert code == 3
    assert json.loads(err)["error"] == "ValueError"


def test_numerical_exit_code(capsys):
    code, _, err = run(capsys, "realize", "--graph", "P3", "--spectrum", "1:3")
    assert code == 4
    assert "best_residual" in json.loads(err)


def test_tolerance_env(capsys, monkeypatch):
    monkeypatch.setenv("QJOIN_CLUSTER_TOL", "not-a-number")
    code, _, _ = run(capsys, "cmt", "--m", "1,1", "--t", "2")
    assert code == 2
    monkeypatch.setenv("QJOIN_CLUSTER_TOL", "1e-6")
    assert run(capsys, "cmt", "--m", "1,1", "--t", "2")[0] == 0
