import json
import subprocess
import sys

import pytest
from gmpy2 import mpq

from artifact import apps
from artifact.awcalc import Es
from artifact.cli import main
from artifact.freelie import LieSeries
from artifact.scalars import Inconsistent
from conftest import GOLDEN


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_bch_display(capsys):
    rc, out, _ = run(capsys, "bch", "--gens", "x,y", "--degree", "3", "--format", "pretty")
    assert rc == 0
    assert out == (GOLDEN / "cli_bch_xy_3.txt").read_text()


def test_bch_single_generator(capsys):
    assert run(capsys, "bch", "--gens", "x", "--degree", "5")[1] == "x\n"


def test_expect_mode(capsys, tmp_path):
    good = str(GOLDEN / "cli_bch_xy_3.txt")
    assert run(capsys, "bch", "--degree", "3", "--expect", good)[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("x + y\n")
    rc, _, err = run(capsys, "bch", "--degree", "3", "--expect", str(bad))
    assert rc == 1 and "differs" in err


def test_kv_dims(capsys):
    rc, out, _ = run(capsys, "kv", "dims", "--max-degree", "12")
    assert rc == 0
    assert out == (GOLDEN / "cli_kv_dims_12.txt").read_text()


def test_degree_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("WCALC_DEGREE", "2")
    assert run(capsys, "bch")[1] == "x + y + [xy]/2\n"
    assert run(capsys, "bch", "--degree", "1")[1] == "x + y\n"


@pytest.mark.parametrize("argv", [["bogus"], ["bch", "--nope"], ["bch", "--degree", "0"],
                                  ["bch", "--format", "xml"], ["bch", "--gens", "xy,z"],
                                  ["gamma", "--lam", "nonsense"], ["tangle", "--name", "trefoil"]])
def test_usage_errors_exit_1(capsys, argv):
    rc, out, err = run(capsys, *argv)
    assert rc == 1
    assert err and not out


def test_solver_inconsistency_exits_2(capsys, monkeypatch):
    def boom(d):
        raise Inconsistent("derived 1 = 0")
    monkeypatch.setattr(apps, "solve_kv", boom)
    rc, _, err = run(capsys, "kv", "solve")
    assert rc == 2 and "Inconsistent" in err


def test_json_roundtrips(capsys):
    rc, out, _ = run(capsys, "bch", "--degree", "4", "--format", "json")
    env = json.loads(out)
    assert set(env) == {"inputs", "degree", "result"}
    z = LieSeries.from_json(env["result"])
    assert z.part(3) == {"xxy": mpq(1, 12), "xyy": mpq(1, 12)}

    rc, out, _ = run(capsys, "kv", "solve", "--degree", "3", "--format", "json")
    env = json.loads(out)
    V = Es.from_json(env["result"]["V"])
    assert all(V.eq(apps.solve_kv(3).V, 3))
    assert [e["degree"] for e in env["solve_log"]] == [1, 2, 3]


def test_gamma_lambda_commands(capsys):
    rc, out, _ = run(capsys, "gamma", "--lam", "y=[xy]/2", "--degree", "3")
    assert rc == 0 and "[xy]/2" in out
    rc, _, _ = run(capsys, "lambda", "--lam", "x=y", "--lam", "y=x", "--degree", "2")
    assert rc == 0


def test_output_file(capsys, tmp_path):
    path = tmp_path / "o.txt"
    rc, out, _ = run(capsys, "bch", "--degree", "2", "-o", str(path))
    assert rc == 0 and out == ""
    assert path.read_text() == "x + y + [xy]/2\n"


@pytest.mark.parametrize("argv", [["kv", "fg"], ["kv", "twist-check"], ["assoc", "check"],
                                  ["phiv", "--degree", "3"], ["buckle"], ["nu"], ["rho-check"],
                                  ["assoc", "solve"], ["tangle", "--name", "borromean", "--degree", "3"]])
def test_checking_commands_pass(capsys, argv):
    rc, out, _ = run(capsys, *argv)
    assert rc == 0, out
    assert "FAILS" not in out


def test_selftest(capsys):
    rc, out, _ = run(capsys, "selftest", "--degree", "4")
    assert rc == 0, out


def test_byte_identical_runs():
    argv = [sys.executable, "-m", "artifact", "kv", "solve", "--degree", "4", "--format", "json"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_help(capsys):
    rc, out, _ = run(capsys, "--help")
    assert rc == 0 and "tangle" in out
