import csv
import io
import json
import math
import subprocess
import sys

import pytest

from sonine.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_power_law():
    code, out, _ = run("eval", "--kernel", "powerlaw:alpha=0.5", "--tmin", "1", "--tmax", "1", "--points", "1")
    assert code == 0
    assert out.splitlines()[0] == "t,value"
    assert float(rows(out)[0]["value"]) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)


def test_eval_ml_exponential():
    code, out, _ = run("eval", "--kernel", "ml:alpha=1,beta=1", "--tmin", "2", "--tmax", "2", "--points", "1")
    assert code == 0 and float(rows(out)[0]["value"]) == pytest.approx(math.exp(-2), rel=1e-14)


def test_eval_golden_bytes():
    code, out, _ = run("eval", "--kernel", "powerlaw:alpha=0.5", "--tmin", "1", "--tmax", "4", "--points", "2")
    assert code == 0
    assert out == "t,value\n1,0.56418958354775628\n4,0.28209479177387814\n"


def test_eval_malformed_spec():
    code, out, err = run("eval", "--kernel", "ml:alpha=")
    assert code == 2 and out == ""
    assert "position 9" in err or "9" in err


def test_verify_power_law_passes():
    code, out, err = run("verify", "--pair", "powerlaw:alpha=0.5")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["t", "residual"] and len(table) == 30
    assert max(abs(float(r["residual"])) for r in table) <= 1e-10
    assert "passed" in err


def test_verify_non_pair_fails():
    code, _, err = run("verify", "--g", "powerlaw:alpha=0.3", "--f", "powerlaw:alpha=0.3")
    assert code == 1 and "FAILED" in err


def test_verify_counterexample():
    assert run("verify", "--pair", "counterexample", "--tmin", "0.1", "--tmax", "4")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("verify",),
        ("verify", "--pair", "powerlaw", "--g", "powerlaw:alpha=0.5"),
        ("verify", "--pair", "powerlaw:alpha=2"),
        ("verify", "--pair", "powerlaw", "--tmin", "-1"),
        ("frobnicate",),
        ("eval",),
        ("associate", "--g", "dist-order-w"),
        ("decompose", "--kernel", "powerlaw:alpha=0.5"),
    ],
)
def test_usage_and_numeric_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_associate_exp_beta():
    code, out, _ = run("associate", "--g", "expbeta:alpha=0.3,beta=0.6", "--order", "1")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["n", "b_n"] and [r["n"] for r in table] == ["0", "1"]
    b0, b1 = (float(r["b_n"]) for r in table)
    assert b0 == pytest.approx(math.sin(0.3 * math.pi) / math.pi, rel=1e-14)
    ratio = math.gamma(0.3) * math.gamma(1.3) / (math.gamma(0.9) * math.gamma(0.7))
    assert b1 / b0 == pytest.approx(ratio, rel=1e-12)


def test_associate_power_law():
    code, out, _ = run("associate", "--g", "powerlaw:alpha=0.5", "--order", "5")
    b = [float(r["b_n"]) for r in rows(out)]
    assert code == 0 and b[0] == pytest.approx(1 / math.gamma(0.5), rel=1e-15)
    assert b[1:] == [0.0] * 5


def test_associate_check():
    code, out, _ = run("associate", "--g", "series:lead=-0.5,step=1,coeffs=1", "--order", "0", "--check")
    assert code == 0
    coeffs, residuals = out.split("\n\n")
    assert coeffs.splitlines()[0] == "n,b_n"
    assert max(abs(float(r["residual"])) for r in rows(residuals)) <= 1e-10


def test_laplace_commands():
    assert run("laplace", "--pair", "ml:alpha=0.5,beta=0.5")[0] == 0
    code, out, _ = run("laplace", "--pair", "powerlaw:alpha=0.7", "--pmin", "0.1", "--pmax", "100")
    assert code == 0 and out.splitlines()[0] == "p,residual"
    assert run("laplace", "--pair", "dist-order", "--tol", "1e-5")[0] == 0


def test_decompose_exponential():
    code, out, err = run("decompose", "--kernel", "ml:alpha=1,beta=1", "--points", "5")
    assert code == 0
    assert all(abs(float(r["phi"]) - 1) <= 1e-6 for r in rows(out))
    assert "a = " in err


def test_diagnose_outputs():
    code, out, _ = run("diagnose", "--kernel", "powerlaw:alpha=0.5")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [d["check"] for d in lines] == ["cm", "singularity", "rv_index", "overall"]
    assert lines[2]["value"] == pytest.approx(-0.5, abs=1e-3)
    code, out, _ = run("diagnose", "--kernel", "counterexample-cos")
    assert code == 1 and json.loads(out.splitlines()[0])["first_violation"][0] == 0
    code, out, _ = run("diagnose", "--kernel", "series:lead=0,step=1,coeffs=1")
    assert code == 1 and json.loads(out.splitlines()[1])["grows_unboundedly"] is False


def test_jsonl_output():
    code, out, _ = run("verify", "--pair", "powerlaw:alpha=0.5", "--points", "3", "--out", "jsonl")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(lines) == 4
    assert set(lines[0]) == {"t", "residual"}
    assert lines[-1]["check"] == "sonine" and lines[-1]["passed"] is True


def test_output_is_deterministic():
    argv = ("verify", "--pair", "ml:alpha=0.5,beta=0.5", "--points", "8")
    assert run(*argv)[1] == run(*argv)[1]


def test_environment_defaults(monkeypatch):
    monkeypatch.setenv("SONINE_TOL", "1e-30")
    code, _, err = run("verify", "--pair", "ml:alpha=0.5,beta=0.5", "--points", "5")
    assert code == 1 and "1e-30" in err
    # an explicit flag wins over the environment
    assert run("verify", "--pair", "ml:alpha=0.5,beta=0.5", "--points", "5", "--tol", "1e-6")[0] == 0
    monkeypatch.setenv("SONINE_RULE_SIZE", "1")
    assert run("verify", "--pair", "powerlaw", "--points", "3")[0] == 2
    monkeypatch.setenv("SONINE_RULE_SIZE", "many")
    assert run("verify", "--pair", "powerlaw", "--points", "3")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sonine", "eval", "--kernel", "dist-order-v", "--tmin", "1", "--tmax", "1", "--points", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert float(proc.stdout.splitlines()[1].split(",")[1]) == pytest.approx(0.5963473623231941, rel=1e-13)
